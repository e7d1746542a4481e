//! Oscillation-eliminating (OE) filter.
//!
//! After each Runge-Kutta stage the modal coefficients of total degree `j ≥ 1`
//! in cell `K` are multiplied by `exp(-τ Σ_{m=0..j} δ_K^m)`, the exact solution
//! of the diagonal damping ODE over a pseudo-time `τ`. The damping strengths
//! `δ_K^m` are built from normalized jumps of `m`-th derivatives across the
//! four faces of `K`, weighted by the fast wave speed of the cell average.
//! Cell averages are never touched.

use rayon::prelude::*;

use crate::basis::MAX_DEGREE;
use crate::error::{MhdError, Result, Stage};
use crate::field::{Coeffs, ModalField, Scheme};
use crate::mesh::{Boundary, Neighbor, Side};
use crate::physics::{cons_to_prim, max_wave_speed_prim, Axis, NVAR};

/// Domain mean and `L∞` fluctuation of each component, fixed for one OE call.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationCache {
    pub avg: [f64; NVAR],
    pub fluctuation: [f64; NVAR],
}

impl NormalizationCache {
    /// Means come from cell averages (exact); the `L∞` norm is sampled on
    /// every volume and face Gauss point of every cell.
    pub fn new(scheme: &Scheme, field: &ModalField) -> Self {
        let t = &scheme.tables;
        let nb = t.spec.n_basis();
        let mut sum = [0.0; NVAR];
        for c in &field.coeffs {
            for v in 0..NVAR {
                sum[v] += c[0][v];
            }
        }
        let n = field.n_cells() as f64;
        let avg = sum.map(|s| s / n);
        let points: Vec<_> = t
            .volume
            .iter()
            .map(|p| p.phi)
            .chain(t.edges.iter().flat_map(|e| e.iter().map(|p| p.phi)))
            .collect();
        let fluctuation = field
            .coeffs
            .par_iter()
            .map(|coef| {
                let mut m = [0.0f64; NVAR];
                for phi in &points {
                    let u = crate::field::eval_with(coef, phi, nb);
                    for v in 0..NVAR {
                        m[v] = m[v].max((u[v] - avg[v]).abs());
                    }
                }
                m
            })
            .reduce(
                || [0.0; NVAR],
                |a, b| std::array::from_fn(|v| a[v].max(b[v])),
            );
        NormalizationCache { avg, fluctuation }
    }

    /// True when component `v` is (numerically) equal to its mean everywhere.
    pub fn is_flat(&self, v: usize) -> bool {
        self.fluctuation[v] <= 1e-14 * self.avg[v].abs().max(1.0)
    }
}

/// Per-cell factors `f_j = exp(-τ Σ_{m≤j} δ^m)`, `j = 1..=k`, stored at `j - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DampingFactors {
    pub degree: usize,
    pub factors: Vec<[f64; MAX_DEGREE]>,
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// `(2m+1) h^m / (2(2k-1) m!)`.
fn sigma_prefactor(m: usize, k: usize, h: f64) -> f64 {
    (2 * m + 1) as f64 * h.powi(m as i32) / (2.0 * (2 * k - 1) as f64 * factorial(m))
}

/// σ on the face shared by `inner` (seen from `inner_side`) and `outer`.
/// `outer = None` marks an extrapolated (outflow) face, whose jump is zero.
fn sigma_between(
    scheme: &Scheme,
    inner: &Coeffs,
    inner_side: Side,
    outer: Option<&Coeffs>,
    m: usize,
    norm: &NormalizationCache,
) -> [f64; NVAR] {
    let t = &scheme.tables;
    let k = t.spec.degree();
    let mut sigma = [0.0; NVAR];
    let Some(outer) = outer else {
        return sigma;
    };
    if k == 0 {
        return sigma;
    }
    let nb = t.spec.n_basis();
    let inner_pts = t.edge(inner_side);
    let outer_pts = t.edge(inner_side.opposite());
    // Σ_{|α|=m} (1/|e|) ∫_e |[[∂^α u]]| ds, with |e| = 2 in reference length
    let mut jump = [0.0; NVAR];
    for (pi, po) in inner_pts.iter().zip(outer_pts) {
        for (di, dout) in pi.derivs[m].iter().zip(&po.derivs[m]) {
            for v in 0..NVAR {
                let mut a = 0.0;
                let mut b = 0.0;
                for bi in 0..nb {
                    a += inner[bi][v] * di[bi];
                    b += outer[bi][v] * dout[bi];
                }
                jump[v] += 0.5 * pi.ref_weight * (b - a).abs();
            }
        }
    }
    let h = match inner_side {
        Side::Left | Side::Right => t.hx,
        Side::Bottom | Side::Top => t.hy,
    };
    let pref = sigma_prefactor(m, k, h);
    for v in 0..NVAR {
        if !norm.is_flat(v) {
            sigma[v] = pref * jump[v] / norm.fluctuation[v];
        }
    }
    sigma
}

/// Jump indicator `σ^m_e(u^(i))` of every component on one side of `cell`.
pub fn face_sigma(
    scheme: &Scheme,
    field: &ModalField,
    cell: usize,
    side: Side,
    m: usize,
    norm: &NormalizationCache,
) -> [f64; NVAR] {
    let outer = match scheme.mesh.neighbor(cell, side) {
        Neighbor::Cell(n) => Some(&field.coeffs[n]),
        Neighbor::Extrapolated(_) => None,
    };
    sigma_between(scheme, &field.coeffs[cell], side, outer, m, norm)
}

/// Fast wave speeds `(β_x, β_y)` of the cell-average state.
pub fn cell_wave_speeds(scheme: &Scheme, field: &ModalField, cell: usize) -> Result<(f64, f64)> {
    let w = cons_to_prim(&field.average(cell), scheme.gamma).map_err(|e| {
        let (i, j) = scheme.mesh.ij(cell);
        MhdError::InadmissibleState {
            i,
            j,
            stage: Stage::Filter(0),
            source: Box::new(e),
        }
    })?;
    Ok((
        max_wave_speed_prim(&w, scheme.gamma, [1.0, 0.0]),
        max_wave_speed_prim(&w, scheme.gamma, [0.0, 1.0]),
    ))
}

/// `max_i [β_x(σ_R + σ_L)/h_x + β_y(σ_T + σ_B)/h_y]`; the wave speeds are only
/// requested when some σ is nonzero.
fn combine(
    sides: [[f64; NVAR]; 4],
    hx: f64,
    hy: f64,
    speeds: impl FnOnce() -> Result<(f64, f64)>,
) -> Result<f64> {
    let [l, r, b, t] = sides;
    let any = sides.iter().any(|s| s.iter().any(|&v| v != 0.0));
    if !any {
        return Ok(0.0);
    }
    let (bx, by) = speeds()?;
    let mut delta = 0.0f64;
    for v in 0..NVAR {
        delta = delta.max(bx * (r[v] + l[v]) / hx + by * (t[v] + b[v]) / hy);
    }
    Ok(delta)
}

/// Damping coefficient `δ_K^m` of one cell.
pub fn delta(
    scheme: &Scheme,
    field: &ModalField,
    cell: usize,
    m: usize,
    norm: &NormalizationCache,
) -> Result<f64> {
    delta_with_speeds(scheme, field, cell, m, norm, || {
        cell_wave_speeds(scheme, field, cell)
    })
}

/// `δ_K^m` with caller-supplied wave speeds.
pub fn delta_with_speeds(
    scheme: &Scheme,
    field: &ModalField,
    cell: usize,
    m: usize,
    norm: &NormalizationCache,
    speeds: impl FnOnce() -> Result<(f64, f64)>,
) -> Result<f64> {
    let sides = [Side::Left, Side::Right, Side::Bottom, Side::Top]
        .map(|s| face_sigma(scheme, field, cell, s, m, norm));
    combine(sides, scheme.tables.hx, scheme.tables.hy, speeds)
}

/// σ for every face of the mesh along one axis, `[face][m]`, faces laid out
/// like the flux faces in the DG residual.
struct FaceSigmas {
    n_faces: usize,
    sigma: Vec<Vec<[f64; NVAR]>>,
}

fn face_sigmas(
    scheme: &Scheme,
    field: &ModalField,
    axis: Axis,
    norm: &NormalizationCache,
) -> FaceSigmas {
    let mesh = &scheme.mesh;
    let k = scheme.tables.spec.degree();
    let (n_along, n_across, bc, hi_side) = match axis {
        Axis::X => (mesh.nx, mesh.ny, mesh.bc_x, Side::Right),
        Axis::Y => (mesh.ny, mesh.nx, mesh.bc_y, Side::Top),
    };
    let n_faces = match bc {
        Boundary::Periodic => n_along,
        Boundary::Outflow => n_along + 1,
    };
    let cell_at = |along: usize, across: usize| match axis {
        Axis::X => mesh.index(along, across),
        Axis::Y => mesh.index(across, along),
    };
    let sigma = (0..n_faces * n_across)
        .into_par_iter()
        .map(|idx| {
            let (across, f) = (idx / n_faces, idx % n_faces);
            // (minus cell, plus cell); None marks an extrapolated boundary face
            let pair = if f == 0 {
                match bc {
                    Boundary::Periodic => Some((cell_at(n_along - 1, across), cell_at(0, across))),
                    Boundary::Outflow => None,
                }
            } else if f == n_along {
                None
            } else {
                Some((cell_at(f - 1, across), cell_at(f, across)))
            };
            (0..=k)
                .map(|m| match pair {
                    Some((minus, plus)) => sigma_between(
                        scheme,
                        &field.coeffs[minus],
                        hi_side,
                        Some(&field.coeffs[plus]),
                        m,
                        norm,
                    ),
                    None => [0.0; NVAR],
                })
                .collect()
        })
        .collect();
    FaceSigmas { n_faces, sigma }
}

impl FaceSigmas {
    fn lo_hi(&self, along: usize, across: usize, n_along: usize, m: usize) -> ([f64; NVAR], [f64; NVAR]) {
        let row = across * self.n_faces;
        let hi = if along + 1 == n_along && self.n_faces == n_along {
            0
        } else {
            along + 1
        };
        (self.sigma[row + along][m], self.sigma[row + hi][m])
    }
}

/// `δ_K^m` for every cell and `m = 0..=k`.
pub fn all_deltas(scheme: &Scheme, field: &ModalField) -> Result<Vec<[f64; MAX_DEGREE + 1]>> {
    let k = scheme.tables.spec.degree();
    if k == 0 {
        return Ok(vec![[0.0; MAX_DEGREE + 1]; field.n_cells()]);
    }
    let norm = NormalizationCache::new(scheme, field);
    let xs = face_sigmas(scheme, field, Axis::X, &norm);
    let ys = face_sigmas(scheme, field, Axis::Y, &norm);
    let mesh = &scheme.mesh;
    let results: Vec<Result<[f64; MAX_DEGREE + 1]>> = (0..field.n_cells())
        .into_par_iter()
        .map(|cell| {
            let (i, j) = mesh.ij(cell);
            let mut speeds = None;
            let mut out = [0.0; MAX_DEGREE + 1];
            for (m, d) in out.iter_mut().enumerate().take(k + 1) {
                let (l, r) = xs.lo_hi(i, j, mesh.nx, m);
                let (b, t) = ys.lo_hi(j, i, mesh.ny, m);
                *d = combine([l, r, b, t], scheme.tables.hx, scheme.tables.hy, || {
                    if speeds.is_none() {
                        speeds = Some(cell_wave_speeds(scheme, field, cell)?);
                    }
                    Ok(speeds.unwrap())
                })?;
            }
            Ok(out)
        })
        .collect();
    results.into_iter().collect()
}

/// Exponential damping factors for pseudo-time step `tau`.
pub fn damping_factors(scheme: &Scheme, field: &ModalField, tau: f64) -> Result<DampingFactors> {
    let k = scheme.tables.spec.degree();
    let deltas = all_deltas(scheme, field)?;
    let factors = deltas
        .iter()
        .map(|d| {
            let mut f = [1.0; MAX_DEGREE];
            let mut partial = d[0];
            for j in 1..=k {
                partial += d[j];
                f[j - 1] = (-tau * partial).exp();
            }
            f
        })
        .collect();
    Ok(DampingFactors { degree: k, factors })
}

/// Multiplies each degree group by its factor; degree-0 coefficients are not touched.
pub fn apply_factors(field: &ModalField, factors: &DampingFactors) -> ModalField {
    let mut out = field.clone();
    let basis = field.basis;
    out.coeffs
        .par_iter_mut()
        .zip(&factors.factors)
        .for_each(|(coef, f)| {
            for j in 1..=factors.degree {
                for b in basis.group(j) {
                    for v in coef[b].iter_mut() {
                        *v *= f[j - 1];
                    }
                }
            }
        });
    out
}

/// One OE filter application with pseudo-time step `tau`.
pub fn apply_oe(scheme: &Scheme, field: &ModalField, tau: f64) -> Result<ModalField> {
    let factors = damping_factors(scheme, field, tau)?;
    Ok(apply_factors(field, &factors))
}
