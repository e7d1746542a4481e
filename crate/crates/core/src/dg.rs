//! Semi-discrete DG right-hand side with the local Lax-Friedrichs interface flux.
//!
//! Every face flux is evaluated once and gathered by the two cells that share
//! it with opposite signs, so the scheme is conservative to round-off and the
//! result does not depend on how many workers run the loops.

use rayon::prelude::*;

use crate::basis::MAX_BASIS;
use crate::error::{MhdError, Result, Stage};
use crate::field::{eval_with, Coeffs, ModalField, Scheme};
use crate::mesh::{Boundary, Mesh, Side};
use crate::physics::{
    cons_to_prim_pointwise, flux_from_prim, max_wave_speed_prim, normal_flux, Axis, Primitive, State, NVAR,
};

/// Solution values on the Gauss points of each side of a cell, by `side_index`.
type Traces = [Vec<[f64; NVAR]>; 4];

/// `½(F(uL)+F(uR))·n − ½λ(uR − uL)` with `λ` the larger fast-wave bound of the two states.
pub fn llf_flux(ul: &State, ur: &State, normal: [f64; 2], gamma: f64) -> Result<[f64; NVAR]> {
    let fl = normal_flux(ul, gamma, normal)?;
    let fr = normal_flux(ur, gamma, normal)?;
    let wl = ul.to_primitive(gamma)?;
    let wr = ur.to_primitive(gamma)?;
    let lambda = max_wave_speed_prim(&wl, gamma, normal).max(max_wave_speed_prim(&wr, gamma, normal));
    let (a, b) = (ul.to_array(), ur.to_array());
    let mut f = [0.0; NVAR];
    for c in 0..NVAR {
        f[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * lambda * (b[c] - a[c]);
    }
    Ok(f)
}

#[inline]
fn llf_axis(
    ul: &[f64; NVAR],
    wl: &Primitive,
    ur: &[f64; NVAR],
    wr: &Primitive,
    axis: Axis,
    gamma: f64,
) -> [f64; NVAR] {
    let n = axis.normal();
    let fl = flux_from_prim(ul, wl, axis);
    let fr = flux_from_prim(ur, wr, axis);
    let lambda = max_wave_speed_prim(wl, gamma, n).max(max_wave_speed_prim(wr, gamma, n));
    let mut f = [0.0; NVAR];
    for c in 0..NVAR {
        f[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * lambda * (ur[c] - ul[c]);
    }
    f
}

fn inadmissible(mesh: &Mesh, cell: usize, stage: Stage, source: MhdError) -> MhdError {
    let (i, j) = mesh.ij(cell);
    MhdError::NonFiniteResidual {
        i,
        j,
        stage,
        source: Box::new(source),
    }
}

/// Per-cell volume term `∫ F·∇φ` and traces on the four sides.
fn cell_pass(scheme: &Scheme, field: &ModalField, stage: Stage) -> Result<Vec<(Coeffs, Traces)>> {
    let t = &scheme.tables;
    let nb = t.spec.n_basis();
    let gamma = scheme.gamma;
    let results: Vec<Result<(Coeffs, Traces)>> = field
        .coeffs
        .par_iter()
        .enumerate()
        .map(|(cell, coef)| {
            let mut vol = [[0.0; NVAR]; MAX_BASIS];
            for p in &t.volume {
                let u = eval_with(coef, &p.phi, nb);
                let w = cons_to_prim_pointwise(&u, gamma)
                    .map_err(|e| inadmissible(&scheme.mesh, cell, stage, e))?;
                let fx = flux_from_prim(&u, &w, Axis::X);
                let fy = flux_from_prim(&u, &w, Axis::Y);
                for b in 1..nb {
                    let gx = p.weight * p.grad[b][0];
                    let gy = p.weight * p.grad[b][1];
                    for c in 0..NVAR {
                        vol[b][c] += fx[c] * gx + fy[c] * gy;
                    }
                }
            }
            let traces: Traces = std::array::from_fn(|s| {
                t.edges[s].iter().map(|p| eval_with(coef, &p.phi, nb)).collect()
            });
            Ok((vol, traces))
        })
        .collect();
    results.into_iter().collect()
}

/// Face fluxes along `axis`; `faces[j * n_faces + f]` holds the flux (positive
/// along `+axis`) at the Gauss points of face `f` in row/column `j`.
struct FaceFluxes {
    n_faces: usize,
    flux: Vec<Vec<[f64; NVAR]>>,
}

fn face_pass(
    scheme: &Scheme,
    cells: &[(Coeffs, Traces)],
    axis: Axis,
    stage: Stage,
) -> Result<FaceFluxes> {
    let mesh = &scheme.mesh;
    let gamma = scheme.gamma;
    let (n_along, n_across, bc) = match axis {
        Axis::X => (mesh.nx, mesh.ny, mesh.bc_x),
        Axis::Y => (mesh.ny, mesh.nx, mesh.bc_y),
    };
    let (lo_side, hi_side) = match axis {
        Axis::X => (Side::Left, Side::Right),
        Axis::Y => (Side::Bottom, Side::Top),
    };
    let (lo, hi) = (crate::basis::side_index(lo_side), crate::basis::side_index(hi_side));
    let n_faces = match bc {
        Boundary::Periodic => n_along,
        Boundary::Outflow => n_along + 1,
    };
    let cell_at = |along: usize, across: usize| match axis {
        Axis::X => mesh.index(along, across),
        Axis::Y => mesh.index(across, along),
    };
    let results: Vec<Result<Vec<[f64; NVAR]>>> = (0..n_faces * n_across)
        .into_par_iter()
        .map(|k| {
            let (across, f) = (k / n_faces, k % n_faces);
            // minus side: trace on the hi side of the cell below/left of the face
            let (minus_cell, minus_trace) = if f == 0 {
                match bc {
                    Boundary::Periodic => (cell_at(n_along - 1, across), hi),
                    Boundary::Outflow => (cell_at(0, across), lo),
                }
            } else {
                (cell_at(f - 1, across), hi)
            };
            let (plus_cell, plus_trace) = if f == n_along {
                (cell_at(n_along - 1, across), hi)
            } else {
                (cell_at(f, across), lo)
            };
            let um = &cells[minus_cell].1[minus_trace];
            let up = &cells[plus_cell].1[plus_trace];
            um.iter()
                .zip(up)
                .map(|(ul, ur)| {
                    let wl = cons_to_prim_pointwise(ul, gamma)
                        .map_err(|e| inadmissible(mesh, minus_cell, stage, e))?;
                    let wr = cons_to_prim_pointwise(ur, gamma)
                        .map_err(|e| inadmissible(mesh, plus_cell, stage, e))?;
                    Ok(llf_axis(ul, &wl, ur, &wr, axis, gamma))
                })
                .collect()
        })
        .collect();
    let flux = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(FaceFluxes { n_faces, flux })
}

impl FaceFluxes {
    fn lo_hi(&self, along: usize, across: usize, n_along: usize) -> (&[[f64; NVAR]], &[[f64; NVAR]]) {
        let row = across * self.n_faces;
        let hi = if along + 1 == n_along && self.n_faces == n_along {
            0
        } else {
            along + 1
        };
        (&self.flux[row + along], &self.flux[row + hi])
    }
}

/// `dU/dt` for every modal coefficient:
/// `(∫_K F·∇φ − ∮_∂K F̂·n φ) / ∫_K φ²`.
pub fn residual(scheme: &Scheme, field: &ModalField, stage: Stage) -> Result<ModalField> {
    let mesh = &scheme.mesh;
    let t = &scheme.tables;
    let nb = t.spec.n_basis();
    let cells = cell_pass(scheme, field, stage)?;
    let xf = face_pass(scheme, &cells, Axis::X, stage)?;
    let yf = face_pass(scheme, &cells, Axis::Y, stage)?;

    let coeffs: Vec<Coeffs> = cells
        .par_iter()
        .enumerate()
        .map(|(cell, (vol, _))| {
            let (i, j) = mesh.ij(cell);
            let (left, right) = xf.lo_hi(i, j, mesh.nx);
            let (bottom, top) = yf.lo_hi(j, i, mesh.ny);
            let mut rate = *vol;
            let sides: [(Side, &[[f64; NVAR]], f64); 4] = [
                (Side::Left, left, -1.0),
                (Side::Right, right, 1.0),
                (Side::Bottom, bottom, -1.0),
                (Side::Top, top, 1.0),
            ];
            for (side, flux, sign) in sides {
                for (p, f) in t.edge(side).iter().zip(flux) {
                    for b in 0..nb {
                        let wphi = sign * p.weight * p.phi[b];
                        for c in 0..NVAR {
                            rate[b][c] -= wphi * f[c];
                        }
                    }
                }
            }
            for b in 0..nb {
                let inv = 1.0 / t.mass[b];
                for c in 0..NVAR {
                    rate[b][c] *= inv;
                }
            }
            rate
        })
        .collect();
    Ok(ModalField {
        mesh: field.mesh.clone(),
        basis: field.basis,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisSpec;
    use crate::physics::{prim_to_cons, ENER, RHO};
    use proptest::prelude::*;

    const G: f64 = 5.0 / 3.0;

    fn state(rho: f64, vel: [f64; 3], pres: f64, mag: [f64; 3]) -> State {
        State::from_array(prim_to_cons(&Primitive { rho, vel, pres, mag }, G).unwrap())
    }

    #[test]
    fn llf_is_consistent() {
        let u = state(1.3, [0.4, -0.2, 0.1], 0.8, [0.3, 0.9, -0.4]);
        for n in [[1.0, 0.0], [0.0, 1.0], [0.6, 0.8]] {
            let f = llf_flux(&u, &u, n, G).unwrap();
            let exact = normal_flux(&u, G, n).unwrap();
            for c in 0..NVAR {
                assert!((f[c] - exact[c]).abs() <= 1e-15 * (1.0 + exact[c].abs()));
            }
        }
    }

    #[test]
    fn llf_static_density_jump() {
        let ul = state(1.0, [0.0; 3], 1.0, [0.0; 3]);
        let ur = state(4.0, [0.0; 3], 1.0, [0.0; 3]);
        let f = llf_flux(&ul, &ur, [1.0, 0.0], G).unwrap();
        let lambda = G.sqrt().max((G / 4.0).sqrt());
        assert!((f[RHO] - (-0.5 * lambda * 3.0)).abs() < 1e-15);
        // pressure flux is continuous, energy flux comes only from dissipation
        assert!((f[1] - 1.0).abs() < 1e-15);
        assert_eq!(f[ENER], 0.0);
    }

    proptest! {
        #[test]
        fn llf_antisymmetry(
            a in (0.1f64..5.0, prop::array::uniform3(-2.0f64..2.0), 0.1f64..5.0, prop::array::uniform3(-2.0f64..2.0)),
            b in (0.1f64..5.0, prop::array::uniform3(-2.0f64..2.0), 0.1f64..5.0, prop::array::uniform3(-2.0f64..2.0)),
            theta in 0.0f64..std::f64::consts::TAU,
        ) {
            let ul = state(a.0, a.1, a.2, a.3);
            let ur = state(b.0, b.1, b.2, b.3);
            let n = [theta.cos(), theta.sin()];
            let f = llf_flux(&ul, &ur, n, G).unwrap();
            let g = llf_flux(&ur, &ul, [-n[0], -n[1]], G).unwrap();
            for c in 0..NVAR {
                prop_assert_eq!(f[c], -g[c]);
            }
        }
    }

    fn periodic_mesh(n: usize) -> Mesh {
        Mesh::new((0.0, 1.0), (0.0, 1.0), n, n, Boundary::Periodic, Boundary::Periodic).unwrap()
    }

    #[test]
    fn free_stream_is_steady() {
        let basis = BasisSpec::new(2).unwrap();
        let u = state(1.7, [0.3, -1.1, 0.2], 0.9, [0.5, -0.25, 0.7]).to_array();
        for bc in [Boundary::Periodic, Boundary::Outflow] {
            let mesh = Mesh::new((0.0, 1.0), (0.0, 2.0), 5, 4, bc, bc).unwrap();
            let scheme = Scheme::new(mesh.clone(), basis, G);
            let f = ModalField::uniform(mesh, basis, u);
            let r = residual(&scheme, &f, Stage::Rk(1)).unwrap();
            let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(r.max_abs() <= 1e-13 * scale, "{bc:?}: {}", r.max_abs());
        }
    }

    #[test]
    fn linear_density_on_periodic_cells_has_zero_mass_rate() {
        let basis = BasisSpec::new(2).unwrap();
        let mesh = periodic_mesh(2);
        let scheme = Scheme::new(mesh.clone(), basis, G);
        let mut f = ModalField::uniform(mesh, basis, state(2.0, [0.0; 3], 1.0, [0.0; 3]).to_array());
        for c in &mut f.coeffs {
            c[1][RHO] = 1.0;
        }
        let r = residual(&scheme, &f, Stage::Rk(1)).unwrap();
        for c in &r.coeffs {
            assert!(c[0][RHO].abs() < 1e-15);
        }
    }

    #[test]
    fn inadmissible_quadrature_state_is_reported() {
        let basis = BasisSpec::new(2).unwrap();
        let mesh = periodic_mesh(3);
        let scheme = Scheme::new(mesh.clone(), basis, G);
        let mut f = ModalField::uniform(mesh, basis, state(1.0, [0.0; 3], 1.0, [0.0; 3]).to_array());
        f.coeffs[4][1][RHO] = 5.0;
        let e = residual(&scheme, &f, Stage::Rk(2)).unwrap_err();
        match e {
            MhdError::NonFiniteResidual { i, j, stage, .. } => {
                assert_eq!((i, j), (1, 1));
                assert_eq!(stage, Stage::Rk(2));
            }
            other => panic!("unexpected {other}"),
        }
    }

    mod props {
        use super::*;
        use crate::testing::{random_field, random_state};
        use rand::SeedableRng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn periodic_rates_sum_to_zero(seed in any::<u64>(), nx in 2usize..7, ny in 2usize..7, amp in 0.0f64..0.05) {
                let (scheme, f) = random_field(seed, nx, ny, Boundary::Periodic, amp);
                let r = residual(&scheme, &f, Stage::Rk(1)).unwrap();
                let area = scheme.mesh.cell_area();
                for v in 0..NVAR {
                    let total: f64 = r.coeffs.iter().map(|c| c[0][v] * area).sum();
                    let scale: f64 = r.coeffs.iter().map(|c| (c[0][v] * area).abs()).sum();
                    prop_assert!(total.abs() <= 1e-12 * scale.max(1e-300), "{} {} {}", v, total, scale);
                }
            }

            #[test]
            fn constant_states_are_steady(seed in any::<u64>(), periodic in any::<bool>()) {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let u = random_state(&mut rng);
                let bc = if periodic { Boundary::Periodic } else { Boundary::Outflow };
                let mesh = Mesh::new((0.0, 1.0), (0.0, 0.5), 4, 3, bc, bc).unwrap();
                let basis = BasisSpec::new(2).unwrap();
                let scheme = Scheme::new(mesh.clone(), basis, G);
                let r = residual(&scheme, &ModalField::uniform(mesh, basis, u), Stage::Rk(1)).unwrap();
                let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                prop_assert!(r.max_abs() <= 1e-13 * scale / scheme.mesh.hx.min(scheme.mesh.hy));
            }
        }
    }
}
