//! Error norms, convergence orders, divergence and conservation audits.
//!
//! All reductions run sequentially over cells in index order, so results are
//! reproducible bit for bit regardless of the worker count.

use crate::cases::ExactSolution;
use crate::error::{MhdError, Result};
use crate::field::{eval_with, ModalField, Scheme};
use crate::physics::{cons_to_prim, prim_to_cons, BX, BY, NVAR};

/// `‖u_h − u_exact‖_{L²(Ω)}` of one conserved component, by volume quadrature.
pub fn l2_error(
    scheme: &Scheme,
    field: &ModalField,
    exact: ExactSolution,
    t: f64,
    component: usize,
) -> f64 {
    l2_error_with(scheme, field, component, |x, y| {
        prim_to_cons(&exact(x, y, t, scheme.gamma), scheme.gamma)
            .expect("exact solution is admissible")
    })
}

pub fn l2_error_with(
    scheme: &Scheme,
    field: &ModalField,
    component: usize,
    exact: impl Fn(f64, f64) -> [f64; NVAR],
) -> f64 {
    let t = &scheme.tables;
    let nb = t.spec.n_basis();
    let mut sum = 0.0;
    for (cell, c) in field.coeffs.iter().enumerate() {
        for p in &t.volume {
            let (x, y) = scheme.mesh.to_physical(cell, p.xr, p.yr);
            let uh = eval_with(c, &p.phi, nb)[component];
            let ue = exact(x, y)[component];
            sum += p.weight * (uh - ue).powi(2);
        }
    }
    sum.sqrt()
}

/// `log₂(e_{i-1}/e_i)` for successive halvings of the mesh size.
pub fn convergence_order(errors: &[f64]) -> Result<Vec<f64>> {
    if let Some(&e) = errors.iter().find(|e| !(**e > 0.0)) {
        return Err(MhdError::NonPositiveError(e));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport {
    /// `max |∂_x B_x + ∂_y B_y|` over interior volume points.
    pub max: f64,
    /// `(∫ (∇·B)² / |Ω|)^{1/2}`.
    pub l2: f64,
    /// `max |B|` over the same points, for relative thresholds.
    pub max_field: f64,
}

pub fn divergence_report(scheme: &Scheme, field: &ModalField) -> DivergenceReport {
    let t = &scheme.tables;
    let nb = t.spec.n_basis();
    let mut max = 0.0f64;
    let mut sum = 0.0;
    let mut max_field = 0.0f64;
    for c in &field.coeffs {
        for p in &t.volume {
            let mut div = 0.0;
            for b in 0..nb {
                div += c[b][BX] * p.grad[b][0] + c[b][BY] * p.grad[b][1];
            }
            max = max.max(div.abs());
            sum += p.weight * div * div;
            let u = eval_with(c, &p.phi, nb);
            let bmag = (u[BX] * u[BX] + u[BY] * u[BY] + u[crate::physics::BZ].powi(2)).sqrt();
            max_field = max_field.max(bmag);
        }
    }
    DivergenceReport {
        max,
        l2: (sum / scheme.mesh.domain_area()).sqrt(),
        max_field,
    }
}

/// `Σ_K |K| Ū_K` for every conserved component.
pub fn conservation_audit(field: &ModalField) -> [f64; NVAR] {
    let area = field.mesh.cell_area();
    let mut total = [0.0; NVAR];
    for c in &field.coeffs {
        for v in 0..NVAR {
            total[v] += area * c[0][v];
        }
    }
    total
}

/// `Σ_K |K| |Ū_K|`, the magnitude against which drifts of totals that cancel
/// to (near) zero are measured.
pub fn conservation_scale(field: &ModalField) -> [f64; NVAR] {
    let area = field.mesh.cell_area();
    let mut total = [0.0; NVAR];
    for c in &field.coeffs {
        for v in 0..NVAR {
            total[v] += area * c[0][v].abs();
        }
    }
    total
}

/// Largest drift of the conserved totals between two audits, relative to
/// `max(|before|, scale)`. Components that are identically zero (scale 0)
/// count as drift-free only if they stay exactly zero.
pub fn max_relative_drift(before: &[f64; NVAR], after: &[f64; NVAR], scale: &[f64; NVAR]) -> f64 {
    let mut worst = 0.0f64;
    for v in 0..NVAR {
        let diff = (after[v] - before[v]).abs();
        let norm = before[v].abs().max(scale[v]);
        let d = if norm > 0.0 {
            diff / norm
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(d);
    }
    worst
}

/// Extremes of density and pressure at cell centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub rho_min: f64,
    pub rho_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub finite: bool,
}

pub fn center_extrema(scheme: &Scheme, field: &ModalField) -> Extrema {
    let gamma = scheme.gamma;
    let mut e = Extrema {
        rho_min: f64::INFINITY,
        rho_max: f64::NEG_INFINITY,
        p_min: f64::INFINITY,
        p_max: f64::NEG_INFINITY,
        finite: true,
    };
    for cell in 0..field.n_cells() {
        let u = field.eval(cell, 0.0, 0.0);
        if !u.iter().all(|v| v.is_finite()) {
            e.finite = false;
            continue;
        }
        let rho = u[0];
        let kinetic = 0.5 * (u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) / rho;
        let magnetic = 0.5 * (u[5] * u[5] + u[6] * u[6] + u[7] * u[7]);
        let p = (gamma - 1.0) * (u[4] - kinetic - magnetic);
        e.rho_min = e.rho_min.min(rho);
        e.rho_max = e.rho_max.max(rho);
        e.p_min = e.p_min.min(p);
        e.p_max = e.p_max.max(p);
    }
    e
}

/// True when every cell center holds an admissible state.
pub fn centers_admissible(scheme: &Scheme, field: &ModalField) -> bool {
    (0..field.n_cells()).all(|c| cons_to_prim(&field.eval(c, 0.0, 0.0), scheme.gamma).is_ok())
}
