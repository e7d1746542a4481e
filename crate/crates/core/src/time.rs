//! SSPRK3 stepping with an OE filter and LDF projection after every stage.

use rayon::prelude::*;

use crate::dg::residual;
use crate::error::{MhdError, Result, Stage};
use crate::field::{ModalField, Scheme};
use crate::ldf::LdfProjector;
use crate::oe::{apply_factors, damping_factors, DampingFactors};
use crate::physics::{cons_to_prim, max_wave_speed_prim};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControls {
    pub cfl: f64,
    pub t_final: f64,
    pub max_steps: usize,
}

impl Default for StepControls {
    fn default() -> Self {
        StepControls {
            cfl: 0.15,
            t_final: 1.0,
            max_steps: usize::MAX,
        }
    }
}

/// What happens after each Runge-Kutta stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    /// Exponential modal damping with computed coefficients.
    Oe,
    /// The same multiplication pass with every damping coefficient set to zero.
    ZeroDamping,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOptions {
    pub filter: Filter,
    pub ldf: bool,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions {
            filter: Filter::Oe,
            ldf: true,
        }
    }
}

/// `(weight of Uⁿ, weight of the forward-Euler update)` per stage.
const SSPRK3: [(f64, f64); 3] = [(0.0, 1.0), (0.75, 0.25), (1.0 / 3.0, 2.0 / 3.0)];

/// Largest wave speeds over cell averages, `(λ_x, λ_y)`.
pub fn max_speeds(scheme: &Scheme, field: &ModalField) -> Result<(f64, f64)> {
    let speeds: Vec<Option<(f64, f64)>> = field
        .coeffs
        .par_iter()
        .map(|c| {
            let w = cons_to_prim(&c[0], scheme.gamma).ok()?;
            Some((
                max_wave_speed_prim(&w, scheme.gamma, [1.0, 0.0]),
                max_wave_speed_prim(&w, scheme.gamma, [0.0, 1.0]),
            ))
        })
        .collect();
    let mut lx = 0.0f64;
    let mut ly = 0.0f64;
    for s in speeds {
        let (a, b) = s.ok_or(MhdError::NonFiniteSpeed)?;
        lx = lx.max(a);
        ly = ly.max(b);
    }
    if !(lx.is_finite() && ly.is_finite()) {
        return Err(MhdError::NonFiniteSpeed);
    }
    Ok((lx, ly))
}

/// `τ = CFL / (λ_x/h_x + λ_y/h_y)`, clipped so that `t + τ ≤ t_end`.
pub fn compute_dt(scheme: &Scheme, field: &ModalField, cfl: f64, t: f64, t_end: f64) -> Result<f64> {
    let (lx, ly) = max_speeds(scheme, field)?;
    let tau = cfl / (lx / scheme.mesh.hx + ly / scheme.mesh.hy);
    if !(tau.is_finite() && tau > 0.0) {
        return Err(MhdError::NonFiniteSpeed);
    }
    Ok(tau.min(t_end - t))
}

pub struct Integrator {
    pub scheme: Scheme,
    pub projector: LdfProjector,
    pub options: StepOptions,
}

impl Integrator {
    pub fn new(scheme: Scheme, options: StepOptions) -> Self {
        let projector = LdfProjector::new(scheme.basis(), scheme.mesh.hx, scheme.mesh.hy);
        Integrator {
            scheme,
            projector,
            options,
        }
    }

    fn filter(&self, field: ModalField, tau: f64, stage: usize) -> Result<ModalField> {
        let filtered = match self.options.filter {
            Filter::Off => field,
            Filter::Oe => {
                let factors = damping_factors(&self.scheme, &field, tau).map_err(|e| match e {
                    MhdError::InadmissibleState { i, j, source, .. } => MhdError::InadmissibleState {
                        i,
                        j,
                        stage: Stage::Filter(stage),
                        source,
                    },
                    other => other,
                })?;
                apply_factors(&field, &factors)
            }
            Filter::ZeroDamping => {
                let degree = self.scheme.basis().degree();
                let factors = DampingFactors {
                    degree,
                    factors: vec![[(-tau * 0.0f64).exp(); 2]; field.n_cells()],
                };
                apply_factors(&field, &factors)
            }
        };
        Ok(if self.options.ldf {
            self.projector.apply(&filtered)
        } else {
            filtered
        })
    }

    /// Advances `field` by one step of size `tau`.
    pub fn step(&self, field: &ModalField, tau: f64) -> Result<ModalField> {
        let mut current = field.clone();
        for (s, &(a, c)) in SSPRK3.iter().enumerate() {
            let stage = s + 1;
            let rate = residual(&self.scheme, &current, Stage::Rk(stage))?;
            let mut next = current;
            next.coeffs
                .par_iter_mut()
                .zip(&rate.coeffs)
                .zip(&field.coeffs)
                .for_each(|((u, r), u0)| {
                    for b in 0..u.len() {
                        for v in 0..u[b].len() {
                            let euler = u[b][v] + tau * r[b][v];
                            u[b][v] = if stage == 1 { euler } else { a * u0[b][v] + c * euler };
                        }
                    }
                });
            current = self.filter(next, tau, stage)?;
        }
        Ok(current)
    }
}
