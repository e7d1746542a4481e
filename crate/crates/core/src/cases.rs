//! Benchmark problems: domains, boundary conditions and initial data.

use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;

use crate::basis::MAX_BASIS;
use crate::error::{MhdError, Result};
use crate::field::{eval_with, Coeffs, ModalField, Scheme};
use crate::mesh::{Boundary, Mesh};
use crate::physics::{cons_to_prim, prim_to_cons, Primitive, NVAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Vortex,
    OrszagTang,
    Rotor,
    Blast,
    Loop,
    ShockCloud,
}

impl Case {
    pub const ALL: [Case; 6] = [
        Case::Vortex,
        Case::OrszagTang,
        Case::Rotor,
        Case::Blast,
        Case::Loop,
        Case::ShockCloud,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Case::Vortex => "vortex",
            Case::OrszagTang => "orszag_tang",
            Case::Rotor => "rotor",
            Case::Blast => "blast",
            Case::Loop => "loop",
            Case::ShockCloud => "shock_cloud",
        }
    }

    pub fn spec(self) -> CaseSpec {
        use Boundary::*;
        let g53 = 5.0 / 3.0;
        match self {
            Case::Vortex => CaseSpec {
                case: self,
                x: (-5.0, 5.0),
                y: (-5.0, 5.0),
                default_mesh: (64, 64),
                bc: (Periodic, Periodic),
                gamma: g53,
                t_final: 20.0,
                snapshots: &[],
                init: vortex_init,
                exact: Some(exact_vortex),
            },
            Case::OrszagTang => CaseSpec {
                case: self,
                x: (0.0, 2.0 * PI),
                y: (0.0, 2.0 * PI),
                default_mesh: (192, 192),
                bc: (Periodic, Periodic),
                gamma: g53,
                t_final: 4.0,
                snapshots: &[0.5, 2.0, 3.0, 4.0],
                init: orszag_tang_init,
                exact: None,
            },
            Case::Rotor => CaseSpec {
                case: self,
                x: (0.0, 1.0),
                y: (0.0, 1.0),
                default_mesh: (200, 200),
                bc: (Periodic, Periodic),
                gamma: g53,
                t_final: 0.295,
                snapshots: &[],
                init: rotor_init,
                exact: None,
            },
            Case::Blast => CaseSpec {
                case: self,
                x: (-0.5, 0.5),
                y: (-0.5, 0.5),
                default_mesh: (200, 200),
                bc: (Outflow, Outflow),
                gamma: 1.4,
                t_final: 0.01,
                snapshots: &[],
                init: blast_init,
                exact: None,
            },
            Case::Loop => CaseSpec {
                case: self,
                x: (-1.0, 1.0),
                y: (-0.5, 0.5),
                default_mesh: (200, 100),
                bc: (Periodic, Periodic),
                gamma: g53,
                t_final: 10.0,
                snapshots: &[0.0, 2.0, 10.0],
                init: loop_init,
                exact: None,
            },
            Case::ShockCloud => CaseSpec {
                case: self,
                x: (0.0, 2.0),
                y: (0.0, 1.0),
                default_mesh: (600, 300),
                bc: (Outflow, Outflow),
                gamma: g53,
                t_final: 0.6,
                snapshots: &[],
                init: shock_cloud_init,
                exact: None,
            },
        }
    }
}

impl FromStr for Case {
    type Err = MhdError;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| MhdError::UnknownCase(s.to_string()))
    }
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub type Initializer = fn(f64, f64, f64) -> Primitive;
pub type ExactSolution = fn(f64, f64, f64, f64) -> Primitive;

#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub case: Case,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub default_mesh: (usize, usize),
    pub bc: (Boundary, Boundary),
    pub gamma: f64,
    pub t_final: f64,
    /// Output times shown for this problem; empty means final time only.
    pub snapshots: &'static [f64],
    /// `(x, y, γ) -> primitive state`.
    pub init: Initializer,
    /// `(x, y, t, γ) -> primitive state`, where known.
    pub exact: Option<ExactSolution>,
}

impl CaseSpec {
    pub fn mesh(&self, nx: usize, ny: usize) -> Result<Mesh> {
        Mesh::new(self.x, self.y, nx, ny, self.bc.0, self.bc.1)
    }

    pub fn primitive(&self, x: f64, y: f64) -> Primitive {
        (self.init)(x, y, self.gamma)
    }
}

// ---------------------------------------------------------------------------

const VORTEX_HALF_WIDTH: f64 = 5.0;

fn vortex_init(x: f64, y: f64, _gamma: f64) -> Primitive {
    let r2 = x * x + y * y;
    let amp = (0.5 * (1.0 - r2)).exp() / (2.0 * PI);
    let dp = -r2 / (8.0 * PI * PI) * (1.0 - r2).exp();
    Primitive {
        rho: 1.0,
        vel: [1.0 - amp * y, 1.0 + amp * x, 0.0],
        pres: 1.0 + dp,
        mag: [-amp * y, amp * x, 0.0],
    }
}

fn wrap_periodic(x: f64, half: f64) -> f64 {
    (x + half).rem_euclid(2.0 * half) - half
}

/// Initial vortex carried by the mean flow `(1, 1)` through the periodic box.
pub fn exact_vortex(x: f64, y: f64, t: f64, gamma: f64) -> Primitive {
    vortex_init(
        wrap_periodic(x - t, VORTEX_HALF_WIDTH),
        wrap_periodic(y - t, VORTEX_HALF_WIDTH),
        gamma,
    )
}

fn orszag_tang_init(x: f64, y: f64, gamma: f64) -> Primitive {
    Primitive {
        rho: gamma * gamma,
        vel: [-y.sin(), x.sin(), 0.0],
        pres: gamma,
        mag: [-y.sin(), (2.0 * x).sin(), 0.0],
    }
}

pub const ROTOR_R0: f64 = 0.1;
pub const ROTOR_R1: f64 = 0.115;

fn rotor_init(x: f64, y: f64, _gamma: f64) -> Primitive {
    let (dx, dy) = (x - 0.5, y - 0.5);
    let r = (dx * dx + dy * dy).sqrt();
    let (rho, ux, uy) = if r <= ROTOR_R0 {
        (10.0, -dy / ROTOR_R0, dx / ROTOR_R0)
    } else if r < ROTOR_R1 {
        let f = (ROTOR_R1 - r) / (ROTOR_R1 - ROTOR_R0);
        (1.0 + 9.0 * f, -f * dy / r, f * dx / r)
    } else {
        (1.0, 0.0, 0.0)
    };
    Primitive {
        rho,
        vel: [ux, uy, 0.0],
        pres: 0.5,
        mag: [2.5 / (4.0 * PI).sqrt(), 0.0, 0.0],
    }
}

fn blast_init(x: f64, y: f64, _gamma: f64) -> Primitive {
    let r = (x * x + y * y).sqrt();
    Primitive {
        rho: 1.0,
        vel: [0.0; 3],
        pres: if r <= 0.1 { 1000.0 } else { 0.1 },
        mag: [100.0 / (4.0 * PI).sqrt(), 0.0, 0.0],
    }
}

pub const LOOP_A0: f64 = 1e-3;
pub const LOOP_R: f64 = 0.3;

/// `(∂A_z/∂y, -∂A_z/∂x)` of `A_z = A₀(R - r)` inside the loop, zero outside
/// and at the center.
pub fn loop_field(x: f64, y: f64) -> [f64; 2] {
    let r = (x * x + y * y).sqrt();
    if r == 0.0 || r > LOOP_R {
        [0.0, 0.0]
    } else {
        [-LOOP_A0 * y / r, LOOP_A0 * x / r]
    }
}

fn loop_init(x: f64, y: f64, _gamma: f64) -> Primitive {
    let b = loop_field(x, y);
    Primitive {
        rho: 1.0,
        vel: [2.0, 1.0, 0.0],
        pres: 1.0,
        mag: [b[0], b[1], 0.0],
    }
}

fn shock_cloud_init(x: f64, y: f64, _gamma: f64) -> Primitive {
    if x <= 1.2 {
        Primitive {
            rho: 3.88968,
            vel: [0.0, 0.0, -0.05234],
            pres: 14.2641,
            mag: [1.0, 0.0, 3.9353],
        }
    } else {
        let in_cloud = ((x - 1.4).powi(2) + (y - 0.5).powi(2)).sqrt() < 0.18;
        Primitive {
            rho: if in_cloud { 5.0 } else { 1.0 },
            vel: [-3.3156, 0.0, 0.0],
            pres: 0.04,
            mag: [1.0, 0.0, 1.0],
        }
    }
}

// ---------------------------------------------------------------------------

/// L² projection of pointwise conserved data onto the modal basis, by the
/// scheme's volume quadrature.
///
/// Where the projected polynomial of a cell is inadmissible at one of the
/// scheme's quadrature points (Gibbs overshoot of discontinuous data), that
/// cell keeps only its average.
pub fn project_conserved(
    scheme: &Scheme,
    conserved: impl Fn(f64, f64) -> Result<[f64; NVAR]> + Sync,
) -> Result<ModalField> {
    let mesh = &scheme.mesh;
    let t = &scheme.tables;
    let nb = t.spec.n_basis();
    let coeffs: Vec<Result<Coeffs>> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|cell| {
            let mut c = [[0.0; NVAR]; MAX_BASIS];
            for p in &t.volume {
                let (x, y) = mesh.to_physical(cell, p.xr, p.yr);
                let u = conserved(x, y)?;
                for b in 0..nb {
                    for v in 0..NVAR {
                        c[b][v] += p.weight * p.phi[b] * u[v];
                    }
                }
            }
            for (b, row) in c.iter_mut().enumerate().take(nb) {
                for v in row.iter_mut() {
                    *v /= t.mass[b];
                }
            }
            let admissible = t
                .volume
                .iter()
                .map(|p| &p.phi)
                .chain(t.edges.iter().flat_map(|e| e.iter().map(|p| &p.phi)))
                .all(|phi| cons_to_prim(&eval_with(&c, phi, nb), scheme.gamma).is_ok());
            if !admissible {
                for row in c.iter_mut().skip(1) {
                    *row = [0.0; NVAR];
                }
            }
            Ok(c)
        })
        .collect();
    Ok(ModalField {
        mesh: mesh.clone(),
        basis: scheme.basis(),
        coeffs: coeffs.into_iter().collect::<Result<_>>()?,
    })
}

/// Initial modal field of a benchmark problem.
pub fn init_field(spec: &CaseSpec, scheme: &Scheme) -> Result<ModalField> {
    let gamma = scheme.gamma;
    project_conserved(scheme, |x, y| {
        prim_to_cons(&spec.primitive(x, y), gamma).map_err(|e| MhdError::InadmissibleInitialData {
            x,
            y,
            source: Box::new(e),
        })
    })
}
