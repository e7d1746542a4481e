//! Modal discontinuous Galerkin solver for 2D ideal MHD on uniform
//! rectangular meshes.
//!
//! Each SSPRK3 stage is followed by an oscillation-eliminating modal damping
//! pass and a per-cell projection of the magnetic field onto a locally
//! divergence-free polynomial space.

pub mod basis;
pub mod cases;
pub mod config;
pub mod dg;
pub mod diagnostics;
pub mod driver;
pub mod error;
pub mod field;
pub mod ldf;
pub mod mesh;
pub mod oe;
pub mod output;
pub mod physics;
pub mod quadrature;
pub mod time;

#[cfg(test)]
mod testing;

pub use basis::BasisSpec;
pub use cases::{Case, CaseSpec};
pub use config::{OutputFormat, RunConfig};
pub use error::{MhdError, Result, Stage};
pub use field::{ModalField, Scheme};
pub use mesh::{Boundary, Mesh, Side};
pub use physics::{Primitive, State};
pub use time::{Filter, Integrator, StepControls, StepOptions};
