//! Modal DG fields and the fixed discretization context they live on.

use crate::basis::{BasisSpec, DgTables, MAX_BASIS};
use crate::mesh::Mesh;
use crate::physics::NVAR;

/// Modal coefficients of one cell: `coeffs[basis][component]`.
pub type Coeffs = [[f64; NVAR]; MAX_BASIS];

/// Mesh, basis tables and adiabatic index shared by every operator.
#[derive(Debug, Clone)]
pub struct Scheme {
    pub mesh: Mesh,
    pub tables: DgTables,
    pub gamma: f64,
}

impl Scheme {
    pub fn new(mesh: Mesh, basis: BasisSpec, gamma: f64) -> Self {
        let tables = DgTables::new(basis, mesh.hx, mesh.hy);
        Scheme { mesh, tables, gamma }
    }

    /// Same scheme with `n` Gauss points per axis instead of `k + 1`.
    pub fn with_quadrature_points(mesh: Mesh, basis: BasisSpec, gamma: f64, n: usize) -> Self {
        let tables = DgTables::with_points(basis, n, mesh.hx, mesh.hy);
        Scheme { mesh, tables, gamma }
    }

    pub fn basis(&self) -> BasisSpec {
        self.tables.spec
    }

    pub fn zero_field(&self) -> ModalField {
        ModalField::zeros(self.mesh.clone(), self.basis())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalField {
    pub mesh: Mesh,
    pub basis: BasisSpec,
    pub coeffs: Vec<Coeffs>,
}

impl ModalField {
    pub fn zeros(mesh: Mesh, basis: BasisSpec) -> Self {
        let n = mesh.n_cells();
        ModalField {
            mesh,
            basis,
            coeffs: vec![[[0.0; NVAR]; MAX_BASIS]; n],
        }
    }

    /// Field whose every cell holds the constant `u`.
    pub fn uniform(mesh: Mesh, basis: BasisSpec, u: [f64; NVAR]) -> Self {
        let mut f = Self::zeros(mesh, basis);
        for c in &mut f.coeffs {
            c[0] = u;
        }
        f
    }

    pub fn n_cells(&self) -> usize {
        self.coeffs.len()
    }

    pub fn n_basis(&self) -> usize {
        self.basis.n_basis()
    }

    /// Cell average (the `(0,0)` coefficient, since `φ₀ ≡ 1`).
    pub fn average(&self, cell: usize) -> [f64; NVAR] {
        self.coeffs[cell][0]
    }

    /// `U_h` at reference point `(X, Y)` of `cell`.
    pub fn eval(&self, cell: usize, xr: f64, yr: f64) -> [f64; NVAR] {
        eval_with(&self.coeffs[cell], &self.basis.eval(xr, yr), self.n_basis())
    }

    /// `self + a * other`, coefficient-wise.
    pub fn axpy(&self, a: f64, other: &ModalField) -> ModalField {
        let mut out = self.clone();
        for (o, r) in out.coeffs.iter_mut().zip(&other.coeffs) {
            for (ob, rb) in o.iter_mut().zip(r) {
                for (x, y) in ob.iter_mut().zip(rb) {
                    *x += a * y;
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter().flat_map(|b| b.iter()))
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.iter().all(|b| b.iter().all(|v| v.is_finite())))
    }
}

/// `Σ_b coeffs[b] φ_b` with precomputed basis values.
#[inline]
pub fn eval_with(coeffs: &Coeffs, phi: &[f64; MAX_BASIS], n_basis: usize) -> [f64; NVAR] {
    let mut u = [0.0; NVAR];
    for b in 0..n_basis {
        let p = phi[b];
        for c in 0..NVAR {
            u[c] += coeffs[b][c] * p;
        }
    }
    u
}
