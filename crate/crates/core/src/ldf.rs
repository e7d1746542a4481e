//! Projection of the in-cell magnetic field onto a locally divergence-free space.
//!
//! The nine vector polynomials below are mutually orthogonal in `L²(K)` and
//! divergence-free inside the cell. Each is a fixed combination of scalar
//! basis functions, so the projection reduces to a 12×12 matrix acting on the
//! `(B_x, B_y)` modal coefficients.

use rayon::prelude::*;

use crate::basis::{BasisSpec, MAX_BASIS};
use crate::field::ModalField;
use crate::physics::{BX, BY};

pub const N_DF: usize = 9;

/// One divergence-free basis vector as scalar-basis coefficients of its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfVector {
    pub x: [f64; MAX_BASIS],
    pub y: [f64; MAX_BASIS],
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DfBasis {
    pub vectors: Vec<DfVector>,
    /// `∫_K ψ·ψ`.
    pub norms: Vec<f64>,
    pub mass: [f64; MAX_BASIS],
}

fn unit(b: usize, s: f64) -> [f64; MAX_BASIS] {
    let mut v = [0.0; MAX_BASIS];
    v[b] = s;
    v
}

impl DfBasis {
    /// The `ψ` vectors of total degree `≤ k` on an `hx × hy` cell.
    pub fn new(spec: BasisSpec, hx: f64, hy: f64) -> Self {
        let z = [0.0; MAX_BASIS];
        let all = [
            // ψ1 = (φ₀, 0), ψ2 = (0, φ₀)
            DfVector { x: unit(0, 1.0), y: z, degree: 0 },
            DfVector { x: z, y: unit(0, 1.0), degree: 0 },
            // ψ3 = (hx X, -hy Y), ψ4 = (Y, 0), ψ5 = (0, X)
            DfVector { x: unit(1, hx), y: unit(2, -hy), degree: 1 },
            DfVector { x: unit(2, 1.0), y: z, degree: 1 },
            DfVector { x: z, y: unit(1, 1.0), degree: 1 },
            // ψ6 = (hx φ₂₀, -2hy φ₁₁), ψ7 = (2hx φ₁₁, -hy φ₀₂)
            DfVector { x: unit(3, hx), y: unit(4, -2.0 * hy), degree: 2 },
            DfVector { x: unit(4, 2.0 * hx), y: unit(5, -hy), degree: 2 },
            // ψ8 = (φ₀₂, 0), ψ9 = (0, φ₂₀)
            DfVector { x: unit(5, 1.0), y: z, degree: 2 },
            DfVector { x: z, y: unit(3, 1.0), degree: 2 },
        ];
        let mass = spec.mass_diagonal(hx, hy);
        let vectors: Vec<DfVector> = all.into_iter().filter(|v| v.degree <= spec.degree()).collect();
        let norms = vectors.iter().map(|v| inner(&mass, v, &v.x, &v.y)).collect();
        DfBasis { vectors, norms, mass }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `B^(l) = ∫ B·ψ^(l) / ∫ ψ^(l)·ψ^(l)`.
    pub fn coefficients(&self, bx: &[f64; MAX_BASIS], by: &[f64; MAX_BASIS]) -> Vec<f64> {
        self.vectors
            .iter()
            .zip(&self.norms)
            .map(|(v, n)| inner(&self.mass, v, bx, by) / n)
            .collect()
    }

    /// `Σ_l B^(l) ψ^(l)` as scalar modal coefficients.
    pub fn reconstruct(&self, df: &[f64]) -> ([f64; MAX_BASIS], [f64; MAX_BASIS]) {
        let mut bx = [0.0; MAX_BASIS];
        let mut by = [0.0; MAX_BASIS];
        for (v, &c) in self.vectors.iter().zip(df) {
            for b in 0..MAX_BASIS {
                bx[b] += c * v.x[b];
                by[b] += c * v.y[b];
            }
        }
        (bx, by)
    }
}

/// `∫_K (bx, by)·ψ` using orthogonality of the scalar basis.
fn inner(mass: &[f64; MAX_BASIS], v: &DfVector, bx: &[f64; MAX_BASIS], by: &[f64; MAX_BASIS]) -> f64 {
    (0..MAX_BASIS)
        .map(|b| mass[b] * (v.x[b] * bx[b] + v.y[b] * by[b]))
        .sum()
}

/// Divergence-free coefficients `B^(1..9)` of the projection (degree-2 basis).
pub fn project_ldf(bx: &[f64; 6], by: &[f64; 6], hx: f64, hy: f64) -> [f64; N_DF] {
    let basis = DfBasis::new(BasisSpec::new(2).expect("degree 2 is supported"), hx, hy);
    let c = basis.coefficients(bx, by);
    let mut out = [0.0; N_DF];
    out.copy_from_slice(&c);
    out
}

/// Projection as a precomputed linear map on `[bx coeffs | by coeffs]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LdfProjector {
    pub basis: DfBasis,
    n_basis: usize,
    matrix: [[f64; 2 * MAX_BASIS]; 2 * MAX_BASIS],
}

impl LdfProjector {
    pub fn new(spec: BasisSpec, hx: f64, hy: f64) -> Self {
        let basis = DfBasis::new(spec, hx, hy);
        let mut matrix = [[0.0; 2 * MAX_BASIS]; 2 * MAX_BASIS];
        // P = Σ_l ψ_l ψ_lᵀ M / ‖ψ_l‖²
        for (v, n) in basis.vectors.iter().zip(&basis.norms) {
            let col: Vec<f64> = v.x.iter().chain(&v.y).copied().collect();
            let row: Vec<f64> = (0..2 * MAX_BASIS)
                .map(|r| col[r] * basis.mass[r % MAX_BASIS] / n)
                .collect();
            for (i, ci) in col.iter().enumerate() {
                if *ci == 0.0 {
                    continue;
                }
                for (j, rj) in row.iter().enumerate() {
                    matrix[i][j] += ci * rj;
                }
            }
        }
        LdfProjector { basis, n_basis: spec.n_basis(), matrix }
    }

    pub fn project(&self, bx: &[f64; MAX_BASIS], by: &[f64; MAX_BASIS]) -> ([f64; MAX_BASIS], [f64; MAX_BASIS]) {
        let mut input = [0.0; 2 * MAX_BASIS];
        input[..MAX_BASIS].copy_from_slice(bx);
        input[MAX_BASIS..].copy_from_slice(by);
        let mut out = [0.0; 2 * MAX_BASIS];
        for (o, row) in out.iter_mut().zip(&self.matrix) {
            *o = row.iter().zip(&input).filter(|(m, _)| **m != 0.0).map(|(m, x)| m * x).sum();
        }
        let mut px = [0.0; MAX_BASIS];
        let mut py = [0.0; MAX_BASIS];
        px[..self.n_basis].copy_from_slice(&out[..self.n_basis]);
        py[..self.n_basis].copy_from_slice(&out[MAX_BASIS..MAX_BASIS + self.n_basis]);
        (px, py)
    }

    /// Replaces `(B_x, B_y)` of every cell by its projection; `B_z` and the
    /// flow variables are left alone.
    pub fn apply(&self, field: &ModalField) -> ModalField {
        let mut out = field.clone();
        out.coeffs.par_iter_mut().for_each(|c| {
            let bx: [f64; MAX_BASIS] = std::array::from_fn(|b| c[b][BX]);
            let by: [f64; MAX_BASIS] = std::array::from_fn(|b| c[b][BY]);
            let (px, py) = self.project(&bx, &by);
            for b in 0..MAX_BASIS {
                c[b][BX] = px[b];
                c[b][BY] = py[b];
            }
        });
        out
    }
}

/// LDF projection of a whole field.
pub fn apply_ldf(field: &ModalField) -> ModalField {
    LdfProjector::new(field.basis, field.mesh.hx, field.mesh.hy).apply(field)
}
