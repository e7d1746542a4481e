//! Orthogonal modal basis on rectangles and the per-mesh lookup tables built from it.
//!
//! On a cell with center `(x_K, y_K)` and sizes `(h_x, h_y)` the reference
//! coordinates are `X = 2(x - x_K)/h_x`, `Y = 2(y - y_K)/h_y`, and the basis is
//! `1, X, Y, X² - 1/3, XY, Y² - 1/3`, truncated to total degree `k`.

use crate::error::{MhdError, Result};
use crate::mesh::Side;
use crate::quadrature::GaussLegendre;

pub const MAX_BASIS: usize = 6;
pub const MAX_DEGREE: usize = 2;

/// `∫_{[-1,1]²} φ²` for each basis function.
pub const REF_MASS: [f64; MAX_BASIS] = [4.0, 4.0 / 3.0, 4.0 / 3.0, 16.0 / 45.0, 4.0 / 9.0, 16.0 / 45.0];

/// Multi-indices in basis order.
pub const MULTI_INDEX: [(usize, usize); MAX_BASIS] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSpec {
    degree: usize,
}

impl BasisSpec {
    pub fn new(degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(MhdError::Config(format!(
                "polynomial degree {degree} not supported (0..=2)"
            )));
        }
        Ok(BasisSpec { degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_basis(&self) -> usize {
        (self.degree + 1) * (self.degree + 2) / 2
    }

    /// Basis indices with total degree `j`; contiguous by construction.
    pub fn group(&self, j: usize) -> std::ops::Range<usize> {
        debug_assert!(j <= self.degree);
        j * (j + 1) / 2..(j + 1) * (j + 2) / 2
    }

    pub fn eval(&self, xr: f64, yr: f64) -> [f64; MAX_BASIS] {
        let mut v = eval_ref(xr, yr);
        v[self.n_basis()..].fill(0.0);
        v
    }

    /// Physical gradients `(∂_x φ, ∂_y φ)`.
    pub fn eval_grad(&self, xr: f64, yr: f64, hx: f64, hy: f64) -> [[f64; 2]; MAX_BASIS] {
        let dx = deriv_ref(1, 0, xr, yr);
        let dy = deriv_ref(0, 1, xr, yr);
        let mut g = [[0.0; 2]; MAX_BASIS];
        for b in 0..self.n_basis() {
            g[b] = [dx[b] * 2.0 / hx, dy[b] * 2.0 / hy];
        }
        g
    }

    /// Physical mixed derivative `∂^a1_x ∂^a2_y φ` of every basis function.
    pub fn eval_deriv(&self, a1: usize, a2: usize, xr: f64, yr: f64, hx: f64, hy: f64) -> [f64; MAX_BASIS] {
        let mut d = deriv_ref(a1, a2, xr, yr);
        let scale = (2.0 / hx).powi(a1 as i32) * (2.0 / hy).powi(a2 as i32);
        for (b, v) in d.iter_mut().enumerate() {
            *v = if b < self.n_basis() { *v * scale } else { 0.0 };
        }
        d
    }

    /// `∫_K φ²` for a cell of size `hx × hy`.
    pub fn mass_diagonal(&self, hx: f64, hy: f64) -> [f64; MAX_BASIS] {
        let jac = 0.25 * hx * hy;
        let mut m = [0.0; MAX_BASIS];
        for b in 0..self.n_basis() {
            m[b] = jac * REF_MASS[b];
        }
        m
    }
}

#[inline]
pub fn eval_ref(xr: f64, yr: f64) -> [f64; MAX_BASIS] {
    [
        1.0,
        xr,
        yr,
        xr * xr - 1.0 / 3.0,
        xr * yr,
        yr * yr - 1.0 / 3.0,
    ]
}

/// Reference-coordinate derivative `∂^a1_X ∂^a2_Y` of the full degree-2 basis.
pub fn deriv_ref(a1: usize, a2: usize, xr: f64, yr: f64) -> [f64; MAX_BASIS] {
    match (a1, a2) {
        (0, 0) => eval_ref(xr, yr),
        (1, 0) => [0.0, 1.0, 0.0, 2.0 * xr, yr, 0.0],
        (0, 1) => [0.0, 0.0, 1.0, 0.0, xr, 2.0 * yr],
        (2, 0) => [0.0, 0.0, 0.0, 2.0, 0.0, 0.0],
        (1, 1) => [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        (0, 2) => [0.0, 0.0, 0.0, 0.0, 0.0, 2.0],
        _ => [0.0; MAX_BASIS],
    }
}

/// Multi-indices `α` with `|α| = m`.
pub fn multi_indices(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=m).rev().map(move |a1| (a1, m - a1))
}

#[derive(Debug, Clone)]
pub struct VolumePoint {
    pub xr: f64,
    pub yr: f64,
    /// Reference weight times the cell Jacobian `hx hy / 4`.
    pub weight: f64,
    pub phi: [f64; MAX_BASIS],
    pub grad: [[f64; 2]; MAX_BASIS],
}

#[derive(Debug, Clone)]
pub struct EdgePoint {
    pub xr: f64,
    pub yr: f64,
    /// 1D reference weight (sums to 2 along an edge).
    pub ref_weight: f64,
    /// Reference weight times the edge Jacobian (`hy/2` on x-faces, `hx/2` on y-faces).
    pub weight: f64,
    pub phi: [f64; MAX_BASIS],
    /// `derivs[m][a]` holds `∂^α φ` for the `a`-th multi-index of order `m`.
    pub derivs: Vec<Vec<[f64; MAX_BASIS]>>,
}

/// Everything per-cell integrals need, evaluated once for a uniform mesh.
#[derive(Debug, Clone)]
pub struct DgTables {
    pub spec: BasisSpec,
    pub hx: f64,
    pub hy: f64,
    pub rule: GaussLegendre,
    pub volume: Vec<VolumePoint>,
    /// Indexed by `side_index`. Points run in ascending tangential coordinate,
    /// so point `q` on a cell's right side is point `q` on its neighbor's left side.
    pub edges: [Vec<EdgePoint>; 4],
    pub mass: [f64; MAX_BASIS],
}

pub fn side_index(side: Side) -> usize {
    match side {
        Side::Left => 0,
        Side::Right => 1,
        Side::Bottom => 2,
        Side::Top => 3,
    }
}

impl DgTables {
    /// Tables with `k + 1` Gauss points per axis and per edge.
    pub fn new(spec: BasisSpec, hx: f64, hy: f64) -> Self {
        Self::with_points(spec, spec.degree() + 1, hx, hy)
    }

    pub fn with_points(spec: BasisSpec, n_points: usize, hx: f64, hy: f64) -> Self {
        let rule = GaussLegendre::new(n_points);
        let jac = 0.25 * hx * hy;
        let volume = rule
            .tensor_points()
            .into_iter()
            .map(|(xr, yr, w)| VolumePoint {
                xr,
                yr,
                weight: w * jac,
                phi: spec.eval(xr, yr),
                grad: spec.eval_grad(xr, yr, hx, hy),
            })
            .collect();
        let edge = |side: Side| -> Vec<EdgePoint> {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&s, &w)| {
                    let (xr, yr, jac) = match side {
                        Side::Left => (-1.0, s, 0.5 * hy),
                        Side::Right => (1.0, s, 0.5 * hy),
                        Side::Bottom => (s, -1.0, 0.5 * hx),
                        Side::Top => (s, 1.0, 0.5 * hx),
                    };
                    let derivs = (0..=spec.degree())
                        .map(|m| {
                            multi_indices(m)
                                .map(|(a1, a2)| spec.eval_deriv(a1, a2, xr, yr, hx, hy))
                                .collect()
                        })
                        .collect();
                    EdgePoint {
                        xr,
                        yr,
                        ref_weight: w,
                        weight: w * jac,
                        phi: spec.eval(xr, yr),
                        derivs,
                    }
                })
                .collect()
        };
        DgTables {
            spec,
            hx,
            hy,
            volume,
            edges: [
                edge(Side::Left),
                edge(Side::Right),
                edge(Side::Bottom),
                edge(Side::Top),
            ],
            mass: spec.mass_diagonal(hx, hy),
            rule,
        }
    }

    pub fn edge(&self, side: Side) -> &[EdgePoint] {
        &self.edges[side_index(side)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn eval_examples() {
        let s = BasisSpec::new(2).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(s.eval(0.0, 0.0), [1.0, 0.0, 0.0, -third, 0.0, -third]);
        let v = s.eval(1.0, 1.0);
        for (a, b) in v.iter().zip([1.0, 1.0, 1.0, 2.0 / 3.0, 1.0, 2.0 / 3.0]) {
            assert!(close(*a, b, 1e-15));
        }
        let v = s.eval(1.0, -1.0);
        for (a, b) in v.iter().zip([1.0, 1.0, -1.0, 2.0 / 3.0, -1.0, 2.0 / 3.0]) {
            assert!(close(*a, b, 1e-15));
        }
        // truncation
        let s1 = BasisSpec::new(1).unwrap();
        assert_eq!(s1.n_basis(), 3);
        assert_eq!(s1.eval(1.0, 1.0)[3..], [0.0; 3]);
        assert!(BasisSpec::new(3).is_err());
    }

    #[test]
    fn grad_examples() {
        let s = BasisSpec::new(2).unwrap();
        let g = s.eval_grad(0.3, -0.7, 0.5, 0.5);
        assert_eq!(g[0], [0.0, 0.0]);
        assert_eq!(g[1], [4.0, 0.0]);
        let g = s.eval_grad(1.0, -1.0, 1.0, 1.0);
        assert_eq!(g[4], [-2.0, 2.0]);
        let g = s.eval_grad(0.5, 0.25, 2.0, 4.0);
        // ∂x(X² - 1/3) = 4X/hx, ∂y(Y² - 1/3) = 4Y/hy
        assert!(close(g[3][0], 4.0 * 0.5 / 2.0, 1e-15));
        assert!(close(g[5][1], 4.0 * 0.25 / 4.0, 1e-15));
    }

    #[test]
    fn groups_are_contiguous() {
        let s = BasisSpec::new(2).unwrap();
        assert_eq!(s.group(0), 0..1);
        assert_eq!(s.group(1), 1..3);
        assert_eq!(s.group(2), 3..6);
        for j in 0..=2 {
            for b in s.group(j) {
                let (a1, a2) = MULTI_INDEX[b];
                assert_eq!(a1 + a2, j);
            }
        }
    }

    #[test]
    fn mass_diagonal_matches_quadrature() {
        let s = BasisSpec::new(2).unwrap();
        let t = DgTables::new(s, 2.0, 2.0);
        let m = s.mass_diagonal(2.0, 2.0);
        assert_eq!(m, REF_MASS);
        let quarter = s.mass_diagonal(1.0, 1.0);
        for b in 0..MAX_BASIS {
            assert!(close(quarter[b], REF_MASS[b] / 4.0, 1e-16));
        }
        // Gram matrix by 3-point quadrature: diagonal = mass, off-diagonal = 0
        for a in 0..6 {
            for b in 0..6 {
                let g: f64 = t.volume.iter().map(|p| p.weight * p.phi[a] * p.phi[b]).sum();
                let expect = if a == b { m[a] } else { 0.0 };
                assert!(close(g, expect, 1e-13), "({a},{b}): {g}");
            }
        }
    }

    #[test]
    fn orthogonality_on_a_physical_cell() {
        let s = BasisSpec::new(2).unwrap();
        let t = DgTables::new(s, 0.3, 0.17);
        for a in 0..6 {
            for b in 0..6 {
                let g: f64 = t.volume.iter().map(|p| p.weight * p.phi[a] * p.phi[b]).sum();
                let expect = if a == b { t.mass[a] } else { 0.0 };
                assert!(close(g, expect, 1e-13));
            }
        }
    }

    #[test]
    fn edges_share_tangential_ordering() {
        let t = DgTables::new(BasisSpec::new(2).unwrap(), 1.0, 1.0);
        for (r, l) in t.edge(Side::Right).iter().zip(t.edge(Side::Left)) {
            assert_eq!(r.yr, l.yr);
        }
        for (r, l) in t.edge(Side::Top).iter().zip(t.edge(Side::Bottom)) {
            assert_eq!(r.xr, l.xr);
        }
    }

    proptest! {
        #[test]
        fn projection_reproduces_polynomials(c in prop::array::uniform6(-3.0f64..3.0), hx in 0.05f64..2.0, hy in 0.05f64..2.0) {
            // p(X, Y) = c0 + c1 X + c2 Y + c3 X² + c4 XY + c5 Y²
            let s = BasisSpec::new(2).unwrap();
            let t = DgTables::new(s, hx, hy);
            let p = |x: f64, y: f64| c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
            let mut coef = [0.0; MAX_BASIS];
            for b in 0..6 {
                coef[b] = t.volume.iter().map(|q| q.weight * p(q.xr, q.yr) * q.phi[b]).sum::<f64>() / t.mass[b];
            }
            for &(x, y) in &[(0.1, 0.9), (-0.77, 0.31), (1.0, -1.0), (0.0, 0.0)] {
                let v: f64 = s.eval(x, y).iter().zip(&coef).map(|(a, b)| a * b).sum();
                prop_assert!((v - p(x, y)).abs() <= 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn orthogonal_on_any_rectangle(hx in 1e-3f64..10.0, hy in 1e-3f64..10.0) {
            let t = DgTables::new(BasisSpec::new(2).unwrap(), hx, hy);
            for a in 0..MAX_BASIS {
                for b in 0..MAX_BASIS {
                    let g: f64 = t.volume.iter().map(|q| q.weight * q.phi[a] * q.phi[b]).sum();
                    let expect = if a == b { t.mass[a] } else { 0.0 };
                    prop_assert!((g - expect).abs() <= 1e-13 * t.mass[0]);
                }
            }
        }
    }
}
