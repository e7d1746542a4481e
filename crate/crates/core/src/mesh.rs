//! Uniform rectangular meshes and boundary closure.

use crate::error::{MhdError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Outflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Bottom => Side::Top,
            Side::Top => Side::Bottom,
        }
    }

    pub fn outward_normal(self) -> [f64; 2] {
        match self {
            Side::Left => [-1.0, 0.0],
            Side::Right => [1.0, 0.0],
            Side::Bottom => [0.0, -1.0],
            Side::Top => [0.0, 1.0],
        }
    }
}

/// Where the outer trace across a cell side comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    /// A real cell (interior, or the periodic image).
    Cell(usize),
    /// Outflow boundary: the ghost holds a copy of this cell, and its trace
    /// on the shared side equals the inner trace.
    Extrapolated(usize),
}

impl Neighbor {
    pub fn cell(self) -> usize {
        match self {
            Neighbor::Cell(c) | Neighbor::Extrapolated(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub bc_x: Boundary,
    pub bc_y: Boundary,
}

impl Mesh {
    pub fn new(
        x: (f64, f64),
        y: (f64, f64),
        nx: usize,
        ny: usize,
        bc_x: Boundary,
        bc_y: Boundary,
    ) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(MhdError::Config(format!(
                "mesh needs at least 2 cells per axis, got {nx}x{ny}"
            )));
        }
        if !(x.1 > x.0 && y.1 > y.0) {
            return Err(MhdError::Config(format!("empty domain {x:?} x {y:?}")));
        }
        Ok(Mesh {
            x_lo: x.0,
            x_hi: x.1,
            y_lo: y.0,
            y_hi: y.1,
            nx,
            ny,
            hx: (x.1 - x.0) / nx as f64,
            hy: (y.1 - y.0) / ny as f64,
            bc_x,
            bc_y,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cell_area(&self) -> f64 {
        self.hx * self.hy
    }

    pub fn domain_area(&self) -> f64 {
        (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)
    }

    /// Row-major cell index, `i` along x.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn ij(&self, cell: usize) -> (usize, usize) {
        (cell % self.nx, cell / self.nx)
    }

    pub fn center(&self, cell: usize) -> (f64, f64) {
        let (i, j) = self.ij(cell);
        (
            self.x_lo + (i as f64 + 0.5) * self.hx,
            self.y_lo + (j as f64 + 0.5) * self.hy,
        )
    }

    /// Physical coordinates of the reference point `(X, Y)` in `cell`.
    #[inline]
    pub fn to_physical(&self, cell: usize, xr: f64, yr: f64) -> (f64, f64) {
        let (xc, yc) = self.center(cell);
        (xc + 0.5 * self.hx * xr, yc + 0.5 * self.hy * yr)
    }

    pub fn neighbor(&self, cell: usize, side: Side) -> Neighbor {
        let (i, j) = self.ij(cell);
        let (nx, ny) = (self.nx, self.ny);
        let wrap = |at_edge: bool, bc: Boundary, wrapped: usize, inner: usize| {
            if !at_edge {
                Neighbor::Cell(inner)
            } else {
                match bc {
                    Boundary::Periodic => Neighbor::Cell(wrapped),
                    Boundary::Outflow => Neighbor::Extrapolated(cell),
                }
            }
        };
        match side {
            Side::Left => wrap(
                i == 0,
                self.bc_x,
                self.index(nx - 1, j),
                cell.wrapping_sub(1),
            ),
            Side::Right => wrap(i + 1 == nx, self.bc_x, self.index(0, j), cell + 1),
            Side::Bottom => wrap(
                j == 0,
                self.bc_y,
                self.index(i, ny - 1),
                cell.wrapping_sub(nx),
            ),
            Side::Top => wrap(j + 1 == ny, self.bc_y, self.index(i, 0), cell + nx),
        }
    }

    /// Modal coefficients of the cell across `side` (periodic image or outflow copy).
    pub fn ghost_state<T: Clone>(&self, cells: &[T], cell: usize, side: Side) -> T {
        cells[self.neighbor(cell, side).cell()].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic(nx: usize, ny: usize) -> Mesh {
        Mesh::new((0.0, 1.0), (0.0, 1.0), nx, ny, Boundary::Periodic, Boundary::Periodic).unwrap()
    }

    #[test]
    fn sizes() {
        let m = Mesh::new((-5.0, 5.0), (0.0, 1.0), 16, 4, Boundary::Periodic, Boundary::Outflow)
            .unwrap();
        assert_eq!(m.hx, 10.0 / 16.0);
        assert_eq!(m.hy, 0.25);
        assert_eq!(m.n_cells(), 64);
        assert!(Mesh::new((0.0, 1.0), (0.0, 1.0), 1, 4, Boundary::Periodic, Boundary::Periodic)
            .is_err());
    }

    #[test]
    fn periodic_wrap() {
        let m = periodic(4, 3);
        let cells: Vec<usize> = (0..m.n_cells()).collect();
        assert_eq!(m.ghost_state(&cells, m.index(0, 2), Side::Left), m.index(3, 2));
        assert_eq!(m.ghost_state(&cells, m.index(2, 0), Side::Bottom), m.index(2, 2));
        assert_eq!(m.ghost_state(&cells, m.index(2, 2), Side::Top), m.index(2, 0));
        let m = periodic(2, 2);
        assert_eq!(m.neighbor(m.index(1, 0), Side::Right), Neighbor::Cell(m.index(0, 0)));
    }

    #[test]
    fn outflow_copies_own_cell() {
        let m = Mesh::new((0.0, 1.0), (0.0, 1.0), 3, 3, Boundary::Outflow, Boundary::Outflow)
            .unwrap();
        let cells: Vec<u32> = (0..9).map(|c| c * 10).collect();
        assert_eq!(m.ghost_state(&cells, 0, Side::Left), 0);
        assert_eq!(m.ghost_state(&cells, 8, Side::Top), 80);
        assert_eq!(m.neighbor(4, Side::Right), Neighbor::Cell(5));
        assert_eq!(m.neighbor(2, Side::Right), Neighbor::Extrapolated(2));
    }

    #[test]
    fn interior_neighbors_are_mutual() {
        let m = periodic(5, 4);
        for c in 0..m.n_cells() {
            for s in Side::ALL {
                let n = m.neighbor(c, s).cell();
                assert_eq!(m.neighbor(n, s.opposite()).cell(), c);
            }
        }
    }
}
