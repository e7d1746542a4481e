//! Pointwise ideal-MHD state algebra.
//!
//! Conserved layout used everywhere in the crate (2.5D: all three vector
//! components are carried, derivatives along z vanish):
//!
//! | index | 0 | 1 | 2 | 3 | 4 | 5 | 6 | 7 |
//! |-------|---|---|---|---|---|---|---|---|
//! |       | ρ | ρu_x | ρu_y | ρu_z | E | B_x | B_y | B_z |

use crate::error::{MhdError, Result};

pub const NVAR: usize = 8;

pub const RHO: usize = 0;
pub const MX: usize = 1;
pub const MY: usize = 2;
pub const MZ: usize = 3;
pub const ENER: usize = 4;
pub const BX: usize = 5;
pub const BY: usize = 6;
pub const BZ: usize = 7;

/// Conserved variables at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub rho: f64,
    pub mom: [f64; 3],
    pub ener: f64,
    pub mag: [f64; 3],
}

/// Primitive variables at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Primitive {
    pub rho: f64,
    pub vel: [f64; 3],
    pub pres: f64,
    pub mag: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }

    pub fn normal(self) -> [f64; 2] {
        match self {
            Axis::X => [1.0, 0.0],
            Axis::Y => [0.0, 1.0],
        }
    }
}

impl State {
    pub fn from_array(u: [f64; NVAR]) -> Self {
        State {
            rho: u[RHO],
            mom: [u[MX], u[MY], u[MZ]],
            ener: u[ENER],
            mag: [u[BX], u[BY], u[BZ]],
        }
    }

    pub fn to_array(self) -> [f64; NVAR] {
        [
            self.rho,
            self.mom[0],
            self.mom[1],
            self.mom[2],
            self.ener,
            self.mag[0],
            self.mag[1],
            self.mag[2],
        ]
    }

    pub fn to_primitive(self, gamma: f64) -> Result<Primitive> {
        cons_to_prim(&self.to_array(), gamma)
    }
}

impl Primitive {
    pub fn to_conserved(self, gamma: f64) -> Result<State> {
        prim_to_cons(&self, gamma).map(State::from_array)
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.pres / self.rho).sqrt()
    }

    pub fn magnetic_pressure(&self) -> f64 {
        0.5 * dot3(&self.mag, &self.mag)
    }

    pub fn total_pressure(&self) -> f64 {
        self.pres + self.magnetic_pressure()
    }
}

#[inline]
fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Recovers primitives from a conserved array.
///
/// The thermal pressure is `(γ-1)(E - ½ρ|u|² - ½|B|²)`. Non-positive density
/// or pressure (including NaN) is reported, never clamped.
#[inline]
pub fn cons_to_prim(u: &[f64; NVAR], gamma: f64) -> Result<Primitive> {
    let rho = u[RHO];
    if !(rho > 0.0) {
        return Err(MhdError::NonPositiveDensity { rho });
    }
    let vel = [u[MX] / rho, u[MY] / rho, u[MZ] / rho];
    let mag = [u[BX], u[BY], u[BZ]];
    let kinetic = 0.5 * (u[MX] * vel[0] + u[MY] * vel[1] + u[MZ] * vel[2]);
    let magnetic = 0.5 * dot3(&mag, &mag);
    let pres = (gamma - 1.0) * (u[ENER] - kinetic - magnetic);
    if !(pres > 0.0) {
        return Err(MhdError::NegativePressure { pres });
    }
    Ok(Primitive { rho, vel, pres, mag })
}

/// Like [`cons_to_prim`] but only requires `ρ > 0` and a finite pressure.
///
/// Used for flux evaluation at quadrature points, where an unlimited
/// high-order polynomial may dip below zero pressure while the cell average
/// stays admissible. Wave speeds of such states treat the pressure as zero.
pub fn cons_to_prim_pointwise(u: &[f64; NVAR], gamma: f64) -> Result<Primitive> {
    let rho = u[RHO];
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(MhdError::NonPositiveDensity { rho });
    }
    let vel = [u[MX] / rho, u[MY] / rho, u[MZ] / rho];
    let mag = [u[BX], u[BY], u[BZ]];
    let kinetic = 0.5 * (u[MX] * vel[0] + u[MY] * vel[1] + u[MZ] * vel[2]);
    let magnetic = 0.5 * dot3(&mag, &mag);
    let pres = (gamma - 1.0) * (u[ENER] - kinetic - magnetic);
    if !pres.is_finite() {
        return Err(MhdError::NegativePressure { pres });
    }
    Ok(Primitive { rho, vel, pres, mag })
}

pub fn prim_to_cons(w: &Primitive, gamma: f64) -> Result<[f64; NVAR]> {
    if !(w.rho > 0.0) {
        return Err(MhdError::NonPositiveDensity { rho: w.rho });
    }
    if !(w.pres > 0.0) {
        return Err(MhdError::NegativePressure { pres: w.pres });
    }
    let ener = w.pres / (gamma - 1.0)
        + 0.5 * w.rho * dot3(&w.vel, &w.vel)
        + 0.5 * dot3(&w.mag, &w.mag);
    Ok([
        w.rho,
        w.rho * w.vel[0],
        w.rho * w.vel[1],
        w.rho * w.vel[2],
        ener,
        w.mag[0],
        w.mag[1],
        w.mag[2],
    ])
}

/// Physical flux along a coordinate axis, given the primitive form of `u`.
#[inline]
pub fn flux_from_prim(u: &[f64; NVAR], w: &Primitive, axis: Axis) -> [f64; NVAR] {
    let a = axis.index();
    let un = w.vel[a];
    let bn = w.mag[a];
    let ptot = w.total_pressure();
    let ub = dot3(&w.vel, &w.mag);
    let mut f = [0.0; NVAR];
    f[RHO] = u[RHO] * un;
    for c in 0..3 {
        f[MX + c] = u[MX + c] * un - bn * w.mag[c];
    }
    f[MX + a] += ptot;
    f[ENER] = un * (u[ENER] + ptot) - bn * ub;
    for c in 0..3 {
        f[BX + c] = un * w.mag[c] - bn * w.vel[c];
    }
    f
}

/// Column of the flux tensor along `axis`.
pub fn flux(s: &State, gamma: f64, axis: Axis) -> Result<[f64; NVAR]> {
    let u = s.to_array();
    let w = cons_to_prim(&u, gamma)?;
    Ok(flux_from_prim(&u, &w, axis))
}

/// `F(u)·n` for an arbitrary unit normal.
pub fn normal_flux(s: &State, gamma: f64, normal: [f64; 2]) -> Result<[f64; NVAR]> {
    let u = s.to_array();
    let w = cons_to_prim(&u, gamma)?;
    let fx = flux_from_prim(&u, &w, Axis::X);
    let fy = flux_from_prim(&u, &w, Axis::Y);
    let mut f = [0.0; NVAR];
    for c in 0..NVAR {
        f[c] = normal[0] * fx[c] + normal[1] * fy[c];
    }
    Ok(f)
}

/// Fast magnetosonic speed along `normal` for a primitive state.
#[inline]
pub fn fast_speed(w: &Primitive, gamma: f64, normal: [f64; 2]) -> f64 {
    let a2 = gamma * w.pres.max(0.0) / w.rho;
    let b2 = dot3(&w.mag, &w.mag) / w.rho;
    let bn = w.mag[0] * normal[0] + w.mag[1] * normal[1];
    let bn2 = bn * bn / w.rho;
    let s = a2 + b2;
    // Round-off can push the discriminant slightly negative when B ∥ n and a = b.
    let disc = (s * s - 4.0 * a2 * bn2).max(0.0);
    (0.5 * (s + disc.sqrt())).sqrt()
}

#[inline]
pub fn max_wave_speed_prim(w: &Primitive, gamma: f64, normal: [f64; 2]) -> f64 {
    let un = w.vel[0] * normal[0] + w.vel[1] * normal[1];
    un.abs() + fast_speed(w, gamma, normal)
}

/// `|u·n| + c_f`, the largest characteristic speed along `normal`.
pub fn max_wave_speed(s: &State, gamma: f64, normal: [f64; 2]) -> Result<f64> {
    let w = s.to_primitive(gamma)?;
    Ok(max_wave_speed_prim(&w, gamma, normal))
}
