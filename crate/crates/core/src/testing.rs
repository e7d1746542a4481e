//! Random admissible fields for property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{BasisSpec, MAX_BASIS};
use crate::field::{ModalField, Scheme};
use crate::mesh::{Boundary, Mesh};
use crate::physics::{prim_to_cons, Primitive, NVAR};

pub const GAMMA: f64 = 5.0 / 3.0;

pub fn random_state(rng: &mut ChaCha8Rng) -> [f64; NVAR] {
    let w = Primitive {
        rho: rng.gen_range(0.5..4.0),
        vel: [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0)],
        pres: rng.gen_range(0.5..4.0),
        mag: [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0)],
    };
    prim_to_cons(&w, GAMMA).unwrap()
}

/// A `nx × ny` field with random admissible cell averages and higher modes
/// of relative size `amp`; small `amp` keeps every quadrature point admissible.
pub fn random_field(seed: u64, nx: usize, ny: usize, bc: Boundary, amp: f64) -> (Scheme, ModalField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mesh = Mesh::new(
        (0.0, rng.gen_range(0.5..3.0)),
        (0.0, rng.gen_range(0.5..3.0)),
        nx,
        ny,
        bc,
        bc,
    )
    .unwrap();
    let scheme = Scheme::new(mesh, BasisSpec::new(2).unwrap(), GAMMA);
    let mut f = scheme.zero_field();
    for c in &mut f.coeffs {
        c[0] = random_state(&mut rng);
        for b in 1..MAX_BASIS {
            for v in 0..NVAR {
                c[b][v] = amp * c[0][v].abs().max(0.1) * rng.gen_range(-1.0..1.0);
            }
        }
    }
    (scheme, f)
}
