//! Deterministic helpers shared by the unit tests.  The generator is a
//! splitmix64 advanced in place through a `&mut u64` seed, so tests stay
//! reproducible without pulling a test-only RNG dependency.

use crate::lattice::FlaschkaState;
use crate::matrix::DenseSquare;

pub fn assert_close(a: f64, b: f64, tol: f64) {
    assert!(
        (a - b).abs() <= tol,
        "expected |{a} - {b}| = {} <= {tol}",
        (a - b).abs()
    );
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Uniform draw in [0, 1).
pub fn rand_uniform(rng: &mut u64) -> f64 {
    (splitmix64(rng) >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Dense matrix with entries uniform in [-1, 1).
pub fn rand_matrix(n: usize, rng: &mut u64) -> DenseSquare {
    DenseSquare::from_vec(
        n,
        (0..n * n).map(|_| rand_uniform(rng) * 2.0 - 1.0).collect(),
    )
}

/// Flaschka state with `a` uniform in [-1, 1) and `b` uniform in [0.2, 1.2).
pub fn rand_flaschka(n: usize, rng: &mut u64) -> FlaschkaState {
    let a = (0..n).map(|_| rand_uniform(rng) * 2.0 - 1.0).collect();
    let b = (0..n - 1).map(|_| rand_uniform(rng) + 0.2).collect();
    FlaschkaState::new(a, b).unwrap()
}
