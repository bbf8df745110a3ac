//! Shared fixtures for the criterion benches. Sizes are chosen so a full
//! bench run finishes in minutes; scale `n` or the grid side up locally when
//! hunting regressions in asymptotic behavior.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flatspot::{GridKnots2D, Knots1D, Mode, PointSet, StationarySpec};

/// Strictly increasing knots with unit-order gaps, plus matching values.
pub fn knots_1d(n: usize, seed: u64) -> Knots1D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::with_capacity(n);
    let mut t = rng.random_range(-1.0..1.0);
    for _ in 0..n {
        x.push(t);
        t += rng.random_range(0.3..1.0);
    }
    let z = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    Knots1D::new(x, z).expect("increasing by construction")
}

/// Square grid of knots with unit-order spacing and random heights.
pub fn grid_2d(side: usize, seed: u64) -> GridKnots2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut axis = |start: f64| {
        let mut v = Vec::with_capacity(side);
        let mut t = start;
        for _ in 0..side {
            v.push(t);
            t += rng.random_range(0.3..1.0);
        }
        v
    };
    let x = axis(0.0);
    let y = axis(0.0);
    let z = (0..side)
        .map(|_| (0..side).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    GridKnots2D::new(x, y, z).expect("increasing by construction")
}

/// Scattered interpolation spec over the unit square.
pub fn scatter_spec(n: usize, seed: u64) -> StationarySpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<[f64; 2]> = Vec::with_capacity(n);
    while points.len() < n {
        let p = [rng.random_range(0.1..0.9), rng.random_range(0.1..0.9)];
        if points
            .iter()
            .all(|q| (q[0] - p[0]).hypot(q[1] - p[1]) > 0.05)
        {
            points.push(p);
        }
    }
    let values = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    StationarySpec::new(Mode::B, PointSet::D2(points), Some(values), None).expect("valid scatter")
}

/// Interpolation spec matching a 1D knot set.
pub fn curve_spec(knots: &Knots1D) -> StationarySpec {
    StationarySpec::new(
        Mode::B,
        PointSet::D1(knots.x.clone()),
        Some(knots.z.clone()),
        None,
    )
    .expect("knots are already validated")
}
