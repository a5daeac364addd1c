//! Seeded sampling of evaluation points and randomized smooth fields.
//!
//! All randomness flows through [`SampleRng`], a ChaCha8 stream seeded from a
//! single `u64`, so any run is reproducible bit for bit from its seed.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffgeo::{Point, ScalarField};
use crate::profile::Interval;

/// Deterministic sampler backed by the ChaCha8 generator.
pub struct SampleRng {
    rng: ChaCha8Rng,
}

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        self.rng.random_range(lo..hi)
    }

    pub fn box_point(&mut self, dim: usize, half: f64) -> Point {
        Point::new((0..dim).map(|_| self.uniform(-half, half)).collect())
    }
}

/// Draws `count` values of `xi` from the interval's sampling window
/// (length `window_len`, fractional boundary margin `margin_frac`).
pub fn sample_xi(
    domain: &Interval,
    count: usize,
    window_len: f64,
    margin_frac: f64,
    rng: &mut SampleRng,
) -> Vec<f64> {
    let (lo, hi) = domain.sampling_window(window_len, margin_frac);
    (0..count).map(|_| rng.uniform(lo, hi)).collect()
}

/// A random point of the box `[-half, half]^n` shifted along the pivot
/// coordinate so that `sum alpha_i x_i` equals `xi` exactly up to rounding.
pub fn point_with_xi(alpha: &[f64], xi: f64, half: f64, rng: &mut SampleRng) -> Point {
    let n = alpha.len();
    let mut coords: Vec<f64> = (0..n).map(|_| rng.uniform(-half, half)).collect();
    let pivot = (0..n)
        .max_by(|&a, &b| alpha[a].abs().partial_cmp(&alpha[b].abs()).unwrap())
        .unwrap();
    let current: f64 = alpha.iter().zip(&coords).map(|(a, x)| a * x).sum();
    coords[pivot] += (xi - current) / alpha[pivot];
    Point::new(coords)
}

/// Random quadratic polynomial field kept above `floor` on `[-1, 1]^dim` by
/// construction: a comfortably positive constant term with small linear and
/// quadratic coefficients.
pub fn random_positive_quadratic(dim: usize, floor: f64, rng: &mut SampleRng) -> ScalarField {
    let c0 = rng.uniform(floor + 1.1, floor + 1.8);
    let lin = DVector::from_iterator(dim, (0..dim).map(|_| rng.uniform(-0.1, 0.1)));
    let scale = 0.3 / (dim * dim) as f64;
    let mut quad = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = rng.uniform(-scale, scale);
            quad[(i, j)] = v;
            quad[(j, i)] = v;
        }
    }
    ScalarField::quadratic(c0, lin, quad)
}
