//! Seeded random sampling shared by the certification routines.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere in R^3.
pub fn unit_sphere(rng: &mut SeededRng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-8 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Complex Gaussian vector of length `n`.
pub fn complex_gaussian(rng: &mut SeededRng, n: usize) -> DVector<C64> {
    DVector::from_fn(n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn gaussian(rng: &mut SeededRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Random 3x3 rotation (Gram–Schmidt on Gaussian columns), rows returned.
pub fn rotation(rng: &mut SeededRng) -> [[f64; 3]; 3] {
    let a = unit_sphere(rng);
    let mut b = unit_sphere(rng);
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    for k in 0..3 {
        b[k] -= dot * a[k];
    }
    let nb = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    for v in b.iter_mut() {
        *v /= nb;
    }
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    [a, b, c]
}
