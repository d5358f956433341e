//! Seeded random points for numerical evidence.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Uniform point on the sphere of the given radius in ℂⁿ.
pub fn sphere_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|c| c * (radius / norm)).collect();
        }
    }
}

pub fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}
