//! One-sided reducedness test for p/q via random line restrictions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactcore::{rat, CplxRat, RationalMap};
use crate::univariate::GaussPoly;

const LINES: usize = 3;

fn random_cplx(rng: &mut ChaCha8Rng) -> CplxRat {
    CplxRat::new(
        rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
        rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
    )
}

/// False when p and q share a nonconstant factor on every sampled line.
/// A true result is evidence, not proof.
pub fn probably_reduced(f: &RationalMap, seed: u64) -> bool {
    if f.denominator().is_constant() {
        return true;
    }
    let n = f.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..LINES {
        let base: Vec<CplxRat> = (0..n).map(|_| random_cplx(&mut rng)).collect();
        let dir: Vec<CplxRat> = (0..n).map(|_| random_cplx(&mut rng)).collect();
        let mut g = GaussPoly::new(f.denominator().restrict_to_line(&base, &dir));
        for p in f.numerator().polys() {
            if g.degree().unwrap_or(0) == 0 {
                break;
            }
            g = g.gcd(&GaussPoly::new(p.restrict_to_line(&base, &dir)));
        }
        if g.degree().unwrap_or(0) == 0 {
            return true;
        }
    }
    false
}
