//! Divided differences, Newton expansions and fold profiles.

mod divided;
mod newton;
mod profile;
mod reduced;
mod roots;

pub use divided::{divided_differences, DividedDifferences, FoldData};
pub use newton::{newton_expand_poly, newton_expand_rational, NewtonExpansion};
pub use profile::{detect_infty_fold, fold_profile, infty_coefficients, FoldEntry, FoldProfile, InftyFold};
pub use reduced::probably_reduced;
pub use roots::{isolate_real_roots, refine_interval, RootValue};

use num_rational::BigRational;

use crate::error::Result;
use crate::exactcore::RationalMap;
use crate::hermitian::{squared_norm, HermPoly};

/// Remainder of ‖p‖² − T|q|² modulo ‖z‖² − t; zero exactly when f maps the
/// sphere of squared radius t into the sphere of squared radius T.
pub fn sphere_map_remainder(f: &RationalMap, t: &BigRational, big_t: &BigRational) -> Result<HermPoly> {
    let diff = squared_norm(f.numerator()).sub(&squared_norm(f.denominator()).scale(big_t));
    Ok(diff.reduce_mod_sphere(t)?.remainder)
}
