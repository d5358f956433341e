//! Exact arithmetic, multi-indices, scalar polynomials and the three map
//! representations with tensor, direct-sum and rescaling algebra.

mod holo;
mod maps;
mod multi_index;
mod rational;

pub use holo::HoloPoly;
pub(crate) use holo::monomial_f64;
pub use maps::{
    eval_norm_sq, identity_tensor_power, map_direct_sum, map_tensor, rescale, AnyMap, Numerator,
    PolyMap, RationalMap, WeightedEntry, WeightedMap, WeightedView, POLE_TOLERANCE,
};
pub use multi_index::MultiIndex;
pub use rational::{
    format_rational, parse_rational, rat, rat_int, rat_to_f64, rational_sqrt, CplxRat,
};
