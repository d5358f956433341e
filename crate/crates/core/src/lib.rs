//! Exact computation with vector-valued polynomial and rational maps between
//! complex Euclidean spaces: squared norms as hermitian polynomials, sphere
//! reductions, fold profiles (which zero-centric spheres go to zero-centric
//! spheres), the extremal k-fold families, and the unitary normal form of
//! maps that take every zero-centric sphere to one.

pub mod cli;
pub mod error;
pub mod exactcore;
pub mod factory;
pub mod foldanalysis;
pub mod hermitian;
pub mod json;
pub mod normalform;
pub mod sampling;
pub mod verify;
pub mod univariate;

pub use error::{Error, Result};
