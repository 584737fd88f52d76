//! Core syntax: scalars, types, terms and distributions.

mod dist;
mod scalar;
mod term;
mod types;

pub use dist::{Dist, DistError, DROP_TOL, MASS_TOL};
pub use scalar::{fmt_real, Scalar, TOL};
pub use term::Term;
pub use types::{Classification, Type};
