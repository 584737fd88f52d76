//! A concrete model: types as sets and spans of sets, derivations as
//! probabilistic functions between them.

mod equality;
mod eval;
mod measure;
mod value;

use crate::ast::DistError;
use crate::typing::TypeError;
use thiserror::Error;

pub use equality::{probes, sem_eq, sem_eq_dist};
#[cfg(test)]
pub(crate) use equality::sem_eq_untyped;
pub use eval::{apply, bind, denote, denote_dist, eval_derivation, pair_dists, SemDist};
pub use measure::{factorize, projector, sem_measure, sem_norm};
pub use value::{
    bilinear_pair, deep_scale, deep_sum, eta, interpret_type, mu, Closure, Combo, Env, FunBody,
    FunValue, SemDomain, SemValue,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemError {
    #[error("value outside its domain: {0}")]
    DomainMismatch(String),
    #[error("key {0} is not a combination")]
    KeyNotVec(String),
    #[error("sum or scaling at depth {0}")]
    DepthMismatch(usize),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Dist(#[from] DistError),
}
