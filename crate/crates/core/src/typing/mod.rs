//! The typing relation: minimal types, linearity and canonical derivations.

pub mod appendix;
mod derivation;
mod infer;

use crate::ast::Type;
use thiserror::Error;

pub use derivation::{Context, Derivation, Rule, Subject};
pub use infer::{
    build, check_dist, check_type, derivable, infer, infer_closed, infer_type, meas_result, Usage,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypeError {
    #[error("variable `{name}` is linear but used {uses} times")]
    LinearityViolation { name: String, uses: usize },
    #[error("type mismatch at `{term}`: {detail}")]
    TypeMismatch { term: String, detail: String },
    #[error("arity error at `{term}`: {detail}")]
    ArityError { term: String, detail: String },
    #[error("`{ty}` is not a qubit type")]
    NotQubitType { ty: String },
    #[error("no common type for `{a}` and `{b}`")]
    NoJoin { a: String, b: String },
    #[error("`{term}` has minimal type `{min}`, not liftable to `{target}`")]
    NotLiftable { term: String, min: String, target: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

/// Least type reachable from both by prepending outer `S` layers.
pub fn join_types(a: &Type, b: &Type) -> Result<Type, TypeError> {
    a.join(b).ok_or_else(|| TypeError::NoJoin {
        a: a.to_string(),
        b: b.to_string(),
    })
}

/// Closed-term convenience: minimal type under the empty context.
pub fn type_of(t: &crate::ast::Term) -> Result<Type, TypeError> {
    infer_closed(&Context::new(), t)
}

#[cfg(test)]
mod tests;
