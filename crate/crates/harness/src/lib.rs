//! Oracles, generators and property suites for the calculus.

pub mod corpus;
pub mod generator;
pub mod opequiv;
pub mod report;
pub mod shrink;
pub mod statevector;
pub mod suites;

use lams_core::rewrite::RewriteError;
use lams_core::semantics::SemError;
use lams_core::syntax::ParseError;
use lams_core::typing::TypeError;
use thiserror::Error;

pub use generator::{gen_at, gen_fragment, gen_typed_term};
pub use opequiv::op_equiv;
pub use report::{Failure, Report};
pub use statevector::Statevector;
pub use suites::{run_property_suite, Suite};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("{term} is outside the oracle fragment: {detail}")]
    OutOfFragment { term: String, detail: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Sem(#[from] SemError),
}
