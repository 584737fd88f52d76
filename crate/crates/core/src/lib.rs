//! A first-order quantum lambda calculus with superposition types:
//! syntax, typing, a probabilistic rewrite engine and a denotational
//! evaluator over formal linear combinations.

pub mod ast;
pub mod syntax;
pub mod rewrite;
pub mod semantics;
pub mod typing;

pub use ast::{Dist, Scalar, Term, Type};
