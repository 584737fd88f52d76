//! Concrete syntax: lexer, parser, printer and source programs.

mod lexer;
mod parser;
mod printer;
mod program;

use thiserror::Error;

pub use parser::{parse_dist, parse_term, parse_type};
pub use printer::{fmt_prob, print_dist, print_term, sorted_entries};
pub use program::{parse_closed_term, parse_program, SourceProgram};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown identifier `{name}`")]
    UnknownIdentifier { name: String, line: usize, col: usize },
    #[error("{line}:{col}: arrow parameter `{ty}` is not a qubit type")]
    NonQubitParam { ty: String, line: usize, col: usize },
}
