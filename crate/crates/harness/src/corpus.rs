//! The worked examples, as `.lams` sources.

use lams_core::ast::Term;
use lams_core::syntax::{parse_program, ParseError};

pub const SOURCES: [(&str, &str); 10] = [
    ("ancilla", include_str!("../../../corpus/ancilla.lams")),
    ("quantum_if", include_str!("../../../corpus/quantum_if.lams")),
    ("hadamard0", include_str!("../../../corpus/hadamard0.lams")),
    ("hadamard1", include_str!("../../../corpus/hadamard1.lams")),
    ("cast", include_str!("../../../corpus/cast.lams")),
    ("vector_axioms", include_str!("../../../corpus/vector_axioms.lams")),
    ("measure", include_str!("../../../corpus/measure.lams")),
    ("measure_zero", include_str!("../../../corpus/measure_zero.lams")),
    ("bell_measure", include_str!("../../../corpus/bell_measure.lams")),
    ("not_then_hadamard", include_str!("../../../corpus/not_then_hadamard.lams")),
];

/// Every corpus entry's main term.
pub fn corpus() -> Result<Vec<(&'static str, Term)>, ParseError> {
    SOURCES
        .iter()
        .map(|(name, src)| {
            let p = parse_program(src)?;
            Ok((*name, p.main.expect("corpus files define main")))
        })
        .collect()
}
