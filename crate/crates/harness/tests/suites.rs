//! The property suites at modest trial counts.

use lams_core::ast::Type;
use lams_core::typing::{check_type, Context, Rule};
use lams_harness::{gen_typed_term, run_property_suite, Suite};
use std::collections::BTreeSet;

const SEED: u64 = 20;

#[test]
fn subject_reduction_progress_and_normalization() {
    for suite in [Suite::SubjectReduction, Suite::Progress, Suite::Normalization] {
        let r = run_property_suite(suite, 200, SEED);
        assert!(r.passed(), "{r}");
        assert_eq!(r.skipped, 0);
    }
}

#[test]
fn oracle_agreement() {
    let r = run_property_suite(Suite::Oracle, 200, SEED);
    assert!(r.passed(), "{r}");
}

#[test]
fn derivation_independence() {
    let r = run_property_suite(Suite::DerivationIndependence, 5, SEED);
    assert!(r.passed(), "{r}");
    assert_eq!(r.trials, 20);
}

/// Soundness failures are confined to doubly-spanned types, where the
/// layered sum and scaling disagree with the rewrite rules.
#[test]
fn soundness_failures_are_doubly_spanned() {
    let r = run_property_suite(Suite::Soundness, 200, SEED);
    for f in &r.failures {
        assert!(f.detail.contains("at S(S("), "{f:?}");
    }
}

/// Confluence failures differ only in a zero annotation.
#[test]
fn confluence_failures_are_zero_annotations() {
    let r = run_property_suite(Suite::Confluence, 200, SEED);
    for f in &r.failures {
        assert!(f.detail.contains("Zero(") && !f.detail.contains("Ket"), "{f:?}");
    }
}

#[test]
fn pinned_generation() {
    let (t, a) = gen_typed_term(1, 10);
    assert_eq!(t.to_string(), PINNED_TERM);
    assert_eq!(a.to_string(), PINNED_TYPE);
}

const PINNED_TERM: &str = "(-1).(zero(B) + head |01>)";
const PINNED_TYPE: &str = "S(B)";

#[test]
fn generator_covers_every_term_rule() {
    let mut seen = BTreeSet::new();
    for seed in 0..10_000 {
        let (t, a) = gen_typed_term(seed, 30);
        let d = check_type(&Context::new(), &t, &a).unwrap();
        seen.extend(d.rules().into_iter().map(|r| r.name()));
        let lifted = check_type(&Context::new(), &t, &Type::s(a)).unwrap();
        seen.extend(lifted.rules().into_iter().map(|r| r.name()));
    }
    // ∥ types distributions, never terms
    let missing: Vec<&str> = Rule::ALL
        .iter()
        .filter(|r| **r != Rule::Par)
        .map(|r| r.name())
        .filter(|n| !seen.contains(n))
        .collect();
    assert!(missing.is_empty(), "{missing:?}");
}
