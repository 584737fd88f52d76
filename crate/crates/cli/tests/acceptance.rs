//! Acceptance criteria 1 to 12. Every criterion is evaluated and printed as
//! one PASS/FAIL line; the test fails if any criterion fails.
//!
//! Run with `cargo test --release -p lams-cli --test acceptance -- --nocapture`.

use lams_cli::run_args;
use lams_core::ast::{Dist, Scalar, Term};
use lams_core::rewrite::normalize;
use lams_core::semantics::{apply, denote, interpret_type, SemValue};
use lams_core::syntax::{parse_term, parse_type};
use lams_core::typing::type_of;
use lams_harness::suites::{LARGE_SIZE, SMALL_SIZE, SOUNDNESS_TOL, STRATEGIES, STRICT_TOL};
use lams_harness::{run_property_suite, Report, Suite};
use serde_json::Value;
use std::f64::consts::FRAC_1_SQRT_2 as H2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

const SEED: u64 = 1;
const FUEL: usize = 100_000;
const TOL: f64 = 1e-9;
const H: &str = r"(\x:B. if x then |-> else |+>)";

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(ok: bool, detail: impl Into<String>) -> Verdict {
    if ok {
        Ok(detail.into())
    } else {
        Err(detail.into())
    }
}

fn t(s: &str) -> Term {
    parse_term(s).unwrap()
}

fn nf(s: &str) -> Dist<Term> {
    normalize(&t(s), FUEL).unwrap()
}

/// Normal form of `src` against the normalized expected term.
fn reduces_to(src: &str, want: &str) -> bool {
    nf(src).term_eq(&nf(want), TOL)
}

fn cli_json(args: &[&str]) -> Value {
    let mut full = vec!["lams"];
    full.extend_from_slice(args);
    full.push("--json");
    let out = run_args(full);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn rules_of(src: &str) -> Vec<String> {
    cli_json(&["trace", "-e", src])["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["rule"].as_str().unwrap().to_string())
        .collect()
}

fn vec_close(v: &SemValue, want: &[(SemValue, Scalar)]) -> bool {
    let Ok(c) = v.as_vec() else { return false };
    c.terms().len() == want.len()
        && want
            .iter()
            .all(|(k, s)| c.terms().iter().any(|(k2, s2)| k2 == k && s2.approx_eq(*s, TOL)))
}

fn suite_line(r: &Report) -> String {
    let mut s = format!(
        "{} trials, {} skipped, {} failures, {} ms",
        r.trials,
        r.skipped,
        r.failures.len(),
        r.elapsed_ms
    );
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("; first: {} on {}", f.detail, f.shrunk.as_deref().unwrap_or(&f.term)));
    }
    s
}

fn criterion_1() -> Verdict {
    let src = r"(\x:B. x*x) ((1/sqrt(2)).(|0>+|1>))";
    let run = cli_json(&["run", "-e", src]);
    let steps = run["steps"].as_u64().unwrap();
    let exact = reduces_to(src, "(1/sqrt(2)).(|00> + |11>)");
    let ty = cli_json(&["check", "-e", src])["type"].as_str().unwrap().to_string();
    let typed = parse_type(&ty).unwrap() == parse_type("S(B * B)").unwrap();
    check(exact && steps <= 10 && typed, format!("{steps} steps, type {ty}"))
}

fn criterion_2() -> Verdict {
    let src = "(if? |0> |1>) (0.6.|1> + 0.8.|0>)";
    let value = reduces_to(src, "0.6.|0> + 0.8.|1>");
    let rules = rules_of(src);
    let count = |r: &str| rules.iter().filter(|x| *x == r).count();
    let shape = count("lin_r") == 1 && count("lin_r^α") == 2 && count("if₁") == 1 && count("if₀") == 1;
    check(value && shape, rules.join(", "))
}

fn criterion_3() -> Verdict {
    let plus = reduces_to(&format!("{H} |0>"), "|+>");
    let minus = reduces_to(&format!("{H} |1>"), "|->");
    let ty = parse_type("B => S(B)").unwrap();
    let d = denote(&t(H), &ty).unwrap();
    let f = d.as_single().unwrap().clone();
    let in_domain = interpret_type(&ty).contains(&f);
    let at = |b: bool| apply(&f, SemValue::Basis(b)).unwrap().as_single().unwrap().clone();
    let (z, o) = (SemValue::Basis(false), SemValue::Basis(true));
    let tab0 = vec_close(&at(false), &[(z.clone(), Scalar::real(H2)), (o.clone(), Scalar::real(H2))]);
    let tab1 = vec_close(&at(true), &[(z, Scalar::real(H2)), (o, Scalar::real(-H2))]);
    check(
        plus && minus && in_domain && tab0 && tab1,
        format!("H|0>: {plus}, H|1>: {minus}, domain: {in_domain}, table: {tab0}/{tab1}"),
    )
}

fn criterion_4() -> Verdict {
    let operand = "((1/sqrt(2)).(|0>+|1>)) * |0>";
    let src = format!("castR {operand}");
    let input = type_of(&t(operand)).unwrap();
    let output = type_of(&t(&src)).unwrap();
    let typed = input == parse_type("S(B) * B").unwrap() && output == parse_type("S(B * B)").unwrap();
    let value = reduces_to(&src, "(1/sqrt(2)).(|00> + |10>)");
    check(typed && value, format!("{input} to {output}"))
}

fn criterion_5() -> Verdict {
    let src = "2.((1/2).|0> + |1>) - 2.|1>";
    let rules = rules_of(src);
    let want = ["dist^α", "prod", "unit", "fact", "zero_α", "neut"];
    check(reduces_to(src, "|0>") && rules == want, rules.join(", "))
}

fn criterion_6() -> Verdict {
    let src = "meas 2 (|000>+2.|110>+3.|001>+|111>)";
    let got = nf(src);
    let want = Dist::normalize(vec![
        (2.0 / 3.0, t("|00> * ((1/sqrt(10)).|0> + (3/sqrt(10)).|1>)").canonicalize()),
        (1.0 / 3.0, t("|11> * ((2/sqrt(5)).|0> + (1/sqrt(5)).|1>)").canonicalize()),
    ])
    .unwrap();
    let dist = cli_json(&["run", "-e", src])["distribution"].clone();
    let probs: Vec<f64> = dist.as_array().unwrap().iter().map(|e| e["probability"].as_f64().unwrap()).collect();
    check(got.term_eq(&want, TOL), format!("probabilities {probs:?}"))
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let r = run_property_suite(Suite::Soundness, 1000, SEED);
    let fast = start.elapsed() <= Duration::from_secs(300);
    check(r.passed() && fast, format!("size <= {SMALL_SIZE}, tol {SOUNDNESS_TOL}: {}", suite_line(&r)))
}

fn criterion_8() -> Verdict {
    let sr = run_property_suite(Suite::SubjectReduction, 1000, SEED);
    let pr = run_property_suite(Suite::Progress, 1000, SEED);
    check(
        sr.passed() && pr.passed(),
        format!("subject reduction: {}; progress: {}", suite_line(&sr), suite_line(&pr)),
    )
}

fn criterion_9() -> Verdict {
    let r = run_property_suite(Suite::Normalization, 1000, SEED);
    check(r.passed(), format!("size <= {LARGE_SIZE}, fuel {FUEL}: {}", suite_line(&r)))
}

fn criterion_10() -> Verdict {
    let r = run_property_suite(Suite::Confluence, 500, SEED);
    check(
        r.passed() && r.skipped == 0,
        format!("{STRATEGIES} strategies: {}", suite_line(&r)),
    )
}

fn criterion_11() -> Verdict {
    let r = run_property_suite(Suite::DerivationIndependence, 20, SEED);
    check(
        r.passed() && r.skipped == 0 && r.trials == 80,
        format!("tol {STRICT_TOL}: {}", suite_line(&r)),
    )
}

fn criterion_12() -> Verdict {
    let r = run_property_suite(Suite::Oracle, 500, SEED);
    check(r.passed() && r.skipped == 0, format!("tol {STRICT_TOL}: {}", suite_line(&r)))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("cloning example", criterion_1),
        ("quantum if", criterion_2),
        ("hadamard", criterion_3),
        ("cast example", criterion_4),
        ("vector axiom chain", criterion_5),
        ("measurement", criterion_6),
        ("soundness suite", criterion_7),
        ("subject reduction and progress", criterion_8),
        ("normalization bound", criterion_9),
        ("confluence sampling", criterion_10),
        ("derivation independence", criterion_11),
        ("oracle agreement", criterion_12),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d}", i + 1),
            Err(d) => {
                println!("criterion {:>2} FAIL  {name}: {d}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
