//! Property suites over generated terms and the example corpus.

use crate::corpus::corpus;
use crate::generator::{gen_fragment, gen_typed_term};
use crate::report::{Failure, Report};
use crate::shrink::shrink;
use crate::statevector::{self, Statevector};
use crate::HarnessError;
use lams_core::ast::{Dist, Term, Type};
use lams_core::rewrite::{Redex, RewriteError, Rewriter};
use lams_core::semantics::{denote, denote_dist, eval_derivation, sem_eq_dist, Env, SemDist};
use lams_core::typing::{appendix, check_dist, check_type, type_of, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub const FUEL: usize = 100_000;
pub const SOUNDNESS_TOL: f64 = 1e-6;
pub const STRICT_TOL: f64 = 1e-9;
pub const SMALL_SIZE: usize = 30;
pub const LARGE_SIZE: usize = 40;
pub const STRATEGIES: u64 = 5;
/// Seeds tried per requested sample when searching for a term of a shape.
const SEARCH_FACTOR: u64 = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Soundness,
    SubjectReduction,
    Progress,
    Normalization,
    Confluence,
    DerivationIndependence,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Soundness,
        Suite::SubjectReduction,
        Suite::Progress,
        Suite::Normalization,
        Suite::Confluence,
        Suite::DerivationIndependence,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Soundness => "soundness",
            Suite::SubjectReduction => "subject-reduction",
            Suite::Progress => "progress",
            Suite::Normalization => "normalization",
            Suite::Confluence => "confluence",
            Suite::DerivationIndependence => "derivation-independence",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        Suite::ALL
            .into_iter()
            .find(|x| x.name().replace('-', "") == key || (key == "confluencesample" && *x == Suite::Confluence))
            .ok_or_else(|| HarnessError::UnknownSuite(s.into()))
    }
}

/// Outcome of one trial: `Ok(None)` passes, `Ok(Some(detail))` fails.
type Check = Result<Option<String>, HarnessError>;

fn fail(detail: impl Into<String>) -> Check {
    Ok(Some(detail.into()))
}

/// Every step of the deterministic reduction of `t`.
fn steps_of(t: &Term) -> Result<Vec<Dist<Term>>, RewriteError> {
    let mut out = Vec::new();
    Rewriter::new().run(t, FUEL, None, |s| out.push(s.dist))?;
    Ok(out)
}

pub fn check_soundness(t: &Term) -> Check {
    let a = type_of(t)?;
    let before = denote(t, &a)?;
    for (i, d) in steps_of(t)?.iter().enumerate() {
        let after = denote_dist(d, &a)?;
        if !sem_eq_dist(&before, &after, &a, SOUNDNESS_TOL) {
            return fail(format!("step {} changes the denotation at {a}: {d:?}", i + 1));
        }
    }
    Ok(None)
}

pub fn check_subject_reduction(t: &Term) -> Check {
    let a = type_of(t)?;
    for (i, d) in steps_of(t)?.iter().enumerate() {
        if let Err(e) = check_dist(&Context::new(), d, &a) {
            return fail(format!("step {} does not type at {a}: {e}", i + 1));
        }
    }
    Ok(None)
}

pub fn check_progress(t: &Term) -> Check {
    let nf = Rewriter::new().normalize(t, FUEL)?;
    let stuck = nf.iter().find(|(_, u)| !u.is_value()).map(|(_, u)| u.to_string());
    match stuck {
        Some(u) => fail(format!("normal form {u} is not a value")),
        None => Ok(None),
    }
}

pub fn check_normalization(t: &Term) -> Check {
    match Rewriter::new().run(t, FUEL, None, |_| {}) {
        Ok(_) => Ok(None),
        Err(RewriteError::FuelExhausted { steps, .. }) => fail(format!("no normal form after {steps} steps")),
        Err(e) => Err(e.into()),
    }
}

/// Normal forms under the fixed strategy and `STRATEGIES` random ones.
pub fn check_confluence(t: &Term, seed: u64) -> Check {
    let rw = Rewriter::new();
    let reference = rw.normalize(t, FUEL)?;
    for s in 0..STRATEGIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(s));
        let mut choose = |rs: &[Redex]| rng.gen_range(0..rs.len());
        let (nf, _) = rw.run(t, FUEL, Some(&mut choose), |_| {})?;
        if !nf.term_eq(&reference, STRICT_TOL) {
            return fail(format!("strategy {s} reaches {nf:?}, the fixed strategy {reference:?}"));
        }
    }
    Ok(None)
}

/// Distribution over full post-measurement states (or the single state).
fn as_states(items: Vec<(f64, Option<Statevector>)>) -> Option<Vec<(f64, Statevector)>> {
    items.into_iter().map(|(p, v)| v.map(|v| (p, v))).collect()
}

/// Total variation distance after matching outcomes by their amplitudes.
fn states_agree(a: &[(f64, Statevector)], b: &[(f64, Statevector)], tol: f64) -> bool {
    let mass = |d: &[(f64, Statevector)], v: &Statevector| -> f64 {
        d.iter().filter(|(_, w)| w.approx_eq(v, tol)).map(|(p, _)| p).sum()
    };
    let tv: f64 = a
        .iter()
        .chain(b)
        .map(|(_, v)| (mass(a, v) - mass(b, v)).abs())
        .fold(0.0, f64::max);
    tv <= tol
}

pub fn check_oracle(t: &Term) -> Check {
    let a = type_of(t)?;
    let n = statevector::width(&a).ok_or_else(|| HarnessError::OutOfFragment {
        term: t.to_string(),
        detail: format!("type {a} is not a qubit type"),
    })?;
    let oracle: Vec<(f64, Statevector)> = match t {
        Term::Meas(j, s) => statevector::eval(s)?.measure(*j),
        _ => vec![(1.0, statevector::eval(t)?)],
    };
    let nf = Rewriter::new().normalize(t, FUEL)?;
    let rewritten = as_states(nf.iter().map(|(p, u)| (*p, statevector::eval(u).ok())).collect());
    let sem: SemDist = denote(t, &a)?;
    let denoted = as_states(sem.iter().map(|(p, v)| (*p, Statevector::from_sem(v, n))).collect());
    let (Some(rewritten), Some(denoted)) = (rewritten, denoted) else {
        return fail("an outcome has no amplitude reading");
    };
    if !states_agree(&oracle, &rewritten, STRICT_TOL) {
        return fail(format!("rewriter {rewritten:?} vs statevector {oracle:?}"));
    }
    if !states_agree(&oracle, &denoted, STRICT_TOL) {
        return fail(format!("denotation {denoted:?} vs statevector {oracle:?}"));
    }
    Ok(None)
}

/// Both derivations of one conversion instance evaluate equally.
pub fn check_independence(d: &lams_core::typing::Derivation) -> Check {
    let Some((which, e)) = appendix::expand(d) else {
        return fail("no conversion applies");
    };
    let x = eval_derivation(d, &Env::new())?;
    let y = eval_derivation(&e, &Env::new())?;
    if sem_eq_dist(&x, &y, &d.ty, STRICT_TOL) {
        Ok(None)
    } else {
        fail(format!("conversion {which} changes the value at {}: {x:?} vs {y:?}", d.ty))
    }
}

/// A lifted derivation whose root is an instance of conversion `which`,
/// built from the term (or, for conversion 4, a reduct distribution) of
/// `seed`.
fn independence_instance(which: u8, seed: u64) -> Option<(String, lams_core::typing::Derivation)> {
    let (t, a) = gen_typed_term(seed, SMALL_SIZE);
    let lifted = Type::s(a.clone());
    if which == 4 {
        if !t.contains_meas() {
            return None;
        }
        let d = steps_of(&t).ok()?.into_iter().find(|d| d.len() >= 2)?;
        let der = check_dist(&Context::new(), &d, &lifted).ok()?;
        return (appendix::expand(&der)?.0 == 4).then(|| (format!("{d:?}"), der));
    }
    let der = check_type(&Context::new(), &t, &lifted).ok()?;
    (appendix::expand(&der)?.0 == which).then(|| (t.to_string(), der))
}

fn to_failure(trial: String, seed: u64, t: &Term, detail: String, shrunk: Option<Term>) -> Failure {
    Failure {
        trial,
        seed,
        term: t.to_string(),
        shrunk: shrunk.filter(|s| s != t).map(|s| s.to_string()),
        detail,
    }
}

fn check_for(suite: Suite, t: &Term, seed: u64) -> Check {
    match suite {
        Suite::Soundness => check_soundness(t),
        Suite::SubjectReduction => check_subject_reduction(t),
        Suite::Progress => check_progress(t),
        Suite::Normalization => check_normalization(t),
        Suite::Confluence => check_confluence(t, seed),
        Suite::Oracle => check_oracle(t),
        Suite::DerivationIndependence => unreachable!("handled separately"),
    }
}

fn failed(suite: Suite, t: &Term, seed: u64) -> bool {
    !matches!(check_for(suite, t, seed), Ok(None))
}

/// A generated trial input, or `None` when the suite skips this seed.
fn input(suite: Suite, seed: u64) -> Option<Term> {
    match suite {
        Suite::Normalization => Some(gen_typed_term(seed, LARGE_SIZE).0),
        Suite::Confluence => (0..SEARCH_FACTOR)
            .map(|k| gen_typed_term(seed.wrapping_mul(SEARCH_FACTOR).wrapping_add(k), SMALL_SIZE).0)
            .find(|t| !t.contains_meas()),
        Suite::Oracle => Some(gen_fragment(seed)),
        _ => Some(gen_typed_term(seed, SMALL_SIZE).0),
    }
}

fn run_trial(suite: Suite, trial: String, seed: u64, t: &Term) -> Option<Failure> {
    match check_for(suite, t, seed) {
        Ok(None) => None,
        Ok(Some(detail)) => {
            let small = shrink(t, |c| failed(suite, c, seed));
            Some(to_failure(trial, seed, t, detail, Some(small)))
        }
        Err(e) => {
            let small = shrink(t, |c| failed(suite, c, seed));
            Some(to_failure(trial, seed, t, format!("error: {e}"), Some(small)))
        }
    }
}

/// Runs a suite over `trials` generated inputs (seeds `seed..seed+trials`)
/// and, for the term-based suites, over the corpus. For derivation
/// independence `trials` is the number of instances per conversion.
pub fn run_property_suite(suite: Suite, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut skipped = 0;
    let mut count = trials;
    if suite == Suite::DerivationIndependence {
        count = 0;
        for which in 1..=4u8 {
            let found: Vec<(u64, String, lams_core::typing::Derivation)> = (0..trials as u64 * SEARCH_FACTOR)
                .into_par_iter()
                .filter_map(|k| {
                    let s = seed.wrapping_add(k);
                    independence_instance(which, s).map(|(txt, d)| (s, txt, d))
                })
                .collect::<Vec<_>>()
                .into_iter()
                .take(trials)
                .collect();
            skipped += trials - found.len();
            count += found.len();
            for (s, txt, d) in found {
                match check_independence(&d) {
                    Ok(None) => {}
                    Ok(Some(detail)) => failures.push(Failure {
                        trial: format!("conversion {which}"),
                        seed: s,
                        term: txt,
                        shrunk: None,
                        detail,
                    }),
                    Err(e) => failures.push(Failure {
                        trial: format!("conversion {which}"),
                        seed: s,
                        term: txt,
                        shrunk: None,
                        detail: format!("error: {e}"),
                    }),
                }
            }
        }
    } else {
        if !matches!(suite, Suite::Confluence | Suite::Oracle) {
            for (name, t) in corpus().expect("corpus parses") {
                if let Some(f) = run_trial(suite, name.to_string(), seed, &t) {
                    failures.push(f);
                }
            }
        }
        let results: Vec<Result<Option<Failure>, ()>> = (0..trials as u64)
            .into_par_iter()
            .map(|i| {
                let s = seed.wrapping_add(i);
                match input(suite, s) {
                    None => Err(()),
                    Some(t) => Ok(run_trial(suite, i.to_string(), s, &t)),
                }
            })
            .collect();
        for r in results {
            match r {
                Err(()) => skipped += 1,
                Ok(Some(f)) => failures.push(f),
                Ok(None) => {}
            }
        }
    }
    Report {
        suite: suite.name().into(),
        seed,
        trials: count,
        skipped,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lams_core::syntax::parse_term;

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("subjectReduction".parse::<Suite>().unwrap(), Suite::SubjectReduction);
        assert_eq!("confluenceSample".parse::<Suite>().unwrap(), Suite::Confluence);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn corpus_terms_pass_the_step_suites() {
        for (name, t) in corpus().unwrap() {
            assert_eq!(check_subject_reduction(&t).unwrap(), None, "{name}");
            assert_eq!(check_progress(&t).unwrap(), None, "{name}");
            assert_eq!(check_normalization(&t).unwrap(), None, "{name}");
            assert_eq!(check_soundness(&t).unwrap(), None, "{name}");
        }
    }

    #[test]
    fn oracle_agrees_on_examples() {
        for src in [
            "meas 2 (|000> + 2.|110> + 3.|001> + |111>)",
            r"(\x:B. x * x) ((1/sqrt(2)).(|0> + |1>))",
            "meas 1 ((1/sqrt(2)).(|00> + |11>))",
            "castR ((1/sqrt(2)).(|0> + |1>)) * |0>",
            "meas 1 zero(B * B)",
        ] {
            assert_eq!(check_oracle(&parse_term(src).unwrap()).unwrap(), None, "{src}");
        }
    }

    #[test]
    fn confluence_on_quantum_if() {
        let t = parse_term("(if? |0> |1>) (0.6.|1> + 0.8.|0>)").unwrap();
        assert_eq!(check_confluence(&t, 3).unwrap(), None);
    }
}
