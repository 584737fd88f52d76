//! Measurement against the Born rule on random three-qubit states.

use lams_core::ast::{Scalar, Term};
use lams_core::rewrite::measure_project;
use lams_harness::statevector::eval;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn random_state(rng: &mut ChaCha8Rng) -> Term {
    let mut summands = Vec::new();
    for k in 0..8usize {
        if rng.gen_bool(0.3) {
            continue;
        }
        let bits: Vec<bool> = (0..3).map(|i| (k >> (2 - i)) & 1 == 1).collect();
        let a = Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        summands.push(Term::scale(a, Term::ket(&bits)));
    }
    if summands.is_empty() {
        summands.push(Term::ket(&[true, false, true]));
    }
    Term::sum(summands).canonicalize()
}

#[test]
fn projection_follows_the_born_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for trial in 0..500 {
        let t = random_state(&mut rng);
        let j = rng.gen_range(1..=3);
        let oracle = eval(&t).unwrap().measure(j);
        let got = measure_project(j, &t).unwrap();
        assert_eq!(got.len(), oracle.len(), "trial {trial}: {t}");
        let mut tv = 0.0;
        for (p, u) in got.iter() {
            let v = eval(u).unwrap();
            let (q, _) = oracle
                .iter()
                .find(|(_, w)| w.approx_eq(&v, TOL))
                .unwrap_or_else(|| panic!("trial {trial}: outcome {u} of {t} has no match"));
            tv += (p - q).abs() / 2.0;
        }
        assert!(tv <= TOL, "trial {trial}: tv {tv} on {t}");
    }
}

#[test]
fn worked_measurement() {
    let t = lams_core::syntax::parse_term("|000> + 2.|110> + 3.|001> + |111>").unwrap();
    let d = measure_project(2, &t).unwrap();
    let probs: Vec<f64> = d.iter().map(|(p, _)| *p).collect();
    let mut sorted = probs.clone();
    sorted.sort_by(f64::total_cmp);
    assert!((sorted[0] - 1.0 / 3.0).abs() < 1e-12);
    assert!((sorted[1] - 2.0 / 3.0).abs() < 1e-12);
}
