use super::RewriteError;
use crate::ast::{Dist, Scalar, Term, DROP_TOL};

/// Reads `Σ_i [α_i].|b_i>` where every `b_i` has the same length. A single
/// (possibly scaled) ket product counts as a one-term sum.
pub fn ket_sum(t: &Term) -> Option<Vec<(Scalar, Vec<bool>)>> {
    fn one(t: &Term) -> Option<(Scalar, Vec<bool>)> {
        match t {
            Term::Scale(a, k) => Some((*a, k.ket_bits()?)),
            k => Some((Scalar::ONE, k.ket_bits()?)),
        }
    }
    let items = match t {
        Term::Sum(ts) => ts.iter().map(one).collect::<Option<Vec<_>>>()?,
        t => vec![one(t)?],
    };
    let n = items[0].1.len();
    items.iter().all(|(_, b)| b.len() == n).then_some(items)
}

type Outcome<'a> = (Vec<bool>, Vec<(Scalar, &'a [bool])>);

/// Measures the first `j` qubits of a ket sum. Outcome `k` has payload
/// `|k> × |φ_k>`, or just `|k>` when every qubit is measured.
pub fn measure_project(j: usize, t: &Term) -> Result<Dist<Term>, RewriteError> {
    let items = ket_sum(t).ok_or_else(|| RewriteError::NotAKetSum {
        term: t.to_string(),
    })?;
    let n = items[0].1.len();
    if j == 0 || j > n {
        return Err(RewriteError::NotAKetSum {
            term: t.to_string(),
        });
    }
    let total: f64 = items.iter().map(|(a, _)| a.norm_sqr()).sum();
    if total <= 0.0 {
        return Err(RewriteError::ZeroNorm {
            term: t.to_string(),
        });
    }
    // measured prefix, then the amplitudes of its suffixes
    let mut outcomes: Vec<Outcome> = Vec::new();
    for (a, bits) in &items {
        let (k, rest) = bits.split_at(j);
        match outcomes.iter_mut().find(|(o, _)| o == k) {
            Some((_, v)) => v.push((*a, rest)),
            None => outcomes.push((k.to_vec(), vec![(*a, rest)])),
        }
    }
    outcomes.sort_by(|a, b| a.0.cmp(&b.0));

    let mut raw = Vec::new();
    for (k, members) in outcomes {
        let weight: f64 = members.iter().map(|(a, _)| a.norm_sqr()).sum();
        let p = weight / total;
        if p < DROP_TOL {
            continue;
        }
        let ket_k = Term::ket(&k);
        let payload = if j == n {
            ket_k
        } else {
            let norm = weight.sqrt();
            let phi = Term::sum(
                members
                    .iter()
                    .map(|(a, rest)| {
                        let c = a.scale(1.0 / norm);
                        let k = Term::ket(rest);
                        if c.is_one() {
                            k
                        } else {
                            Term::scale(c, k)
                        }
                    })
                    .collect(),
            );
            Term::prod(ket_k, phi)
        };
        raw.push((p, payload));
    }
    let kept: f64 = raw.iter().map(|(p, _)| p).sum();
    for e in &mut raw {
        e.0 /= kept;
    }
    Ok(Dist::normalize(raw)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    #[test]
    fn partial_measurement_example() {
        let t = parse_term("|000> + 2.|110> + 3.|001> + |111>").unwrap();
        let d = measure_project(2, &t).unwrap();
        let want0 = parse_term("|00> * ((1/sqrt(10)).|0> + (3/sqrt(10)).|1>)").unwrap();
        let want1 = parse_term("|11> * ((2/sqrt(5)).|0> + (1/sqrt(5)).|1>)").unwrap();
        let want = Dist::normalize(vec![(2.0 / 3.0, want0), (1.0 / 3.0, want1)]).unwrap();
        assert!(d.term_eq(&want, 1e-9), "{d:?}");
    }

    #[test]
    fn bell_state_full_and_partial() {
        let t = parse_term("(1/sqrt(2)).|00> + (1/sqrt(2)).|11>").unwrap();
        let d = measure_project(1, &t).unwrap();
        let want = Dist::normalize(vec![
            (0.5, parse_term("|0> * |0>").unwrap()),
            (0.5, parse_term("|1> * |1>").unwrap()),
        ])
        .unwrap();
        assert!(d.term_eq(&want, 1e-9));
        let d = measure_project(2, &t).unwrap();
        let want = Dist::normalize(vec![
            (0.5, parse_term("|00>").unwrap()),
            (0.5, parse_term("|11>").unwrap()),
        ])
        .unwrap();
        assert!(d.term_eq(&want, 1e-9));
    }

    #[test]
    fn phases_survive_in_single_member_outcomes() {
        let t = parse_term("|00> + (-1).|11>").unwrap();
        let d = measure_project(1, &t).unwrap();
        let one = d
            .iter()
            .find(|(_, u)| u.list()[0] == &Term::Ket1)
            .unwrap();
        assert!(one.1.term_eq(&parse_term("|1> * ((-1).|1>)").unwrap()));
    }

    #[test]
    fn rejects_non_ket_sums() {
        let t = parse_term("(|0> + |1>) * |0>").unwrap();
        assert!(matches!(
            measure_project(1, &t),
            Err(RewriteError::NotAKetSum { .. })
        ));
    }
}
