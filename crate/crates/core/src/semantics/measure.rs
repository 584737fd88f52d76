//! Projective measurement on combinations of ket tuples.

use super::value::{Combo, SemValue};
use super::SemError;
use crate::ast::{Dist, Scalar, DROP_TOL};

fn kets(v: &Combo) -> Result<Vec<(Vec<bool>, Scalar)>, SemError> {
    v.terms()
        .iter()
        .map(|(k, c)| {
            k.ket_bits()
                .map(|b| (b, *c))
                .ok_or_else(|| SemError::DomainMismatch(format!("{k} is not a ket")))
        })
        .collect()
}

fn combo_of(items: impl IntoIterator<Item = (Vec<bool>, Scalar)>) -> Combo {
    Combo::from_terms(items.into_iter().map(|(b, c)| (SemValue::ket(&b), c)))
}

/// `v / ‖v‖`, or `|0…0>` for the null vector of `n`-qubit kets.
pub fn sem_norm(v: &Combo, n: usize) -> Combo {
    let norm = v.norm_sqr().sqrt();
    if norm <= DROP_TOL {
        combo_of([(vec![false; n], Scalar::ONE)])
    } else {
        v.scale(Scalar::real(1.0 / norm))
    }
}

fn prefix_bits(j: usize, k: usize) -> Vec<bool> {
    (0..j).map(|i| (k >> (j - 1 - i)) & 1 == 1).collect()
}

/// Keeps the summands whose first `j` bits spell `k`.
pub fn projector(j: usize, k: usize, v: &Combo) -> Result<Combo, SemError> {
    let want = prefix_bits(j, k);
    Ok(combo_of(
        kets(v)?.into_iter().filter(|(b, _)| b.len() >= j && b[..j] == want[..]),
    ))
}

/// Splits off a common `j`-bit prefix; mixed prefixes fall back to
/// `(|0>^j, |0>^(n-j))`. With `j = n` only the prefix is returned.
pub fn factorize(j: usize, n: usize, v: &Combo) -> Result<SemValue, SemError> {
    let items = kets(v)?;
    let prefix = items.first().map(|(b, _)| b[..j].to_vec());
    let shared = match &prefix {
        Some(p) => items.iter().all(|(b, _)| b[..j] == p[..]),
        None => false,
    };
    let (prefix, rest) = if shared {
        let rest = combo_of(items.iter().map(|(b, c)| (b[j..].to_vec(), *c)).filter(|(b, _)| !b.is_empty()));
        (prefix.unwrap(), rest)
    } else {
        (vec![false; j], combo_of([(vec![false; n - j], Scalar::ONE)].into_iter().filter(|(b, _)| !b.is_empty())))
    };
    let head = SemValue::ket(&prefix);
    Ok(if j == n {
        head
    } else {
        let mut elems: Vec<SemValue> = prefix.iter().map(|b| SemValue::Basis(*b)).collect();
        elems.push(SemValue::Vec(rest));
        SemValue::from_list(elems)
    })
}

/// Born-rule distribution over `(|k>, φ_k)` for the first `j` of `n` qubits.
pub fn sem_measure(j: usize, n: usize, v: &Combo) -> Result<Dist<SemValue>, SemError> {
    if j == 0 || j > n {
        return Err(SemError::DomainMismatch(format!("measuring {j} of {n} qubits")));
    }
    let psi = sem_norm(v, n);
    let mut raw = Vec::new();
    for k in 0..1usize << j {
        let pk = projector(j, k, &psi)?;
        let p = pk.norm_sqr();
        if p <= DROP_TOL {
            continue;
        }
        raw.push((p, factorize(j, n, &sem_norm(&pk, n))?));
    }
    let total: f64 = raw.iter().map(|(p, _)| p).sum();
    for e in &mut raw {
        e.0 /= total;
    }
    Ok(Dist::normalize_by(raw, |a, b| a == b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(items: &[(&str, f64)]) -> Combo {
        combo_of(items.iter().map(|(s, x)| {
            (s.chars().map(|ch| ch == '1').collect::<Vec<_>>(), Scalar::real(*x))
        }))
    }

    #[test]
    fn norm_of_example_branch() {
        let v = sem_norm(&c(&[("00", 1.0), ("01", 3.0)]), 2);
        let r = 10f64.sqrt();
        assert!(super::super::sem_eq_untyped(
            &SemValue::Vec(v),
            &SemValue::Vec(c(&[("00", 1.0 / r), ("01", 3.0 / r)])),
            1e-12
        ));
        assert_eq!(sem_norm(&Combo::zero(), 2), c(&[("00", 1.0)]));
    }

    #[test]
    fn projector_keeps_matching_prefix() {
        let v = c(&[("000", 1.0), ("110", 2.0), ("001", 3.0), ("111", 1.0)]);
        assert_eq!(projector(2, 0, &v).unwrap(), c(&[("000", 1.0), ("001", 3.0)]));
        let total = (0..4)
            .map(|k| projector(2, k, &v).unwrap())
            .fold(Combo::zero(), |a, b| a.add(&b));
        assert_eq!(total, v);
    }

    #[test]
    fn factorize_shared_and_mixed() {
        let v = c(&[("000", 1.0), ("001", 2.0)]);
        let want = SemValue::from_list(vec![
            SemValue::Basis(false),
            SemValue::Basis(false),
            SemValue::Vec(c(&[("0", 1.0), ("1", 2.0)])),
        ]);
        assert_eq!(factorize(2, 3, &v).unwrap(), want);
        let mixed = c(&[("000", 1.0), ("100", 1.0)]);
        let fallback = SemValue::from_list(vec![
            SemValue::Basis(false),
            SemValue::Basis(false),
            SemValue::Vec(c(&[("0", 1.0)])),
        ]);
        assert_eq!(factorize(2, 3, &mixed).unwrap(), fallback);
    }

    #[test]
    fn example_measurement() {
        let v = c(&[("000", 1.0), ("110", 2.0), ("001", 3.0), ("111", 1.0)]);
        let d = sem_measure(2, 3, &v).unwrap();
        assert_eq!(d.len(), 2);
        let probs: Vec<f64> = d.iter().map(|(p, _)| *p).collect();
        assert!((probs[0] - 2.0 / 3.0).abs() < 1e-9);
        assert!((probs[1] - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn full_measurement_of_a_basis_state() {
        let d = sem_measure(1, 1, &c(&[("0", 1.0)])).unwrap();
        assert_eq!(d.as_single(), Some(&SemValue::Basis(false)));
    }
}
