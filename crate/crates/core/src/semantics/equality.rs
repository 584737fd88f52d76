//! Extensional comparison of semantic values up to a tolerance.

use super::eval::{apply, SemDist};
use super::value::{Combo, SemValue};
use crate::ast::{Scalar, Type};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PROBE_SEED: u64 = 0xC0FFEE;
const RANDOM_PROBES: usize = 8;
const MAX_PROBES: usize = 64;

/// Coefficient mass of every cluster of `eq`-related keys agrees.
fn combo_eq(a: &Combo, b: &Combo, tol: f64, eq: &dyn Fn(&SemValue, &SemValue) -> bool) -> bool {
    let mass = |c: &Combo, k: &SemValue| -> Scalar {
        c.terms()
            .iter()
            .filter(|(x, _)| eq(x, k))
            .fold(Scalar::ZERO, |acc, (_, s)| acc + *s)
    };
    a.terms()
        .iter()
        .chain(b.terms())
        .all(|(k, _)| mass(a, k).approx_eq(mass(b, k), tol))
}

fn dist_eq(a: &SemDist, b: &SemDist, tol: f64, eq: &dyn Fn(&SemValue, &SemValue) -> bool) -> bool {
    let mass = |d: &SemDist, k: &SemValue| -> f64 {
        d.iter().filter(|(_, x)| eq(x, k)).map(|(p, _)| p).sum()
    };
    a.iter()
        .chain(b.iter())
        .all(|(_, k)| (mass(a, k) - mass(b, k)).abs() <= tol)
}

/// Structural comparison; closures only by fingerprint.
#[cfg(test)]
pub(crate) fn sem_eq_untyped(a: &SemValue, b: &SemValue, tol: f64) -> bool {
    match (a, b) {
        (SemValue::Basis(x), SemValue::Basis(y)) => x == y,
        (SemValue::Pair(a1, b1), SemValue::Pair(a2, b2)) => {
            sem_eq_untyped(a1, a2, tol) && sem_eq_untyped(b1, b2, tol)
        }
        (SemValue::Fun(f), SemValue::Fun(g)) => f == g,
        (SemValue::Vec(x), SemValue::Vec(y)) => {
            combo_eq(x, y, tol, &|p, q| sem_eq_untyped(p, q, tol))
        }
        _ => false,
    }
}

/// Probe arguments for a parameter type: every basis tuple when the type
/// is `B^n`, otherwise embedded probes and seeded random superpositions.
pub fn probes(p: &Type) -> Vec<SemValue> {
    if let Some(n) = p.as_bn() {
        return (0..1usize << n)
            .map(|k| {
                let bits: Vec<bool> = (0..n).map(|i| (k >> (n - 1 - i)) & 1 == 1).collect();
                SemValue::ket(&bits)
            })
            .collect();
    }
    match p {
        Type::S(inner) => {
            let base = probes(inner);
            let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
            let mut out: Vec<SemValue> = base.iter().map(|v| super::eta(v.clone())).collect();
            for _ in 0..RANDOM_PROBES {
                let terms = base.iter().map(|v| {
                    let c = Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    (v.clone(), c)
                });
                out.push(SemValue::Vec(Combo::from_terms(terms)));
            }
            out.truncate(MAX_PROBES);
            out
        }
        Type::Prod(a, b) => {
            let (xs, ys) = (probes(a), probes(b));
            let all: Vec<SemValue> = xs
                .iter()
                .flat_map(|x| ys.iter().map(move |y| SemValue::pair(x.clone(), y.clone())))
                .collect();
            if all.len() <= MAX_PROBES {
                return all;
            }
            let stride = all.len().div_ceil(MAX_PROBES);
            all.into_iter().step_by(stride).collect()
        }
        _ => Vec::new(),
    }
}

/// Extensional equality at type `ty`.
pub fn sem_eq(a: &SemValue, b: &SemValue, ty: &Type, tol: f64) -> bool {
    match (ty, a, b) {
        (Type::B, SemValue::Basis(x), SemValue::Basis(y)) => x == y,
        (Type::Prod(s, t), SemValue::Pair(a1, b1), SemValue::Pair(a2, b2)) => {
            sem_eq(a1, a2, s, tol) && sem_eq(b1, b2, t, tol)
        }
        (Type::S(inner), SemValue::Vec(x), SemValue::Vec(y)) => {
            combo_eq(x, y, tol, &|p, q| sem_eq(p, q, inner, tol))
        }
        (Type::Arrow(p, r), SemValue::Fun(f), SemValue::Fun(g)) => {
            f == g
                || probes(p).into_iter().all(|arg| {
                    match (apply(a, arg.clone()), apply(b, arg)) {
                        (Ok(x), Ok(y)) => sem_eq_dist(&x, &y, r, tol),
                        _ => false,
                    }
                })
        }
        _ => false,
    }
}

/// Equality of distributions whose outcomes inhabit `ty`.
pub fn sem_eq_dist(a: &SemDist, b: &SemDist, ty: &Type, tol: f64) -> bool {
    dist_eq(a, b, tol, &|x, y| sem_eq(x, y, ty, tol))
}
