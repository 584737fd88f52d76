//! Dense amplitude vectors computed directly from terms, independent of the
//! rewriter and of the denotational evaluator.

use crate::HarnessError;
use lams_core::ast::{Scalar, Term, Type, DROP_TOL};
use lams_core::semantics::SemValue;

/// Amplitudes over `n` qubits, the first qubit being the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    pub n: usize,
    pub amps: Vec<Scalar>,
}

fn out(t: &Term, why: &str) -> HarnessError {
    HarnessError::OutOfFragment {
        term: t.to_string(),
        detail: why.into(),
    }
}

impl Statevector {
    pub fn zero(n: usize) -> Self {
        Statevector {
            n,
            amps: vec![Scalar::ZERO; 1 << n],
        }
    }

    pub fn basis(bits: &[bool]) -> Self {
        let mut v = Statevector::zero(bits.len());
        v.amps[index(bits)] = Scalar::ONE;
        v
    }

    pub fn kron(&self, other: &Statevector) -> Statevector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(*a * *b);
            }
        }
        Statevector {
            n: self.n + other.n,
            amps,
        }
    }

    fn add(&self, other: &Statevector) -> Option<Statevector> {
        (self.n == other.n).then(|| Statevector {
            n: self.n,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| *a + *b).collect(),
        })
    }

    fn scale(&self, s: Scalar) -> Statevector {
        Statevector {
            n: self.n,
            amps: self.amps.iter().map(|a| *a * s).collect(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Componentwise closeness of the amplitudes.
    pub fn approx_eq(&self, other: &Statevector, tol: f64) -> bool {
        self.n == other.n
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| a.approx_eq(*b, tol))
    }

    /// Born-rule measurement of the first `j` qubits. Each outcome is the
    /// probability and the full post-measurement state `|k> ⊗ φ_k`. The null
    /// vector is read as `|0…0>`. Measuring every qubit leaves the bare basis
    /// state, with no phase.
    pub fn measure(&self, j: usize) -> Vec<(f64, Statevector)> {
        let total = self.norm_sqr();
        let psi = if total.sqrt() <= DROP_TOL {
            Statevector::basis(&vec![false; self.n])
        } else {
            self.scale(Scalar::real(1.0 / total.sqrt()))
        };
        let rest = 1usize << (self.n - j);
        let mut outs = Vec::new();
        for k in 0..1usize << j {
            let block = &psi.amps[k * rest..(k + 1) * rest];
            let p: f64 = block.iter().map(|a| a.norm_sqr()).sum();
            if p <= DROP_TOL {
                continue;
            }
            if j == self.n {
                outs.push((p, Statevector::basis(&bits_of(k, j))));
                continue;
            }
            let mut post = Statevector::zero(self.n);
            for (i, a) in block.iter().enumerate() {
                post.amps[k * rest + i] = a.scale(1.0 / p.sqrt());
            }
            outs.push((p, post));
        }
        let sum: f64 = outs.iter().map(|(p, _)| p).sum();
        for o in &mut outs {
            o.0 /= sum;
        }
        outs
    }

    /// Amplitudes of a semantic value over `n` qubits, erasing pair and
    /// layer structure by linearity.
    pub fn from_sem(v: &SemValue, n: usize) -> Option<Statevector> {
        match v {
            SemValue::Vec(c) => {
                let mut acc = Statevector::zero(n);
                for (k, s) in c.terms() {
                    acc = acc.add(&Statevector::from_sem(k, n)?.scale(*s))?;
                }
                Some(acc)
            }
            SemValue::Basis(b) => (n == 1).then(|| Statevector::basis(&[*b])),
            SemValue::Pair(a, b) => {
                let left = qubits_of_sem(a)?;
                Some(Statevector::from_sem(a, left)?.kron(&Statevector::from_sem(b, n.checked_sub(left)?)?))
            }
            SemValue::Fun(_) => None,
        }
    }
}

/// Number of qubits a semantic value spans, if it is made of kets.
fn qubits_of_sem(v: &SemValue) -> Option<usize> {
    match v {
        SemValue::Basis(_) => Some(1),
        SemValue::Pair(a, b) => Some(qubits_of_sem(a)? + qubits_of_sem(b)?),
        SemValue::Vec(c) => c.terms().first().and_then(|(k, _)| qubits_of_sem(k)),
        SemValue::Fun(_) => None,
    }
}

fn index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, b| (acc << 1) | usize::from(*b))
}

fn bits_of(k: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| (k >> (n - 1 - i)) & 1 == 1).collect()
}

/// Number of qubits of a qubit type with every span layer erased.
pub fn width(ty: &Type) -> Option<usize> {
    match ty {
        Type::B => Some(1),
        Type::S(a) => width(a),
        Type::Prod(a, b) => Some(width(a)? + width(b)?),
        Type::Arrow(..) => None,
    }
}

/// Amplitudes of a measurement-free term built from kets, sums, scalars,
/// products, casts and applications of abstractions or conditionals.
/// Applications with a basis parameter are extended linearly over the
/// argument's amplitudes; applications with a span parameter substitute.
pub fn eval(t: &Term) -> Result<Statevector, HarnessError> {
    match t {
        Term::Ket0 => Ok(Statevector::basis(&[false])),
        Term::Ket1 => Ok(Statevector::basis(&[true])),
        Term::Zero(a) => Ok(Statevector::zero(
            width(a).ok_or_else(|| out(t, "zero over a non-qubit type"))?,
        )),
        Term::Prod(a, b) => Ok(eval(a)?.kron(&eval(b)?)),
        Term::Sum(ts) => {
            let mut acc = eval(&ts[0])?;
            for s in &ts[1..] {
                acc = acc.add(&eval(s)?).ok_or_else(|| out(t, "summands of different widths"))?;
            }
            Ok(acc)
        }
        Term::Scale(s, b) => Ok(eval(b)?.scale(*s)),
        Term::CastR(b) | Term::CastL(b) => eval(b),
        Term::Head(b) | Term::Tail(b) => {
            let bits = b.ket_bits().ok_or_else(|| out(t, "projection of a non-basis list"))?;
            Ok(if matches!(t, Term::Head(_)) {
                Statevector::basis(&bits[..1])
            } else {
                Statevector::basis(&bits[1..])
            })
        }
        Term::App(f, a) => apply(f, a, t),
        _ => Err(out(t, "not in the statevector fragment")),
    }
}

fn apply(f: &Term, a: &Term, whole: &Term) -> Result<Statevector, HarnessError> {
    match f {
        Term::Lam(x, p, body) => match p.as_bn() {
            Some(m) => linear_ext(&eval(a)?, m, |bits| eval(&body.substitute(x, &Term::ket(bits)))),
            None => eval(&body.substitute(x, a)),
        },
        Term::IfTe(then, otherwise) => linear_ext(&eval(a)?, 1, |bits| {
            eval(if bits[0] { then } else { otherwise })
        }),
        Term::Sum(fs) => {
            let mut acc: Option<Statevector> = None;
            for g in fs {
                let v = apply(g, a, whole)?;
                acc = Some(match acc {
                    None => v,
                    Some(s) => s.add(&v).ok_or_else(|| out(whole, "width mismatch"))?,
                });
            }
            acc.ok_or_else(|| out(whole, "empty sum"))
        }
        Term::Scale(s, g) => Ok(apply(g, a, whole)?.scale(*s)),
        _ => Err(out(whole, "unsupported function position")),
    }
}

fn linear_ext(
    arg: &Statevector,
    m: usize,
    mut f: impl FnMut(&[bool]) -> Result<Statevector, HarnessError>,
) -> Result<Statevector, HarnessError> {
    if arg.n != m {
        return Err(HarnessError::OutOfFragment {
            term: format!("{m}-qubit parameter"),
            detail: format!("argument spans {} qubits", arg.n),
        });
    }
    // the width of the result is read off the first basis image
    let mut acc = f(&bits_of(0, m))?.scale(arg.amps[0]);
    for (k, amp) in arg.amps.iter().enumerate().skip(1) {
        let img = f(&bits_of(k, m))?;
        acc = acc.add(&img.scale(*amp)).ok_or_else(|| HarnessError::OutOfFragment {
            term: format!("image of |{k}>"),
            detail: "basis images of different widths".into(),
        })?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lams_core::syntax::parse_term;
    use std::f64::consts::FRAC_1_SQRT_2 as H2;

    fn sv(s: &str) -> Statevector {
        eval(&parse_term(s).unwrap()).unwrap()
    }

    fn real(v: &[f64]) -> Vec<Scalar> {
        v.iter().map(|x| Scalar::real(*x)).collect()
    }

    #[test]
    fn literal_bell_state() {
        assert!(sv("(1/sqrt(2)).(|00> + |11>)").approx_eq(
            &Statevector { n: 2, amps: real(&[H2, 0.0, 0.0, H2]) },
            1e-12
        ));
    }

    #[test]
    fn gates_extend_linearly() {
        let plus = sv(r"(\x:B. if x then |-> else |+>) |0>");
        assert!(plus.approx_eq(&Statevector { n: 1, amps: real(&[H2, H2]) }, 1e-12));
        let bell = sv(r"(\x:B. x * x) ((1/sqrt(2)).(|0> + |1>))");
        assert!(bell.approx_eq(&Statevector { n: 2, amps: real(&[H2, 0.0, 0.0, H2]) }, 1e-12));
        let flipped = sv("(if? |0> |1>) (0.6.|1> + 0.8.|0>)");
        assert!(flipped.approx_eq(&Statevector { n: 1, amps: real(&[0.6, 0.8]) }, 1e-12));
        let cast = sv("castR ((1/sqrt(2)).(|0> + |1>)) * |0>");
        assert!(cast.approx_eq(&Statevector { n: 2, amps: real(&[H2, 0.0, H2, 0.0]) }, 1e-12));
    }

    #[test]
    fn born_rule_on_example() {
        let outs = sv("|000> + 2.|110> + 3.|001> + |111>").measure(2);
        assert_eq!(outs.len(), 2);
        assert!((outs[0].0 - 2.0 / 3.0).abs() < 1e-12);
        let r10 = 10f64.sqrt();
        let want = Statevector { n: 3, amps: real(&[1.0 / r10, 3.0 / r10, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]) };
        assert!(outs[0].1.approx_eq(&want, 1e-12));
        let zero = sv("zero(B * B)").measure(1);
        assert_eq!(zero.len(), 1);
        assert!(zero[0].1.approx_eq(&Statevector::basis(&[false, false]), 0.0));
        let full = sv("i.|1>").measure(1);
        assert!(full[0].1.approx_eq(&Statevector::basis(&[true]), 0.0));
    }

    #[test]
    fn measurement_is_out_of_fragment() {
        assert!(eval(&parse_term("meas 1 |0>").unwrap()).is_err());
    }
}
