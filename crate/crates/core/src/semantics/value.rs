//! Semantic values: basis bits, pairs, closures and formal linear
//! combinations, with the span monad operations on the latter.

use super::SemError;
use crate::ast::{Scalar, Type, DROP_TOL};
use crate::typing::Derivation;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub type Env = BTreeMap<String, SemValue>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemValue {
    Basis(bool),
    Pair(Box<SemValue>, Box<SemValue>),
    Fun(FunValue),
    Vec(Combo),
}

/// What a closure does when applied.
#[derive(Debug)]
pub enum FunBody {
    Lambda {
        param: String,
        body: Arc<Derivation>,
    },
    /// `|1>` runs `then`, `|0>` runs `otherwise`.
    Cond {
        then: Arc<Derivation>,
        otherwise: Arc<Derivation>,
    },
}

#[derive(Debug)]
pub struct Closure {
    /// Structural fingerprint; closures are identified by it, never
    /// extensionally.
    pub key: String,
    pub body: FunBody,
    pub env: Env,
}

#[derive(Clone, Debug)]
pub struct FunValue(pub Arc<Closure>);

impl FunValue {
    pub fn new(body: FunBody, env: Env) -> Self {
        let shown = match &body {
            FunBody::Lambda { param, body } => format!("λ{param}.{}:{}", body.term(), body.ty),
            FunBody::Cond { then, otherwise } => {
                format!("if?({}:{},{}:{})", then.term(), then.ty, otherwise.term(), otherwise.ty)
            }
        };
        let env_key: Vec<String> = env.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let key = format!("{shown}[{}]", env_key.join(","));
        FunValue(Arc::new(Closure { key, body, env }))
    }
}

impl PartialEq for FunValue {
    fn eq(&self, other: &Self) -> bool {
        self.0.key == other.0.key
    }
}
impl Eq for FunValue {}
impl PartialOrd for FunValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FunValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.key.cmp(&other.0.key)
    }
}
impl Hash for FunValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.key.hash(state)
    }
}

/// A formal finite linear combination, sorted by key, without
/// negligible coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Combo(Vec<(SemValue, Scalar)>);

impl Combo {
    pub fn zero() -> Self {
        Combo(Vec::new())
    }

    pub fn from_terms(raw: impl IntoIterator<Item = (SemValue, Scalar)>) -> Self {
        let mut v: Vec<(SemValue, Scalar)> = raw.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(SemValue, Scalar)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match out.last_mut() {
                Some((last, acc)) if *last == k => *acc = *acc + c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| c.abs() > DROP_TOL);
        Combo(out)
    }

    pub fn terms(&self) -> &[(SemValue, Scalar)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Combo) -> Combo {
        Combo::from_terms(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn scale(&self, s: Scalar) -> Combo {
        Combo::from_terms(self.0.iter().map(|(k, c)| (k.clone(), *c * s)))
    }

    /// Applies `f` to every key and re-merges.
    pub fn map_keys(&self, mut f: impl FnMut(&SemValue) -> SemValue) -> Combo {
        Combo::from_terms(self.0.iter().map(|(k, c)| (f(k), *c)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|(_, c)| c.norm_sqr()).sum()
    }
}

/// `η`: the one-term combination.
pub fn eta(v: SemValue) -> SemValue {
    SemValue::Vec(Combo(vec![(v, Scalar::ONE)]))
}

/// `μ`: a combination of combinations becomes one combination.
pub fn mu(v: &SemValue) -> Result<SemValue, SemError> {
    let outer = v.as_vec()?;
    let mut raw = Vec::new();
    for (k, c) in outer.terms() {
        let inner = k.as_vec().map_err(|_| SemError::KeyNotVec(k.to_string()))?;
        raw.extend(inner.terms().iter().map(|(x, d)| (x.clone(), *c * *d)));
    }
    Ok(SemValue::Vec(Combo::from_terms(raw)))
}

/// The tensor of two combinations as a combination of pairs.
pub fn bilinear_pair(a: &Combo, b: &Combo) -> Combo {
    let mut raw = Vec::with_capacity(a.0.len() * b.0.len());
    for (x, s) in &a.0 {
        for (y, t) in &b.0 {
            raw.push((SemValue::pair(x.clone(), y.clone()), *s * *t));
        }
    }
    Combo::from_terms(raw)
}

/// Sum of two values of `(US)^m A`: bilinear descent through the outer
/// layers, plain addition at the innermost one.
pub fn deep_sum(a: &SemValue, b: &SemValue, m: usize) -> Result<SemValue, SemError> {
    let (x, y) = (a.as_vec()?, b.as_vec()?);
    match m {
        0 => Err(SemError::DepthMismatch(0)),
        1 => Ok(SemValue::Vec(x.add(y))),
        _ => {
            let mut raw = Vec::new();
            for (xi, s) in x.terms() {
                for (yj, t) in y.terms() {
                    raw.push((deep_sum(xi, yj, m - 1)?, *s * *t));
                }
            }
            Ok(SemValue::Vec(Combo::from_terms(raw)))
        }
    }
}

/// Scaling of a value of `(US)^m A`, acting on the innermost layer.
pub fn deep_scale(s: Scalar, v: &SemValue, m: usize) -> Result<SemValue, SemError> {
    let x = v.as_vec()?;
    match m {
        0 => Err(SemError::DepthMismatch(0)),
        1 => Ok(SemValue::Vec(x.scale(s))),
        _ => {
            let raw = x
                .terms()
                .iter()
                .map(|(k, c)| Ok((deep_scale(s, k, m - 1)?, *c)))
                .collect::<Result<Vec<_>, SemError>>()?;
            Ok(SemValue::Vec(Combo::from_terms(raw)))
        }
    }
}

impl SemValue {
    pub fn pair(a: SemValue, b: SemValue) -> SemValue {
        SemValue::Pair(Box::new(a), Box::new(b))
    }

    /// `(a, b)` with both sides read as tuples, as one right-nested tuple.
    pub fn concat(a: &SemValue, b: &SemValue) -> SemValue {
        SemValue::from_list(a.list().into_iter().chain(b.list()).cloned().collect())
    }

    /// `|b_1 … b_n>` as a right-nested tuple of bits.
    pub fn ket(bits: &[bool]) -> SemValue {
        let (last, init) = bits.split_last().expect("empty ket");
        init.iter()
            .rev()
            .fold(SemValue::Basis(*last), |acc, b| SemValue::pair(SemValue::Basis(*b), acc))
    }

    pub fn ket_bits(&self) -> Option<Vec<bool>> {
        match self {
            SemValue::Basis(b) => Some(vec![*b]),
            SemValue::Pair(a, rest) => {
                let SemValue::Basis(b) = **a else { return None };
                let mut out = vec![b];
                out.extend(rest.ket_bits()?);
                Some(out)
            }
            _ => None,
        }
    }

    pub fn as_vec(&self) -> Result<&Combo, SemError> {
        match self {
            SemValue::Vec(c) => Ok(c),
            v => Err(SemError::DomainMismatch(format!("expected a combination, got {v}"))),
        }
    }

    /// The elements of a right-nested tuple.
    pub fn list(&self) -> Vec<&SemValue> {
        let mut out = Vec::new();
        let mut cur = self;
        while let SemValue::Pair(a, b) = cur {
            out.push(&**a);
            cur = b;
        }
        out.push(cur);
        out
    }

    pub fn from_list(mut elems: Vec<SemValue>) -> SemValue {
        let mut acc = elems.pop().expect("empty tuple");
        while let Some(e) = elems.pop() {
            acc = SemValue::pair(e, acc);
        }
        acc
    }
}

impl fmt::Display for SemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemValue::Basis(b) => write!(f, "|{}>", u8::from(*b)),
            SemValue::Pair(..) => match self.ket_bits() {
                Some(bits) => {
                    let s: String = bits.iter().map(|b| if *b { '1' } else { '0' }).collect();
                    write!(f, "|{s}>")
                }
                None => {
                    let parts: Vec<String> = self.list().iter().map(|v| v.to_string()).collect();
                    write!(f, "({})", parts.join(", "))
                }
            },
            SemValue::Fun(c) => write!(f, "<fun {}>", c.0.key),
            SemValue::Vec(c) => {
                if c.is_zero() {
                    return f.write_str("{}");
                }
                let parts: Vec<String> = c.terms().iter().map(|(k, s)| format!("{k}: {s}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

/// The set a type denotes, as a structural mirror of the type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemDomain {
    BoolSet(usize),
    ProdDom(Box<SemDomain>, Box<SemDomain>),
    FunDom(Box<SemDomain>, Box<SemDomain>),
    SpanDom(Box<SemDomain>),
}

pub fn interpret_type(a: &Type) -> SemDomain {
    match a {
        Type::B => SemDomain::BoolSet(1),
        Type::Prod(x, y) => {
            SemDomain::ProdDom(Box::new(interpret_type(x)), Box::new(interpret_type(y)))
        }
        Type::Arrow(p, r) => {
            SemDomain::FunDom(Box::new(interpret_type(p)), Box::new(interpret_type(r)))
        }
        Type::S(x) => SemDomain::SpanDom(Box::new(interpret_type(x))),
    }
}

impl SemDomain {
    /// Shallow membership: closures are not inspected.
    pub fn contains(&self, v: &SemValue) -> bool {
        match (self, v) {
            (SemDomain::BoolSet(1), SemValue::Basis(_)) => true,
            (SemDomain::BoolSet(n), v) => v.ket_bits().is_some_and(|b| b.len() == *n),
            (SemDomain::ProdDom(a, b), SemValue::Pair(x, y)) => a.contains(x) && b.contains(y),
            (SemDomain::FunDom(..), SemValue::Fun(_)) => true,
            (SemDomain::SpanDom(a), SemValue::Vec(c)) => c.terms().iter().all(|(k, _)| a.contains(k)),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(b: bool) -> SemValue {
        SemValue::Basis(b)
    }

    fn vec1(items: &[(SemValue, f64)]) -> SemValue {
        SemValue::Vec(Combo::from_terms(
            items.iter().map(|(v, c)| (v.clone(), Scalar::real(*c))),
        ))
    }

    fn close(a: &SemValue, b: &SemValue) -> bool {
        super::super::sem_eq_untyped(a, b, 1e-9)
    }

    fn arb_combo() -> impl Strategy<Value = SemValue> {
        prop::collection::vec((any::<bool>(), -3.0f64..3.0, -3.0f64..3.0), 0..4).prop_map(|v| {
            SemValue::Vec(Combo::from_terms(
                v.into_iter().map(|(b, re, im)| (k(b), Scalar::new(re, im))),
            ))
        })
    }

    fn arb_layered() -> impl Strategy<Value = SemValue> {
        prop::collection::vec((arb_combo(), -2.0f64..2.0), 0..3).prop_map(|v| {
            SemValue::Vec(Combo::from_terms(v.into_iter().map(|(c, s)| (c, Scalar::real(s)))))
        })
    }

    fn arb_triple() -> impl Strategy<Value = SemValue> {
        prop::collection::vec((arb_layered(), -2.0f64..2.0), 0..3).prop_map(|v| {
            SemValue::Vec(Combo::from_terms(v.into_iter().map(|(c, s)| (c, Scalar::real(s)))))
        })
    }

    fn s_map(v: &SemValue, f: impl Fn(&SemValue) -> SemValue) -> SemValue {
        SemValue::Vec(v.as_vec().unwrap().map_keys(f))
    }

    proptest! {
        #[test]
        fn mu_after_eta_is_identity(v in arb_combo()) {
            prop_assert_eq!(mu(&eta(v.clone())).unwrap(), v);
        }

        #[test]
        fn mu_after_mapped_eta_is_identity(v in arb_combo()) {
            let lifted = s_map(&v, |x| eta(x.clone()));
            prop_assert!(close(&mu(&lifted).unwrap(), &v));
        }

        #[test]
        fn mu_is_associative(v in arb_triple()) {
            let left = mu(&mu(&v).unwrap()).unwrap();
            let right = mu(&s_map(&v, |x| mu(x).unwrap())).unwrap();
            prop_assert!(close(&left, &right));
        }

        #[test]
        fn scaling_by_one_is_identity(v in arb_layered()) {
            prop_assert!(close(&deep_scale(Scalar::ONE, &v, 2).unwrap(), &v));
        }

        #[test]
        fn bilinear_pair_with_zero_is_zero(v in arb_combo()) {
            let c = v.as_vec().unwrap();
            prop_assert!(bilinear_pair(c, &Combo::zero()).is_zero());
        }
    }

    #[test]
    fn eta_does_not_flatten() {
        let v = vec1(&[(k(false), 0.5)]);
        let e = eta(v.clone());
        assert_eq!(e, SemValue::Vec(Combo(vec![(v, Scalar::ONE)])));
        assert_eq!(mu(&e).unwrap(), vec1(&[(k(false), 0.5)]));
    }

    #[test]
    fn mu_merges_coefficients() {
        let v = vec1(&[(vec1(&[(k(false), 1.0)]), 1.0), (vec1(&[(k(true), 1.0)]), 1.0)]);
        assert_eq!(mu(&v).unwrap(), vec1(&[(k(false), 1.0), (k(true), 1.0)]));
        assert!(matches!(mu(&vec1(&[(k(true), 1.0)])), Err(SemError::KeyNotVec(_))));
    }

    #[test]
    fn bilinear_pair_is_the_tensor() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = vec1(&[(k(false), h), (k(true), h)]);
        let b = vec1(&[(k(false), 1.0)]);
        let p = bilinear_pair(a.as_vec().unwrap(), b.as_vec().unwrap());
        let want = vec1(&[
            (SemValue::pair(k(false), k(false)), h),
            (SemValue::pair(k(true), k(false)), h),
        ]);
        assert_eq!(SemValue::Vec(p), want);
    }

    #[test]
    fn deep_sum_and_scale_act_innermost() {
        let x = vec1(&[(k(false), 1.0)]);
        let y = vec1(&[(k(true), 1.0)]);
        assert_eq!(deep_sum(&x, &y, 1).unwrap(), vec1(&[(k(false), 1.0), (k(true), 1.0)]));
        let xx = vec1(&[(k(false), 2.0)]);
        assert_eq!(deep_sum(&x, &xx, 1).unwrap(), vec1(&[(k(false), 3.0)]));
        let s = deep_sum(&eta(x.clone()), &eta(y.clone()), 2).unwrap();
        assert_eq!(s, eta(deep_sum(&x, &y, 1).unwrap()));

        let alpha = Scalar::real(3.0);
        assert_eq!(deep_scale(alpha, &eta(x.clone()), 2).unwrap(), eta(vec1(&[(k(false), 3.0)])));
        assert_eq!(deep_scale(Scalar::real(2.0), &vec1(&[(k(false), 0.5)]), 1).unwrap(), x);
    }

    #[test]
    fn domains_mirror_types() {
        use crate::syntax::parse_type;
        assert_eq!(
            interpret_type(&parse_type("S(B)").unwrap()),
            SemDomain::SpanDom(Box::new(SemDomain::BoolSet(1)))
        );
        assert_eq!(
            interpret_type(&parse_type("B * B").unwrap()),
            SemDomain::ProdDom(Box::new(SemDomain::BoolSet(1)), Box::new(SemDomain::BoolSet(1)))
        );
        let ssb = interpret_type(&parse_type("S(S(B))").unwrap());
        assert_ne!(ssb, interpret_type(&parse_type("S(B)").unwrap()));
        assert!(ssb.contains(&eta(eta(k(true)))));
        assert!(!ssb.contains(&eta(k(true))));
    }
}
