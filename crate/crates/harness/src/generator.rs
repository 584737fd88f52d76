//! Seeded generation of closed well-typed terms, following the typing rules
//! backwards from a target type.

use lams_core::ast::{Scalar, Term, Type};
use lams_core::typing::type_of;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Attempts before falling back to a plain inhabitant.
const ATTEMPTS: usize = 64;

fn t(s: &str) -> Type {
    lams_core::syntax::parse_type(s).expect("built-in type")
}

/// Target types the generator draws from.
pub fn universe() -> Vec<Type> {
    [
        "B", "B * B", "B * B * B", "S(B)", "S(B * B)", "S(B * B * B)", "S(B) * B", "B * S(B)",
        "S(S(B))", "B => B", "B => S(B)", "S(B) => S(B)", "B * B => S(B * B)", "S(B) => B",
        "S(B => S(B))",
    ]
    .iter()
    .map(|s| t(s))
    .collect()
}

/// Scalars with short exact forms and a few arbitrary complex values.
fn scalar(rng: &mut ChaCha8Rng) -> Scalar {
    match rng.gen_range(0..6) {
        0 => Scalar::real(std::f64::consts::FRAC_1_SQRT_2),
        1 => Scalar::real(-1.0),
        2 => Scalar::real(2.0),
        3 => Scalar::real(0.5),
        4 => Scalar::new(0.0, 1.0),
        _ => Scalar::new(
            (rng.gen_range(-8..=8) as f64) / 4.0,
            (rng.gen_range(-8..=8) as f64) / 4.0,
        ),
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
    fresh: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            fresh: 0,
        }
    }

    fn var(&mut self) -> String {
        self.fresh += 1;
        format!("x{}", self.fresh)
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn ket(&mut self, n: usize) -> Term {
        let bits: Vec<bool> = (0..n).map(|_| self.rng.gen()).collect();
        Term::ket(&bits)
    }

    /// A small closed inhabitant, used when the budget runs out.
    pub fn inhabit(&mut self, ty: &Type) -> Term {
        if let Some(n) = ty.as_bn() {
            return self.ket(n);
        }
        match ty {
            Type::S(a) => match a.as_bn() {
                Some(n) if self.coin(0.7) => {
                    let k = self.ket(n);
                    if self.coin(0.5) {
                        k
                    } else {
                        Term::plus(k, self.ket(n))
                    }
                }
                _ => Term::Zero((**a).clone()),
            },
            Type::Prod(a, b) => Term::prod(self.inhabit(a), self.inhabit(b)),
            Type::Arrow(p, r) => {
                let x = self.var();
                let body = match &**p {
                    p if p.as_bn().is_some() => self.inhabit(r),
                    p if **r == *p => Term::var(&x),
                    Type::S(q) if q.as_bn().is_some() => {
                        let n = q.as_bn().unwrap();
                        let y = self.var();
                        let inner = Term::lam(&y, Type::bn(n), self.inhabit(r));
                        Term::app(inner, Term::meas(n, Term::var(&x)))
                    }
                    _ => Term::app(self.inhabit(&Type::arrow((**p).clone(), (**r).clone())), Term::var(&x)),
                };
                Term::lam(&x, (**p).clone(), body)
            }
            Type::B => unreachable!("B is B^1"),
        }
    }

    /// A closed term whose minimal type is at most `ty` up to lifting, with
    /// `basis` variables (name, B^n) in scope.
    fn term(&mut self, ty: &Type, size: usize, basis: &[(String, usize)]) -> Term {
        if size <= 1 {
            return self.leaf(ty, basis);
        }
        let s = size - 1;
        if let Some(n) = ty.as_bn() {
            return self.basis_term(n, s, basis);
        }
        match ty {
            Type::S(a) => self.span_term(a, s, basis),
            Type::Prod(a, b) => match self.rng.gen_range(0..4) {
                0 => self.via_basis_lambda(ty, s, basis),
                _ => {
                    let (l, r) = self.split(s);
                    Term::prod(self.term(a, l, basis), self.term(b, r, basis))
                }
            },
            Type::Arrow(p, r) => self.function(p, r, s, basis),
            Type::B => unreachable!("B is B^1"),
        }
    }

    fn leaf(&mut self, ty: &Type, basis: &[(String, usize)]) -> Term {
        if let Some(n) = ty.as_bn() {
            let vars: Vec<&(String, usize)> = basis.iter().filter(|(_, m)| *m == n).collect();
            if !vars.is_empty() && self.coin(0.5) {
                return Term::var(&vars.choose(&mut self.rng).unwrap().0);
            }
        }
        self.inhabit(ty)
    }

    fn split(&mut self, s: usize) -> (usize, usize) {
        let l = self.rng.gen_range(0..=s);
        (l.max(1), (s - l).max(1))
    }

    fn basis_term(&mut self, n: usize, s: usize, basis: &[(String, usize)]) -> Term {
        match self.rng.gen_range(0..8) {
            0 | 1 if n >= 2 => {
                let (l, r) = self.split(s);
                Term::prod(self.basis_term(1, l, basis), self.basis_term(n - 1, r, basis))
            }
            2 if n == 1 => Term::head(self.term(&Type::bn(2), s, basis)),
            3 if n <= 2 => Term::tail(self.term(&Type::bn(n + 1), s, basis)),
            4 => self.via_basis_lambda(&Type::bn(n), s, basis),
            5 => {
                let (l, r) = self.split(s);
                let (l1, l2) = self.split(l);
                let cond = Term::if_te(self.term(&Type::bn(n), l1, basis), self.term(&Type::bn(n), l2, basis));
                Term::app(cond, self.term(&Type::B, r, basis))
            }
            6 => Term::meas(n, self.term(&Type::s(Type::bn(n)), s, basis)),
            _ => self.leaf(&Type::bn(n), basis),
        }
    }

    /// `(λx:B^m. body) arg` with `body : ty` and `x` duplicable.
    fn via_basis_lambda(&mut self, ty: &Type, s: usize, basis: &[(String, usize)]) -> Term {
        let m = self.rng.gen_range(1..=2);
        let x = self.var();
        let mut inner = basis.to_vec();
        inner.push((x.clone(), m));
        let (l, r) = self.split(s);
        let body = self.term(ty, l, &inner);
        Term::app(Term::lam(&x, Type::bn(m), body), self.term(&Type::bn(m), r, basis))
    }

    fn span_term(&mut self, a: &Type, s: usize, basis: &[(String, usize)]) -> Term {
        let span = Type::s(a.clone());
        match self.rng.gen_range(0..10) {
            0 => self.term(a, s, basis),
            1 => Term::Zero(a.clone()),
            2 => {
                let c = scalar(&mut self.rng);
                let body = if self.coin(0.5) { span.clone() } else { a.clone() };
                Term::scale(c, self.term(&body, s, basis))
            }
            3 | 4 => {
                let (l, r) = self.split(s);
                let ta = if self.coin(0.5) { span.clone() } else { a.clone() };
                let tb = if self.coin(0.5) { span.clone() } else { a.clone() };
                Term::plus(self.term(&ta, l, basis), self.term(&tb, r, basis))
            }
            5 if a.is_qubit() => {
                // ⇒ES: a basis function applied to a superposed argument
                let m = self.rng.gen_range(1..=2);
                let (l, r) = self.split(s);
                let f = self.term(&Type::arrow(Type::bn(m), a.clone()), l, basis);
                Term::app(f, self.term(&Type::s(Type::bn(m)), r, basis))
            }
            6 if a.list().len() >= 2 => {
                let elems: Vec<Type> = a.list().into_iter().cloned().collect();
                let mut lifted = elems.clone();
                if self.coin(0.5) {
                    lifted[0] = Type::s(lifted[0].clone());
                    Term::cast_r(self.term(&Type::from_list(lifted), s, basis))
                } else {
                    let last = lifted.len() - 1;
                    lifted[last] = Type::s(lifted[last].clone());
                    Term::cast_l(self.term(&Type::from_list(lifted), s, basis))
                }
            }
            7 if a.is_qubit() => {
                // β_n: an abstraction over a superposed parameter
                let p = if self.coin(0.5) { t("S(B)") } else { t("S(B * B)") };
                let x = self.var();
                let (l, r) = self.split(s);
                let body = self.linear(&x, &p, &span, l, basis);
                Term::app(Term::lam(&x, p.clone(), body), self.term(&p, r, basis))
            }
            8 => self.via_basis_lambda(&span, s, basis),
            _ => self.leaf(&span, basis),
        }
    }

    fn function(&mut self, p: &Type, r: &Type, s: usize, basis: &[(String, usize)]) -> Term {
        if let Some(m) = p.as_bn() {
            if m == 1 && self.coin(0.4) {
                let (l, rr) = self.split(s);
                return Term::if_te(self.term(r, l, basis), self.term(r, rr, basis));
            }
            let x = self.var();
            let mut inner = basis.to_vec();
            inner.push((x.clone(), m));
            let body = self.term(r, s, &inner);
            return Term::lam(&x, p.clone(), body);
        }
        let x = self.var();
        let body = self.linear(&x, p, r, s, basis);
        Term::lam(&x, p.clone(), body)
    }

    /// A term of type `r` using the linear variable `x : p` exactly once.
    fn linear(&mut self, x: &str, p: &Type, r: &Type, s: usize, basis: &[(String, usize)]) -> Term {
        let v = Term::var(x);
        let n = p.un_s().as_bn();
        for _ in 0..4 {
            match self.rng.gen_range(0..7) {
                0 if r == p => return v,
                1 if r == p => return Term::scale(scalar(&mut self.rng), v),
                2 if r == p && s >= 2 => return Term::plus(v, self.term(p, s - 1, basis)),
                3 if s >= 2 => {
                    if let (Some(m), Type::S(res)) = (n, r) {
                        let f = self.term(&Type::arrow(Type::bn(m), (**res).clone()), s - 1, basis);
                        return Term::app(f, v);
                    }
                }
                4 if s >= 2 => {
                    if let Type::Prod(a, b) = r {
                        let (l, rr) = self.split(s - 1);
                        return if self.coin(0.5) {
                            Term::prod(self.linear(x, p, a, l, basis), self.term(b, rr, basis))
                        } else {
                            Term::prod(self.term(a, l, basis), self.linear(x, p, b, rr, basis))
                        };
                    }
                }
                5 => {
                    if let Some(m) = n {
                        // measure, then use the outcome as a duplicable variable
                        let j = self.rng.gen_range(1..=m);
                        if j == m {
                            let y = self.var();
                            let mut inner = basis.to_vec();
                            inner.push((y.clone(), m));
                            let body = self.term(r, s.saturating_sub(1).max(1), &inner);
                            return Term::app(Term::lam(&y, Type::bn(m), body), Term::meas(m, v));
                        }
                        let mr = Type::prod(Type::bn(j), Type::s(Type::bn(m - j)));
                        if *r == mr {
                            return Term::meas(j, v);
                        }
                    }
                }
                6 if s >= 2 => {
                    let f = self.term(&Type::arrow(p.clone(), r.clone()), s - 1, basis);
                    return Term::app(f, v);
                }
                _ => {}
            }
        }
        if r == p {
            return v;
        }
        let f = self.inhabit(&Type::arrow(p.clone(), r.clone()));
        Term::app(f, v)
    }

    /// A closed term of target type `ty` and size at most `max`, with its
    /// minimal type. Draws that come out far below their budget are
    /// retried; the largest draw is kept, and a plain inhabitant is the
    /// last resort.
    pub fn typed(&mut self, ty: &Type, max: usize) -> (Term, Type) {
        let mut best: Option<(Term, Type)> = None;
        for _ in 0..ATTEMPTS {
            let budget = self.rng.gen_range(max.div_ceil(2).max(1)..=max.max(1));
            let t = self.term(ty, budget, &[]).canonicalize();
            if t.size() > max || !t.is_closed() {
                continue;
            }
            if let Ok(a) = type_of(&t) {
                if 2 * t.size() >= budget {
                    return (t, a);
                }
                if best.as_ref().is_none_or(|(b, _)| b.size() < t.size()) {
                    best = Some((t, a));
                }
            }
        }
        best.unwrap_or_else(|| {
            let t = self.inhabit(ty).canonicalize();
            let a = type_of(&t).expect("inhabitants are typable");
            (t, a)
        })
    }
}

/// A closed well-typed term of size at most `size`, deterministic in `seed`.
pub fn gen_typed_term(seed: u64, size: usize) -> (Term, Type) {
    let mut g = Gen::new(seed);
    let u = universe();
    let ty = u.choose(&mut g.rng).expect("non-empty universe").clone();
    g.typed(&ty, size)
}

/// A closed term of a given target type.
pub fn gen_at(seed: u64, ty: &Type, size: usize) -> (Term, Type) {
    Gen::new(seed).typed(ty, size)
}

/// Programs for the statevector oracle: states over at most three qubits
/// built from kets, sums, scalars, products with casts and gate
/// applications, optionally measured at the root.
pub fn gen_fragment(seed: u64) -> Term {
    let mut g = Gen::new(seed);
    let n = g.rng.gen_range(1..=3);
    // the oracle fragment stops at one span layer over the qubits
    let st = loop {
        let st = fragment_state(&mut g, n, 3);
        if type_of(&st).is_ok_and(|a| single_span(&a)) {
            break st;
        }
    };
    let t = if g.coin(0.4) {
        let j = g.rng.gen_range(1..=n);
        Term::meas(j, st)
    } else {
        st
    };
    t.canonicalize()
}

/// `B^n` or `S(B^n)`.
pub fn single_span(a: &Type) -> bool {
    match a {
        Type::S(inner) => inner.as_bn().is_some(),
        a => a.as_bn().is_some(),
    }
}

fn gate(g: &mut Gen, n: usize) -> Term {
    let src = match (n, g.rng.gen_range(0..4)) {
        (1, 0) => r"\x:B. if x then |-> else |+>",
        (1, 1) => r"\x:B. if x then |0> else |1>",
        (1, 2) => r"\x:S(B). x",
        (1, _) => r"\x:B. if x then (0.6.|0> + 0.8.|1>) else |1>",
        (2, 0) => r"\x:B * B. (head x) * (if (head x) then (if (tail x) then |0> else |1>) else tail x)",
        (2, 1) => r"\x:B * B. (tail x) * (head x)",
        (2, 2) => r"\x:B * B. castL ((head x) * ((\y:B. if y then |-> else |+>) (tail x)))",
        (2, _) => r"\x:S(B * B). x",
        (_, 0) => r"\x:B * B * B. (tail x) * (head x)",
        (_, 1) => r"\x:B * B * B. (head x) * (if (head x) then tail x else |1> * |0>)",
        _ => r"\x:S(B * B * B). x",
    };
    lams_core::syntax::parse_term(src).expect("built-in gate")
}

/// Sums, scalings and gate applications over flat states.
fn fragment_state(g: &mut Gen, n: usize, depth: usize) -> Term {
    let pick = if depth == 0 { 0 } else { g.rng.gen_range(0..5) };
    match pick {
        1 => Term::scale(scalar(&mut g.rng), fragment_state(g, n, depth - 1)),
        2 => Term::plus(fragment_state(g, n, depth - 1), fragment_state(g, n, depth - 1)),
        3 => Term::app(gate(g, n), flat_state(g, n, depth - 1)),
        4 if n == 2 => Term::app(
            lams_core::syntax::parse_term(r"\x:B. x * x").expect("built-in gate"),
            flat_state(g, 1, depth - 1),
        ),
        _ => flat_state(g, n, depth),
    }
}

/// States of type `S(B^n)` (or `B^n`) without gate applications, so they
/// fit a basis parameter.
fn flat_state(g: &mut Gen, n: usize, depth: usize) -> Term {
    let pick = if depth == 0 { 0 } else { g.rng.gen_range(0..4) };
    match pick {
        1 => Term::scale(scalar(&mut g.rng), flat_state(g, n, depth - 1)),
        2 => Term::plus(flat_state(g, n, depth - 1), flat_state(g, n, depth - 1)),
        3 if n >= 2 => {
            let a = g.rng.gen_range(1..n);
            let l = flat_state(g, a, depth - 1);
            let r = flat_state(g, n - a, depth - 1);
            Term::cast_l(Term::cast_r(Term::prod(l, r)))
        }
        _ => {
            if g.coin(0.2) {
                Term::Zero(Type::bn(n))
            } else {
                g.ket(n)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lams_core::typing::{check_type, Context, Rule};
    use std::collections::BTreeSet;

    #[test]
    fn generated_terms_check_at_their_type() {
        for seed in 0..300 {
            let (t, a) = gen_typed_term(seed, 30);
            assert!(t.size() <= 30, "{t}");
            assert!(check_type(&Context::new(), &t, &a).is_ok(), "{t} : {a}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(gen_typed_term(1, 10), gen_typed_term(1, 10));
        assert_eq!(gen_fragment(7), gen_fragment(7));
    }

    #[test]
    fn inhabitants_type_at_every_universe_type() {
        let mut g = Gen::new(3);
        for ty in universe() {
            let t = g.inhabit(&ty);
            let d = check_type(&Context::new(), &t, &ty);
            assert!(d.is_ok(), "{t} : {ty}: {d:?}");
        }
    }

    #[test]
    fn fragment_programs_type() {
        for seed in 0..200 {
            let t = gen_fragment(seed);
            assert!(type_of(&t).is_ok(), "{t}: {:?}", type_of(&t));
            let state = match &t {
                Term::Meas(_, b) => &**b,
                t => t,
            };
            assert!(single_span(&type_of(state).unwrap()), "{t}");
        }
    }

    #[test]
    fn rule_coverage() {
        let mut seen = BTreeSet::new();
        for seed in 0..2000 {
            let (t, a) = gen_typed_term(seed, 30);
            let d = check_type(&Context::new(), &t, &a).unwrap();
            seen.extend(d.rules().into_iter().map(|r| r.name()));
            let lifted = check_type(&Context::new(), &t, &Type::s(a)).unwrap();
            seen.extend(lifted.rules().into_iter().map(|r| r.name()));
        }
        let missing: Vec<&str> = Rule::ALL
            .iter()
            .filter(|r| **r != Rule::Par)
            .map(|r| r.name())
            .filter(|n| !seen.contains(n))
            .collect();
        assert!(missing.is_empty(), "{missing:?}");
    }
}
