//! Terms, kept in canonical form by the smart constructors.
//!
//! Sums are flattened and sorted (alpha-invariantly), products are
//! right-nested lists.

use super::scalar::{Scalar, TOL};
use super::types::Type;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Lam(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Ket0,
    Ket1,
    /// `if? then else`, a function of type `B ⇒ A`.
    IfTe(Box<Term>, Box<Term>),
    /// At least two summands, flattened and sorted.
    Sum(Vec<Term>),
    Scale(Scalar, Box<Term>),
    /// The null vector; `Zero(A)` has type `S A`.
    Zero(Type),
    Prod(Box<Term>, Box<Term>),
    Head(Box<Term>),
    Tail(Box<Term>),
    Meas(usize, Box<Term>),
    CastR(Box<Term>),
    CastL(Box<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn lam(x: &str, ty: Type, body: Term) -> Term {
        Term::Lam(x.to_string(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn if_te(t: Term, r: Term) -> Term {
        Term::IfTe(Box::new(t), Box::new(r))
    }

    pub fn scale(s: Scalar, t: Term) -> Term {
        Term::Scale(s, Box::new(t))
    }

    pub fn head(t: Term) -> Term {
        Term::Head(Box::new(t))
    }

    pub fn tail(t: Term) -> Term {
        Term::Tail(Box::new(t))
    }

    pub fn meas(j: usize, t: Term) -> Term {
        Term::Meas(j, Box::new(t))
    }

    pub fn cast_r(t: Term) -> Term {
        Term::CastR(Box::new(t))
    }

    pub fn cast_l(t: Term) -> Term {
        Term::CastL(Box::new(t))
    }

    /// Flattened, sorted sum. A single summand is returned as is.
    pub fn sum(ts: Vec<Term>) -> Term {
        let mut flat = Vec::with_capacity(ts.len());
        for t in ts {
            match t {
                Term::Sum(inner) => flat.extend(inner),
                t => flat.push(t),
            }
        }
        assert!(!flat.is_empty(), "empty sum");
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        flat.sort_by_cached_key(|t| t.alpha_key());
        Term::Sum(flat)
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::sum(vec![a, b])
    }

    /// Right-nested product.
    pub fn prod(a: Term, b: Term) -> Term {
        match a {
            Term::Prod(x, y) => Term::prod(*x, Term::prod(*y, b)),
            a => Term::Prod(Box::new(a), Box::new(b)),
        }
    }

    /// Builds a list from its elements; panics on an empty list.
    pub fn from_list(mut elems: Vec<Term>) -> Term {
        let mut acc = elems.pop().expect("empty product");
        while let Some(e) = elems.pop() {
            acc = Term::prod(e, acc);
        }
        acc
    }

    /// Elements of a list (a single element if not a product).
    pub fn list(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Term::Prod(a, b) = cur {
            out.push(&**a);
            cur = b;
        }
        out.push(cur);
        out
    }

    pub fn bit(b: bool) -> Term {
        if b {
            Term::Ket1
        } else {
            Term::Ket0
        }
    }

    /// `|b1…bn>` as a list of single kets.
    pub fn ket(bits: &[bool]) -> Term {
        Term::from_list(bits.iter().map(|&b| Term::bit(b)).collect())
    }

    /// `|k>` on `n` qubits, most significant bit first.
    pub fn ket_index(k: usize, n: usize) -> Term {
        let bits: Vec<bool> = (0..n).map(|h| (k >> (n - 1 - h)) & 1 == 1).collect();
        Term::ket(&bits)
    }

    /// The bits of a ket list, if the term is one.
    pub fn ket_bits(&self) -> Option<Vec<bool>> {
        self.list()
            .into_iter()
            .map(|e| match e {
                Term::Ket0 => Some(false),
                Term::Ket1 => Some(true),
                _ => None,
            })
            .collect()
    }

    /// `|+>`
    pub fn ket_plus() -> Term {
        let h = Scalar::real(std::f64::consts::FRAC_1_SQRT_2);
        Term::scale(h, Term::plus(Term::Ket0, Term::Ket1))
    }

    /// `|->`
    pub fn ket_minus() -> Term {
        let h = Scalar::real(std::f64::consts::FRAC_1_SQRT_2);
        Term::scale(
            h,
            Term::plus(Term::Ket0, Term::scale(Scalar::real(-1.0), Term::Ket1)),
        )
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Ket0 | Term::Ket1 | Term::Zero(_) => vec![],
            Term::Lam(_, _, b) => vec![b],
            Term::App(a, b) | Term::IfTe(a, b) | Term::Prod(a, b) => vec![a, b],
            Term::Sum(ts) => ts.iter().collect(),
            Term::Scale(_, b)
            | Term::Head(b)
            | Term::Tail(b)
            | Term::Meas(_, b)
            | Term::CastR(b)
            | Term::CastL(b) => vec![b],
        }
    }

    /// Rebuilds the node with new children (same arity), re-canonicalizing.
    pub fn with_children(&self, cs: Vec<Term>) -> Term {
        let mut it = cs.into_iter();
        let mut next = || it.next().expect("missing child");
        match self {
            Term::Var(_) | Term::Ket0 | Term::Ket1 | Term::Zero(_) => self.clone(),
            Term::Lam(x, ty, _) => Term::Lam(x.clone(), ty.clone(), Box::new(next())),
            Term::App(..) => {
                let f = next();
                Term::app(f, next())
            }
            Term::IfTe(..) => {
                let t = next();
                Term::if_te(t, next())
            }
            Term::Prod(..) => {
                let a = next();
                Term::prod(a, next())
            }
            Term::Sum(ts) => Term::sum((0..ts.len()).map(|_| next()).collect()),
            Term::Scale(s, _) => Term::scale(*s, next()),
            Term::Head(_) => Term::head(next()),
            Term::Tail(_) => Term::tail(next()),
            Term::Meas(j, _) => Term::meas(*j, next()),
            Term::CastR(_) => Term::cast_r(next()),
            Term::CastL(_) => Term::cast_l(next()),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Subterm at a child-index path.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i).and_then(|c| c.at(rest)),
        }
    }

    /// Replaces the subterm at `path`; the result is re-canonicalized.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => {
                let cs: Vec<Term> = self
                    .children()
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| {
                        if k == i {
                            c.replace_at(rest, new.clone())
                        } else {
                            c.clone()
                        }
                    })
                    .collect();
                self.with_children(cs)
            }
        }
    }

    /// Recursively rebuilds with the smart constructors.
    pub fn canonicalize(&self) -> Term {
        let cs = self.children().into_iter().map(|c| c.canonicalize()).collect();
        self.with_children(cs)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Membership in the set of basis terms.
    pub fn is_basis(&self) -> bool {
        match self {
            Term::Var(_) | Term::Lam(..) | Term::Ket0 | Term::Ket1 | Term::IfTe(..) => true,
            Term::Prod(a, b) => a.is_basis() && b.is_basis(),
            _ => false,
        }
    }

    /// Membership in the set of values.
    pub fn is_value(&self) -> bool {
        match self {
            Term::Sum(ts) => ts.iter().all(|t| t.is_value()),
            Term::Zero(_) => true,
            Term::Scale(_, v) => v.is_value(),
            Term::Prod(a, b) => a.is_value() && b.is_value(),
            t => t.is_basis(),
        }
    }

    pub fn contains_meas(&self) -> bool {
        matches!(self, Term::Meas(..)) || self.children().iter().any(|c| c.contains_meas())
    }

    /// Substitutes the closed term `r` for the free occurrences of `x`.
    pub fn substitute(&self, x: &str, r: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => r.clone(),
            Term::Var(_) | Term::Ket0 | Term::Ket1 | Term::Zero(_) => self.clone(),
            Term::Lam(y, _, _) if y == x => self.clone(),
            _ => {
                let cs = self
                    .children()
                    .into_iter()
                    .map(|c| c.substitute(x, r))
                    .collect();
                self.with_children(cs)
            }
        }
    }

    /// Binder names replaced by their depth; sums re-sorted. Two terms are
    /// alpha-equivalent exactly when their keys are equal.
    pub fn alpha_key(&self) -> Term {
        fn go(t: &Term, env: &mut Vec<(String, String)>) -> Term {
            match t {
                Term::Var(x) => match env.iter().rev().find(|(n, _)| n == x) {
                    Some((_, k)) => Term::Var(k.clone()),
                    None => t.clone(),
                },
                Term::Lam(x, ty, b) => {
                    let k = format!("#{}", env.len());
                    env.push((x.clone(), k.clone()));
                    let body = go(b, env);
                    env.pop();
                    Term::Lam(k, ty.clone(), Box::new(body))
                }
                Term::Sum(ts) => {
                    let mut v: Vec<Term> = ts.iter().map(|c| go(c, env)).collect();
                    v.sort();
                    Term::Sum(v)
                }
                _ => {
                    let cs = t.children().into_iter().map(|c| go(c, env)).collect();
                    t.with_children_raw(cs)
                }
            }
        }
        go(self, &mut Vec::new())
    }

    /// Like `with_children` but without re-sorting (keys must not be
    /// re-sorted by alpha keys again).
    fn with_children_raw(&self, cs: Vec<Term>) -> Term {
        match self {
            Term::Sum(_) => Term::Sum(cs),
            _ => self.with_children(cs),
        }
    }

    /// Alpha-equivalence modulo AC with scalar tolerance.
    pub fn term_eq(&self, other: &Term) -> bool {
        approx_eq(&self.canonicalize().alpha_key(), &other.canonicalize().alpha_key())
    }

    /// Collects `(path, subterm)` pairs in pre-order.
    pub fn subterms(&self) -> Vec<(Vec<usize>, &Term)> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Term)>) {
            out.push((path.clone(), t));
            for (i, c) in t.children().into_iter().enumerate() {
                path.push(i);
                go(c, path, out);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

fn approx_eq(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Scale(s, x), Term::Scale(t, y)) => s.approx_eq(*t, TOL) && approx_eq(x, y),
        (Term::Sum(xs), Term::Sum(ys)) => {
            if xs.len() != ys.len() {
                return false;
            }
            let mut used = vec![false; ys.len()];
            xs.iter().all(|x| {
                match ys
                    .iter()
                    .enumerate()
                    .find(|(i, y)| !used[*i] && approx_eq(x, y))
                {
                    Some((i, _)) => {
                        used[i] = true;
                        true
                    }
                    None => false,
                }
            })
        }
        (Term::Lam(x, s, p), Term::Lam(y, t, q)) => x == y && s == t && approx_eq(p, q),
        (Term::Meas(i, p), Term::Meas(j, q)) => i == j && approx_eq(p, q),
        _ => {
            if std::mem::discriminant(a) != std::mem::discriminant(b) {
                return false;
            }
            match (a, b) {
                (Term::Var(x), Term::Var(y)) => x == y,
                (Term::Zero(s), Term::Zero(t)) => s == t,
                _ => {
                    let (ca, cb) = (a.children(), b.children());
                    ca.len() == cb.len() && ca.iter().zip(cb).all(|(x, y)| approx_eq(x, y))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }

    #[test]
    fn sums_flatten_and_sort() {
        let t = Term::plus(Term::plus(Term::Ket0, Term::Ket1), Term::Ket0);
        assert_eq!(t, Term::Sum(vec![Term::Ket0, Term::Ket0, Term::Ket1]));
        let u = Term::plus(Term::Ket1, Term::Ket0);
        assert_eq!(u, Term::Sum(vec![Term::Ket0, Term::Ket1]));
    }

    #[test]
    fn products_nest_right() {
        let t = Term::prod(Term::prod(Term::Ket0, Term::Ket1), Term::Ket0);
        assert_eq!(t, Term::ket(&[false, true, false]));
        assert_eq!(t.ket_bits(), Some(vec![false, true, false]));
        assert_eq!(Term::ket_index(2, 3), Term::ket(&[false, true, false]));
    }

    #[test]
    fn term_eq_alpha_ac_and_scalars() {
        let a = Term::lam("x", Type::B, x());
        let b = Term::lam("y", Type::B, Term::var("y"));
        assert!(a.term_eq(&b));
        assert!(Term::plus(Term::Ket0, Term::Ket1).term_eq(&Term::plus(Term::Ket1, Term::Ket0)));
        let near = Term::scale(Scalar::real(0.9999999999), Term::Ket0);
        assert!(!near.term_eq(&Term::Ket0));
        let near2 = Term::scale(Scalar::real(0.5 + 1e-12), Term::Ket0);
        assert!(near2.term_eq(&Term::scale(Scalar::real(0.5), Term::Ket0)));
    }

    #[test]
    fn alpha_invariant_sum_order() {
        let f = |n: &str| Term::lam(n, Type::B, Term::prod(Term::var(n), Term::Ket1));
        let g = |n: &str| Term::lam(n, Type::B, Term::prod(Term::Ket0, Term::var(n)));
        let s1 = Term::plus(f("a"), g("z"));
        let s2 = Term::plus(f("z"), g("a"));
        assert!(s1.term_eq(&s2));
        if let (Term::Sum(v1), Term::Sum(v2)) = (&s1, &s2) {
            assert!(v1[0].term_eq(&v2[0]));
        }
    }

    #[test]
    fn substitution() {
        let t = Term::prod(x(), x());
        assert_eq!(t.substitute("x", &Term::Ket0), Term::ket(&[false, false]));
        assert_eq!(x().substitute("x", &Term::Ket1), Term::Ket1);
        let l = Term::lam("y", Type::B, x());
        assert_eq!(l.substitute("x", &Term::Ket0), Term::lam("y", Type::B, Term::Ket0));
        let shadow = Term::lam("x", Type::B, x());
        assert_eq!(shadow.substitute("x", &Term::Ket0), shadow);
        // substituting a sum into a sum re-flattens
        let s = Term::plus(x(), Term::Ket1);
        assert_eq!(
            s.substitute("x", &Term::plus(Term::Ket0, Term::Ket1)),
            Term::Sum(vec![Term::Ket0, Term::Ket1, Term::Ket1])
        );
    }

    #[test]
    fn classes() {
        assert!(Term::ket(&[true, false]).is_basis());
        assert!(!Term::plus(Term::Ket0, Term::Ket1).is_basis());
        assert!(Term::ket_plus().is_value());
        assert!(Term::Zero(Type::B).is_value());
        assert!(!Term::app(Term::lam("x", Type::B, x()), Term::Ket0).is_value());
        assert!(!Term::cast_r(Term::ket(&[false, false])).is_value());
    }

    #[test]
    fn paths() {
        let t = Term::app(Term::lam("x", Type::B, x()), Term::Ket0);
        assert_eq!(t.at(&[0, 0]), Some(&x()));
        let u = t.replace_at(&[1], Term::Ket1);
        assert_eq!(u, Term::app(Term::lam("x", Type::B, x()), Term::Ket1));
        assert_eq!(t.subterms().len(), 4);
    }
}
