//! Root rewrite rules, in priority order within each node kind.

use super::engine::Rewriter;
use super::measure::{ket_sum, measure_project};
use super::{RewriteError, RuleName};
use crate::ast::{Dist, Scalar, Term, Type};
use crate::typing::{derivable, Context};

pub(super) struct Found {
    pub first_only: bool,
    pub out: Vec<(RuleName, Dist<Term>)>,
}

impl Found {
    fn done(&self) -> bool {
        self.first_only && !self.out.is_empty()
    }

    fn push(&mut self, rule: RuleName, t: Term) {
        if !self.done() {
            self.out.push((rule, Dist::point(t)));
        }
    }
}

fn app(f: &Term, a: &Term) -> Term {
    Term::app(f.clone(), a.clone())
}

/// Splits a list into its first element and the rest.
fn split_first(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::Prod(a, b) => Some((a, b)),
        _ => None,
    }
}

/// Splits a list into the prefix and its last element.
fn split_last(t: &Term) -> Option<(Term, &Term)> {
    let elems = t.list();
    if elems.len() < 2 {
        return None;
    }
    let (last, prefix) = elems.split_last()?;
    Some((Term::from_list(prefix.iter().map(|e| (*e).clone()).collect()), last))
}

fn split_type_first(a: &Type) -> Option<(&Type, Type)> {
    let elems = a.list();
    (elems.len() >= 2).then(|| {
        (
            elems[0],
            Type::from_list(elems[1..].iter().map(|e| (*e).clone()).collect()),
        )
    })
}

fn split_type_last(a: &Type) -> Option<(Type, &Type)> {
    let elems = a.list();
    let (last, prefix) = elems.split_last()?;
    (!prefix.is_empty())
        .then(|| (Type::from_list(prefix.iter().map(|e| (*e).clone()).collect()), *last))
}

impl Rewriter {
    pub(super) fn root_rules(&self, t: &Term, found: &mut Found) -> Result<(), RewriteError> {
        match t {
            Term::App(f, a) => self.app_rules(f, a, found),
            Term::Sum(ts) => {
                sum_rules(ts, found);
                Ok(())
            }
            Term::Scale(alpha, b) => self.scale_rules(*alpha, b, found),
            Term::Head(b) | Term::Tail(b) => {
                if let Some((h, rest)) = split_first(b) {
                    if h.is_basis() {
                        match t {
                            Term::Head(_) => found.push(RuleName::Head, h.clone()),
                            _ => found.push(RuleName::Tail, rest.clone()),
                        }
                    }
                }
                Ok(())
            }
            Term::Meas(j, b) => {
                if let Term::Zero(a) = &**b {
                    // span layers over a zero carry no amplitude
                    let mut a = a;
                    while let Type::S(inner) = a {
                        a = inner;
                    }
                    if let Some(n) = a.as_bn() {
                        found.push(RuleName::ProjZero, Term::ket(&vec![false; n]));
                    }
                } else if ket_sum(b).is_some() && !found.done() {
                    let d = measure_project(*j, b)?;
                    found.out.push((RuleName::Proj, d));
                }
                Ok(())
            }
            Term::CastR(b) => self.cast_r_rules(b, found),
            Term::CastL(b) => self.cast_l_rules(b, found),
            _ => Ok(()),
        }
    }

    fn app_rules(&self, f: &Term, a: &Term, found: &mut Found) -> Result<(), RewriteError> {
        if let Term::Lam(x, p, body) = f {
            if p.as_bn().is_some() {
                if a.is_basis() && self.type_of(a)? == *p {
                    found.push(RuleName::BetaB, body.substitute(x, a));
                }
            } else if p.is_s() && derivable(&Context::new(), a, p) {
                found.push(RuleName::BetaN, body.substitute(x, a));
            }
        }
        if matches!(a, Term::Sum(_) | Term::Scale(..) | Term::Zero(_)) {
            if let Type::Arrow(p, r) = self.type_of(f)? {
                if p.as_bn().is_some() {
                    match a {
                        Term::Sum(us) => found.push(
                            RuleName::LinR,
                            Term::sum(us.iter().map(|u| app(f, u)).collect()),
                        ),
                        Term::Scale(alpha, u) => {
                            found.push(RuleName::LinRScal, Term::scale(*alpha, app(f, u)))
                        }
                        Term::Zero(z) if *z == *p => found.push(RuleName::LinRZero, Term::Zero(*r)),
                        _ => {}
                    }
                }
            }
        }
        match f {
            Term::Sum(fs) => found.push(
                RuleName::LinL,
                Term::sum(fs.iter().map(|g| app(g, a)).collect()),
            ),
            Term::Scale(alpha, g) => found.push(RuleName::LinLScal, Term::scale(*alpha, app(g, a))),
            // any arrow annotation, not only a basis parameter
            Term::Zero(Type::Arrow(_, r)) => found.push(RuleName::LinLZero, Term::Zero((**r).clone())),
            Term::IfTe(t1, t0) => match a {
                Term::Ket1 => found.push(RuleName::IfOne, (**t1).clone()),
                Term::Ket0 => found.push(RuleName::IfZero, (**t0).clone()),
                _ => {}
            },
            _ => {}
        }
        Ok(())
    }

    fn scale_rules(&self, alpha: Scalar, b: &Term, found: &mut Found) -> Result<(), RewriteError> {
        if alpha.is_one() {
            found.push(RuleName::Unit, b.clone());
        }
        if alpha.is_zero() && !found.done() {
            let ty = self.type_of(b)?;
            if ty.is_basis() {
                found.push(RuleName::ZeroScal, Term::Zero(ty));
            } else if let Type::S(inner) = ty {
                found.push(RuleName::ZeroScal, Term::Zero(*inner));
            }
        }
        match b {
            Term::Zero(_) => found.push(RuleName::Zero, b.clone()),
            Term::Scale(beta, u) => found.push(RuleName::Prod, Term::scale(alpha * *beta, (**u).clone())),
            Term::Sum(us) => found.push(
                RuleName::DistScal,
                Term::sum(us.iter().map(|u| Term::scale(alpha, u.clone())).collect()),
            ),
            _ => {}
        }
        Ok(())
    }

    fn cast_r_rules(&self, b: &Term, found: &mut Found) -> Result<(), RewriteError> {
        cast_common(b, Term::cast_r, found);
        if let Term::Zero(a) = b {
            if let Some((first, rest)) = split_type_first(a) {
                if let Type::S(inner) = first {
                    if inner.is_s() {
                        let ann = Type::prod((**inner).clone(), rest);
                        found.push(RuleName::DistCastZeroR, Term::cast_r(Term::Zero(ann)));
                    } else if inner.as_bn().is_some() {
                        let ann = Type::prod((**inner).clone(), rest);
                        found.push(RuleName::NeutCastZeroR, Term::Zero(ann));
                    }
                } else if first.as_bn().is_some() {
                    found.push(RuleName::NeutCastZeroR, b.clone());
                }
            }
        }
        if let Some((h, rest)) = split_first(b) {
            match h {
                Term::Sum(rs) => found.push(
                    RuleName::DistSumR,
                    Term::sum(
                        rs.iter()
                            .map(|r| Term::cast_r(Term::prod(r.clone(), rest.clone())))
                            .collect(),
                    ),
                ),
                Term::Scale(alpha, r) => found.push(
                    RuleName::DistScalR,
                    Term::scale(*alpha, Term::cast_r(Term::prod((**r).clone(), rest.clone()))),
                ),
                Term::Zero(phi) => {
                    if !found.done() {
                        let psi = self.type_of(rest)?;
                        found.push(RuleName::DistZeroR, Term::Zero(Type::prod(phi.clone(), psi)));
                    }
                }
                h if h.is_basis() => found.push(RuleName::NeutCastR, b.clone()),
                _ => {}
            }
        }
        Ok(())
    }

    fn cast_l_rules(&self, b: &Term, found: &mut Found) -> Result<(), RewriteError> {
        cast_common(b, Term::cast_l, found);
        if let Term::Zero(a) = b {
            if let Some((prefix, last)) = split_type_last(a) {
                if let Type::S(inner) = last {
                    if inner.is_s() {
                        let ann = Type::prod(prefix, (**inner).clone());
                        found.push(RuleName::DistCastZeroL, Term::cast_l(Term::Zero(ann)));
                    } else if inner.as_bn().is_some() {
                        let ann = Type::prod(prefix, (**inner).clone());
                        found.push(RuleName::NeutCastZeroL, Term::Zero(ann));
                    }
                } else if last.as_bn().is_some() {
                    found.push(RuleName::NeutCastZeroL, b.clone());
                }
            }
        }
        if let Some((prefix, last)) = split_last(b) {
            match last {
                Term::Sum(rs) => found.push(
                    RuleName::DistSumL,
                    Term::sum(
                        rs.iter()
                            .map(|r| Term::cast_l(Term::prod(prefix.clone(), r.clone())))
                            .collect(),
                    ),
                ),
                Term::Scale(alpha, r) => found.push(
                    RuleName::DistScalL,
                    Term::scale(*alpha, Term::cast_l(Term::prod(prefix.clone(), (**r).clone()))),
                ),
                Term::Zero(phi) => {
                    if !found.done() {
                        let psi = self.type_of(&prefix)?;
                        found.push(RuleName::DistZeroL, Term::Zero(Type::prod(psi, phi.clone())));
                    }
                }
                v if v.is_basis() => found.push(RuleName::NeutCastL, b.clone()),
                _ => {}
            }
        }
        Ok(())
    }
}

fn cast_common(b: &Term, cast: fn(Term) -> Term, found: &mut Found) {
    match b {
        Term::Sum(ts) => found.push(
            RuleName::DistCastSum,
            Term::sum(ts.iter().map(|t| cast(t.clone())).collect()),
        ),
        Term::Scale(alpha, t) => {
            found.push(RuleName::DistCastScal, Term::scale(*alpha, cast((**t).clone())))
        }
        _ => {}
    }
}

fn without(ts: &[Term], skip: &[usize], extra: Option<Term>) -> Term {
    let mut rest: Vec<Term> = ts
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, t)| t.clone())
        .collect();
    rest.extend(extra);
    Term::sum(rest)
}

fn sum_rules(ts: &[Term], found: &mut Found) {
    for (i, t) in ts.iter().enumerate() {
        if matches!(t, Term::Zero(_)) {
            found.push(RuleName::Neut, without(ts, &[i], None));
        }
    }
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            if found.done() {
                return;
            }
            fact_pair(ts, i, j, found);
        }
    }
}

fn fact_pair(ts: &[Term], i: usize, j: usize, found: &mut Found) {
    let (a, b) = (&ts[i], &ts[j]);
    let one = Scalar::ONE;
    if let (Term::Scale(x, t), Term::Scale(y, u)) = (a, b) {
        if t.term_eq(u) {
            let r = Term::scale(*x + *y, (**t).clone());
            found.push(RuleName::Fact, without(ts, &[i, j], Some(r)));
        }
    }
    for (s, t) in [(a, b), (b, a)] {
        if let Term::Scale(x, u) = s {
            if u.term_eq(t) {
                let r = Term::scale(*x + one, (**u).clone());
                found.push(RuleName::Fact1, without(ts, &[i, j], Some(r)));
            }
        }
    }
    if a.term_eq(b) {
        let r = Term::scale(Scalar::real(2.0), a.clone());
        found.push(RuleName::Fact2, without(ts, &[i, j], Some(r)));
    }
}
