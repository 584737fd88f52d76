//! Derivations as Kleisli arrows of the distribution monad.

use super::measure::sem_measure;
use super::value::{bilinear_pair, deep_scale, deep_sum, eta, interpret_type, mu, Combo, Env, FunBody, FunValue, SemValue};
use super::SemError;
use crate::ast::{Dist, Term, Type};
use crate::typing::{check_dist, check_type, Context, Derivation, Rule, Subject};
use std::sync::Arc;

pub type SemDist = Dist<SemValue>;

fn point(v: SemValue) -> SemDist {
    Dist::point(v)
}

fn norm(raw: Vec<(f64, SemValue)>) -> Result<SemDist, SemError> {
    Ok(Dist::normalize_by(raw, |a, b| a == b)?)
}

/// Kleisli extension: `f` applied to every outcome, results mixed.
pub fn bind(d: &SemDist, mut f: impl FnMut(&SemValue) -> Result<SemDist, SemError>) -> Result<SemDist, SemError> {
    let mut raw = Vec::new();
    for (p, v) in d.iter() {
        for (q, w) in f(v)?.into_entries() {
            raw.push((p * q, w));
        }
    }
    norm(raw)
}

/// The monoidal product of two distributions.
pub fn pair_dists(a: &SemDist, b: &SemDist) -> Result<SemDist, SemError> {
    bind(a, |x| bind(b, |y| Ok(point(SemValue::concat(x, y)))))
}

/// Applies a probabilistic map to every key of a combination, drawing the
/// keys independently.
fn map_combo(c: &Combo, mut f: impl FnMut(&SemValue) -> Result<SemDist, SemError>) -> Result<SemDist, SemError> {
    let mut acc: Vec<(f64, Vec<(SemValue, crate::ast::Scalar)>)> = vec![(1.0, Vec::new())];
    for (k, s) in c.terms() {
        let d = f(k)?;
        let mut next = Vec::with_capacity(acc.len() * d.len());
        for (p, terms) in &acc {
            for (q, v) in d.iter() {
                let mut t = terms.clone();
                t.push((v.clone(), *s));
                next.push((p * q, t));
            }
        }
        acc = next;
    }
    norm(
        acc.into_iter()
            .map(|(p, t)| (p, SemValue::Vec(Combo::from_terms(t))))
            .collect(),
    )
}

fn depth(a: &Type) -> usize {
    a.strip_s().0
}

/// Applies a function value to an argument.
pub fn apply(f: &SemValue, arg: SemValue) -> Result<SemDist, SemError> {
    let SemValue::Fun(fv) = f else {
        return Err(SemError::DomainMismatch(format!("{f} is not a function")));
    };
    let c = &fv.0;
    match &c.body {
        FunBody::Lambda { param, body } => {
            let mut env = c.env.clone();
            env.insert(param.clone(), arg);
            eval_derivation(body, &env)
        }
        FunBody::Cond { then, otherwise } => match arg {
            SemValue::Basis(true) => eval_derivation(then, &c.env),
            SemValue::Basis(false) => eval_derivation(otherwise, &c.env),
            v => Err(SemError::DomainMismatch(format!("condition {v} is not a bit"))),
        },
    }
}

/// Splits a tuple at its first (`right`) or last element and distributes
/// the combination found there over the tuple.
fn cast_key(k: &SemValue, right: bool) -> Result<Combo, SemError> {
    let elems = k.list();
    if elems.len() < 2 {
        return Err(SemError::DomainMismatch(format!("{k} is not a tuple")));
    }
    let owned = |xs: &[&SemValue]| SemValue::from_list(xs.iter().map(|x| (*x).clone()).collect());
    let paired = if right {
        bilinear_pair(elems[0].as_vec()?, eta(owned(&elems[1..])).as_vec()?)
    } else {
        let (last, prefix) = elems.split_last().expect("non-empty");
        bilinear_pair(eta(owned(prefix)).as_vec()?, last.as_vec()?)
    };
    Ok(paired.map_keys(|p| match p {
        SemValue::Pair(a, b) => SemValue::concat(a, b),
        other => other.clone(),
    }))
}

/// The part of `env` a closure over `t` can see.
fn visible(t: &Term, env: &Env) -> Env {
    let free = t.free_vars();
    env.iter()
        .filter(|(k, _)| free.contains(*k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

/// `⟦d⟧` at the environment `env`.
pub fn eval_derivation(d: &Derivation, env: &Env) -> Result<SemDist, SemError> {
    let prem = |i: usize| eval_derivation(&d.premises[i], env);
    match d.rule {
        Rule::Ax => {
            let x = match d.term() {
                Term::Var(x) => x,
                t => return Err(SemError::DomainMismatch(format!("axiom on {t}"))),
            };
            let v = env
                .get(x)
                .ok_or_else(|| SemError::DomainMismatch(format!("`{x}` is not bound")))?;
            if !interpret_type(&d.ty).contains(v) {
                return Err(SemError::DomainMismatch(format!("{x} = {v} is not in {}", d.ty)));
            }
            Ok(point(v.clone()))
        }
        Rule::AxZero => Ok(point(SemValue::Vec(Combo::zero()))),
        Rule::AxKet0 => Ok(point(SemValue::Basis(false))),
        Rule::AxKet1 => Ok(point(SemValue::Basis(true))),
        Rule::ScaleI => {
            let Term::Scale(alpha, _) = d.term() else {
                return Err(SemError::DomainMismatch("αI on a non-scaling".into()));
            };
            let m = depth(&d.ty);
            bind(&prem(0)?, |v| Ok(point(deep_scale(*alpha, v, m)?)))
        }
        Rule::SumI => {
            let m = depth(&d.ty);
            let mut acc = prem(0)?;
            for i in 1..d.premises.len() {
                let next = prem(i)?;
                acc = bind(&acc, |a| bind(&next, |b| Ok(point(deep_sum(a, b, m)?))))?;
            }
            Ok(acc)
        }
        Rule::SI => bind(&prem(0)?, |v| Ok(point(eta(v.clone())))),
        Rule::SE => {
            let Term::Meas(j, _) = d.term() else {
                return Err(SemError::DomainMismatch("SE on a non-measurement".into()));
            };
            let inner = &d.premises[0].ty;
            let (k, core) = inner.strip_s();
            let n = core
                .as_bn()
                .ok_or_else(|| SemError::DomainMismatch(format!("cannot measure {inner}")))?;
            bind(&prem(0)?, |v| {
                let mut flat = v.clone();
                for _ in 1..k {
                    flat = mu(&flat)?;
                }
                sem_measure(*j, n, flat.as_vec()?)
            })
        }
        Rule::If => {
            let then = Arc::new(d.premises[0].clone());
            let otherwise = Arc::new(d.premises[1].clone());
            Ok(point(SemValue::Fun(FunValue::new(
                FunBody::Cond { then, otherwise },
                visible(d.term(), env),
            ))))
        }
        Rule::ArrowI => {
            let Term::Lam(x, _, _) = d.term() else {
                return Err(SemError::DomainMismatch("⇒I on a non-abstraction".into()));
            };
            let body = Arc::new(d.premises[0].clone());
            Ok(point(SemValue::Fun(FunValue::new(
                FunBody::Lambda {
                    param: x.clone(),
                    body,
                },
                visible(d.term(), env),
            ))))
        }
        Rule::ArrowE => {
            let fs = prem(0)?;
            let args = prem(1)?;
            bind(&fs, |f| bind(&args, |a| apply(f, a.clone())))
        }
        Rule::ArrowES => {
            let fs = prem(0)?;
            let args = prem(1)?;
            bind(&args, |u| {
                bind(&fs, |t| {
                    let pairs = bilinear_pair(u.as_vec()?, t.as_vec()?);
                    map_combo(&pairs, |p| match p {
                        SemValue::Pair(a, f) => apply(f, (**a).clone()),
                        _ => unreachable!("bilinear_pair yields pairs"),
                    })
                })
            })
        }
        Rule::ProdI => pair_dists(&prem(0)?, &prem(1)?),
        Rule::ProdEr | Rule::ProdEl => {
            let head = d.rule == Rule::ProdEr;
            bind(&prem(0)?, |v| match v {
                SemValue::Pair(a, b) => Ok(point(if head { (**a).clone() } else { (**b).clone() })),
                v => Err(SemError::DomainMismatch(format!("{v} is not a tuple"))),
            })
        }
        Rule::CastR | Rule::CastL => {
            let right = d.rule == Rule::CastR;
            bind(&prem(0)?, |v| {
                let outer = v.as_vec()?;
                let mut raw = Vec::new();
                for (k, c) in outer.terms() {
                    raw.push((SemValue::Vec(cast_key(k, right)?), *c));
                }
                Ok(point(mu(&SemValue::Vec(Combo::from_terms(raw)))?))
            })
        }
        Rule::Par => {
            let Subject::Dist(dist) = &d.subject else {
                return Err(SemError::DomainMismatch("∥ without a distribution".into()));
            };
            let mut raw = Vec::new();
            for ((p, _), sub) in dist.iter().zip(&d.premises) {
                for (q, v) in eval_derivation(sub, env)?.into_entries() {
                    raw.push((p * q, v));
                }
            }
            norm(raw)
        }
    }
}

/// `⟦⊢ t : a⟧` through the canonical derivation.
pub fn denote(t: &Term, a: &Type) -> Result<SemDist, SemError> {
    let d = check_type(&Context::new(), t, a)?;
    eval_derivation(&d, &Env::new())
}

/// `⟦⊢ d : a⟧` for a distribution of closed terms.
pub fn denote_dist(d: &Dist<Term>, a: &Type) -> Result<SemDist, SemError> {
    let der = check_dist(&Context::new(), d, a)?;
    eval_derivation(&der, &Env::new())
}
