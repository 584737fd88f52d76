//! Minimal-type inference with linearity accounting, and construction of
//! canonical derivations at a requested type.

use super::derivation::{Context, Derivation, Rule, Subject};
use super::TypeError;
use crate::ast::{Dist, Term, Type};
use std::collections::BTreeMap;

/// Number of occurrences of each free variable.
pub type Usage = BTreeMap<String, usize>;

fn add_usage(a: &mut Usage, b: Usage) {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
}

fn is_linear(ty: &Type) -> bool {
    ty.as_bn().is_none()
}

fn mismatch(t: &Term, detail: impl Into<String>) -> TypeError {
    TypeError::TypeMismatch {
        term: t.to_string(),
        detail: detail.into(),
    }
}

/// Result type of `meas j` on `B^n`; `B^n` itself when `j = n`.
pub fn meas_result(j: usize, n: usize) -> Type {
    if j == n {
        Type::bn(n)
    } else {
        Type::prod(Type::bn(j), Type::s(Type::bn(n - j)))
    }
}

/// The minimal type of `t` under `ctx` and its variable usage.
pub fn infer(ctx: &Context, t: &Term) -> Result<(Type, Usage), TypeError> {
    match t {
        Term::Var(x) => {
            let ty = ctx
                .get(x)
                .cloned()
                .ok_or_else(|| TypeError::Unbound(x.clone()))?;
            Ok((ty, Usage::from([(x.clone(), 1)])))
        }
        Term::Ket0 | Term::Ket1 => Ok((Type::B, Usage::new())),
        Term::Zero(a) => {
            a.well_formed()
                .map_err(|ty| TypeError::NotQubitType { ty: ty.to_string() })?;
            Ok((Type::s(a.clone()), Usage::new()))
        }
        Term::Lam(x, p, body) => {
            if !p.is_qubit() {
                return Err(TypeError::NotQubitType { ty: p.to_string() });
            }
            let mut inner = ctx.clone();
            inner.insert(x.clone(), p.clone());
            let (r, mut u) = infer(&inner, body)?;
            let uses = u.remove(x).unwrap_or(0);
            if is_linear(p) && uses != 1 {
                return Err(TypeError::LinearityViolation {
                    name: x.clone(),
                    uses,
                });
            }
            Ok((Type::arrow(p.clone(), r), u))
        }
        Term::App(f, a) => {
            let (tf, mut u) = infer(ctx, f)?;
            let (_, ua) = infer(ctx, a)?;
            add_usage(&mut u, ua);
            let (k, core) = tf.strip_s();
            let (p, r) = match core {
                Type::Arrow(p, r) if k <= 1 => (&**p, &**r),
                _ => return Err(mismatch(t, format!("`{tf}` is not a function type"))),
            };
            if k == 0 && derivable(ctx, a, p) {
                return Ok((r.clone(), u));
            }
            if derivable(ctx, a, &Type::s(p.clone())) {
                return Ok((Type::s(r.clone()), u));
            }
            Err(mismatch(t, format!("argument does not fit parameter `{p}`")))
        }
        Term::IfTe(a, b) => {
            let (ta, ua) = infer(ctx, a)?;
            let (tb, ub) = infer(ctx, b)?;
            let mut u = Usage::new();
            let names: std::collections::BTreeSet<&String> = ua.keys().chain(ub.keys()).collect();
            for name in names {
                let (x, y) = (
                    ua.get(name).copied().unwrap_or(0),
                    ub.get(name).copied().unwrap_or(0),
                );
                let linear = ctx.get(name).map(is_linear).unwrap_or(true);
                if linear && x != y {
                    return Err(TypeError::LinearityViolation {
                        name: name.clone(),
                        uses: x.max(y),
                    });
                }
                u.insert(name.clone(), x.max(y));
            }
            let j = ta.lub(&tb).ok_or_else(|| TypeError::NoJoin {
                a: ta.to_string(),
                b: tb.to_string(),
            })?;
            if !derivable(ctx, a, &j) || !derivable(ctx, b, &j) {
                return Err(mismatch(t, format!("branches do not both fit `{j}`")));
            }
            Ok((Type::arrow(Type::B, j), u))
        }
        Term::Sum(ts) => {
            let mut u = Usage::new();
            let mut lub: Option<Type> = None;
            for s in ts {
                let (ty, us) = infer(ctx, s)?;
                add_usage(&mut u, us);
                lub = Some(match lub {
                    None => ty,
                    Some(l) => l.lub(&ty).ok_or_else(|| TypeError::NoJoin {
                        a: l.to_string(),
                        b: ty.to_string(),
                    })?,
                });
            }
            let mut l = lub.expect("sum has summands");
            if !l.is_s() {
                l = Type::s(l);
            }
            if let Some(bad) = ts.iter().find(|s| !derivable(ctx, s, &l)) {
                return Err(mismatch(bad, format!("summand does not fit `{l}`")));
            }
            Ok((l, u))
        }
        Term::Scale(_, b) => {
            let (ty, u) = infer(ctx, b)?;
            Ok((if ty.is_s() { ty } else { Type::s(ty) }, u))
        }
        Term::Prod(a, b) => {
            let (ta, mut u) = infer(ctx, a)?;
            let (tb, ub) = infer(ctx, b)?;
            add_usage(&mut u, ub);
            for ty in [&ta, &tb] {
                if !ty.is_qubit() {
                    return Err(TypeError::NotQubitType { ty: ty.to_string() });
                }
            }
            Ok((Type::prod(ta, tb), u))
        }
        Term::Head(b) | Term::Tail(b) => {
            let (ty, u) = infer(ctx, b)?;
            match ty.as_bn() {
                Some(n) if n > 1 => Ok((
                    if matches!(t, Term::Head(_)) {
                        Type::B
                    } else {
                        Type::bn(n - 1)
                    },
                    u,
                )),
                Some(_) => Err(TypeError::ArityError {
                    term: t.to_string(),
                    detail: "list of length 1".into(),
                }),
                None => Err(mismatch(t, format!("`{ty}` is not B^n"))),
            }
        }
        Term::Meas(j, b) => {
            let (ty, u) = infer(ctx, b)?;
            let (_, core) = ty.strip_s();
            let n = core
                .as_bn()
                .ok_or_else(|| mismatch(t, format!("cannot measure `{ty}`")))?;
            if *j == 0 || *j > n {
                return Err(TypeError::ArityError {
                    term: t.to_string(),
                    detail: format!("measuring {j} of {n} qubits"),
                });
            }
            Ok((meas_result(*j, n), u))
        }
        Term::CastR(b) | Term::CastL(b) => {
            let (ty, u) = infer(ctx, b)?;
            let (k, core) = ty.strip_s();
            let elems = core.list();
            if k > 1 || elems.len() < 2 {
                return Err(mismatch(t, format!("cannot cast `{ty}`")));
            }
            let (premise, result) = if matches!(t, Term::CastR(_)) {
                let first = elems[0];
                let psi = first.un_s().clone();
                let phi = Type::from_list(elems[1..].iter().map(|e| (*e).clone()).collect());
                (
                    Type::s(Type::prod(Type::s(psi.clone()), phi.clone())),
                    Type::s(Type::prod(psi, phi)),
                )
            } else {
                let last = elems[elems.len() - 1];
                let phi = last.un_s().clone();
                let psi = Type::from_list(
                    elems[..elems.len() - 1].iter().map(|e| (*e).clone()).collect(),
                );
                (
                    Type::s(Type::prod(psi.clone(), Type::s(phi.clone()))),
                    Type::s(Type::prod(psi, phi)),
                )
            };
            if !derivable(ctx, b, &premise) {
                return Err(mismatch(t, format!("operand does not fit `{premise}`")));
            }
            Ok((result, u))
        }
    }
}

/// Minimal type only.
pub fn infer_type(ctx: &Context, t: &Term) -> Result<Type, TypeError> {
    infer(ctx, t).map(|(ty, _)| ty)
}

/// Whether `ctx ⊢ t : a` is derivable (ignoring linearity, which `infer`
/// checks).
pub fn derivable(ctx: &Context, t: &Term, a: &Type) -> bool {
    build(ctx, t, a).is_some()
}

/// Splits a list type into every (prefix, suffix) pair.
fn splits(a: &Type) -> Vec<(Type, Type)> {
    let elems = a.list();
    (1..elems.len())
        .map(|i| {
            (
                Type::from_list(elems[..i].iter().map(|e| (*e).clone()).collect()),
                Type::from_list(elems[i..].iter().map(|e| (*e).clone()).collect()),
            )
        })
        .collect()
}

/// Canonical derivation of `ctx ⊢ t : a`: an `S_I` at the top is preferred
/// whenever the term already has the unlifted type.
pub fn build(ctx: &Context, t: &Term, a: &Type) -> Option<Derivation> {
    if let Type::S(inner) = a {
        if let Some(d) = build(ctx, t, inner) {
            return Some(d.lift());
        }
    }
    let node = |rule, premises| Some(Derivation::new(rule, ctx, t, a.clone(), premises));
    match t {
        Term::Var(x) => (ctx.get(x) == Some(a)).then(|| node(Rule::Ax, vec![]))?,
        Term::Ket0 => (*a == Type::B).then(|| node(Rule::AxKet0, vec![]))?,
        Term::Ket1 => (*a == Type::B).then(|| node(Rule::AxKet1, vec![]))?,
        Term::Zero(x) => (*a == Type::s(x.clone())).then(|| node(Rule::AxZero, vec![]))?,
        Term::Lam(x, p, body) => match a {
            Type::Arrow(q, r) if **q == *p => {
                let mut inner = ctx.clone();
                inner.insert(x.clone(), p.clone());
                let d = build(&inner, body, r)?;
                node(Rule::ArrowI, vec![d])
            }
            _ => None,
        },
        Term::App(f, arg) => {
            let tf = infer_type(ctx, f).ok()?;
            let (k, core) = tf.strip_s();
            let p = match core {
                Type::Arrow(p, _) if k <= 1 => (**p).clone(),
                _ => return None,
            };
            if k == 0 {
                if let (Some(df), Some(da)) = (
                    build(ctx, f, &Type::arrow(p.clone(), a.clone())),
                    build(ctx, arg, &p),
                ) {
                    return node(Rule::ArrowE, vec![df, da]);
                }
            }
            if let Type::S(res) = a {
                let df = build(ctx, f, &Type::s(Type::arrow(p.clone(), (**res).clone())))?;
                let da = build(ctx, arg, &Type::s(p))?;
                return node(Rule::ArrowES, vec![df, da]);
            }
            None
        }
        Term::IfTe(x, y) => match a {
            Type::Arrow(q, r) if **q == Type::B => {
                let dx = build(ctx, x, r)?;
                let dy = build(ctx, y, r)?;
                node(Rule::If, vec![dx, dy])
            }
            _ => None,
        },
        Term::Sum(ts) => {
            if !a.is_s() {
                return None;
            }
            let ds = ts
                .iter()
                .map(|s| build(ctx, s, a))
                .collect::<Option<Vec<_>>>()?;
            node(Rule::SumI, ds)
        }
        Term::Scale(_, b) => {
            if !a.is_s() {
                return None;
            }
            let d = build(ctx, b, a)?;
            node(Rule::ScaleI, vec![d])
        }
        Term::Prod(x, y) => {
            for (l, r) in splits(a) {
                if let Some(dx) = build(ctx, x, &l) {
                    if let Some(dy) = build(ctx, y, &r) {
                        return node(Rule::ProdI, vec![dx, dy]);
                    }
                }
            }
            None
        }
        Term::Head(b) => {
            let tb = infer_type(ctx, b).ok()?;
            match tb.as_bn() {
                Some(n) if n > 1 && *a == Type::B => {
                    let d = build(ctx, b, &tb)?;
                    node(Rule::ProdEr, vec![d])
                }
                _ => None,
            }
        }
        Term::Tail(b) => {
            let tb = infer_type(ctx, b).ok()?;
            match tb.as_bn() {
                Some(n) if n > 1 && *a == Type::bn(n - 1) => {
                    let d = build(ctx, b, &tb)?;
                    node(Rule::ProdEl, vec![d])
                }
                _ => None,
            }
        }
        Term::Meas(j, b) => {
            let tb = infer_type(ctx, b).ok()?;
            let (k, core) = tb.strip_s();
            let n = core.as_bn()?;
            if *j == 0 || *j > n || *a != meas_result(*j, n) {
                return None;
            }
            let d = build(ctx, b, &Type::bn(n).lift(k.max(1)))?;
            node(Rule::SE, vec![d])
        }
        Term::CastR(b) | Term::CastL(b) => {
            let Type::S(inner) = a else { return None };
            let right = matches!(t, Term::CastR(_));
            for (psi, phi) in splits(inner) {
                let premise = if right {
                    Type::s(Type::prod(Type::s(psi), phi))
                } else {
                    Type::s(Type::prod(psi, Type::s(phi)))
                };
                if let Some(d) = build(ctx, b, &premise) {
                    return node(if right { Rule::CastR } else { Rule::CastL }, vec![d]);
                }
            }
            None
        }
    }
}

fn check_context_linearity(ctx: &Context, u: &Usage) -> Result<(), TypeError> {
    for (name, ty) in ctx {
        let uses = u.get(name).copied().unwrap_or(0);
        if is_linear(ty) && uses != 1 {
            return Err(TypeError::LinearityViolation {
                name: name.clone(),
                uses,
            });
        }
    }
    Ok(())
}

/// Infers the minimal type and enforces linearity of the context itself.
pub fn infer_closed(ctx: &Context, t: &Term) -> Result<Type, TypeError> {
    let (ty, u) = infer(ctx, t)?;
    check_context_linearity(ctx, &u)?;
    Ok(ty)
}

/// Canonical derivation of `ctx ⊢ t : a`, or why there is none.
pub fn check_type(ctx: &Context, t: &Term, a: &Type) -> Result<Derivation, TypeError> {
    let min = infer_closed(ctx, t)?;
    build(ctx, t, a).ok_or_else(|| TypeError::NotLiftable {
        term: t.to_string(),
        min: min.to_string(),
        target: a.to_string(),
    })
}

/// Derivation for a distribution of closed terms, every branch at `a`. As
/// for terms, `S_I` is kept above `∥` whenever every branch allows it.
pub fn check_dist(ctx: &Context, d: &Dist<Term>, a: &Type) -> Result<Derivation, TypeError> {
    if let Some(t) = d.as_single() {
        return check_type(ctx, t, a);
    }
    for (_, t) in d.iter() {
        infer_closed(ctx, t)?;
    }
    build_dist(ctx, d, a).ok_or_else(|| TypeError::NotLiftable {
        term: crate::syntax::print_dist(d),
        min: "?".into(),
        target: a.to_string(),
    })
}

fn build_dist(ctx: &Context, d: &Dist<Term>, a: &Type) -> Option<Derivation> {
    if let Type::S(inner) = a {
        if let Some(p) = build_dist(ctx, d, inner) {
            return Some(p.lift());
        }
    }
    let premises = d
        .iter()
        .map(|(_, t)| build(ctx, t, a))
        .collect::<Option<Vec<_>>>()?;
    Some(Derivation {
        rule: Rule::Par,
        ctx: ctx.clone(),
        subject: Subject::Dist(d.clone()),
        ty: a.clone(),
        premises,
    })
}
