//! Commuting conversions that move `S_I` towards the root of a derivation.
//!
//! 1. `αI` over `S_I`            becomes `S_I` over `αI`
//! 2. `+I` over all-`S_I`         becomes `S_I` over `+I`
//! 3. `⇒ES` over two `S_I`        becomes `S_I` over `⇒E`
//! 4. `∥` over all-`S_I`          becomes `S_I` over `∥`

use super::derivation::{Derivation, Rule};
use crate::ast::Type;

fn all_lifted(ds: &[Derivation]) -> bool {
    !ds.is_empty() && ds.iter().all(|d| d.rule == Rule::SI)
}

/// Which conversion (1–4) applies at the root, if any.
pub fn redex_at_root(d: &Derivation) -> Option<u8> {
    match d.rule {
        Rule::ScaleI if all_lifted(&d.premises) && d.premises[0].premises[0].ty.is_s() => Some(1),
        Rule::SumI if all_lifted(&d.premises) && d.premises[0].premises[0].ty.is_s() => Some(2),
        Rule::ArrowES if all_lifted(&d.premises) => Some(3),
        Rule::Par if all_lifted(&d.premises) => Some(4),
        _ => None,
    }
}

/// Whether any node of the tree is a redex.
pub fn has_redex(d: &Derivation) -> bool {
    redex_at_root(d).is_some() || d.premises.iter().any(has_redex)
}

fn unlift(d: &Derivation) -> Derivation {
    d.premises[0].clone()
}

/// Applies one conversion at the root.
pub fn contract(d: &Derivation) -> Option<Derivation> {
    let which = redex_at_root(d)?;
    let inner_ty = match &d.ty {
        Type::S(a) => (**a).clone(),
        _ => return None,
    };
    let premises: Vec<Derivation> = d.premises.iter().map(unlift).collect();
    let rule = if which == 3 { Rule::ArrowE } else { d.rule.clone() };
    let inner = Derivation {
        rule,
        ctx: d.ctx.clone(),
        subject: d.subject.clone(),
        ty: inner_ty,
        premises,
    };
    Some(inner.lift())
}

/// Rewrites to normal form, innermost first.
pub fn normalize(d: &Derivation) -> Derivation {
    let cur = Derivation {
        premises: d.premises.iter().map(normalize).collect(),
        ..d.clone()
    };
    match contract(&cur) {
        // the rule below the new S_I may have become a redex itself
        Some(next) => normalize(&next.premises[0]).lift(),
        None => cur,
    }
}

/// The inverse conversion at the root: an `S_I` sitting on top of a rule that
/// the conversions could have produced is pushed back down. Returns the
/// conversion number used.
pub fn expand(d: &Derivation) -> Option<(u8, Derivation)> {
    if d.rule != Rule::SI {
        return None;
    }
    let below = &d.premises[0];
    let (which, rule) = match below.rule {
        Rule::ScaleI => (1, Rule::ScaleI),
        Rule::SumI => (2, Rule::SumI),
        Rule::ArrowE => (3, Rule::ArrowES),
        Rule::Par => (4, Rule::Par),
        _ => return None,
    };
    let premises = below.premises.iter().map(|p| p.clone().lift()).collect();
    Some((
        which,
        Derivation {
            rule,
            ctx: d.ctx.clone(),
            subject: d.subject.clone(),
            ty: d.ty.clone(),
            premises,
        },
    ))
}
