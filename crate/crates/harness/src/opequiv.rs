//! Bounded operational equivalence: two terms are compared under every
//! elimination context up to a depth, built from a fixed pool of plug
//! arguments.

use crate::generator::gen_at;
use crate::HarnessError;
use lams_core::ast::{Term, Type};
use lams_core::rewrite::Rewriter;
use lams_core::syntax::{parse_term, parse_type};
use lams_core::typing::type_of;

const POOL_SEED: u64 = 0x5EED;
const FUEL: usize = 100_000;
const TOL: f64 = 1e-9;

/// One layer of an elimination context, innermost first.
#[derive(Clone, Debug, PartialEq)]
pub enum Frame {
    /// `C t`
    ApplyTo(Term),
    /// `t C`
    AppliedBy(Term),
    Meas(usize),
    Head,
    Tail,
    CastR,
    CastL,
}

pub type ElimContext = Vec<Frame>;

pub fn plug(c: &[Frame], t: &Term) -> Term {
    c.iter().fold(t.clone(), |acc, f| match f {
        Frame::ApplyTo(a) => Term::app(acc, a.clone()),
        Frame::AppliedBy(g) => Term::app(g.clone(), acc),
        Frame::Meas(j) => Term::meas(*j, acc),
        Frame::Head => Term::head(acc),
        Frame::Tail => Term::tail(acc),
        Frame::CastR => Term::cast_r(acc),
        Frame::CastL => Term::cast_l(acc),
    })
}

/// The fixed plug pool plus two seeded random typed values.
pub fn pool() -> Vec<Term> {
    let mut p: Vec<Term> = ["|0>", "|1>", "|+>", r"\x:B. x", r"\x:B. if x then |0> else |1>"]
        .iter()
        .map(|s| parse_term(s).expect("pool term"))
        .collect();
    let s_b = parse_type("S(B)").expect("pool type");
    let h = parse_type("B => S(B)").expect("pool type");
    p.push(gen_at(POOL_SEED, &s_b, 8).0);
    p.push(gen_at(POOL_SEED + 1, &h, 8).0);
    p
}

fn frames(pool: &[Term]) -> Vec<Frame> {
    let mut fs = Vec::new();
    for t in pool {
        fs.push(Frame::ApplyTo(t.clone()));
        fs.push(Frame::AppliedBy(t.clone()));
    }
    fs.extend((1..=3).map(Frame::Meas));
    fs.extend([Frame::Head, Frame::Tail, Frame::CastR, Frame::CastL]);
    fs
}

/// Contexts of depth at most `depth` under which both `t` and `r` type.
/// Returns the contexts whose plugged terms have type `B`.
pub fn contexts(t: &Term, r: &Term, depth: usize) -> Vec<ElimContext> {
    let fs = frames(&pool());
    let mut layer: Vec<ElimContext> = vec![vec![]];
    let mut observable = Vec::new();
    let is_b = |c: &ElimContext| {
        let (a, b) = (type_of(&plug(c, t)), type_of(&plug(c, r)));
        matches!((a, b), (Ok(Type::B), Ok(Type::B)))
    };
    if is_b(&vec![]) {
        observable.push(vec![]);
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for c in &layer {
            for f in &fs {
                let mut d = c.clone();
                d.push(f.clone());
                if type_of(&plug(&d, t)).is_ok() && type_of(&plug(&d, r)).is_ok() {
                    if is_b(&d) {
                        observable.push(d.clone());
                    }
                    next.push(d);
                }
            }
        }
        layer = next;
    }
    observable
}

/// Whether `t` and `r` normalize to the same distribution under every
/// observable context of depth at most `depth`.
pub fn op_equiv(t: &Term, r: &Term, depth: usize) -> Result<bool, HarnessError> {
    let rw = Rewriter::new();
    for c in contexts(t, r, depth) {
        let a = rw.normalize(&plug(&c, t), FUEL)?;
        let b = rw.normalize(&plug(&c, r), FUEL)?;
        if !a.term_eq(&b, TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}
