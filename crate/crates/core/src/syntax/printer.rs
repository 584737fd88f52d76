use crate::ast::{fmt_real, Dist, Term};
use std::fmt;

// precedence levels: lambda/sum < product/prefix < scale < application < atom
const L_TERM: u8 = 0;
const L_PROD: u8 = 1;
const L_UNARY: u8 = 2;
const L_APP: u8 = 3;
const L_ATOM: u8 = 4;

fn level(t: &Term) -> u8 {
    match t {
        Term::Lam(..) | Term::Sum(_) => L_TERM,
        Term::Prod(..) if t.ket_bits().is_some() => L_ATOM,
        Term::Prod(..)
        | Term::CastR(_)
        | Term::CastL(_)
        | Term::Head(_)
        | Term::Tail(_)
        | Term::Meas(..) => L_PROD,
        Term::Scale(..) => L_UNARY,
        Term::App(..) | Term::IfTe(..) => L_APP,
        Term::Var(_) | Term::Ket0 | Term::Ket1 | Term::Zero(_) => L_ATOM,
    }
}

fn at(t: &Term, min: u8, out: &mut String) {
    if level(t) < min {
        out.push('(');
        write_term(t, out);
        out.push(')');
    } else {
        write_term(t, out);
    }
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Ket0 => out.push_str("|0>"),
        Term::Ket1 => out.push_str("|1>"),
        Term::Zero(ty) => out.push_str(&format!("zero({ty})")),
        Term::Lam(x, ty, body) => {
            out.push_str(&format!("\\{x}:{ty}. "));
            at(body, L_TERM, out);
        }
        Term::Sum(ts) => {
            for (i, s) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                at(s, L_PROD, out);
            }
        }
        Term::Prod(..) => {
            let elems = t.list();
            let mut i = 0;
            let mut first = true;
            while i < elems.len() {
                if !first {
                    out.push_str(" * ");
                }
                first = false;
                let mut bits = Vec::new();
                while i < elems.len() {
                    match elems[i] {
                        Term::Ket0 => bits.push(false),
                        Term::Ket1 => bits.push(true),
                        _ => break,
                    }
                    i += 1;
                }
                if bits.is_empty() {
                    let last = i + 1 == elems.len();
                    // prefix operators extend to the right, so only the last
                    // element may print one unparenthesized
                    at(elems[i], if last { L_PROD } else { L_UNARY }, out);
                    i += 1;
                } else {
                    out.push_str(&format!("|{}>", bits_str(&bits)));
                }
            }
        }
        Term::Scale(s, body) => {
            out.push_str(&format!("({s})."));
            at(body, L_UNARY, out);
        }
        Term::App(f, a) => {
            at(f, L_APP, out);
            out.push(' ');
            at(a, L_ATOM, out);
        }
        Term::IfTe(a, b) => {
            out.push_str("if? ");
            at(a, L_ATOM, out);
            out.push(' ');
            at(b, L_ATOM, out);
        }
        Term::Head(b) => {
            out.push_str("head ");
            at(b, L_PROD, out);
        }
        Term::Tail(b) => {
            out.push_str("tail ");
            at(b, L_PROD, out);
        }
        Term::Meas(j, b) => {
            out.push_str(&format!("meas {j} "));
            at(b, L_PROD, out);
        }
        Term::CastR(b) => {
            out.push_str("castR ");
            at(b, L_PROD, out);
        }
        Term::CastL(b) => {
            out.push_str("castL ");
            at(b, L_PROD, out);
        }
    }
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

/// A probability as a small fraction when it is one, else a decimal.
pub fn fmt_prob(p: f64) -> String {
    for den in 1..=64u32 {
        let num = (p * den as f64).round();
        if (num / den as f64 - p).abs() <= 1e-9 {
            return if den == 1 {
                format!("{num}")
            } else {
                format!("{num}/{den}")
            };
        }
    }
    fmt_real(p)
}

/// Entries by descending probability, ties in canonical term order.
pub fn sorted_entries(d: &Dist<Term>) -> Vec<(f64, Term)> {
    let mut v: Vec<(f64, Term)> = d.entries().to_vec();
    v.sort_by(|(p, t), (q, u)| q.total_cmp(p).then_with(|| t.alpha_key().cmp(&u.alpha_key())));
    v
}

pub fn print_dist(d: &Dist<Term>) -> String {
    if let Some(t) = d.as_single() {
        return print_term(t);
    }
    let parts: Vec<String> = sorted_entries(d)
        .iter()
        .map(|(p, t)| format!("{}: {}", fmt_prob(*p), print_term(t)))
        .collect();
    format!("[ {} ]", parts.join(" || "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Scalar, Type};
    use crate::syntax::{parse_dist, parse_term};

    #[test]
    fn compact_kets() {
        let t = Term::scale(
            Scalar::real(std::f64::consts::FRAC_1_SQRT_2),
            Term::plus(Term::ket(&[false, false]), Term::ket(&[true, true])),
        );
        assert_eq!(print_term(&t), "(0.7071067812).(|00> + |11>)");
        assert!(parse_term(&print_term(&t)).unwrap().term_eq(&t));
    }

    #[test]
    fn zero_with_annotation() {
        assert_eq!(print_term(&Term::Zero(Type::B)), "zero(B)");
    }

    #[test]
    fn dist_notation() {
        let d = parse_dist("[ 1/3: |1> || 2/3: |0> ]").unwrap();
        assert_eq!(print_dist(&d), "[ 2/3: |0> || 1/3: |1> ]");
    }

    #[test]
    fn prefix_operators_in_lists() {
        let t = Term::from_list(vec![
            Term::Ket0,
            Term::cast_r(Term::ket(&[false, true])),
            Term::Ket1,
        ]);
        let s = print_term(&t);
        assert_eq!(s, "|0> * (castR |01>) * |1>");
        assert_eq!(parse_term(&s).unwrap(), t);
    }

    #[test]
    fn application_and_conditionals() {
        let t = Term::app(Term::if_te(Term::Ket0, Term::Ket1), Term::var("x"));
        assert_eq!(print_term(&t), "if? |0> |1> x");
        assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
        let l = Term::lam("x", Type::s(Type::B), Term::var("x"));
        let a = Term::app(l.clone(), Term::app(l, Term::Ket0));
        assert_eq!(parse_term(&print_term(&a)).unwrap(), a);
    }
}
