//! Text and JSON renderings of types, distributions and denotations.
//!
//! JSON schema for denotations:
//! - a basis tuple is `{"ket": "010"}`;
//! - any other tuple is `{"tuple": [v, ...]}`;
//! - a combination is `{"vec": [{"value": v, "re": x, "im": y}, ...]}`;
//! - a function is `{"fun": "<closure>"}`, plus `"table": [{"arg": v,
//!   "result": dist}, ...]` when its parameter is `B^n` with n ≤ 3.
//!
//! Distributions of either kind are arrays of `{"probability": p, ...}`
//! sorted by descending probability.

use lams_core::ast::{Dist, Scalar, Term, Type};
use lams_core::semantics::{apply, probes, SemDist, SemError, SemValue};
use lams_core::syntax::{fmt_prob, print_term, sorted_entries};
use serde_json::{json, Value};

const COMMON_FACTOR_TOL: f64 = 1e-12;
/// Widest basis parameter whose function table is printed.
const MAX_TABLE_WIDTH: usize = 3;

/// Pulls a coefficient shared by every summand in front of the sum,
/// inside each list element as well.
pub fn factor_common(t: &Term) -> Term {
    match t {
        Term::Sum(ts) => {
            let coeffs: Option<Vec<Scalar>> = ts
                .iter()
                .map(|u| match u {
                    Term::Scale(a, _) => Some(*a),
                    _ => None,
                })
                .collect();
            match coeffs {
                Some(cs) if cs.iter().all(|c| c.approx_eq(cs[0], COMMON_FACTOR_TOL)) => {
                    let inner = ts
                        .iter()
                        .map(|u| match u {
                            Term::Scale(_, b) => factor_common(b),
                            u => u.clone(),
                        })
                        .collect();
                    Term::Scale(cs[0], Box::new(Term::Sum(inner)))
                }
                _ => Term::Sum(ts.iter().map(factor_common).collect()),
            }
        }
        Term::Prod(..) => Term::from_list(t.list().into_iter().map(factor_common).collect()),
        t => t.clone(),
    }
}

pub fn term_text(t: &Term) -> String {
    print_term(&factor_common(t))
}

pub fn dist_text(d: &Dist<Term>) -> String {
    if let Some(t) = d.as_single() {
        return term_text(t);
    }
    sorted_entries(d)
        .iter()
        .map(|(p, t)| format!("{}: {}", fmt_prob(*p), term_text(t)))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn dist_json(d: &Dist<Term>) -> Value {
    Value::Array(
        sorted_entries(d)
            .iter()
            .map(|(p, t)| json!({"probability": p, "term": print_term(t)}))
            .collect(),
    )
}

/// Semantic branches by descending probability, ties by value order.
fn sorted_sem(d: &SemDist) -> Vec<(f64, SemValue)> {
    let mut v = d.entries().to_vec();
    v.sort_by(|(p, a), (q, b)| q.total_cmp(p).then_with(|| a.cmp(b)));
    v
}

fn basis_table(f: &SemValue, p: &Type) -> Option<Vec<(SemValue, Result<SemDist, SemError>)>> {
    let n = p.as_bn()?;
    (n <= MAX_TABLE_WIDTH).then(|| probes(p).into_iter().map(|x| (x.clone(), apply(f, x))).collect())
}

fn arrow_parts(ty: Option<&Type>) -> Option<(&Type, &Type)> {
    match ty {
        Some(Type::Arrow(p, r)) => Some((p, r)),
        _ => None,
    }
}

/// Component types of a value of type `ty`, when they can be read off.
fn elem_types(ty: Option<&Type>, len: usize) -> Vec<Option<&Type>> {
    match ty {
        Some(t) if t.list().len() == len => t.list().into_iter().map(Some).collect(),
        _ => vec![None; len],
    }
}

fn span_inner(ty: Option<&Type>) -> Option<&Type> {
    match ty {
        Some(Type::S(a)) => Some(a),
        _ => None,
    }
}

pub fn sem_text(v: &SemValue, ty: Option<&Type>) -> String {
    match (v, arrow_parts(ty)) {
        (SemValue::Fun(_), Some((p, r))) => match basis_table(v, p) {
            Some(rows) => {
                let lines: Vec<String> = rows
                    .iter()
                    .map(|(x, res)| match res {
                        Ok(d) => format!("  {x} -> {}", sem_dist_text(d, Some(r)).replace('\n', "; ")),
                        Err(e) => format!("  {x} -> error: {e}"),
                    })
                    .collect();
                format!("{v}\n{}", lines.join("\n"))
            }
            None => v.to_string(),
        },
        _ => v.to_string(),
    }
}

pub fn sem_dist_text(d: &SemDist, ty: Option<&Type>) -> String {
    if let Some(v) = d.as_single() {
        return sem_text(v, ty);
    }
    sorted_sem(d)
        .iter()
        .map(|(p, v)| format!("{}: {}", fmt_prob(*p), sem_text(v, ty)))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn sem_json(v: &SemValue, ty: Option<&Type>) -> Value {
    match v {
        SemValue::Basis(_) | SemValue::Pair(..) => match v.ket_bits() {
            Some(bits) => json!({"ket": bits.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>()}),
            None => {
                let elems = v.list();
                let tys = elem_types(ty, elems.len());
                json!({"tuple": elems.iter().zip(tys).map(|(e, t)| sem_json(e, t)).collect::<Vec<_>>()})
            }
        },
        SemValue::Vec(c) => {
            let inner = span_inner(ty);
            json!({"vec": c.terms().iter().map(|(k, s)| json!({
                "value": sem_json(k, inner),
                "re": s.re(),
                "im": s.im(),
            })).collect::<Vec<_>>()})
        }
        SemValue::Fun(c) => {
            let mut out = json!({"fun": c.0.key});
            if let Some((p, r)) = arrow_parts(ty) {
                if let Some(rows) = basis_table(v, p) {
                    let table: Vec<Value> = rows
                        .iter()
                        .map(|(x, res)| match res {
                            Ok(d) => json!({"arg": sem_json(x, Some(p)), "result": sem_dist_json(d, Some(r))}),
                            Err(e) => json!({"arg": sem_json(x, Some(p)), "error": e.to_string()}),
                        })
                        .collect();
                    out["table"] = Value::Array(table);
                }
            }
            out
        }
    }
}

pub fn sem_dist_json(d: &SemDist, ty: Option<&Type>) -> Value {
    Value::Array(
        sorted_sem(d)
            .iter()
            .map(|(p, v)| json!({"probability": p, "value": sem_json(v, ty)}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use lams_core::semantics::denote;
    use lams_core::syntax::{parse_term, parse_type};

    #[test]
    fn shared_coefficients_are_factored() {
        let t = parse_term("(1/sqrt(2)).|00> + (1/sqrt(2)).|11>").unwrap().canonicalize();
        assert_eq!(term_text(&t), "(0.7071067812).(|00> + |11>)");
        let mixed = parse_term("(0.6).|0> + (0.8).|1>").unwrap().canonicalize();
        assert_eq!(term_text(&mixed), print_term(&mixed));
        let inside = parse_term("|1> * ((0.5).|0> + (0.5).|1>)").unwrap().canonicalize();
        assert_eq!(term_text(&inside), "|1> * (0.5).(|0> + |1>)");
    }

    #[test]
    fn distributions_sort_by_probability() {
        let d = Dist::normalize(vec![(0.25, Term::Ket0), (0.75, Term::Ket1)]).unwrap();
        assert_eq!(dist_text(&d), "3/4: |1>\n1/4: |0>");
        let j = dist_json(&d);
        assert_eq!(j[0]["term"], "|1>");
        assert_eq!(j[1]["probability"], 0.25);
    }

    #[test]
    fn hadamard_tabulates() {
        let h = parse_term(r"\x:B. if x then |-> else |+>").unwrap();
        let ty = parse_type("B => S(B)").unwrap();
        let d = denote(&h, &ty).unwrap();
        let text = sem_dist_text(&d, Some(&ty));
        assert!(text.contains("|0> ->") && text.contains("|1> ->"), "{text}");
        let j = sem_dist_json(&d, Some(&ty));
        let table = j[0]["value"]["table"].as_array().unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table[0]["arg"]["ket"], "0");
        assert_eq!(table[0]["result"][0]["value"]["vec"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn tuples_and_kets() {
        let v = SemValue::pair(SemValue::Basis(true), SemValue::Basis(false));
        assert_eq!(sem_json(&v, None), json!({"ket": "10"}));
    }
}
