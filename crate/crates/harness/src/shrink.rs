//! Greedy shrinking of failing terms that keeps them closed and typed at
//! their original type.

use lams_core::ast::Term;
use lams_core::typing::type_of;

const MAX_ROUNDS: usize = 200;

/// Candidate replacements, smallest first: each proper subterm promoted to
/// the root, and each subterm replaced by one of its own subterms.
fn candidates(t: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    let subs = t.subterms();
    for (path, s) in &subs {
        if path.is_empty() {
            continue;
        }
        out.push((*s).clone());
    }
    for (path, s) in &subs {
        for (inner_path, inner) in s.subterms() {
            if !inner_path.is_empty() {
                out.push(t.replace_at(path, inner.clone()));
            }
        }
    }
    out.sort_by_key(|c| c.size());
    out
}

/// The smallest term reachable by single replacements that still has the
/// original type and still fails.
pub fn shrink(t: &Term, fails: impl Fn(&Term) -> bool) -> Term {
    let Ok(ty) = type_of(t) else {
        return t.clone();
    };
    let mut cur = t.canonicalize();
    for _ in 0..MAX_ROUNDS {
        let next = candidates(&cur).into_iter().map(|c| c.canonicalize()).find(|c| {
            c.size() < cur.size() && c.is_closed() && type_of(c).ok().as_ref() == Some(&ty) && fails(c)
        });
        match next {
            Some(c) => cur = c,
            None => break,
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use lams_core::syntax::parse_term;

    #[test]
    fn shrinks_to_a_failing_subterm_of_the_same_type() {
        let t = parse_term("(|0> + |1>) + 2.(|1> + 3.|1>)").unwrap();
        let small = shrink(&t, |c| c.to_string().contains('3'));
        assert!(small.size() < t.size());
        assert_eq!(type_of(&small).unwrap(), type_of(&t).unwrap());
        assert!(small.to_string().contains('3'));
    }

    #[test]
    fn passing_terms_are_left_alone() {
        let t = parse_term("|0> + |1>").unwrap();
        assert_eq!(shrink(&t, |_| false), t);
    }
}
