use super::*;
use crate::ast::{Term, Type};
use crate::syntax::{parse_term, parse_type};

fn ty(s: &str) -> Type {
    parse_type(s).unwrap()
}

fn min(s: &str) -> Result<Type, TypeError> {
    type_of(&parse_term(s).unwrap())
}

const H: &str = r"(\x:B. if x then |-> else |+>)";

#[test]
fn cloning_example_types_at_superposed_pair() {
    assert_eq!(
        min(r"(\x:B. x * x) ((1/sqrt(2)).(|0> + |1>))").unwrap(),
        ty("S(B * B)")
    );
}

#[test]
fn measurement_example() {
    assert_eq!(
        min("meas 2 (|000> + 2.|110> + 3.|001> + |111>)").unwrap(),
        ty("B^2 * S(B)")
    );
    assert_eq!(min("meas 1 |0>").unwrap(), ty("B"));
    assert!(matches!(
        min("meas 3 (|00> + |11>)"),
        Err(TypeError::ArityError { .. })
    ));
}

#[test]
fn linear_variable_used_twice() {
    let ctx = Context::from([("x".to_string(), ty("S(B)"))]);
    let t = parse_term("x + x").unwrap();
    assert_eq!(
        infer_closed(&ctx, &t),
        Err(TypeError::LinearityViolation {
            name: "x".into(),
            uses: 2
        })
    );
    assert!(matches!(
        min(r"\x:S(B). x * x"),
        Err(TypeError::LinearityViolation { .. })
    ));
    assert!(matches!(
        min(r"\x:S(B). |0>"),
        Err(TypeError::LinearityViolation { uses: 0, .. })
    ));
    // basis variables may be duplicated and discarded
    assert_eq!(min(r"\x:B. x * x").unwrap(), ty("B => B * B"));
    assert_eq!(min(r"\x:B^2. |0>").unwrap(), ty("B^2 => B"));
}

#[test]
fn conditional_shares_context() {
    assert_eq!(
        min(r"\x:S(B). if? x x").unwrap(),
        ty("S(B) => B => S(B)")
    );
    assert!(matches!(
        min(r"\x:S(B). if? x |0>"),
        Err(TypeError::LinearityViolation { .. })
    ));
}

#[test]
fn hadamard_and_quantum_if() {
    assert_eq!(min(H).unwrap(), ty("B => S(B)"));
    assert_eq!(min(&format!("{H} |0>")).unwrap(), ty("S(B)"));
    assert_eq!(
        min("(if? |0> |1>) (0.6.|1> + 0.8.|0>)").unwrap(),
        ty("S(B)")
    );
    // H applied to a superposition goes through the lifted elimination
    assert_eq!(min(&format!("{H} |+>")).unwrap(), ty("S(S(B))"));
}

#[test]
fn casts() {
    let operand = "((1/sqrt(2)).(|0>+|1>)) * |0>";
    assert_eq!(min(operand).unwrap(), ty("S(B) * B"));
    assert_eq!(min(&format!("castR {operand}")).unwrap(), ty("S(B * B)"));
    assert_eq!(min("castL |0> * |+>").unwrap(), ty("S(B * B)"));
    assert_eq!(min("castR |+> * |+>").unwrap(), ty("S(B * S(B))"));
    assert!(matches!(min("castR |0>"), Err(TypeError::TypeMismatch { .. })));
}

#[test]
fn lists() {
    assert_eq!(min("head |01>").unwrap(), ty("B"));
    assert_eq!(min("tail |011>").unwrap(), ty("B^2"));
    assert!(matches!(min("head |0>"), Err(TypeError::ArityError { .. })));
    assert!(matches!(min("head |+> * |0>"), Err(TypeError::TypeMismatch { .. })));
}

#[test]
fn sums_use_componentwise_lub() {
    assert_eq!(min("|00> + |+> * |0>").unwrap(), ty("S(S(B) * B)"));
    assert_eq!(min("zero(B) + |1>").unwrap(), ty("S(B)"));
    assert_eq!(min("zero(S(B)) + |1>").unwrap(), ty("S(S(B))"));
    assert!(matches!(min(r"|0> + (\x:B. x)"), Err(TypeError::NoJoin { .. })));
}

#[test]
fn join_is_outer_only() {
    assert_eq!(join_types(&Type::B, &ty("S(B)")).unwrap(), ty("S(B)"));
    assert_eq!(join_types(&Type::B, &Type::B).unwrap(), Type::B);
    assert!(join_types(&ty("B => B"), &Type::B).is_err());
}

#[test]
fn classification() {
    let c = ty("B * B").classify();
    assert!(c.basis && c.qubit);
    let c = ty("S(B) => B").classify();
    assert!(c.basis && !c.qubit);
    let c = ty("S(B)").classify();
    assert!(!c.basis && c.qubit);
}

#[test]
fn check_lifts_at_the_root() {
    let d = check_type(&Context::new(), &Term::Ket0, &ty("S(B)")).unwrap();
    assert_eq!(d.rule, Rule::SI);
    assert_eq!(d.premises[0].rule, Rule::AxKet0);

    let d = check_type(&Context::new(), &parse_term("|0> + |1>").unwrap(), &ty("S(B)")).unwrap();
    assert_eq!(d.rule, Rule::SumI);
    assert!(d.premises.iter().all(|p| p.rule == Rule::SI));

    let d = check_type(&Context::new(), &parse_term("|0> + |1>").unwrap(), &ty("S(S(B))")).unwrap();
    assert_eq!(d.rule, Rule::SI);
    assert_eq!(d.premises[0].rule, Rule::SumI);
}

#[test]
fn check_rejects_unreachable_targets() {
    let id = parse_term(r"\x:B. x").unwrap();
    assert!(matches!(
        check_type(&Context::new(), &id, &ty("S(B)")),
        Err(TypeError::NotLiftable { .. })
    ));
    assert!(check_type(&Context::new(), &id, &ty("S(B => B)")).is_ok());
    assert!(check_type(&Context::new(), &id, &ty("B => S(B)")).is_ok());
}

#[test]
fn inner_lifting_in_products() {
    let d = check_type(&Context::new(), &parse_term("|00>").unwrap(), &ty("S(B) * B")).unwrap();
    assert_eq!(d.rule, Rule::ProdI);
    assert_eq!(d.premises[0].rule, Rule::SI);
}

#[test]
fn canonical_derivations_have_no_redex_and_expand_back() {
    let terms = [
        "2.(|0> + |1>)",
        "|0> + |1>",
        r"(\x:B. x) |0>",
        "(if? |0> |1>) |1>",
        "3.|0> + (|1> + zero(B))",
    ];
    for src in terms {
        let t = parse_term(src).unwrap();
        let m = type_of(&t).unwrap();
        for k in 0..3 {
            let d = check_type(&Context::new(), &t, &m.clone().lift(k)).unwrap();
            assert!(!appendix::has_redex(&d), "{src} at lift {k}");
            assert_eq!(appendix::normalize(&d), d);
            if let Some((_, e)) = appendix::expand(&d) {
                assert!(appendix::has_redex(&e) || e.rule == Rule::Par);
                assert_eq!(appendix::normalize(&e), d);
            }
        }
    }
}

#[test]
fn distributions_check_branchwise() {
    let d = crate::syntax::parse_dist("[ 1/2: |0> || 1/2: |1> ]").unwrap();
    let der = check_dist(&Context::new(), &d, &ty("S(B)")).unwrap();
    assert_eq!(der.rule, Rule::SI);
    assert_eq!(der.premises[0].rule, Rule::Par);
    let (n, e) = appendix::expand(&der).unwrap();
    assert_eq!(n, 4);
    assert_eq!(appendix::normalize(&e), der);
}
