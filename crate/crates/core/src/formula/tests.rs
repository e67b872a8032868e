use super::*;
use proptest::prelude::*;

fn p(s: &str) -> Formula {
    parse(s).unwrap()
}

#[test]
fn parses_order_definition() {
    let f = p("exists z. y = x + z + 1");
    assert!(matches!(f, Formula::Exists(ref v, _) if v == "z"));
    let fv: Vec<_> = f.free_vars().into_iter().collect();
    assert_eq!(fv, vec!["x", "y"]);
}

#[test]
fn parses_closed_atom() {
    let f = p("0 = 0");
    assert_eq!(f, Formula::Atom(Rel::Eq, Term::Num(0), Term::Num(0)));
    assert!(f.free_vars().is_empty());
}

#[test]
fn rejects_zero_modulus() {
    assert!(matches!(parse("x == 1 mod 0"), Err(Error::ZeroModulus { .. })));
}

#[test]
fn reports_syntax_position() {
    match parse("x < ") {
        Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(parse("x = 1 )"), Err(Error::Syntax { position: 6, .. })));
    assert!(matches!(parse("X = 1"), Err(Error::Syntax { position: 0, .. })));
    assert!(matches!(parse("x = 99999999999999999999"), Err(Error::NumeralOverflow { .. })));
}

#[test]
fn precedence() {
    let f = p("a = 0 | b = 0 & c = 0 -> d = 0");
    match f {
        Formula::Implies(l, _) => assert!(matches!(*l, Formula::Or(..))),
        other => panic!("{other:?}"),
    }
    let g = p("!x = 0 & y = 0");
    assert!(matches!(g, Formula::And(..)));
}

#[test]
fn evaluates_atoms() {
    let s = Assignment::new().with("x", 4);
    assert!(p("x == 0 mod 2").evaluate(&s).unwrap());
    let s = Assignment::new().with("x", 3).with("y", 3);
    assert!(!p("x < y").evaluate(&s).unwrap());
    let s = Assignment::new().with("x", 5).with("y", 11);
    assert!(p("y = 2*x + 1").evaluate(&s).unwrap());
}

#[test]
fn evaluate_errors() {
    assert_eq!(p("x = 1").evaluate(&Assignment::new()), Err(Error::UnboundVariable("x".into())));
    assert_eq!(p("exists x. x = 1").evaluate(&Assignment::new()), Err(Error::NotQuantifierFree));
}

#[test]
fn substitution_examples() {
    assert_eq!(
        p("exists z. y = x + z + 1").substitute("x", 2).to_string(),
        "exists z. y = 2 + z + 1"
    );
    assert_eq!(p("x = x").substitute("x", 7).to_string(), "7 = 7");
    let bound = p("exists x. x = y");
    assert_eq!(bound.substitute("x", 1), bound);
}

#[test]
fn substitution_avoids_capture() {
    let f = p("exists y. x < y");
    let mut map = HashMap::new();
    map.insert("x".to_string(), Term::var("y"));
    let g = f.substitute_terms(&map);
    match &g {
        Formula::Exists(v, _) => assert_ne!(v, "y"),
        other => panic!("{other:?}"),
    }
    assert!(g.free_vars().contains("y"));
}

fn arb_term(vars: usize) -> impl Strategy<Value = Term> {
    let factor = prop_oneof![
        (0u64..20).prop_map(Term::Num),
        (0..vars).prop_map(|i| Term::Var(format!("v{i}"))),
        (0u64..6, 0..vars).prop_map(|(k, i)| Term::scale(k, Term::Var(format!("v{i}")))),
    ];
    prop::collection::vec(factor, 1..4).prop_map(|fs| fs.into_iter().reduce(Term::add).unwrap())
}

fn arb_atom(vars: usize) -> impl Strategy<Value = Formula> {
    let rel = prop_oneof![
        Just(Rel::Eq),
        Just(Rel::Ne),
        Just(Rel::Lt),
        Just(Rel::Le),
        Just(Rel::Gt),
        Just(Rel::Ge)
    ];
    prop_oneof![
        (rel, arb_term(vars), arb_term(vars)).prop_map(|(r, a, b)| Formula::Atom(r, a, b)),
        (arb_term(vars), arb_term(vars), 1u64..7).prop_map(|(a, b, m)| Formula::Congruent(a, b, m)),
    ]
}

fn arb_qf(vars: usize) -> impl Strategy<Value = Formula> {
    arb_atom(vars).prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    arb_qf(3).prop_recursive(2, 24, 2, |inner| {
        prop_oneof![
            (0..3usize, inner.clone()).prop_map(|(i, b)| Formula::exists(format!("v{i}"), b)),
            (0..3usize, inner.clone()).prop_map(|(i, b)| Formula::forall(format!("v{i}"), b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::and(a, b)),
        ]
    })
}

fn arb_assignment() -> impl Strategy<Value = Assignment> {
    prop::collection::vec(0u64..30, 3).prop_map(|vals| {
        let names = ["v0", "v1", "v2"];
        Assignment::from_pairs(&names, &vals)
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(f in arb_formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn evaluate_respects_connectives(a in arb_qf(3), b in arb_qf(3), s in arb_assignment()) {
        let (va, vb) = (a.evaluate(&s).unwrap(), b.evaluate(&s).unwrap());
        prop_assert_eq!(Formula::not(a.clone()).evaluate(&s).unwrap(), !va);
        prop_assert_eq!(Formula::and(a.clone(), b.clone()).evaluate(&s).unwrap(), va && vb);
        prop_assert_eq!(Formula::or(a.clone(), b.clone()).evaluate(&s).unwrap(), va || vb);
        prop_assert_eq!(Formula::implies(a, b).evaluate(&s).unwrap(), !va || vb);
    }

    #[test]
    fn substitute_matches_extended_assignment(f in arb_qf(3), s in arb_assignment(), k in 0u64..40) {
        let g = f.substitute("v1", k);
        let mut ext = s.clone();
        ext.insert("v1", k);
        prop_assert_eq!(g.evaluate(&s).unwrap(), f.evaluate(&ext).unwrap());
    }
}
