use super::*;
use crate::formula::{parse, Assignment};

fn p(s: &str) -> Formula {
    parse(s).unwrap()
}

fn eval_qf(q: &Qf, sigma: &Assignment) -> bool {
    q.to_formula().unwrap().evaluate(sigma).unwrap()
}

/// Checks `eliminate(lhs)` against a quantifier-free reference on a grid.
fn assert_equivalent_on_grid(lhs: &str, reference: &str, vars: &[&str], bound: u64) {
    let q = eliminate(&p(lhs)).unwrap();
    let r = p(reference);
    let mut point = vec![0u64; vars.len()];
    loop {
        let sigma = Assignment::from_pairs(vars, &point);
        assert_eq!(eval_qf(&q, &sigma), r.evaluate(&sigma).unwrap(), "{lhs} at {point:?}: got {q}");
        let mut i = 0;
        loop {
            if i == vars.len() {
                return;
            }
            point[i] += 1;
            if point[i] <= bound {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn evenness() {
    assert_equivalent_on_grid("exists u. x = u + u", "x == 0 mod 2", &["x"], 60);
}

#[test]
fn order_from_addition() {
    assert_equivalent_on_grid("exists z. y = x + z + 1", "x + 1 <= y", &["x", "y"], 25);
}

#[test]
fn congruence_from_addition() {
    assert_equivalent_on_grid(
        "exists u. (t = 3*u + s | s = 3*u + t)",
        "t == s mod 3",
        &["t", "s"],
        25,
    );
}

#[test]
fn elimination_is_quantifier_free_with_no_new_variables() {
    let f = p("exists u. forall v. (v < u | x + v >= 2*y)");
    let q = eliminate(&f).unwrap();
    let fv = q.to_formula().unwrap().free_vars();
    assert!(fv.is_subset(&f.free_vars()));
}

#[test]
fn decide_examples() {
    assert!(decide(&p("forall x. exists y. y = x + x")).unwrap());
    assert!(!decide(&p("exists x. x + 1 = 0")).unwrap());
    assert!(decide(&p("forall x. (x == 0 mod 2 | x == 1 mod 2)")).unwrap());
    assert!(!decide(&p("forall x. exists y. x = 2*y")).unwrap());
    assert!(decide(&p("forall x. x >= 12 -> (exists a. exists b. x = 3*a + 7*b)")).unwrap());
    assert!(!decide(&p("exists a. exists b. 11 = 3*a + 7*b")).unwrap());
}

#[test]
fn decide_rejects_open_formulas() {
    assert_eq!(decide(&p("x = 1")), Err(Error::FreeVariables(vec!["x".into()])));
}

#[test]
fn budget_is_enforced() {
    let f = p("forall x. exists y. forall z. (x + z == y mod 6 | 5*y < 3*x + 2*z)");
    assert!(matches!(
        eliminate_with(&f, &Budget::new(3)),
        Err(Error::Budget { .. })
    ));
}

#[test]
fn simplify_examples() {
    let q = Qf::from_formula(&p("0 = 0 & x < 3")).unwrap();
    assert_eq!(simplify(&q), Qf::from_formula(&p("x < 3")).unwrap());
    assert_eq!(simplify(&Qf::from_formula(&p("x < x")).unwrap()), Qf::False);
    assert_eq!(simplify(&Qf::from_formula(&p("x == 2 mod 1")).unwrap()), Qf::True);
    assert_eq!(simplify(&Qf::from_formula(&p("x <= 3 & x >= 3")).unwrap()).to_string(), "x = 3");
    assert_eq!(simplify(&Qf::from_formula(&p("x <= 3 | x >= 4")).unwrap()), Qf::True);
    assert_eq!(simplify(&Qf::from_formula(&p("2*x = 3")).unwrap()), Qf::False);
}

#[test]
fn qf_round_trips_through_surface_syntax() {
    let q = eliminate(&p("exists u. x = 3*u + y + 2")).unwrap();
    let back = Qf::from_formula(&q.to_formula().unwrap()).unwrap();
    for x in 0..20 {
        for y in 0..20 {
            let s = Assignment::new().with("x", x).with("y", y);
            assert_eq!(eval_qf(&q, &s), eval_qf(&back, &s));
        }
    }
}
