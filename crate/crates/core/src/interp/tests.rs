use super::*;
use crate::orderanalysis::catalog;

fn lex2() -> Interpretation {
    catalog::get("lex_omega2").unwrap()
}

fn decide_at(f: &Formula, vars: &[String], p: &[u64]) -> bool {
    let map: HashMap<String, Term> = vars.iter().cloned().zip(point_terms(p)).collect();
    qelim::decide(&f.substitute_terms(&map)).unwrap()
}

#[test]
fn conventions_are_checked() {
    assert!(Interpretation::from_strings("bad", 1, "y1 = 0", "x1 < y1", None).is_err());
    assert!(Interpretation::from_strings("bad", 1, "0 = 0", "x1 < z", None).is_err());
    assert!(Interpretation::from_strings("bad", 0, "0 = 0", "0 = 0", None).is_err());
    let e = Interpretation::from_json_str(r#"{"name": "n", "dim": 0, "domain": "0 = 0", "less": "x1 < y1"}"#);
    assert!(matches!(e, Err(Error::InvalidInterpretation(m)) if m.contains("dim")));
    assert!(Interpretation::from_json_str("{\"name\": ").is_err());
}

#[test]
fn json_round_trip() {
    for i in catalog::catalog() {
        let back = Interpretation::from_json_str(&i.to_json().to_string()).unwrap();
        assert_eq!(back, i);
    }
}

#[test]
fn validation() {
    assert!(lex2().validate().unwrap().all_hold());
    let r = Interpretation::from_strings("eq", 1, "0 = 0", "x1 = y1", None).unwrap().validate().unwrap();
    assert_eq!(r.verdict("irreflexivity"), Some(false));
    assert!(catalog::get("omega_plus_omega_star").unwrap().validate().unwrap().all_hold());
    let parity = Interpretation::from_strings(
        "parity",
        1,
        "0 = 0",
        "x1 == 0 mod 2 & y1 == 1 mod 2",
        Some("x1 == y1 mod 2"),
    )
    .unwrap();
    assert!(parity.validate().unwrap().all_hold());
}

#[test]
fn internal_comparisons() {
    assert!(lex2().internal_less(&[0, 5], &[1, 0]).unwrap());
    assert!(!lex2().internal_less(&[1, 0], &[0, 5]).unwrap());
    let ws = catalog::get("omega_plus_omega_star").unwrap();
    assert!(ws.internal_less(&[3], &[1]).unwrap());
    let f5 = catalog::get("finite5").unwrap();
    assert_eq!(f5.internal_less(&[7], &[1]), Err(Error::OutsideDomain(vec![7])));
}

#[test]
fn ascending_enumeration() {
    let a = lex2().enumerate_ascending(4, 10).unwrap();
    assert_eq!(a.points, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![0, 3]]);
    assert!(!a.truncated);
    let ws = catalog::get("omega_plus_omega_star").unwrap();
    assert_eq!(ws.enumerate_ascending(3, 10).unwrap().points, vec![vec![0], vec![2], vec![4]]);
    let empty = Interpretation::from_strings("e", 1, "x1 < 0", "x1 < y1", None).unwrap();
    let a = empty.enumerate_ascending(3, 10).unwrap();
    assert!(a.points.is_empty() && a.truncated);
}

#[test]
fn same_galaxy_examples() {
    let i = lex2();
    let t = i.same_galaxy_formula();
    let v: Vec<String> = xs(2).into_iter().chain(ys(2)).collect();
    assert!(decide_at(&t, &v, &[0, 1, 0, 9]));
    assert!(!decide_at(&t, &v, &[0, 3, 1, 0]));
    assert!(decide_at(&t, &v, &[4, 4, 4, 4]));
}

#[test]
fn representative_examples() {
    let d = lex2().lex_min_representative_formula();
    assert!(decide_at(&d, &xs(2), &[3, 0]));
    assert!(!decide_at(&d, &xs(2), &[3, 1]));
    let omega = catalog::get("omega").unwrap().lex_min_representative_formula();
    assert!(decide_at(&omega, &xs(1), &[0]));
    assert!(!decide_at(&omega, &xs(1), &[4]));
    let ws = catalog::get("omega_plus_omega_star").unwrap().lex_min_representative_formula();
    let reps: Vec<u64> = (0..10).filter(|&k| decide_at(&ws, &xs(1), &[k])).collect();
    assert_eq!(reps, vec![0, 1]);
}
