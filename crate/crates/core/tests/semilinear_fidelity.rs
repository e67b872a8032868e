mod common;

use std::collections::BTreeSet;

use common::*;
use presburger::formula::{Assignment, Formula};
use presburger::qelim::Qf;
use presburger::semilinear::{Decomposition, SemilinearSet, DEFAULT_MAX_PIECES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const B: u64 = 40;

fn brute(f: &Formula, vars: &[&str]) -> Vec<Vec<i64>> {
    grid(vars.len(), B)
        .into_iter()
        .filter(|p| f.evaluate(&Assignment::from_pairs(vars, p)).unwrap())
        .map(|p| p.into_iter().map(|x| x as i64).collect())
        .collect()
}

fn check(d: &Decomposition) {
    let mut seen = BTreeSet::new();
    for p in &d.pieces {
        assert!(p.is_fundamental(), "{p} not fundamental");
        for v in SemilinearSet::from(p).enumerate(B) {
            assert!(seen.insert(v.clone()), "{v:?} lies in two pieces");
        }
    }
}

fn run(seed: u64, vars: &[&str], count: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let f = random_qf(&mut rng, vars, 2);
        let q = Qf::from_formula(&f).unwrap();
        let d = Decomposition::of_formula(&q, vars, DEFAULT_MAX_PIECES).unwrap();
        check(&d);
        assert_eq!(d.enumerate(B), brute(&f, vars), "{f}");
        let s = SemilinearSet::from_formula(&q, vars).unwrap();
        assert_eq!(s.enumerate(B), d.enumerate(B));
    }
}

#[test]
fn one_variable() {
    run(1, &["x"], 60);
}

#[test]
fn two_variables() {
    run(2, &["x", "y"], 60);
}

#[test]
fn three_variables() {
    run(3, &VARS, 12);
}

#[test]
fn full_space_dimension() {
    for k in 1..=3 {
        let d = Decomposition::of_formula(&Qf::True, &VARS[..k], DEFAULT_MAX_PIECES).unwrap();
        assert_eq!(d.dimension(), k);
    }
}

#[test]
fn dimension_is_stable_under_reordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let f = random_qf(&mut rng, &["x", "y"], 2);
        let q = Qf::from_formula(&f).unwrap();
        let d = Decomposition::of_formula(&q, &["x", "y"], DEFAULT_MAX_PIECES).unwrap();
        let mut rev = d.as_set();
        rev.lattices.reverse();
        // Re-decompose the (disjoint) union from a different lattice order.
        let d2 = rev.ito_decompose().unwrap();
        assert_eq!(d.dimension(), d2.dimension(), "{f}");
        assert_eq!(d.enumerate(B), d2.enumerate(B));
    }
}
