#![allow(dead_code)]

use presburger::formula::{Assignment, Formula, Rel, Term};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn random_term<R: Rng>(rng: &mut R, vars: &[&str]) -> Term {
    let n = rng.gen_range(1..=3);
    let mut parts = Vec::new();
    for _ in 0..n {
        let t = match rng.gen_range(0..3) {
            0 => Term::Num(rng.gen_range(0..8)),
            1 => Term::var(*vars.choose(rng).unwrap()),
            _ => Term::scale(rng.gen_range(1..=5), Term::var(*vars.choose(rng).unwrap())),
        };
        parts.push(t);
    }
    Term::sum(parts)
}

pub fn random_atom<R: Rng>(rng: &mut R, vars: &[&str]) -> Formula {
    let l = random_term(rng, vars);
    let r = random_term(rng, vars);
    if rng.gen_bool(0.25) {
        Formula::Congruent(l, r, rng.gen_range(1..=6))
    } else {
        let rel = *[Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge].choose(rng).unwrap();
        Formula::Atom(rel, l, r)
    }
}

pub fn random_qf<R: Rng>(rng: &mut R, vars: &[&str], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.35) {
        return random_atom(rng, vars);
    }
    let a = random_qf(rng, vars, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(a),
        1 => Formula::and(a, random_qf(rng, vars, depth - 1)),
        2 => Formula::or(a, random_qf(rng, vars, depth - 1)),
        _ => Formula::implies(a, random_qf(rng, vars, depth - 1)),
    }
}

/// Random formula over `x, y, z` with at most `quants` quantifier blocks
/// alternating between the two kinds.
pub fn random_formula(rng: &mut ChaCha8Rng, quants: usize) -> Formula {
    let mut f = random_qf(rng, &VARS, 2);
    let mut order: Vec<&str> = VARS.to_vec();
    order.shuffle(rng);
    let mut universal = rng.gen_bool(0.5);
    for v in order.into_iter().take(quants) {
        f = if universal { Formula::forall(v, f) } else { Formula::exists(v, f) };
        universal = !universal;
    }
    f
}

/// Evaluation with every quantifier restricted to `[0, bound]`.
pub fn bounded_eval(f: &Formula, sigma: &Assignment, bound: u64) -> bool {
    match f {
        Formula::Exists(v, body) => (0..=bound).any(|k| {
            let mut s = sigma.clone();
            s.insert(v.as_str(), k);
            bounded_eval(body, &s, bound)
        }),
        Formula::Forall(v, body) => (0..=bound).all(|k| {
            let mut s = sigma.clone();
            s.insert(v.as_str(), k);
            bounded_eval(body, &s, bound)
        }),
        Formula::Not(a) => !bounded_eval(a, sigma, bound),
        Formula::And(a, b) => bounded_eval(a, sigma, bound) && bounded_eval(b, sigma, bound),
        Formula::Or(a, b) => bounded_eval(a, sigma, bound) || bounded_eval(b, sigma, bound),
        Formula::Implies(a, b) => !bounded_eval(a, sigma, bound) || bounded_eval(b, sigma, bound),
        atom => atom.evaluate(sigma).unwrap(),
    }
}

/// All points of `[0, bound]^dim` in lexicographic order.
pub fn grid(dim: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::new();
        for p in &out {
            for k in 0..=bound {
                let mut q = p.clone();
                q.push(k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}
