//! Elimination of one existential quantifier over `N`.
//!
//! Conjunctions are handled by cheap exact rules where they apply (equality
//! substitution, unit-coefficient shadows); everything else goes through
//! Cooper's construction with the bound `x >= 0` conjoined.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linear::Linear;
use super::qf::{Atom, Qf};
use super::var::Var;
use super::Budget;
use crate::error::{Error, Result};

/// Largest DNF expansion attempted before falling back to Cooper on the
/// whole formula.
const DNF_LIMIT: usize = 64;

/// `exists x >= 0. phi`, quantifier-free.
pub(crate) fn exists(x: Var, phi: &Qf, budget: &Budget) -> Result<Qf> {
    if !phi.mentions(x) {
        return Ok(phi.clone());
    }
    match phi {
        Qf::Or(xs) => {
            let mut parts = Vec::with_capacity(xs.len());
            for d in xs {
                parts.push(exists(x, d, budget)?);
            }
            budget.check(Qf::or(parts))
        }
        _ => {
            if let Some(conjs) = phi.dnf(DNF_LIMIT) {
                let mut parts = Vec::with_capacity(conjs.len());
                for c in conjs {
                    parts.push(exists_conj(x, c, budget)?);
                    if matches!(parts.last(), Some(Qf::True)) {
                        return Ok(Qf::True);
                    }
                }
                budget.check(Qf::or(parts))
            } else {
                if let Qf::And(xs) = phi {
                    if let Some(eq) = pick_equality(x, xs.iter().filter_map(as_atom)) {
                        return budget.check(substitute_equality(x, &eq, phi));
                    }
                }
                cooper(x, phi, budget)
            }
        }
    }
}

fn as_atom(q: &Qf) -> Option<&Atom> {
    match q {
        Qf::Atom(a) => Some(a),
        _ => None,
    }
}

fn pick_equality<'a>(x: Var, atoms: impl Iterator<Item = &'a Atom>) -> Option<Atom> {
    atoms
        .filter(|a| matches!(a, Atom::Eq(e) if e.mentions(x)))
        .min_by_key(|a| a.linear().coeff(x).abs())
        .cloned()
}

/// Uses `a*x + t = 0` (an atom of `phi`) to remove `x`.
fn substitute_equality(x: Var, eq: &Atom, phi: &Qf) -> Qf {
    let e = eq.linear();
    let mut a = e.coeff(x);
    let mut t = e.without(x);
    if a.is_negative() {
        a = -a;
        t = t.neg();
    }
    // a*x = -t.  Any atom c*x + s becomes (after scaling by a) -c*t + a*s.
    let rewritten = phi.map_atoms(&|atom| {
        let c = atom.linear().coeff(x);
        if c.is_zero() {
            return Qf::Atom(atom.clone());
        }
        let s = atom.linear().without(x);
        let lin = s.scale(&a).sub(&t.scale(&c));
        match atom {
            Atom::Dvd(d, _) => Atom::Dvd(d * &a, lin),
            Atom::NDvd(d, _) => Atom::NDvd(d * &a, lin),
            other => other.map_linear(|_| lin.clone()),
        }
        .normalize()
    });
    // x = -t/a must be a natural number.
    Qf::and(vec![
        rewritten,
        Atom::Dvd(a.clone(), t.clone()).normalize(),
        Atom::Le(t).normalize(),
    ])
}

fn exists_conj(x: Var, atoms: Vec<Atom>, budget: &Budget) -> Result<Qf> {
    let (with_x, without): (Vec<Atom>, Vec<Atom>) =
        atoms.into_iter().partition(|a| a.linear().mentions(x));
    let rest = Qf::and(without.into_iter().map(Qf::Atom).collect());
    if rest == Qf::False {
        return Ok(Qf::False);
    }
    if with_x.is_empty() {
        return Ok(rest);
    }
    if let Some(eq) = pick_equality(x, with_x.iter()) {
        let phi = Qf::And(with_x.into_iter().map(Qf::Atom).collect());
        return budget.check(Qf::and(vec![rest, substitute_equality(x, &eq, &phi)]));
    }
    let unit_bounds = with_x
        .iter()
        .all(|a| matches!(a, Atom::Le(e) if e.coeff(x).abs().is_one()));
    if unit_bounds {
        return budget.check(Qf::and(vec![rest, shadow(x, &with_x)]));
    }
    let phi = Qf::And(with_x.into_iter().map(Qf::Atom).collect());
    let core = cooper(x, &phi, budget)?;
    budget.check(Qf::and(vec![rest, core]))
}

/// Exact projection when every bound on `x` has coefficient +-1:
/// `exists x. (l_i <= x, x <= u_j, 0 <= x)` iff all `l_i <= u_j` and `0 <= u_j`.
fn shadow(x: Var, bounds: &[Atom]) -> Qf {
    let mut lowers = vec![Linear::zero()];
    let mut uppers = Vec::new();
    for a in bounds {
        let e = a.linear();
        let t = e.without(x);
        if e.coeff(x).is_positive() {
            // x + t <= 0: x <= -t
            uppers.push(t.neg());
        } else {
            // -x + t <= 0: x >= t
            lowers.push(t);
        }
    }
    let mut out = Vec::with_capacity(lowers.len() * uppers.len());
    for l in &lowers {
        for u in &uppers {
            out.push(Atom::Le(l.sub(u)).normalize());
        }
    }
    Qf::and(out)
}

fn lcm_all<'a>(it: impl Iterator<Item = &'a BigInt>) -> BigInt {
    it.fold(BigInt::one(), |acc, c| acc.lcm(c))
}

/// Cooper's construction on an arbitrary NNF formula.
fn cooper(x: Var, phi: &Qf, budget: &Budget) -> Result<Qf> {
    // Scale so every occurrence of x has coefficient +-1 (in units of x' = delta*x).
    let mut coeffs = Vec::new();
    phi.for_each_atom(&mut |a| {
        let c = a.linear().coeff(x);
        if !c.is_zero() {
            coeffs.push(c.abs());
        }
    });
    let delta = lcm_all(coeffs.iter());
    let unit = phi.map_atoms(&|a| {
        let c = a.linear().coeff(x);
        if c.is_zero() {
            return Qf::Atom(a.clone());
        }
        let m = &delta / c.abs();
        let s = a.linear().without(x).scale(&m);
        let lin = s.add(&Linear::term(x, if c.is_negative() { -1 } else { 1 }));
        let atom = match a {
            Atom::Dvd(d, _) => Atom::Dvd(d * &m, lin),
            Atom::NDvd(d, _) => Atom::NDvd(d * &m, lin),
            other => other.map_linear(|_| lin.clone()),
        };
        // Keep unit coefficients: only reduce when it cannot rescale x.
        Qf::Atom(unit_normalize(atom, x))
    });
    let mut conj = vec![unit, Qf::Atom(Atom::Le(Linear::term(x, -1)))];
    if !delta.is_one() {
        conj.push(Qf::Atom(Atom::Dvd(delta.clone(), Linear::var(x))));
    }
    let phi = Qf::And(conj);

    let mut moduli = Vec::new();
    let mut lower: BTreeSet<Linear> = BTreeSet::new();
    let mut upper: BTreeSet<Linear> = BTreeSet::new();
    phi.for_each_atom(&mut |a| {
        let e = a.linear();
        let c = e.coeff(x);
        if c.is_zero() {
            return;
        }
        // Orient so that the atom reads  x + t  (coefficient +1).
        let t = if c.is_positive() { e.without(x) } else { e.without(x).neg() };
        let one = BigInt::one();
        match a {
            Atom::Le(_) if c.is_positive() => {
                // x <= -t : strict upper bound -t + 1
                upper.insert(t.neg().add_constant(&one));
            }
            Atom::Le(_) => {
                // -x - t <= 0 ... written as -(x + t) <= 0 : x >= -t, strict lower -t - 1
                lower.insert(t.neg().add_constant(&-&one));
            }
            Atom::Eq(_) => {
                lower.insert(t.neg().add_constant(&-&one));
                upper.insert(t.neg().add_constant(&one));
            }
            Atom::Ne(_) => {
                lower.insert(t.neg());
                upper.insert(t.neg());
            }
            Atom::Dvd(d, _) | Atom::NDvd(d, _) => moduli.push(d.clone()),
        }
    });
    let period = lcm_all(moduli.iter());
    let period_len = period
        .to_usize()
        .ok_or(Error::Budget { what: "Cooper period", budget: usize::MAX })?;
    let est = period_len.saturating_mul(lower.len().min(upper.len() + 1));
    if est > budget.max_nodes {
        return Err(Error::Budget { what: "quantifier elimination nodes", budget: budget.max_nodes });
    }

    let mut parts = Vec::new();
    if lower.len() <= upper.len() + 1 {
        for j in 1..=period_len {
            let jj = BigInt::from(j);
            for b in &lower {
                let q = phi.substitute(x, &b.add_constant(&jj));
                if q == Qf::True {
                    return Ok(Qf::True);
                }
                parts.push(q);
            }
            budget.check_many(&parts)?;
        }
    } else {
        let inf = plus_infinity(x, &phi);
        for j in 1..=period_len {
            let jj = BigInt::from(j);
            let q = inf.substitute(x, &Linear::constant(-&jj));
            if q == Qf::True {
                return Ok(Qf::True);
            }
            parts.push(q);
            for a in &upper {
                let q = phi.substitute(x, &a.add_constant(&-&jj));
                if q == Qf::True {
                    return Ok(Qf::True);
                }
                parts.push(q);
            }
            budget.check_many(&parts)?;
        }
    }
    budget.check(Qf::or(parts))
}

/// Normalises an atom whose x-coefficient is +-1 without changing that
/// coefficient (gcd reduction would be a no-op anyway since gcd divides 1).
fn unit_normalize(a: Atom, _x: Var) -> Atom {
    match a.clone().normalize() {
        Qf::Atom(b) => b,
        // A +-1 coefficient cannot make the atom constant.
        _ => a,
    }
}

/// The formula for arbitrarily large x: lower bounds hold, upper bounds and
/// equalities fail, disequalities hold.
fn plus_infinity(x: Var, phi: &Qf) -> Qf {
    phi.map_atoms(&|a| {
        let c = a.linear().coeff(x);
        if c.is_zero() {
            return Qf::Atom(a.clone());
        }
        match a {
            Atom::Le(_) => Qf::bool(c.is_negative()),
            Atom::Eq(_) => Qf::False,
            Atom::Ne(_) => Qf::True,
            _ => Qf::Atom(a.clone()),
        }
    })
}
