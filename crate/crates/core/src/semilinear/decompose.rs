//! Disjoint fundamental decomposition of the solution set of a
//! quantifier-free formula over `N^m`.
//!
//! 1. The formula is split along its atoms into pairwise disjoint cells, each
//!    a conjunction of equations, inequalities and congruences.
//! 2. A cell's integer points are parametrised as `x0 + B y` with `B`
//!    injective; the congruences and equations disappear into the
//!    parametrisation, the inequalities (with `x >= 0`) become a pointed
//!    polyhedron in `y`.
//! 3. The polyhedron is peeled along a recession ray `v`: every point is
//!    uniquely `s + n v` where `s - v` lies outside, and the set of such `s`
//!    is a union of thin slabs handled recursively.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, Halfspace, Vector};
use crate::qelim::{Atom, Linear, Qf, Var};

/// Default bound on the number of pieces of one decomposition.
pub const DEFAULT_MAX_PIECES: usize = 10_000;

struct Ctx<'a> {
    vars: &'a [Var],
    max_pieces: usize,
    produced: usize,
}

impl Ctx<'_> {
    fn budget(&self) -> Error {
        Error::Budget { what: "decomposition pieces", budget: self.max_pieces }
    }

    fn row(&self, e: &Linear) -> Result<(Vector, BigInt)> {
        if let Some(v) = e.vars().find(|v| !self.vars.contains(v)) {
            return Err(Error::UnboundVariable(v.name()));
        }
        Ok((self.vars.iter().map(|&v| e.coeff(v)).collect(), e.constant_part().clone()))
    }

    /// Halfspaces implied by the linear literals of a cell (congruences
    /// dropped), including `x >= 0`.
    fn relaxation(&self, lits: &[Atom]) -> Result<Vec<Halfspace>> {
        let m = self.vars.len();
        let mut out = Vec::new();
        for i in 0..m {
            let mut c = vec![BigInt::zero(); m];
            c[i] = BigInt::from(-1);
            out.push(Halfspace::new(c, BigInt::zero()));
        }
        for a in lits {
            let (c, k) = self.row(a.linear())?;
            match a {
                Atom::Le(_) => out.push(Halfspace::new(c, -k)),
                Atom::Eq(_) => {
                    out.push(Halfspace::new(c.iter().map(|x| -x).collect(), k.clone()));
                    out.push(Halfspace::new(c, -k));
                }
                _ => {}
            }
        }
        Ok(out)
    }
}

/// Decomposes `{x in N^m : phi(x)}` (variables in `vars` order).
pub fn decompose_qf(phi: &Qf, vars: &[Var], max_pieces: usize) -> Result<Vec<Lattice>> {
    let mut ctx = Ctx { vars, max_pieces, produced: 0 };
    let mut cells = Vec::new();
    split(&mut ctx, phi.clone(), Vec::new(), &mut cells)?;
    let mut pieces = Vec::new();
    for cell in cells {
        cell_pieces(&mut ctx, &cell, &mut pieces)?;
    }
    Ok(pieces)
}

fn first_atom(phi: &Qf) -> Option<Atom> {
    let mut found = None;
    phi.for_each_atom(&mut |a| {
        if found.is_none() {
            found = Some(a.clone());
        }
    });
    found
}

/// Truth of `b` if it is forced by the literals.
fn forced(lits: &[Atom], b: &Atom) -> Option<bool> {
    let with = |a: Atom| {
        let mut v: Vec<Qf> = lits.iter().cloned().map(Qf::Atom).collect();
        v.push(a.normalize());
        Qf::and(v) == Qf::False
    };
    if with(b.clone()) {
        Some(false)
    } else if with(b.negate()) {
        Some(true)
    } else {
        None
    }
}

/// Literal sets (positive forms) whose disjunction is exactly `a` or `!a`,
/// pairwise disjoint.
fn branches(a: &Atom, truth: bool) -> Vec<Vec<Atom>> {
    let one = BigInt::from(1);
    let below = |e: &Linear| Atom::Le(e.add_constant(&one));
    let above = |e: &Linear| Atom::Le(e.neg().add_constant(&one));
    match (a, truth) {
        (Atom::Le(e), true) => vec![vec![Atom::Le(e.clone())]],
        (Atom::Le(e), false) => vec![vec![above(e)]],
        (Atom::Eq(e), true) | (Atom::Ne(e), false) => vec![vec![Atom::Eq(e.clone())]],
        (Atom::Eq(e), false) | (Atom::Ne(e), true) => vec![vec![below(e)], vec![above(e)]],
        (Atom::Dvd(d, e), true) | (Atom::NDvd(d, e), false) => vec![vec![Atom::Dvd(d.clone(), e.clone())]],
        (Atom::Dvd(d, e), false) | (Atom::NDvd(d, e), true) => {
            let d64 = d.to_u64().unwrap_or(u64::MAX);
            (1..d64)
                .map(|r| vec![Atom::Dvd(d.clone(), e.add_constant(&-BigInt::from(r)))])
                .collect()
        }
    }
}

fn split(ctx: &mut Ctx, phi: Qf, lits: Vec<Atom>, out: &mut Vec<Vec<Atom>>) -> Result<()> {
    let Some(a) = first_atom(&phi) else {
        if phi == Qf::True {
            out.push(lits);
        }
        return Ok(());
    };
    for truth in [true, false] {
        for extra in branches(&a, truth) {
            let mut next = lits.clone();
            let mut dead = false;
            for l in extra {
                match l.normalize() {
                    Qf::True => {}
                    Qf::False => dead = true,
                    Qf::Atom(l) => next.push(l),
                    _ => unreachable!(),
                }
            }
            if dead || Qf::and(next.iter().cloned().map(Qf::Atom).collect()) == Qf::False {
                continue;
            }
            if !linalg::feasible(&ctx.relaxation(&next)?, ctx.vars.len()) {
                continue;
            }
            let rest = phi.map_atoms(&|b| {
                if *b == a {
                    return Qf::bool(truth);
                }
                match forced(&next, b) {
                    Some(t) => Qf::bool(t),
                    None => Qf::Atom(b.clone()),
                }
            });
            split(ctx, rest, next, out)?;
            if out.len() > ctx.max_pieces {
                return Err(ctx.budget());
            }
        }
    }
    Ok(())
}

/// Integer parametrisation and peeling of one cell.
fn cell_pieces(ctx: &mut Ctx, lits: &[Atom], out: &mut Vec<Lattice>) -> Result<()> {
    let m = ctx.vars.len();
    let congs: Vec<&Atom> = lits.iter().filter(|a| matches!(a, Atom::Dvd(..))).collect();
    let n = m + congs.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for a in lits {
        if let Atom::Eq(e) = a {
            let (mut c, k) = ctx.row(e)?;
            c.resize(n, BigInt::zero());
            rows.push(c);
            rhs.push(-k);
        }
    }
    // d | c.x + k   <=>   c.x - d t = -k  for an integer t
    for (j, a) in congs.iter().enumerate() {
        if let Atom::Dvd(d, e) = a {
            let (mut c, k) = ctx.row(e)?;
            c.resize(n, BigInt::zero());
            c[m + j] = -d.clone();
            rows.push(c);
            rhs.push(-k);
        }
    }
    let Some(sol) = linalg::solve_integer(&rows, &rhs, n) else {
        return Ok(());
    };
    let x0: Vector = sol.particular[..m].to_vec();
    let basis: Vec<Vector> = sol.kernel.iter().map(|v| v[..m].to_vec()).collect();
    let k = basis.len();
    // Image of y under B.
    let apply = |y: &[BigInt]| -> Vector {
        (0..m).map(|i| basis.iter().zip(y).map(|(b, yy)| &b[i] * yy).sum()).collect()
    };
    let pull = |c: &Vector, bound: BigInt| -> Halfspace {
        let coeffs: Vector = basis.iter().map(|b| dot(c, b)).collect();
        Halfspace::new(coeffs, bound - dot(c, &x0))
    };
    let mut cons = Vec::new();
    for h in ctx.relaxation(lits)? {
        cons.push(pull(&h.coeffs, h.bound));
    }
    let mut found = Vec::new();
    peel(ctx, cons, k, &mut found)?;
    for (s, rays) in found {
        let base: Vector = x0.iter().zip(apply(&s)).map(|(a, b)| a + b).collect();
        let periods: Vec<Vector> = rays.iter().map(|v| apply(v)).collect();
        out.push(Lattice::from_big(&base, &periods)?);
    }
    Ok(())
}

type Piece = (Vector, Vec<Vector>);

fn peel(ctx: &mut Ctx, cons: Vec<Halfspace>, k: usize, out: &mut Vec<Piece>) -> Result<()> {
    let Some(cons) = linalg::prune(cons) else {
        return Ok(());
    };
    if !linalg::feasible(&cons, k) {
        return Ok(());
    }
    let rows: Vec<Vector> = cons.iter().map(|h| h.coeffs.clone()).collect();
    let Some(v) = linalg::extreme_ray(&rows, k) else {
        let room = ctx.max_pieces.saturating_sub(ctx.produced);
        let pts = linalg::integer_points(&cons, k, room).ok_or_else(|| ctx.budget())?;
        ctx.produced += pts.len();
        if ctx.produced > ctx.max_pieces {
            return Err(ctx.budget());
        }
        out.extend(pts.into_iter().map(|p| (p, Vec::new())));
        return Ok(());
    };
    // Starts of v-chains: some constraint fails at y - v.
    let cutting: Vec<&Halfspace> = cons.iter().filter(|h| dot(&h.coeffs, &v).is_negative()).collect();
    for (i, h) in cutting.iter().enumerate() {
        let mut slab = cons.clone();
        let shift = dot(&h.coeffs, &v);
        // h.y > bound + h.v
        slab.push(Halfspace::new(h.coeffs.iter().map(|x| -x).collect(), -(&h.bound + &shift) - 1));
        for g in &cutting[..i] {
            slab.push(Halfspace::new(g.coeffs.clone(), &g.bound + dot(&g.coeffs, &v)));
        }
        let mut sub = Vec::new();
        peel(ctx, slab, k, &mut sub)?;
        for (s, mut rays) in sub {
            rays.push(v.clone());
            out.push((s, rays));
        }
    }
    Ok(())
}
