//! Galaxies, condensation and rank of interpreted orders.
//!
//! Two points share a galaxy when only finitely many points lie between
//! them. The condensation keeps the lexicographically least point of every
//! galaxy; iterating it until the domain is finite gives the rank.

pub mod catalog;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Term};
use crate::interp::{fresh_vars, lex_less, point_terms, tuple_eq, vars_to_terms, xs, ys, Interpretation};
use crate::qelim::{self, Budget, Qf, Var};
use crate::semilinear::{Decomposition, DEFAULT_MAX_PIECES};

/// Order type of one galaxy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", content = "size")]
pub enum GalaxyType {
    /// Order type of `N`: a least element, no greatest.
    TypeN,
    /// Order type of `-N`: a greatest element, no least.
    TypeNegN,
    /// Order type of `Z`: neither.
    TypeZ,
    /// Finite with the given number of elements.
    Finite(usize),
}

impl fmt::Display for GalaxyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GalaxyType::TypeN => write!(f, "N"),
            GalaxyType::TypeNegN => write!(f, "-N"),
            GalaxyType::TypeZ => write!(f, "Z"),
            GalaxyType::Finite(n) => write!(f, "Finite({n})"),
        }
    }
}

/// Resource limits shared by the analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub qe: Budget,
    pub max_pieces: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { qe: Budget::default(), max_pieces: DEFAULT_MAX_PIECES }
    }
}

#[derive(Debug, Clone)]
pub struct CondensationResult {
    /// Same order restricted to one point per galaxy.
    pub interp: Interpretation,
    /// Quantifier-free form of the condensed domain.
    pub domain: Qf,
    pub decomposition: Decomposition,
    pub dimension: usize,
}

#[derive(Debug, Clone)]
pub struct RankResult {
    pub rank: usize,
    pub chain: Vec<CondensationResult>,
    pub final_size: usize,
}

fn qf_at(q: &Qf, from: &[String], to: &[Term]) -> Result<Formula> {
    let map: HashMap<String, Term> = from.iter().cloned().zip(to.iter().cloned()).collect();
    Ok(q.to_formula()?.substitute_terms(&map))
}

/// Cached quantifier-free forms of the relations of one interpretation.
pub struct Analyzer {
    interp: Interpretation,
    limits: Limits,
    xs: Vec<String>,
    ys: Vec<String>,
    domain: Qf,
    same: Qf,
}

impl Analyzer {
    pub fn new(interp: &Interpretation) -> Result<Analyzer> {
        Analyzer::with_limits(interp, Limits::default())
    }

    pub fn with_limits(interp: &Interpretation, limits: Limits) -> Result<Analyzer> {
        let m = interp.dim;
        let domain = qelim::simplify(&qelim::eliminate_with(&interp.domain, &limits.qe)?);
        let same = qelim::simplify(&qelim::eliminate_with(&interp.same_galaxy_formula(), &limits.qe)?);
        Ok(Analyzer { interp: interp.clone(), limits, xs: xs(m), ys: ys(m), domain, same })
    }

    pub fn interpretation(&self) -> &Interpretation {
        &self.interp
    }

    /// Quantifier-free `T(x, y)`.
    pub fn same_galaxy(&self) -> &Qf {
        &self.same
    }

    fn same_at(&self, a: &[Term], b: &[Term]) -> Result<Formula> {
        let mut from = self.xs.clone();
        from.extend(self.ys.iter().cloned());
        let to: Vec<Term> = a.iter().chain(b).cloned().collect();
        qf_at(&self.same, &from, &to)
    }

    fn eliminate(&self, f: &Formula) -> Result<Qf> {
        Ok(qelim::simplify(&qelim::eliminate_with(f, &self.limits.qe)?))
    }

    /// Whether `T(a, b)` holds.
    pub fn same_galaxy_points(&self, a: &[u64], b: &[u64]) -> Result<bool> {
        let vars: Vec<Var> = self.xs.iter().chain(&self.ys).map(|v| Var::new(v)).collect();
        let pt: Vec<i64> = a.iter().chain(b).map(|&k| k as i64).collect();
        self.same.eval_point(&vars, &pt)
    }

    /// Members of the galaxy of `c` (terms) that are least in their
    /// equality class, as a formula in the variables of `u`.
    fn class_at(&self, c: &[Term], u: &[Term]) -> Result<Formula> {
        let t = self.same_at(c, u)?;
        Ok(match &self.interp.equality {
            None => t,
            Some(_) => {
                let w = vars_to_terms(&fresh_vars("w", self.interp.dim));
                let canonical = Formula::forall_many(
                    &fresh_names(&w),
                    Formula::implies(self.interp.equal_at(&w, u), Formula::not(lex_less(&w, u))),
                );
                Formula::and(t, canonical)
            }
        })
    }

    fn has_extreme(&self, a: &[Term], least: bool) -> Result<bool> {
        let m = self.interp.dim;
        let u = vars_to_terms(&fresh_vars("u", m));
        let v = vars_to_terms(&fresh_vars("v", m));
        let beyond = if least { self.interp.less_at(&v, &u) } else { self.interp.less_at(&u, &v) };
        let extreme = Formula::forall_many(
            &fresh_names(&v),
            Formula::implies(self.same_at(a, &v)?, Formula::not(beyond)),
        );
        let f = Formula::exists_many(&fresh_names(&u), Formula::and(self.same_at(a, &u)?, extreme));
        qelim::decide_with(&f, &self.limits.qe)
    }

    /// Order type of the galaxy of `a`.
    pub fn galaxy_type(&self, a: &[u64]) -> Result<GalaxyType> {
        let m = self.interp.dim;
        if a.len() != m {
            return Err(Error::ArityMismatch { expected: m, found: a.len() });
        }
        let vars: Vec<Var> = self.xs.iter().map(|v| Var::new(v)).collect();
        let pt: Vec<i64> = a.iter().map(|&k| k as i64).collect();
        if !self.domain.eval_point(&vars, &pt)? {
            return Err(Error::OutsideDomain(a.to_vec()));
        }
        let at = point_terms(a);
        let min = self.has_extreme(&at, true)?;
        let max = self.has_extreme(&at, false)?;
        Ok(match (min, max) {
            (true, true) => GalaxyType::Finite(self.galaxy_size(&at)?),
            (true, false) => GalaxyType::TypeN,
            (false, true) => GalaxyType::TypeNegN,
            (false, false) => GalaxyType::TypeZ,
        })
    }

    fn galaxy_size(&self, a: &[Term]) -> Result<usize> {
        let class = self.eliminate(&self.class_at(a, &vars_to_terms(&self.ys))?)?;
        let d = Decomposition::of_formula(&class, &self.ys, self.limits.max_pieces)?;
        if !d.is_finite() {
            return Err(Error::UnsupportedShape("galaxy with both endpoints is infinite".into()));
        }
        Ok(d.pieces.len())
    }

    /// Quantifier-free `D'(x)` for a quantifier-free equivalence `e(x, y)`.
    fn representatives(&self, e: &Qf) -> Result<Qf> {
        let m = self.interp.dim;
        let x = vars_to_terms(&self.xs);
        let w = vars_to_terms(&fresh_vars("w", m));
        let mut from = self.xs.clone();
        from.extend(self.ys.iter().cloned());
        let to: Vec<Term> = x.iter().chain(&w).cloned().collect();
        let body = Formula::implies(
            Formula::and(qf_at(e, &from, &to)?, Formula::not(tuple_eq(&x, &w))),
            lex_less(&x, &w),
        );
        let f = Formula::and(qf_at(&self.domain, &self.xs, &x)?, Formula::forall_many(&fresh_names(&w), body));
        self.eliminate(&f)
    }

    /// `T` refined so that every `Z` galaxy falls apart into the points
    /// below its representative and the rest.
    fn split_z_relation(&self, reps: &Qf) -> Result<Qf> {
        let m = self.interp.dim;
        let x = vars_to_terms(&self.xs);
        let y = vars_to_terms(&self.ys);
        let r = vars_to_terms(&fresh_vars("r", m));
        let u = vars_to_terms(&fresh_vars("u", m));
        let v = vars_to_terms(&fresh_vars("v", m));
        let extreme = |least: bool| -> Result<Formula> {
            let beyond = if least { self.interp.less_at(&v, &u) } else { self.interp.less_at(&u, &v) };
            let inner = Formula::forall_many(
                &fresh_names(&v),
                Formula::implies(self.same_at(&x, &v)?, Formula::not(beyond)),
            );
            Ok(Formula::exists_many(&fresh_names(&u), Formula::and(self.same_at(&x, &u)?, inner)))
        };
        let z = Formula::and(Formula::not(extreme(true)?), Formula::not(extreme(false)?));
        let z = self.eliminate(&z)?;
        let below = |p: &[Term]| Formula::and(
            Formula::not(self.interp.less_at(&r, p)),
            Formula::not(tuple_eq(&r, p)),
        );
        let side = Formula::forall_many(
            &fresh_names(&r),
            Formula::implies(
                Formula::and(qf_at(reps, &self.xs, &r)?, self.same_at(&r, &x)?),
                Formula::and(
                    Formula::implies(below(&x), below(&y)),
                    Formula::implies(below(&y), below(&x)),
                ),
            ),
        );
        let f = Formula::and(
            self.same_at(&x, &y)?,
            Formula::implies(qf_at(&z, &self.xs, &x)?, side),
        );
        self.eliminate(&f)
    }

    /// Condensation: one point per galaxy.
    pub fn condense(&self) -> Result<CondensationResult> {
        self.condense_with(false)
    }

    /// Condensation, optionally splitting every `Z` galaxy into its `-N`
    /// and `N` halves first.
    pub fn condense_with(&self, split_z: bool) -> Result<CondensationResult> {
        let mut domain = self.representatives(&self.same)?;
        if split_z {
            let refined = self.split_z_relation(&domain)?;
            domain = self.representatives(&refined)?;
        }
        let decomposition = Decomposition::of_formula(&domain, &self.xs, self.limits.max_pieces)?;
        let dimension = decomposition.dimension();
        // The pieces often describe the same set far more compactly.
        let compact = decomposition.to_qf(&self.xs)?;
        if compact.node_count() < domain.node_count() {
            domain = compact;
        }
        let interp = Interpretation::new(
            &format!("c({})", self.interp.name),
            self.interp.dim,
            domain.to_formula()?,
            self.interp.less.clone(),
            self.interp.equality.clone(),
        )?;
        Ok(CondensationResult { interp, domain, decomposition, dimension })
    }

    /// Number of iterated condensations needed to reach a finite order.
    pub fn vd_rank(&self) -> Result<RankResult> {
        let m = self.interp.dim;
        let mut chain: Vec<CondensationResult> = Vec::new();
        let mut current = Decomposition::of_formula(&self.domain, &self.xs, self.limits.max_pieces)?;
        loop {
            if current.is_finite() {
                let final_size = match chain.last() {
                    Some(c) => finite_size(&c.interp, &current)?,
                    None => finite_size(&self.interp, &current)?,
                };
                return Ok(RankResult { rank: chain.len(), chain, final_size });
            }
            if chain.len() > m {
                return Err(Error::RankBound(m + 1));
            }
            let next = match chain.last() {
                None => self.condense()?,
                Some(c) => Analyzer::with_limits(&c.interp, self.limits)?.condense()?,
            };
            current = next.decomposition.clone();
            chain.push(next);
        }
    }
}

fn fresh_names(ts: &[Term]) -> Vec<String> {
    ts.iter()
        .map(|t| match t {
            Term::Var(v) => v.clone(),
            _ => unreachable!("fresh variables"),
        })
        .collect()
}

/// Cardinality of a finite domain, counting equality classes.
fn finite_size(interp: &Interpretation, d: &Decomposition) -> Result<usize> {
    if interp.equality.is_none() {
        return Ok(d.pieces.len());
    }
    let pts: Vec<Vec<u64>> = d.pieces.iter().map(|l| l.base.iter().map(|&k| k as u64).collect()).collect();
    let mut classes: Vec<&Vec<u64>> = Vec::new();
    for p in &pts {
        let mut fresh = true;
        for q in &classes {
            let f = interp.equal_at(&point_terms(p), &point_terms(q));
            if qelim::decide(&f)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            classes.push(p);
        }
    }
    Ok(classes.len())
}

pub fn galaxy_type(interp: &Interpretation, a: &[u64]) -> Result<GalaxyType> {
    Analyzer::new(interp)?.galaxy_type(a)
}

pub fn condense(interp: &Interpretation) -> Result<CondensationResult> {
    Analyzer::new(interp)?.condense()
}

pub fn vd_rank(interp: &Interpretation) -> Result<RankResult> {
    Analyzer::new(interp)?.vd_rank()
}

#[cfg(test)]
mod tests;
