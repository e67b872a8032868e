//! Quantifier elimination and decision procedure for Presburger arithmetic
//! over the naturals.
//!
//! Formulas are lowered into negation normal form over integer linear forms
//! ([`Qf`]); quantifiers are removed innermost-first, each universal being
//! handled as `!exists !`. Every eliminated variable ranges over `N`, which is
//! enforced by conjoining `x >= 0` before each projection.

mod cooper;
mod linear;
mod qf;
mod var;

pub use linear::Linear;
pub use qf::{Atom, Qf};
pub use var::Var;

use crate::error::{Error, Result};
use crate::formula::Formula;

/// A quantifier-free formula in negation normal form with atoms
/// `e <= 0`, `e = 0`, `e != 0`, `d | e`, `!(d | e)`.
pub type QfFormula = Qf;

/// Default node budget for a single elimination.
pub const DEFAULT_MAX_NODES: usize = 1_000_000;

/// Resource limits for elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: DEFAULT_MAX_NODES }
    }
}

impl Budget {
    pub fn new(max_nodes: usize) -> Self {
        Budget { max_nodes }
    }

    fn exceeded(&self) -> Error {
        Error::Budget { what: "quantifier elimination nodes", budget: self.max_nodes }
    }

    pub(crate) fn check(&self, q: Qf) -> Result<Qf> {
        if q.node_count() > self.max_nodes {
            return Err(self.exceeded());
        }
        Ok(q)
    }

    pub(crate) fn check_many(&self, parts: &[Qf]) -> Result<()> {
        let n: usize = parts.iter().map(Qf::node_count).sum();
        if n > self.max_nodes {
            return Err(self.exceeded());
        }
        Ok(())
    }
}

/// Equivalent quantifier-free formula (over `N`) with default budget.
pub fn eliminate(phi: &Formula) -> Result<QfFormula> {
    eliminate_with(phi, &Budget::default())
}

pub fn eliminate_with(phi: &Formula, budget: &Budget) -> Result<QfFormula> {
    lower(phi, budget)
}

fn lower(phi: &Formula, budget: &Budget) -> Result<Qf> {
    Ok(match phi {
        Formula::Atom(..) | Formula::Congruent(..) => Qf::from_formula(phi)?,
        Formula::Not(f) => lower(f, budget)?.negate(),
        Formula::And(a, b) => {
            let l = lower(a, budget)?;
            if l == Qf::False {
                return Ok(Qf::False);
            }
            Qf::and(vec![l, lower(b, budget)?])
        }
        Formula::Or(a, b) => {
            let l = lower(a, budget)?;
            if l == Qf::True {
                return Ok(Qf::True);
            }
            Qf::or(vec![l, lower(b, budget)?])
        }
        Formula::Implies(a, b) => {
            let l = lower(a, budget)?;
            if l == Qf::False {
                return Ok(Qf::True);
            }
            Qf::or(vec![l.negate(), lower(b, budget)?])
        }
        Formula::Exists(v, body) => {
            let inner = lower(body, budget)?;
            cooper::exists(Var::new(v), &inner, budget)?
        }
        Formula::Forall(v, body) => {
            let inner = lower(body, budget)?.negate();
            cooper::exists(Var::new(v), &inner, budget)?.negate()
        }
    })
}

/// Eliminates `exists v` from an already quantifier-free formula.
pub fn project(v: &str, phi: &QfFormula, budget: &Budget) -> Result<QfFormula> {
    cooper::exists(Var::new(v), phi, budget)
}

/// Eliminates `forall v` from an already quantifier-free formula.
pub fn project_forall(v: &str, phi: &QfFormula, budget: &Budget) -> Result<QfFormula> {
    Ok(cooper::exists(Var::new(v), &phi.negate(), budget)?.negate())
}

/// Truth of a sentence in `(N, +)`.
pub fn decide(phi: &Formula) -> Result<bool> {
    decide_with(phi, &Budget::default())
}

pub fn decide_with(phi: &Formula, budget: &Budget) -> Result<bool> {
    let free = phi.free_vars();
    if !free.is_empty() {
        return Err(Error::FreeVariables(free.into_iter().collect()));
    }
    match lower(phi, budget)? {
        Qf::True => Ok(true),
        Qf::False => Ok(false),
        other => unreachable!("closed formula did not reduce to a constant: {other}"),
    }
}

/// Folds constants, normalises atoms and collapses trivial connectives.
pub fn simplify(phi: &QfFormula) -> QfFormula {
    match phi {
        Qf::True | Qf::False => phi.clone(),
        Qf::Atom(a) => a.clone().normalize(),
        Qf::And(xs) => Qf::and(xs.iter().map(simplify).collect()),
        Qf::Or(xs) => Qf::or(xs.iter().map(simplify).collect()),
    }
}

#[cfg(test)]
mod tests;
