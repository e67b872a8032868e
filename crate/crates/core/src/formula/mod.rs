//! Abstract syntax of Presburger formulas over `(N, +)`.
//!
//! The language is `{=, +, <, <=, ==_n}` plus numerals, with `!=`, `>` and
//! `>=` kept as first-class atoms. Terms only ever denote natural numbers.

mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Num(u64),
    Add(Box<Term>, Box<Term>),
    /// `k*t`, the k-fold sum of `t`.
    Mul(u64, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Rel, Term, Term),
    /// `lhs == rhs mod modulus`, modulus >= 1.
    Congruent(Term, Term, u64),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

/// Values for free variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, u64>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: impl Into<String>, value: u64) -> Self {
        self.0.insert(var.into(), value);
        self
    }

    pub fn insert(&mut self, var: impl Into<String>, value: u64) {
        self.0.insert(var.into(), value);
    }

    pub fn get(&self, var: &str) -> Option<u64> {
        self.0.get(var).copied()
    }

    /// Binds `names[i]` to `values[i]`.
    pub fn from_pairs<S: AsRef<str>>(names: &[S], values: &[u64]) -> Self {
        let mut a = Self::new();
        for (n, v) in names.iter().zip(values) {
            a.insert(n.as_ref(), *v);
        }
        a
    }
}

impl FromIterator<(String, u64)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (String, u64)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

static FRESH: AtomicUsize = AtomicUsize::new(0);

/// A variable name that does not occur in any user formula (user identifiers
/// never contain a double underscore).
pub fn fresh_var(hint: &str) -> String {
    let n = FRESH.fetch_add(1, Ordering::Relaxed);
    format!("{hint}__{n}")
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn num(n: u64) -> Term {
        Term::Num(n)
    }

    pub fn add(self, other: Term) -> Term {
        Term::Add(Box::new(self), Box::new(other))
    }

    pub fn scale(k: u64, t: Term) -> Term {
        Term::Mul(k, Box::new(t))
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Num(_) => {}
            Term::Add(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Mul(_, t) => t.collect_vars(out),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }

    pub fn eval(&self, sigma: &Assignment) -> Result<u128> {
        let overflow = || Error::Overflow("term value exceeds 128 bits".into());
        Ok(match self {
            Term::Var(v) => sigma.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))? as u128,
            Term::Num(n) => *n as u128,
            Term::Add(a, b) => a.eval(sigma)?.checked_add(b.eval(sigma)?).ok_or_else(overflow)?,
            Term::Mul(k, t) => (*k as u128).checked_mul(t.eval(sigma)?).ok_or_else(overflow)?,
        })
    }

    fn map_vars(&self, f: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::Num(_) => self.clone(),
            Term::Add(a, b) => Term::Add(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Term::Mul(k, t) => Term::Mul(*k, Box::new(t.map_vars(f))),
        }
    }

    /// Sum of terms; `0` for an empty list.
    pub fn sum(terms: impl IntoIterator<Item = Term>) -> Term {
        terms.into_iter().reduce(Term::add).unwrap_or(Term::Num(0))
    }
}

impl Formula {
    pub fn atom(rel: Rel, l: Term, r: Term) -> Formula {
        Formula::Atom(rel, l, r)
    }

    pub fn congruent(l: Term, r: Term, modulus: u64) -> Formula {
        Formula::Congruent(l, r, modulus)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists_many<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    pub fn forall_many<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    /// `0 = 0`.
    pub fn truth() -> Formula {
        Formula::Atom(Rel::Eq, Term::Num(0), Term::Num(0))
    }

    /// `0 != 0`.
    pub fn falsity() -> Formula {
        Formula::Atom(Rel::Ne, Term::Num(0), Term::Num(0))
    }

    /// Conjunction of a list, `0 = 0` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or_else(Formula::truth)
    }

    /// Disjunction of a list, `0 != 0` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or_else(Formula::falsity)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, l, r) | Formula::Congruent(l, r, _) => {
                for v in l.vars().into_iter().chain(r.vars()) {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Exists(v, _) | Formula::Forall(v, _) = f {
                out.insert(v.clone());
            }
        });
        out
    }

    fn walk(&self, visit: &mut dyn FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Atom(..) | Formula::Congruent(..) => {}
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.walk(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.walk(&mut |f| {
            if matches!(f, Formula::Exists(..) | Formula::Forall(..)) {
                qf = false;
            }
        });
        qf
    }

    /// Number of AST nodes (terms excluded).
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Standard satisfaction over `N` for quantifier-free formulas.
    pub fn evaluate(&self, sigma: &Assignment) -> Result<bool> {
        Ok(match self {
            Formula::Atom(rel, l, r) => {
                let (a, b) = (l.eval(sigma)?, r.eval(sigma)?);
                match rel {
                    Rel::Eq => a == b,
                    Rel::Ne => a != b,
                    Rel::Lt => a < b,
                    Rel::Le => a <= b,
                    Rel::Gt => a > b,
                    Rel::Ge => a >= b,
                }
            }
            Formula::Congruent(l, r, m) => {
                let m = *m as u128;
                l.eval(sigma)? % m == r.eval(sigma)? % m
            }
            Formula::Not(f) => !f.evaluate(sigma)?,
            Formula::And(a, b) => a.evaluate(sigma)? && b.evaluate(sigma)?,
            Formula::Or(a, b) => a.evaluate(sigma)? || b.evaluate(sigma)?,
            Formula::Implies(a, b) => !a.evaluate(sigma)? || b.evaluate(sigma)?,
            Formula::Exists(..) | Formula::Forall(..) => return Err(Error::NotQuantifierFree),
        })
    }

    /// Replaces every free occurrence of `var` by the numeral `value`.
    pub fn substitute(&self, var: &str, value: u64) -> Formula {
        let mut map = HashMap::new();
        map.insert(var.to_string(), Term::Num(value));
        self.substitute_terms(&map)
    }

    /// Simultaneous capture-avoiding substitution of terms for free variables.
    pub fn substitute_terms(&self, map: &HashMap<String, Term>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Atom(rel, l, r) => {
                let f = |v: &str| map.get(v).cloned();
                Formula::Atom(*rel, l.map_vars(&f), r.map_vars(&f))
            }
            Formula::Congruent(l, r, m) => {
                let f = |v: &str| map.get(v).cloned();
                Formula::Congruent(l.map_vars(&f), r.map_vars(&f), *m)
            }
            Formula::Not(a) => Formula::not(a.substitute_terms(map)),
            Formula::And(a, b) => Formula::and(a.substitute_terms(map), b.substitute_terms(map)),
            Formula::Or(a, b) => Formula::or(a.substitute_terms(map), b.substitute_terms(map)),
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute_terms(map), b.substitute_terms(map))
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let mut inner: HashMap<String, Term> = map.clone();
                inner.remove(v);
                let captures = inner.values().any(|t| t.vars().contains(v))
                    && body.free_vars().iter().any(|fv| inner.contains_key(fv));
                let (v2, body2) = if captures {
                    let nv = fresh_var(v.split("__").next().unwrap_or(v));
                    let mut rename = HashMap::new();
                    rename.insert(v.clone(), Term::Var(nv.clone()));
                    (nv, body.substitute_terms(&rename))
                } else {
                    (v.clone(), (**body).clone())
                };
                let body3 = body2.substitute_terms(&inner);
                match self {
                    Formula::Exists(..) => Formula::exists(v2, body3),
                    _ => Formula::forall(v2, body3),
                }
            }
        }
    }

    /// Capture-avoiding renaming of free variables.
    pub fn rename(&self, pairs: &[(&str, &str)]) -> Formula {
        let map: HashMap<String, Term> = pairs
            .iter()
            .map(|(a, b)| (a.to_string(), Term::Var(b.to_string())))
            .collect();
        self.substitute_terms(&map)
    }
}

#[cfg(test)]
mod tests;
