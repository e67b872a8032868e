//! Semilinear sets: finite unions of lattices `c + N p1 + ... + N pk`.
//!
//! Every Presburger-definable subset of `N^m` is semilinear, and can be
//! written as a finite union of pairwise disjoint *fundamental* lattices
//! (periods linearly independent). The dimension of a set is the largest
//! period count in such a decomposition.

mod decompose;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use decompose::{decompose_qf, DEFAULT_MAX_PIECES};

use crate::error::{Error, Result};
use crate::formula::{fresh_var, Formula, Rel, Term};
use crate::linalg;
use crate::qelim::{self, Atom, Linear, Qf, Var};

/// `base + N periods[0] + ... + N periods[k-1]` in `Z^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lattice {
    pub base: Vec<i64>,
    pub periods: Vec<Vec<i64>>,
}

fn big(v: &[i64]) -> linalg::Vector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn small(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(format!("coordinate {x} exceeds 64 bits"))))
        .collect()
}

impl Lattice {
    /// A lattice in `Z^m`; all periods must have the base's length.
    pub fn new(base: Vec<i64>, periods: Vec<Vec<i64>>) -> Result<Lattice> {
        if let Some(p) = periods.iter().find(|p| p.len() != base.len()) {
            return Err(Error::ArityMismatch { expected: base.len(), found: p.len() });
        }
        Ok(Lattice { base, periods })
    }

    /// A lattice required to lie inside `N^m`.
    pub fn natural(base: Vec<i64>, periods: Vec<Vec<i64>>) -> Result<Lattice> {
        let l = Lattice::new(base, periods)?;
        if !l.is_natural() {
            return Err(Error::InvalidLattice(format!("{l} leaves N^{}", l.arity())));
        }
        Ok(l)
    }

    pub(crate) fn from_big(base: &[BigInt], periods: &[linalg::Vector]) -> Result<Lattice> {
        Lattice::new(small(base)?, periods.iter().map(|p| small(p)).collect::<Result<_>>()?)
    }

    /// A single point.
    pub fn point(p: Vec<i64>) -> Lattice {
        Lattice { base: p, periods: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.base.len()
    }

    /// Base and every period componentwise nonnegative, i.e. every
    /// generated point lies in `N^m`.
    pub fn is_natural(&self) -> bool {
        self.base.iter().chain(self.periods.iter().flatten()).all(|&x| x >= 0)
    }

    /// Periods linearly independent over the rationals.
    pub fn is_fundamental(&self) -> bool {
        let rows: Vec<_> = self.periods.iter().map(|p| big(p)).collect();
        linalg::rank(&rows) == self.periods.len()
    }

    fn check_arity(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: v.len() });
        }
        Ok(())
    }

    /// Whether `v = base + sum k_i p_i` for some `k` in `N^k`.
    pub fn member(&self, v: &[i64]) -> Result<bool> {
        self.check_arity(v)?;
        let diff: linalg::Vector = v.iter().zip(&self.base).map(|(a, b)| BigInt::from(*a) - b).collect();
        if self.is_fundamental() {
            let cols: Vec<_> = self.periods.iter().map(|p| big(p)).collect();
            return Ok(match linalg::coordinates(&cols, &diff) {
                Some(c) => c.iter().all(|x| x.is_integer() && !x.is_negative()),
                None => false,
            });
        }
        // Dependent periods: decide  exists k >= 0. sum k_i p_i = diff.
        let ks: Vec<String> = self.periods.iter().map(|_| fresh_var("k")).collect();
        let eqs = (0..self.arity()).map(|j| {
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for (k, p) in ks.iter().zip(&self.periods) {
                let t = Term::scale(p[j].unsigned_abs(), Term::var(k.as_str()));
                match p[j].signum() {
                    1 => lhs.push(t),
                    -1 => rhs.push(t),
                    _ => {}
                }
            }
            let d = &diff[j];
            let n = d.abs().to_u64().ok_or_else(|| Error::Overflow(d.to_string()))?;
            if d.is_negative() {
                lhs.push(Term::Num(n));
            } else {
                rhs.push(Term::Num(n));
            }
            Ok(Formula::atom(Rel::Eq, Term::sum(lhs), Term::sum(rhs)))
        });
        let body = Formula::conj(eqs.collect::<Result<Vec<_>>>()?);
        qelim::decide(&Formula::exists_many(&ks, body))
    }

    /// Membership as a formula over `vars` (natural lattices only).
    pub fn to_formula<S: AsRef<str>>(&self, vars: &[S]) -> Result<Formula> {
        if vars.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: vars.len() });
        }
        if !self.is_natural() {
            return Err(Error::InvalidLattice(format!("{self} leaves N^{}", self.arity())));
        }
        let ks: Vec<String> = self.periods.iter().map(|_| fresh_var("k")).collect();
        let eqs = vars.iter().enumerate().map(|(j, x)| {
            let mut rhs = vec![Term::Num(self.base[j] as u64)];
            for (k, p) in ks.iter().zip(&self.periods) {
                if p[j] != 0 {
                    rhs.push(Term::scale(p[j] as u64, Term::var(k.as_str())));
                }
            }
            Formula::atom(Rel::Eq, Term::var(x.as_ref()), Term::sum(rhs))
        });
        Ok(Formula::exists_many(&ks, Formula::conj(eqs)))
    }

    /// Quantifier-free membership over `vars` (fundamental lattices only):
    /// equations for the span, and sign and divisibility conditions on the
    /// coordinates.
    pub fn to_qf(&self, vars: &[Var]) -> Result<Qf> {
        if vars.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: vars.len() });
        }
        if !self.is_fundamental() {
            return Err(Error::InvalidLattice(format!("{self} has dependent periods")));
        }
        let periods: Vec<linalg::Vector> = self.periods.iter().map(|p| big(p)).collect();
        // x - base as linear forms
        let diff: Vec<Linear> = vars
            .iter()
            .zip(&self.base)
            .map(|(&v, &b)| Linear::var(v).add_constant(&BigInt::from(-b)))
            .collect();
        let combine = |w: &[BigInt], idx: &[usize]| -> Linear {
            idx.iter().zip(w).fold(Linear::zero(), |acc, (&i, c)| acc.add(&diff[i].scale(c)))
        };
        let all: Vec<usize> = (0..self.arity()).collect();
        let mut parts = Vec::new();
        for n in linalg::nullspace(&periods, self.arity()) {
            parts.push(Qf::atom(Atom::Eq(combine(&n, &all))));
        }
        let mut rows: Vec<usize> = Vec::new();
        let mut picked: Vec<linalg::Vector> = Vec::new();
        for i in 0..self.arity() {
            let row: linalg::Vector = periods.iter().map(|p| p[i].clone()).collect();
            picked.push(row);
            if linalg::rank(&picked) == picked.len() {
                rows.push(i);
            } else {
                picked.pop();
            }
        }
        if !picked.is_empty() {
            let (den, adj) = linalg::scaled_inverse(&picked).expect("independent rows");
            for a in &adj {
                let k = combine(a, &rows);
                parts.push(Qf::atom(Atom::Le(k.neg())));
                if den > BigInt::from(1) {
                    parts.push(Qf::atom(Atom::Dvd(den.clone(), k)));
                }
            }
        }
        Ok(Qf::and(parts))
    }

    /// Members inside `[0, bound]^m` (natural lattices), unsorted, may repeat.
    fn points_in_box(&self, bound: i64, out: &mut BTreeSet<Vec<i64>>) {
        let periods: Vec<&Vec<i64>> = self.periods.iter().filter(|p| p.iter().any(|&x| x != 0)).collect();
        fn go(cur: &mut Vec<i64>, i: usize, periods: &[&Vec<i64>], bound: i64, out: &mut BTreeSet<Vec<i64>>) {
            if cur.iter().any(|&x| x > bound || x < 0) {
                return;
            }
            if i == periods.len() {
                out.insert(cur.clone());
                return;
            }
            let saved = cur.clone();
            loop {
                go(cur, i + 1, periods, bound, out);
                for (c, p) in cur.iter_mut().zip(periods[i].iter()) {
                    *c += p;
                }
                if cur.iter().any(|&x| x > bound) {
                    break;
                }
            }
            *cur = saved;
        }
        go(&mut self.base.clone(), 0, &periods, bound, out);
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |x: &[i64]| format!("({})", x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
        write!(f, "{}", v(&self.base))?;
        for p in &self.periods {
            write!(f, " + N{}", v(p))?;
        }
        Ok(())
    }
}

/// Finite union of lattices of one arity, possibly overlapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearSet {
    pub arity: usize,
    pub lattices: Vec<Lattice>,
}

/// Internal variable names used when a set is turned into a formula.
fn coords(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("s__{i}")).collect()
}

impl SemilinearSet {
    pub fn new(arity: usize, lattices: Vec<Lattice>) -> Result<SemilinearSet> {
        if let Some(l) = lattices.iter().find(|l| l.arity() != arity) {
            return Err(Error::ArityMismatch { expected: arity, found: l.arity() });
        }
        Ok(SemilinearSet { arity, lattices })
    }

    pub fn empty(arity: usize) -> SemilinearSet {
        SemilinearSet { arity, lattices: Vec::new() }
    }

    /// `{v in N^m : phi(vars = v)}` for a quantifier-free `phi`.
    pub fn from_formula<S: AsRef<str>>(phi: &Qf, vars: &[S]) -> Result<SemilinearSet> {
        let vs: Vec<Var> = vars.iter().map(|v| Var::new(v.as_ref())).collect();
        let pieces = decompose_qf(phi, &vs, DEFAULT_MAX_PIECES)?;
        Ok(SemilinearSet { arity: vars.len(), lattices: pieces })
    }

    pub fn member(&self, v: &[i64]) -> Result<bool> {
        if v.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: v.len() });
        }
        for l in &self.lattices {
            if l.member(v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Members inside `[0, bound]^m`, sorted lexicographically.
    pub fn enumerate(&self, bound: u64) -> Vec<Vec<i64>> {
        let mut out = BTreeSet::new();
        for l in &self.lattices {
            l.points_in_box(bound as i64, &mut out);
        }
        out.into_iter().collect()
    }

    /// Finite iff no lattice has a nonzero period (each lattice lies in `N^m`).
    pub fn is_finite(&self) -> bool {
        self.lattices.iter().all(|l| l.periods.iter().all(|p| p.iter().all(|&x| x == 0)))
    }

    pub fn to_formula<S: AsRef<str>>(&self, vars: &[S]) -> Result<Formula> {
        Ok(Formula::disj(self.lattices.iter().map(|l| l.to_formula(vars)).collect::<Result<Vec<_>>>()?))
    }

    pub fn ito_decompose(&self) -> Result<Decomposition> {
        self.ito_decompose_with(DEFAULT_MAX_PIECES)
    }

    /// Disjoint fundamental decomposition of the union.
    pub fn ito_decompose_with(&self, max_pieces: usize) -> Result<Decomposition> {
        if let Some(l) = self.lattices.iter().find(|l| !l.is_natural()) {
            return Err(Error::InvalidLattice(format!("{l} leaves N^{}", self.arity)));
        }
        let names = coords(self.arity);
        let vs: Vec<Var> = names.iter().map(|v| Var::new(v)).collect();
        if self.lattices.iter().all(Lattice::is_fundamental) && self.pairwise_disjoint(&vs)? {
            return Ok(Decomposition { arity: self.arity, pieces: self.lattices.clone() });
        }
        let parts = self
            .lattices
            .iter()
            .map(|l| if l.is_fundamental() { l.to_qf(&vs) } else { qelim::eliminate(&l.to_formula(&names)?) })
            .collect::<Result<Vec<_>>>()?;
        let pieces = decompose_qf(&Qf::or(parts), &vs, max_pieces)?;
        Ok(Decomposition { arity: self.arity, pieces })
    }

    /// Whether no two (fundamental, natural) lattices meet.
    fn pairwise_disjoint(&self, vs: &[Var]) -> Result<bool> {
        let qfs = self.lattices.iter().map(|l| l.to_qf(vs)).collect::<Result<Vec<_>>>()?;
        let budget = qelim::Budget::default();
        for (i, a) in qfs.iter().enumerate() {
            for b in &qfs[i + 1..] {
                let mut q = Qf::and(vec![a.clone(), b.clone()]);
                for v in vs {
                    q = qelim::project(&v.name(), &q, &budget)?;
                }
                if q != Qf::False {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Pairwise disjoint fundamental lattices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub arity: usize,
    pub pieces: Vec<Lattice>,
}

impl Decomposition {
    /// Decomposition of `{v in N^m : phi(vars = v)}`.
    pub fn of_formula<S: AsRef<str>>(phi: &Qf, vars: &[S], max_pieces: usize) -> Result<Decomposition> {
        let vs: Vec<Var> = vars.iter().map(|v| Var::new(v.as_ref())).collect();
        Ok(Decomposition { arity: vars.len(), pieces: decompose_qf(phi, &vs, max_pieces)? })
    }

    /// Largest period count; 0 for finite and for empty sets.
    pub fn dimension(&self) -> usize {
        self.pieces.iter().map(|l| l.periods.len()).max().unwrap_or(0)
    }

    /// Quantifier-free membership over `vars`.
    pub fn to_qf<S: AsRef<str>>(&self, vars: &[S]) -> Result<Qf> {
        let vs: Vec<Var> = vars.iter().map(|v| Var::new(v.as_ref())).collect();
        Ok(Qf::or(self.pieces.iter().map(|l| l.to_qf(&vs)).collect::<Result<Vec<_>>>()?))
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.dimension() == 0
    }

    pub fn member(&self, v: &[i64]) -> Result<bool> {
        self.as_set().member(v)
    }

    pub fn enumerate(&self, bound: u64) -> Vec<Vec<i64>> {
        self.as_set().enumerate(bound)
    }

    pub fn as_set(&self) -> SemilinearSet {
        SemilinearSet { arity: self.arity, lattices: self.pieces.clone() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("decomposition serialises")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Decomposition> {
        let d: Decomposition = serde_json::from_value(v.clone()).map_err(|e| Error::InvalidLattice(e.to_string()))?;
        SemilinearSet::new(d.arity, d.pieces.clone())?;
        Ok(d)
    }
}

impl From<&Lattice> for SemilinearSet {
    fn from(l: &Lattice) -> Self {
        SemilinearSet { arity: l.arity(), lattices: vec![l.clone()] }
    }
}
