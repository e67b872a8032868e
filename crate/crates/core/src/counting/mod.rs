//! The counting function `phi_A(u) = #{l in N^n : A l = u}`: exact counts,
//! finiteness, and piecewise polynomial fits on sample regions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Rel, Term};
use crate::linalg::{self, Halfspace, Vector};
use crate::qelim;

/// Integer matrix, row major.
pub type Matrix = Vec<Vec<i64>>;

/// Default bound on enumerated solutions per count.
pub const DEFAULT_MAX_SOLUTIONS: usize = 1_000_000;
/// Default bound on the number of pieces of a fit.
pub const DEFAULT_MAX_FIT_PIECES: usize = 4096;

/// Parses `"1,1;0,2"` (rows separated by `;`, entries by `,`).
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let rows: Vec<Vec<i64>> = text.split(';').map(parse_vector).collect::<Result<_>>()?;
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::ArityMismatch { expected: n, found: rows.iter().map(Vec::len).find(|&l| l != n).unwrap() });
    }
    Ok(rows)
}

/// Parses `"5,4"`.
pub fn parse_vector(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<i64>().map_err(|e| Error::Syntax { position: 0, message: format!("`{}`: {e}", s.trim()) })
        })
        .collect()
}

/// `A` together with a right-hand side `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingInstance {
    pub a: Matrix,
    pub u: Vec<i64>,
}

impl CountingInstance {
    pub fn new(a: Matrix, u: Vec<i64>) -> Result<Self> {
        let n = a.first().map_or(0, Vec::len);
        if a.is_empty() || n == 0 {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        }
        if let Some(r) = a.iter().find(|r| r.len() != n) {
            return Err(Error::ArityMismatch { expected: n, found: r.len() });
        }
        if u.len() != a.len() {
            return Err(Error::ArityMismatch { expected: a.len(), found: u.len() });
        }
        Ok(CountingInstance { a, u })
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn columns(&self) -> usize {
        self.a[0].len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => write!(f, "infinite"),
        }
    }
}

fn lambda(i: usize) -> String {
    format!("l{}", i + 1)
}

/// `sum_j a_j l_j = u` as an equation between natural-number terms.
fn row_equation(row: &[i64], u: i64) -> Formula {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (j, &c) in row.iter().enumerate() {
        let t = Term::scale(c.unsigned_abs(), Term::var(lambda(j)));
        match c.signum() {
            1 => lhs.push(t),
            -1 => rhs.push(t),
            _ => {}
        }
    }
    match u.signum() {
        1 => rhs.push(Term::Num(u as u64)),
        -1 => lhs.push(Term::Num(u.unsigned_abs())),
        _ => {}
    }
    Formula::atom(Rel::Eq, Term::sum(lhs), Term::sum(rhs))
}

/// Whether `A l = 0` has a nonzero solution in `N^n`, i.e. whether every
/// nonempty fibre of `phi_A` is infinite.
pub fn has_infinite_fibres(a: &Matrix) -> Result<bool> {
    let n = a[0].len();
    let vars: Vec<String> = (0..n).map(lambda).collect();
    let nonzero = Formula::atom(Rel::Ge, Term::sum(vars.iter().map(|v| Term::var(v.as_str()))), Term::Num(1));
    let body = Formula::conj(a.iter().map(|r| row_equation(r, 0)).chain(std::iter::once(nonzero)));
    qelim::decide(&Formula::exists_many(&vars, body))
}

/// `phi_A(u)`, with the default enumeration bound.
pub fn count_solutions(inst: &CountingInstance) -> Result<Count> {
    count_solutions_with(inst, DEFAULT_MAX_SOLUTIONS)
}

pub fn count_solutions_with(inst: &CountingInstance, max_solutions: usize) -> Result<Count> {
    let n = inst.columns();
    let big = |x: &i64| BigInt::from(*x);
    let rows: Vec<Vector> = inst.a.iter().map(|r| r.iter().map(big).collect()).collect();
    let rhs: Vector = inst.u.iter().map(big).collect();
    // Integer solutions x0 + K y; the fibre is {y : x0 + K y >= 0}.
    let Some(sol) = linalg::solve_integer(&rows, &rhs, n) else {
        return Ok(Count::Finite(0));
    };
    if has_infinite_fibres(&inst.a)? {
        // Every nonempty fibre is infinite.
        let vars: Vec<String> = (0..n).map(lambda).collect();
        let body = Formula::conj(inst.a.iter().zip(&inst.u).map(|(r, &u)| row_equation(r, u)));
        return Ok(if qelim::decide(&Formula::exists_many(&vars, body))? { Count::Infinite } else { Count::Finite(0) });
    }
    Ok(Count::Finite(count_bounded(&sol, max_solutions)?))
}

/// Points of a fibre known to be bounded.
fn count_bounded(sol: &linalg::IntegerSolution, max_solutions: usize) -> Result<u64> {
    let pts = linalg::integer_points(&nonneg_constraints(sol), sol.kernel.len(), max_solutions)
        .ok_or(Error::Budget { what: "counted solutions", budget: max_solutions })?;
    Ok(pts.len() as u64)
}

fn count_finite_fibre(a: &Matrix, u: &[i64]) -> Result<u64> {
    let big = |x: &i64| BigInt::from(*x);
    let rows: Vec<Vector> = a.iter().map(|r| r.iter().map(big).collect()).collect();
    let rhs: Vector = u.iter().map(big).collect();
    match linalg::solve_integer(&rows, &rhs, a[0].len()) {
        None => Ok(0),
        Some(sol) => count_bounded(&sol, DEFAULT_MAX_SOLUTIONS),
    }
}

fn nonneg_constraints(sol: &linalg::IntegerSolution) -> Vec<Halfspace> {
    // -(x0_i + K_i y) <= 0
    (0..sol.particular.len())
        .map(|i| Halfspace::new(sol.kernel.iter().map(|v| -&v[i]).collect(), sol.particular[i].clone()))
        .collect()
}

/// Polynomial with rational coefficients in `u1..ud`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    /// Exponent vector to nonzero coefficient.
    pub terms: BTreeMap<Vec<u32>, BigRational>,
    pub vars: usize,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial { terms: BTreeMap::new(), vars }
    }

    /// From `(exponents, numerator, denominator)` triples.
    pub fn from_terms(vars: usize, terms: &[(Vec<u32>, i64, i64)]) -> Self {
        let mut p = Polynomial::zero(vars);
        for (e, num, den) in terms {
            let c = BigRational::new(BigInt::from(*num), BigInt::from(*den));
            if !c.is_zero() {
                p.terms.insert(e.clone(), c);
            }
        }
        p
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, u: &[i64]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: BigInt = e.iter().zip(u).map(|(&k, &x)| num_traits::pow(BigInt::from(x), k as usize)).product();
                c * BigRational::from_integer(m)
            })
            .sum()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let name = |i: usize| if self.vars == 1 { "u".to_string() } else { format!("u{}", i + 1) };
        let mut first = true;
        // Highest degree first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| std::cmp::Reverse((e.iter().sum::<u32>(), (*e).clone())));
        for (e, c) in terms {
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { name(i) } else { format!("{}^{k}", name(i)) })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if monomial.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{mag}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Region of one piece: `u = residue (mod modulus)` componentwise, and the
/// sign of `h . u` for every hyperplane `h` when `signs` is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub modulus: i64,
    pub residue: Vec<i64>,
    pub signs: Option<Vec<i8>>,
}

impl Region {
    pub fn contains(&self, u: &[i64], hyperplanes: &[Vec<i64>]) -> bool {
        u.iter().zip(&self.residue).all(|(&x, &r)| x.rem_euclid(self.modulus) == r)
            && self.signs.as_ref().is_none_or(|s| *s == sign_pattern(u, hyperplanes))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub region: Region,
    pub polynomial: Polynomial,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiecewisePolynomial {
    pub hyperplanes: Vec<Vec<i64>>,
    pub pieces: Vec<Piece>,
    pub declared_degree: u32,
}

impl PiecewisePolynomial {
    /// Value at `u`, if some piece covers it.
    pub fn eval(&self, u: &[i64]) -> Option<BigRational> {
        self.pieces
            .iter()
            .find(|p| p.region.contains(u, &self.hyperplanes))
            .map(|p| p.polynomial.eval(u))
    }

    pub fn degree(&self) -> u32 {
        self.pieces.iter().map(|p| p.polynomial.degree()).max().unwrap_or(0)
    }
}

fn sign_pattern(u: &[i64], hyperplanes: &[Vec<i64>]) -> Vec<i8> {
    hyperplanes.iter().map(|h| h.iter().zip(u).map(|(a, b)| a * b).sum::<i64>().signum() as i8).collect()
}

/// Rank of `A` over the rationals.
pub fn matrix_rank(a: &Matrix) -> usize {
    let rows: Vec<Vector> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    linalg::rank(&rows)
}

/// `n - rank(A)`.
pub fn degree_bound(a: &Matrix) -> u32 {
    (a[0].len() - matrix_rank(a)) as u32
}

/// Normals of the hyperplanes spanned by `d - 1` columns of `A`.
fn wall_normals(a: &Matrix) -> Vec<Vec<i64>> {
    let d = a.len();
    let n = a[0].len();
    let cols: Vec<Vector> = (0..n).map(|j| (0..d).map(|i| BigInt::from(a[i][j])).collect()).collect();
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut subset = Vec::new();
    fn choose(k: usize, start: usize, n: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for j in start..n {
            cur.push(j);
            choose(k, j + 1, n, cur, f);
            cur.pop();
        }
    }
    choose(d - 1, 0, n, &mut subset, &mut |s| {
        let rows: Vec<Vector> = s.iter().map(|&j| cols[j].clone()).collect();
        if linalg::rank(&rows) + 1 != d {
            return;
        }
        let basis = linalg::nullspace(&rows, d);
        let Some(v) = basis.first() else { return };
        let mut h: Vec<i64> = v.iter().map(|x| x.to_i64().unwrap_or(0)).collect();
        if h.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            h.iter_mut().for_each(|x| *x = -*x);
        }
        if !out.contains(&h) {
            out.push(h);
        }
    });
    out
}

fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn go(vars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == vars {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            go(vars, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(vars, degree, &mut Vec::new(), &mut out);
    out
}

/// Exact interpolation of `(u, value)` samples by a polynomial of total
/// degree at most `degree`.
pub fn interpolate(samples: &[(Vec<i64>, u64)], vars: usize, degree: u32) -> Option<Polynomial> {
    let mons = monomials(vars, degree);
    let rows: Vec<Vec<BigRational>> = samples
        .iter()
        .map(|(u, _)| {
            mons.iter()
                .map(|e| {
                    let m: BigInt =
                        e.iter().zip(u).map(|(&k, &x)| num_traits::pow(BigInt::from(x), k as usize)).product();
                    BigRational::from_integer(m)
                })
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = samples.iter().map(|(_, c)| BigRational::from_integer(BigInt::from(*c))).collect();
    let x = linalg::solve_rational(&rows, &rhs, mons.len())?;
    let mut p = Polynomial::zero(vars);
    for (e, c) in mons.into_iter().zip(x) {
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
    }
    Some(p)
}

/// Piecewise polynomial fit of `phi_A` on the given samples, with the
/// default piece budget.
pub fn fit_piecewise(a: &Matrix, samples: &[Vec<i64>]) -> Result<PiecewisePolynomial> {
    fit_piecewise_with(a, samples, DEFAULT_MAX_FIT_PIECES)
}

/// Groups samples by residue modulo the lcm of the entries of `A`, fits each
/// group with degree at most `n - rank(A)`, and refines a failing group
/// first by chamber (sign pattern against the walls spanned by columns),
/// then by doubling the modulus.
pub fn fit_piecewise_with(a: &Matrix, samples: &[Vec<i64>], max_pieces: usize) -> Result<PiecewisePolynomial> {
    let d = a.len();
    let degree = degree_bound(a);
    let mut counted = Vec::with_capacity(samples.len());
    let infinite_fibres = has_infinite_fibres(a)?;
    for u in samples {
        let inst = CountingInstance::new(a.clone(), u.clone())?;
        let count =
            if infinite_fibres { count_solutions(&inst)? } else { Count::Finite(count_finite_fibre(a, u)?) };
        match count {
            Count::Finite(c) => counted.push((u.clone(), c)),
            Count::Infinite => {
                return Err(Error::FitFailed(format!("phi_A is infinite at {u:?}")));
            }
        }
    }
    let lcm = a.iter().flatten().filter(|&&x| x != 0).fold(1i64, |l, &x| l.lcm(&x.abs()));
    let hyperplanes = wall_normals(a);
    let mut pieces = Vec::new();
    let mut queue: Vec<(Region, Vec<(Vec<i64>, u64)>)> = group(&counted, lcm, None, &hyperplanes);
    while let Some((region, group_samples)) = queue.pop() {
        if let Some(p) = interpolate(&group_samples, d, degree) {
            pieces.push(Piece { region, polynomial: p, samples: group_samples.len() });
            if pieces.len() + queue.len() > max_pieces {
                return Err(Error::Budget { what: "fit pieces", budget: max_pieces });
            }
            continue;
        }
        if group_samples.len() <= 1 {
            return Err(Error::FitFailed(format!("no polynomial of degree <= {degree} fits {group_samples:?}")));
        }
        let refined = if region.signs.is_none() && !hyperplanes.is_empty() {
            group(&group_samples, region.modulus, Some(()), &hyperplanes)
        } else {
            group(&group_samples, region.modulus * 2, region.signs.as_ref().map(|_| ()), &hyperplanes)
        };
        queue.extend(refined);
        if pieces.len() + queue.len() > max_pieces {
            return Err(Error::Budget { what: "fit pieces", budget: max_pieces });
        }
    }
    pieces.sort_by(|x, y| (&x.region.residue, &x.region.modulus, &x.region.signs).cmp(&(&y.region.residue, &y.region.modulus, &y.region.signs)));
    Ok(PiecewisePolynomial { hyperplanes, pieces, declared_degree: degree })
}

type Group = (Region, Vec<(Vec<i64>, u64)>);

fn group(samples: &[(Vec<i64>, u64)], modulus: i64, by_sign: Option<()>, hyperplanes: &[Vec<i64>]) -> Vec<Group> {
    let mut map: BTreeMap<(Vec<i64>, Option<Vec<i8>>), Vec<(Vec<i64>, u64)>> = BTreeMap::new();
    for (u, c) in samples {
        let residue: Vec<i64> = u.iter().map(|x| x.rem_euclid(modulus)).collect();
        let signs = by_sign.map(|_| sign_pattern(u, hyperplanes));
        map.entry((residue, signs)).or_default().push((u.clone(), *c));
    }
    map.into_iter().map(|((residue, signs), s)| (Region { modulus, residue, signs }, s)).collect()
}

/// Whether every piece has degree at most `n - rank(A)`.
pub fn verify_degree_bound(a: &Matrix, pp: &PiecewisePolynomial) -> bool {
    let bound = degree_bound(a);
    pp.pieces.iter().all(|p| p.polynomial.degree() <= bound)
}

/// All `u` in `[lo, hi]^d`.
pub fn sample_box(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}
