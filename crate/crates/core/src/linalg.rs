//! Exact integer and rational linear algebra used by the set machinery:
//! ranks, integer solution lattices of linear systems, and small
//! Fourier–Motzkin computations over polyhedra `{y : G y <= h}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Vector = Vec<BigInt>;

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Row-reduces a rational matrix in place; returns pivot columns.
fn row_reduce(m: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over the rationals of a list of integer vectors.
pub fn rank(rows: &[Vector]) -> usize {
    let Some(n) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(rat).collect()).collect();
    row_reduce(&mut m, n).len()
}

/// Scales a rational vector to a primitive integer vector of the same direction.
pub fn primitive(v: &[BigRational]) -> Vector {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vector = v.iter().map(|x| (x * rat(&den)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Basis (primitive integer vectors) of the rational null space of `rows`.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(rat).collect()).collect();
    let pivots = row_reduce(&mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -m[i][free].clone();
        }
        basis.push(primitive(&v));
    }
    basis
}

/// Rational coordinates of `v` in the span of `columns`, if it lies there.
/// The columns must be linearly independent.
pub fn coordinates(columns: &[Vector], v: &[BigInt]) -> Option<Vec<BigRational>> {
    let k = columns.len();
    let n = v.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| rat(&c[i])).collect();
            row.push(rat(&v[i]));
            row
        })
        .collect();
    let pivots = row_reduce(&mut m, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut out = vec![BigRational::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        out[p] = m[i][k].clone();
    }
    Some(out)
}

/// Inverse of a square integer matrix, as `(D, A)` with `M^-1 = A / D` and
/// `D > 0`; `None` if singular.
pub fn scaled_inverse(m: &[Vector]) -> Option<(BigInt, Vec<Vector>)> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(rat).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    if row_reduce(&mut aug, 2 * n).iter().filter(|&&c| c < n).count() < n {
        return None;
    }
    let inv: Vec<Vec<BigRational>> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
    let den = inv.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let d = rat(&den);
    Some((den, inv.iter().map(|r| r.iter().map(|x| (x * &d).to_integer()).collect()).collect()))
}

/// Some rational solution of `M x = b` (free unknowns set to zero), or
/// `None` if the system is inconsistent.
pub fn solve_rational(m: &[Vec<BigRational>], b: &[BigRational], ncols: usize) -> Option<Vec<BigRational>> {
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][ncols].clone();
    }
    Some(x)
}

/// All integer solutions of `A x = b`: `particular + Z-span(kernel)`, with
/// the kernel vectors linearly independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vector,
    pub kernel: Vec<Vector>,
}

/// Solves `A x = b` over the integers via column-style Hermite reduction.
pub fn solve_integer(a: &[Vector], b: &[BigInt], n: usize) -> Option<IntegerSolution> {
    let mut h: Vec<Vector> = a.to_vec();
    let mut u: Vec<Vector> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // Column operations are applied to both h (rows of A) and u (rows of U).
    let col_op = |h: &mut Vec<Vector>, u: &mut Vec<Vector>, c1: usize, c2: usize, m: [[BigInt; 2]; 2]| {
        for row in h.iter_mut().chain(u.iter_mut()) {
            let x = row[c1].clone();
            let y = row[c2].clone();
            row[c1] = &m[0][0] * &x + &m[1][0] * &y;
            row[c2] = &m[0][1] * &x + &m[1][1] * &y;
        }
    };
    let mut pivot_rows = Vec::new();
    let mut pc = 0;
    for r in 0..h.len() {
        if pc == n {
            break;
        }
        for c in pc + 1..n {
            if h[r][c].is_zero() {
                continue;
            }
            let x = h[r][pc].clone();
            let y = h[r][c].clone();
            let e = x.extended_gcd(&y);
            // [x y] * [[s, -y/g], [t, x/g]] = [g, 0]
            let m = [[e.x.clone(), -(&y / &e.gcd)], [e.y.clone(), &x / &e.gcd]];
            col_op(&mut h, &mut u, pc, c, m);
        }
        if h[r][pc].is_zero() {
            continue;
        }
        if h[r][pc].is_negative() {
            let m = [[-BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
            col_op(&mut h, &mut u, pc, pc, m);
        }
        pivot_rows.push(r);
        pc += 1;
    }
    // Forward substitution for the pivot coordinates.
    let mut y = vec![BigInt::zero(); n];
    let mut next_pivot = 0;
    for r in 0..h.len() {
        let acc: BigInt = (0..next_pivot).map(|c| &h[r][c] * &y[c]).sum();
        let rest = &b[r] - acc;
        if pivot_rows.get(next_pivot) == Some(&r) {
            let (q, m) = rest.div_mod_floor(&h[r][next_pivot]);
            if !m.is_zero() {
                return None;
            }
            y[next_pivot] = q;
            next_pivot += 1;
        } else if !rest.is_zero() {
            return None;
        }
    }
    let particular = (0..n).map(|i| (0..n).map(|c| &u[i][c] * &y[c]).sum()).collect();
    let kernel = (pc..n).map(|c| (0..n).map(|i| u[i][c].clone()).collect()).collect();
    Some(IntegerSolution { particular, kernel })
}

/// A half-space `coeffs . y <= bound` over integer points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub coeffs: Vector,
    pub bound: BigInt,
}

impl Halfspace {
    pub fn new(coeffs: Vector, bound: BigInt) -> Self {
        Halfspace { coeffs, bound }
    }

    /// Divides by the content, rounding the bound down (valid on integer points).
    pub fn tighten(mut self) -> Self {
        let g = self.coeffs.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &g;
            }
            self.bound = self.bound.div_floor(&g);
        }
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn holds(&self, y: &[BigInt]) -> bool {
        dot(&self.coeffs, y) <= self.bound
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Keeps the tightest bound per direction; `None` if some constant
/// constraint `0 <= b` fails.
pub fn prune(cons: Vec<Halfspace>) -> Option<Vec<Halfspace>> {
    let mut best: BTreeMap<Vector, BigInt> = BTreeMap::new();
    for h in cons {
        let h = h.tighten();
        if h.is_trivial() {
            if h.bound.is_negative() {
                return None;
            }
            continue;
        }
        best.entry(h.coeffs)
            .and_modify(|b| {
                if h.bound < *b {
                    *b = h.bound.clone();
                }
            })
            .or_insert(h.bound);
    }
    // Opposite directions with crossing bounds.
    for (c, b) in &best {
        let neg: Vector = c.iter().map(|x| -x).collect();
        if let Some(b2) = best.get(&neg) {
            if (b + b2).is_negative() {
                return None;
            }
        }
    }
    Some(best.into_iter().map(|(c, b)| Halfspace::new(c, b)).collect())
}

/// Eliminates coordinate `j` (the result still has the same length, with a
/// zero in position `j`). `None` if an infeasibility is detected.
pub fn fm_eliminate(cons: &[Halfspace], j: usize) -> Option<Vec<Halfspace>> {
    let mut out = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for h in cons {
        match h.coeffs[j].sign() {
            num_bigint::Sign::NoSign => out.push(h.clone()),
            num_bigint::Sign::Plus => pos.push(h),
            num_bigint::Sign::Minus => neg.push(h),
        }
    }
    for p in &pos {
        for q in &neg {
            let a = &p.coeffs[j];
            let b = -&q.coeffs[j];
            let coeffs = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| x * &b + y * a).collect();
            out.push(Halfspace::new(coeffs, &p.bound * &b + &q.bound * a));
        }
    }
    prune(out)
}

/// Rational feasibility of `{y : cons}` in `k` dimensions.
pub fn feasible(cons: &[Halfspace], k: usize) -> bool {
    let Some(mut cur) = prune(cons.to_vec()) else {
        return false;
    };
    for j in 0..k {
        match fm_eliminate(&cur, j) {
            Some(next) => cur = next,
            None => return false,
        }
    }
    true
}

/// Integer range of coordinate `j` over the rational relaxation; `None` for
/// an infeasible system, unbounded sides as `None` inside the pair.
pub fn coordinate_range(cons: &[Halfspace], k: usize, j: usize) -> Option<(Option<BigInt>, Option<BigInt>)> {
    let mut cur = prune(cons.to_vec())?;
    for i in (0..k).filter(|&i| i != j) {
        cur = fm_eliminate(&cur, i)?;
    }
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for h in &cur {
        let a = &h.coeffs[j];
        if a.is_positive() {
            let v = h.bound.div_floor(a);
            hi = Some(hi.map_or(v.clone(), |x| x.min(v)));
        } else if a.is_negative() {
            let v = ceil_div(&h.bound, a);
            lo = Some(lo.map_or(v.clone(), |x| x.max(v)));
        }
    }
    Some((lo, hi))
}

/// Smallest integer `v` with `a * v <= b` for negative `a`.
fn ceil_div(b: &BigInt, a: &BigInt) -> BigInt {
    // a*v <= b with a < 0  <=>  v >= b / a
    let (q, r) = b.div_mod_floor(a);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// Substitutes `y_j = value`, dropping coordinate `j`.
pub fn fix_coordinate(cons: &[Halfspace], j: usize, value: &BigInt) -> Vec<Halfspace> {
    cons.iter()
        .map(|h| {
            let mut coeffs = h.coeffs.clone();
            let a = coeffs.remove(j);
            Halfspace::new(coeffs, &h.bound - a * value)
        })
        .collect()
}

/// All integer points of a bounded polyhedron, in lexicographic order.
/// `None` if it turns out to be unbounded.
pub fn integer_points(cons: &[Halfspace], k: usize, limit: usize) -> Option<Vec<Vector>> {
    let mut out = Vec::new();
    if collect_points(cons, k, &mut Vec::new(), &mut out, limit) {
        Some(out)
    } else {
        None
    }
}

fn collect_points(cons: &[Halfspace], k: usize, prefix: &mut Vector, out: &mut Vec<Vector>, limit: usize) -> bool {
    if k == 0 {
        if cons.iter().all(|h| !h.bound.is_negative()) {
            out.push(prefix.clone());
        }
        return true;
    }
    let Some((lo, hi)) = coordinate_range(cons, k, 0) else {
        return true;
    };
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return false;
    };
    let mut v = lo;
    while v <= hi {
        if out.len() > limit {
            return false;
        }
        let sub = fix_coordinate(cons, 0, &v);
        prefix.push(v.clone());
        let ok = collect_points(&sub, k - 1, prefix, out, limit);
        prefix.pop();
        if !ok {
            return false;
        }
        v += 1;
    }
    true
}

/// A nonzero primitive integer ray of the pointed cone `{v : G v <= 0}`,
/// or `None` when the cone is `{0}`.
pub fn extreme_ray(rows: &[Vector], k: usize) -> Option<Vector> {
    if k == 0 {
        return None;
    }
    let rows: Vec<Vector> = {
        let mut r: Vec<Vector> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
        r.sort();
        r.dedup();
        r
    };
    let in_cone = |v: &Vector| rows.iter().all(|r| !dot(r, v).is_positive());
    if k == 1 {
        return [BigInt::one(), -BigInt::one()].into_iter().map(|x| vec![x]).find(|v| in_cone(v));
    }
    // Extreme rays are cut out by k-1 independent tight constraints.
    let mut found = None;
    subsets(rows.len(), k - 1, &mut |idx| {
        let sel: Vec<Vector> = idx.iter().map(|&i| rows[i].clone()).collect();
        let ns = nullspace(&sel, k);
        if ns.len() != 1 {
            return false;
        }
        let v = &ns[0];
        let w: Vector = v.iter().map(|x| -x).collect();
        for cand in [v.clone(), w] {
            if in_cone(&cand) {
                found = Some(cand);
                return true;
            }
        }
        false
    });
    if found.is_none() && rows.len() < k - 1 {
        // Fewer constraints than needed for a vertex of the cone: it has a
        // line, take any null-space direction inside it.
        for v in nullspace(&rows, k) {
            if in_cone(&v) {
                return Some(v);
            }
        }
    }
    found
}

fn subsets(n: usize, r: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == r {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if go(i + 1, n, r, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(0, n, r, &mut Vec::new(), f);
}
