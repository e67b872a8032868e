//! Galaxies of a set in `Z^2` (or `Z^1`) under the lexicographic order,
//! computed column by column from its lattices.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::{self, Halfspace, Vector};
use crate::orderanalysis::GalaxyType;
use crate::semilinear::{Decomposition, Lattice};

use super::INFINITE_WINDOW;

/// Columns scanned without closing a galaxy before giving up.
const COLUMN_BUDGET: i64 = 100_000;

/// The part of one lattice inside one column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Part {
    lo: Option<i64>,
    hi: Option<i64>,
}

impl Part {
    fn count(&self) -> Option<u64> {
        Some((self.hi? - self.lo? + 1) as u64)
    }
}

fn small(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))
}

fn slice(l: &Lattice, c: i64) -> Result<Option<Part>> {
    let q = l.periods.len();
    if q == 0 {
        return Ok((l.base[0] == c).then_some(Part { lo: Some(l.base[1]), hi: Some(l.base[1]) }));
    }
    let row: Vector = l.periods.iter().map(|p| BigInt::from(p[0])).collect();
    let Some(sol) = linalg::solve_integer(&[row], &[BigInt::from(c - l.base[0])], q) else {
        return Ok(None);
    };
    let step: Vec<BigInt> = sol
        .kernel
        .iter()
        .map(|v| v.iter().zip(&l.periods).map(|(k, p)| k * BigInt::from(p[1])).sum())
        .collect();
    let n0 = BigInt::from(l.base[1])
        + sol.particular.iter().zip(&l.periods).map(|(k, p)| k * BigInt::from(p[1])).sum::<BigInt>();
    let n0 = small(&n0)?;
    match sol.kernel.len() {
        0 => Ok(sol.particular.iter().all(|k| k >= &BigInt::from(0)).then_some(Part { lo: Some(n0), hi: Some(n0) })),
        1 => {
            let cons: Vec<Halfspace> = (0..q)
                .map(|i| Halfspace::new(vec![-sol.kernel[0][i].clone()], sol.particular[i].clone()))
                .collect();
            let Some((lo, hi)) = linalg::coordinate_range(&cons, 1, 0) else {
                return Ok(None);
            };
            if let (Some(a), Some(b)) = (&lo, &hi) {
                if a > b {
                    return Ok(None);
                }
            }
            let s = small(&step[0])?;
            if s == 0 {
                return Err(Error::InvalidLattice(format!("{l} is not fundamental")));
            }
            let at = |y: &Option<BigInt>| -> Result<Option<i64>> {
                y.as_ref().map(|y| small(y).map(|y| n0 + s * y)).transpose()
            };
            let (a, b) = (at(&lo)?, at(&hi)?);
            Ok(Some(if s > 0 { Part { lo: a, hi: b } } else { Part { lo: b, hi: a } }))
        }
        _ => Err(Error::UnsupportedShape(format!("{l} has a column of dimension 2"))),
    }
}

/// Union of the parts of one column (pieces are disjoint).
#[derive(Debug, Clone, Copy)]
struct Column {
    bounded_below: bool,
    bounded_above: bool,
    count: Option<u64>,
}

fn column(pieces: &[Lattice], c: i64) -> Result<Option<Column>> {
    let mut col: Option<Column> = None;
    for l in pieces {
        if let Some(p) = slice(l, c)? {
            let cur = col.get_or_insert(Column { bounded_below: true, bounded_above: true, count: Some(0) });
            cur.bounded_below &= p.lo.is_some();
            cur.bounded_above &= p.hi.is_some();
            cur.count = match (cur.count, p.count()) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
        }
    }
    Ok(col)
}

fn galaxy(has_min: bool, has_max: bool, size: Option<u64>) -> GalaxyType {
    match (has_min, has_max) {
        (true, true) => GalaxyType::Finite(size.unwrap_or(0) as usize),
        (true, false) => GalaxyType::TypeN,
        (false, true) => GalaxyType::TypeNegN,
        (false, false) => GalaxyType::TypeZ,
    }
}

/// Galaxy types of `(S, lex)` in order, until their weights cover `prefix`
/// or `S` is exhausted; the flag reports a scan cut short by the column
/// budget.
pub fn lex_galaxies(set: &Decomposition, prefix: usize) -> Result<(Vec<GalaxyType>, bool)> {
    let pieces: Vec<Lattice> = match set.arity {
        1 => set
            .pieces
            .iter()
            .map(|l| Lattice::new(vec![0, l.base[0]], l.periods.iter().map(|p| vec![0, p[0]]).collect()))
            .collect::<Result<_>>()?,
        2 => set.pieces.clone(),
        r => return Err(Error::UnsupportedShape(format!("galaxy analysis of sets in Z^{r}"))),
    };
    if pieces.iter().any(|l| !l.is_fundamental()) {
        return Err(Error::InvalidLattice("pieces must be fundamental".into()));
    }
    if pieces.iter().flat_map(|l| &l.periods).any(|p| p[0] < 0) {
        return Err(Error::UnsupportedShape("columns unbounded below".into()));
    }
    let Some(first) = pieces.iter().map(|l| l.base[0]).min() else {
        return Ok((Vec::new(), false));
    };
    let last = if pieces.iter().flat_map(|l| &l.periods).any(|p| p[0] > 0) {
        None
    } else {
        pieces.iter().map(|l| l.base[0]).max()
    };
    let mut out = Vec::new();
    let mut covered = 0;
    // Open galaxy: has_min, accumulated size, last column bounded above.
    let mut open: Option<(bool, Option<u64>, bool)> = None;
    let mut since_close = 0;
    let mut c = first;
    loop {
        if last.is_some_and(|m| c > m) {
            if let Some((min, size, max)) = open {
                out.push(galaxy(min, max, size));
            }
            return Ok((out, false));
        }
        if since_close > COLUMN_BUDGET {
            return Ok((out, true));
        }
        if let Some(col) = column(&pieces, c)? {
            open = match open {
                Some((min, size, true)) if col.bounded_below => {
                    let size = size.zip(col.count).map(|(a, b)| a + b);
                    Some((min, size, col.bounded_above))
                }
                prev => {
                    if let Some((min, size, max)) = prev {
                        let g = galaxy(min, max, size);
                        covered += match g {
                            GalaxyType::Finite(n) => n,
                            _ => INFINITE_WINDOW,
                        };
                        out.push(g);
                        since_close = 0;
                        if covered >= prefix {
                            return Ok((out, false));
                        }
                    }
                    Some((col.bounded_below, col.count, col.bounded_above))
                }
            };
        }
        since_close += 1;
        c += 1;
    }
}
