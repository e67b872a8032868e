//! Lexicographic representations of interpreted orders whose condensation
//! is finite or of type `omega`.
//!
//! Galaxy `k` (in the internal order) becomes column `k` of a set
//! `S` in `Z^2`: `N` galaxies as `{(k, n) : n >= 0}`, `-N` as `n < 0`, `Z` as
//! the whole column and finite galaxies as `0 <= n < f(k)`. A finite order
//! becomes `{0, .., size - 1}` in `Z^1`.

mod columns;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::counting;
use crate::error::{Error, Result};
use crate::interp::{xs, Interpretation};
use crate::orderanalysis::{Analyzer, CondensationResult, GalaxyType, Limits};
use crate::qelim::{Atom, Linear, Qf, Var};
use crate::semilinear::{decompose_qf, Decomposition, Lattice};

pub use columns::lex_galaxies;

/// Largest residue modulus tried by the spine and period searches.
pub const DEFAULT_MAX_MODULUS: usize = 12;
/// Default number of elements compared by verification.
pub const DEFAULT_PREFIX: usize = 200;
/// Largest box side reached by auto-growth.
pub const MAX_BOX: u64 = 1 << 14;
/// Contribution of one infinite galaxy to a compared prefix.
pub const INFINITE_WINDOW: usize = 10;
/// Spine samples used by the construction.
const SPINE_SAMPLES: usize = 48;

/// Ascending enumeration of the galaxy representatives: `k -> base_r + j *
/// step_r` for `k = modulus * j + r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpineMap {
    pub modulus: usize,
    pub pieces: Vec<SpinePiece>,
    /// Number of representatives when finitely many.
    pub length: Option<usize>,
    /// The enumerated representatives the map was fitted to.
    pub samples: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinePiece {
    pub base: Vec<i64>,
    pub step: Vec<i64>,
}

impl SpineMap {
    pub fn at(&self, k: usize) -> Option<Vec<i64>> {
        if self.length.is_some_and(|n| k >= n) {
            return None;
        }
        let p = &self.pieces[k % self.modulus];
        let j = (k / self.modulus) as i64;
        Some(p.base.iter().zip(&p.step).map(|(b, s)| b + j * s).collect())
    }
}

/// Shape of the galaxies in one residue class of columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ColumnKind {
    N,
    NegN,
    Z,
    /// `size = base + slope * j` at column `k = modulus * j + residue`.
    Finite { base: i64, slope: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnClass {
    pub residue: usize,
    pub kind: ColumnKind,
    /// Indices into the pieces of `S` produced for this class.
    pub pieces: Vec<usize>,
}

/// Construction record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// `"finite order"`, `"finite"` or `"omega"`.
    pub condensation: String,
    pub spine: SpineMap,
    /// Column period; columns `k` and `k + period` have the same kind.
    pub period: usize,
    /// Number of columns when the condensation is finite.
    pub columns: Option<usize>,
    pub classes: Vec<ColumnClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexRepresentation {
    pub arity: usize,
    pub set: Decomposition,
    pub provenance: Option<Provenance>,
}

impl LexRepresentation {
    /// A bare set, e.g. one read from a file.
    pub fn from_set(set: Decomposition) -> Self {
        LexRepresentation { arity: set.arity, set, provenance: None }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("representation serialises")
    }

    /// Accepts a full representation or a bare decomposition.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        if v.get("set").is_some() {
            let r: LexRepresentation =
                serde_json::from_value(v.clone()).map_err(|e| Error::InvalidLattice(e.to_string()))?;
            Decomposition::from_json(&serde_json::to_value(&r.set).expect("decomposition serialises"))?;
            return Ok(r);
        }
        Ok(LexRepresentation::from_set(Decomposition::from_json(v)?))
    }
}

/// Shape of the condensation of `I`.
enum Shape {
    FiniteOrder(Vec<Vec<u64>>),
    Finite(Vec<Vec<u64>>),
    Omega,
}

struct Context {
    analyzer: Analyzer,
    condensed: CondensationResult,
    shape: Shape,
}

fn context(interp: &Interpretation, limits: Limits) -> Result<Context> {
    let analyzer = Analyzer::with_limits(interp, limits)?;
    let domain = Decomposition::of_formula(
        &crate::qelim::eliminate_with(&interp.domain, &limits.qe)?,
        &xs(interp.dim),
        limits.max_pieces,
    )?;
    let condensed = analyzer.condense()?;
    let compiled = interp.compile()?;
    let sorted = |d: &Decomposition| -> Result<Vec<Vec<u64>>> {
        let mut pts: Vec<Vec<u64>> = d.pieces.iter().map(|l| l.base.iter().map(|&x| x as u64).collect()).collect();
        compiled.sort(&mut pts)?;
        Ok(pts)
    };
    let shape = if domain.is_finite() {
        Shape::FiniteOrder(sorted(&domain)?)
    } else if condensed.decomposition.is_finite() {
        Shape::Finite(sorted(&condensed.decomposition)?)
    } else {
        let top = Analyzer::with_limits(&condensed.interp, limits)?;
        let again = top.condense()?;
        let single = again.decomposition.is_finite() && again.decomposition.pieces.len() == 1;
        let point: Vec<u64> = match single {
            true => again.decomposition.pieces[0].base.iter().map(|&x| x as u64).collect(),
            false => Vec::new(),
        };
        if !single || top.galaxy_type(&point)? != GalaxyType::TypeN {
            return Err(Error::UnsupportedShape("condensation is neither finite nor of type omega".into()));
        }
        Shape::Omega
    };
    Ok(Context { analyzer, condensed, shape })
}

/// First `want` representatives in internal order, growing the box until
/// the prefix is stable.
fn ascending_representatives(ctx: &Context, want: usize) -> Result<Vec<Vec<u64>>> {
    let compiled = ctx.condensed.interp.compile()?;
    let mut bound = 16u64;
    let mut previous: Option<Vec<Vec<u64>>> = None;
    loop {
        let mut pts: Vec<Vec<u64>> = ctx
            .condensed
            .decomposition
            .enumerate(bound)
            .into_iter()
            .map(|p| p.into_iter().map(|x| x as u64).collect())
            .collect();
        compiled.sort(&mut pts)?;
        pts.truncate(want);
        if pts.len() == want && previous.as_ref() == Some(&pts) {
            return Ok(pts);
        }
        if bound >= MAX_BOX {
            return Err(Error::Budget { what: "enumeration box side", budget: MAX_BOX as usize });
        }
        previous = Some(pts);
        bound *= 2;
    }
}

fn fit_spine(samples: Vec<Vec<u64>>, length: Option<usize>, max_modulus: usize) -> Result<SpineMap> {
    let dim = samples.first().map_or(0, Vec::len);
    'modulus: for m in 1..=max_modulus.max(1) {
        let mut pieces = Vec::new();
        for r in 0..m {
            let class: Vec<&Vec<u64>> = samples.iter().skip(r).step_by(m).collect();
            if class.is_empty() {
                if length.is_none() {
                    continue 'modulus;
                }
                pieces.push(SpinePiece { base: vec![0; dim], step: vec![0; dim] });
                continue;
            }
            // Infinite spines need evidence beyond two points per class.
            if length.is_none() && class.len() < 3 {
                continue 'modulus;
            }
            let base: Vec<i64> = class[0].iter().map(|&x| x as i64).collect();
            let step: Vec<i64> = match class.get(1) {
                Some(c) => c.iter().zip(&base).map(|(&x, b)| x as i64 - b).collect(),
                None => vec![0; dim],
            };
            let fits = class.iter().enumerate().all(|(j, p)| {
                p.iter().zip(base.iter().zip(&step)).all(|(&x, (b, s))| x as i64 == b + j as i64 * s)
            });
            if !fits {
                continue 'modulus;
            }
            pieces.push(SpinePiece { base, step });
        }
        return Ok(SpineMap { modulus: m, pieces, length, samples });
    }
    Err(Error::SpineSynthesis(format!("no piecewise linear fit with modulus <= {max_modulus}")))
}

/// Piecewise linear ascending enumeration of the galaxy representatives
/// (of all points, for a finite order).
pub fn synthesize_spine(interp: &Interpretation) -> Result<SpineMap> {
    let ctx = context(interp, Limits::default())?;
    spine_of(&ctx, DEFAULT_MAX_MODULUS)
}

fn spine_of(ctx: &Context, max_modulus: usize) -> Result<SpineMap> {
    match &ctx.shape {
        Shape::FiniteOrder(pts) | Shape::Finite(pts) => fit_spine(pts.clone(), Some(pts.len()), max_modulus),
        Shape::Omega => fit_spine(ascending_representatives(ctx, SPINE_SAMPLES)?, None, max_modulus),
    }
}

fn nat(v: &str) -> Var {
    Var::new(v)
}

fn lin(terms: &[(Var, i64)], constant: i64) -> Linear {
    Linear::from_parts(terms.iter().map(|(v, c)| (*v, BigInt::from(*c))).collect(), BigInt::from(constant))
}

/// `(k, n) -> (k, -1 - n)`.
fn mirror(l: &Lattice) -> Result<Lattice> {
    Lattice::new(
        vec![l.base[0], -1 - l.base[1]],
        l.periods.iter().map(|p| vec![p[0], -p[1]]).collect(),
    )
}

fn kind_of(t: GalaxyType) -> ColumnKind {
    match t {
        GalaxyType::TypeN => ColumnKind::N,
        GalaxyType::TypeNegN => ColumnKind::NegN,
        GalaxyType::TypeZ => ColumnKind::Z,
        GalaxyType::Finite(n) => ColumnKind::Finite { base: n as i64, slope: 0 },
    }
}

fn same_variant(a: GalaxyType, b: GalaxyType) -> bool {
    std::mem::discriminant(&a) == std::mem::discriminant(&b)
}

/// Classes of columns `k = period * j + r` for galaxy types observed at
/// `k = 0..types.len()`.
fn column_classes(types: &[GalaxyType], max_modulus: usize) -> Result<(usize, Vec<ColumnKind>)> {
    let period = (1..=max_modulus)
        .find(|&p| types.len() >= 3 * p && (p..types.len()).all(|k| same_variant(types[k], types[k - p])))
        .ok_or_else(|| Error::UnsupportedShape(format!("galaxy types not periodic with period <= {max_modulus}")))?;
    let mut kinds = Vec::new();
    for r in 0..period {
        let class: Vec<GalaxyType> = types.iter().skip(r).step_by(period).copied().collect();
        let kind = match class[0] {
            GalaxyType::Finite(_) => {
                let samples: Vec<(Vec<i64>, u64)> = class
                    .iter()
                    .enumerate()
                    .map(|(j, t)| match t {
                        GalaxyType::Finite(n) => (vec![j as i64], *n as u64),
                        _ => unreachable!("same variant"),
                    })
                    .collect();
                let Some(p) = counting::interpolate(&samples, 1, 1) else {
                    let higher = counting::interpolate(&samples, 1, 3).map(|p| p.degree());
                    return Err(match higher {
                        Some(d) => Error::UnsupportedShape(format!("finite galaxy sizes grow with degree {d}")),
                        None => Error::FitFailed(format!("finite galaxy sizes in class {r} are not polynomial")),
                    });
                };
                let coeff = |e: u32| -> Result<i64> {
                    let c = p.terms.get(&vec![e]).cloned().unwrap_or_else(|| BigRational::from_integer(0.into()));
                    if !c.is_integer() {
                        return Err(Error::FitFailed(format!("galaxy size {p} has fractional coefficients")));
                    }
                    c.to_integer().to_i64().ok_or_else(|| Error::Overflow(c.to_string()))
                };
                let (base, slope) = (coeff(0)?, coeff(1)?);
                if base < 1 || slope.is_negative() {
                    return Err(Error::FitFailed(format!("galaxy size {p} is not positive for all columns")));
                }
                ColumnKind::Finite { base, slope }
            }
            t => kind_of(t),
        };
        kinds.push(kind);
    }
    Ok((period, kinds))
}

/// Builds `S` for `I`.
pub fn construct_lex_rep(interp: &Interpretation) -> Result<LexRepresentation> {
    construct_lex_rep_with(interp, Limits::default())
}

pub fn construct_lex_rep_with(interp: &Interpretation, limits: Limits) -> Result<LexRepresentation> {
    let ctx = context(interp, limits)?;
    let spine = spine_of(&ctx, DEFAULT_MAX_MODULUS)?;
    match &ctx.shape {
        Shape::FiniteOrder(pts) => {
            let pieces: Vec<Lattice> = (0..pts.len() as i64).map(|i| Lattice::point(vec![i])).collect();
            let classes = vec![ColumnClass {
                residue: 0,
                kind: ColumnKind::Finite { base: pts.len() as i64, slope: 0 },
                pieces: (0..pieces.len()).collect(),
            }];
            let provenance = Provenance {
                condensation: "finite order".into(),
                spine,
                period: 1,
                columns: Some(1),
                classes,
            };
            Ok(LexRepresentation { arity: 1, set: Decomposition { arity: 1, pieces }, provenance: Some(provenance) })
        }
        Shape::Finite(reps) => {
            let mut pieces = Vec::new();
            let mut classes = Vec::new();
            for (k, rep) in reps.iter().enumerate() {
                let kind = kind_of(ctx.analyzer.galaxy_type(rep)?);
                let start = pieces.len();
                let k = k as i64;
                match kind {
                    ColumnKind::N => pieces.push(Lattice::new(vec![k, 0], vec![vec![0, 1]])?),
                    ColumnKind::NegN => pieces.push(Lattice::new(vec![k, -1], vec![vec![0, -1]])?),
                    ColumnKind::Z => {
                        pieces.push(Lattice::new(vec![k, 0], vec![vec![0, 1]])?);
                        pieces.push(Lattice::new(vec![k, -1], vec![vec![0, -1]])?);
                    }
                    ColumnKind::Finite { base, .. } => pieces.extend((0..base).map(|n| Lattice::point(vec![k, n]))),
                }
                classes.push(ColumnClass { residue: k as usize, kind, pieces: (start..pieces.len()).collect() });
            }
            let provenance = Provenance {
                condensation: "finite".into(),
                spine,
                period: reps.len(),
                columns: Some(reps.len()),
                classes,
            };
            Ok(LexRepresentation { arity: 2, set: Decomposition { arity: 2, pieces }, provenance: Some(provenance) })
        }
        Shape::Omega => {
            let types: Vec<GalaxyType> = spine
                .samples
                .iter()
                .map(|rep| ctx.analyzer.galaxy_type(rep))
                .collect::<Result<_>>()?;
            let (period, kinds) = column_classes(&types, DEFAULT_MAX_MODULUS)?;
            let (k, n) = (nat("k"), nat("n"));
            let p = period as i64;
            let mut pieces = Vec::new();
            let mut classes = Vec::new();
            for (r, kind) in kinds.iter().enumerate() {
                let ri = r as i64;
                let column = Qf::atom(Atom::Dvd(BigInt::from(p), lin(&[(k, 1)], -ri)));
                let start = pieces.len();
                let upper = match kind {
                    ColumnKind::N | ColumnKind::Z => Some(column.clone()),
                    ColumnKind::NegN => None,
                    // p n < p base + slope (k - r)
                    ColumnKind::Finite { base, slope } => Some(Qf::and(vec![
                        column.clone(),
                        Qf::atom(Atom::Le(lin(&[(n, p), (k, -slope)], slope * ri - p * base + 1))),
                    ])),
                };
                if let Some(u) = upper {
                    pieces.extend(decompose_qf(&u, &[k, n], limits.max_pieces)?);
                }
                if matches!(kind, ColumnKind::NegN | ColumnKind::Z) {
                    for l in decompose_qf(&column, &[k, n], limits.max_pieces)? {
                        pieces.push(mirror(&l)?);
                    }
                }
                classes.push(ColumnClass { residue: r, kind: *kind, pieces: (start..pieces.len()).collect() });
            }
            let provenance =
                Provenance { condensation: "omega".into(), spine, period, columns: None, classes };
            Ok(LexRepresentation { arity: 2, set: Decomposition { arity: 2, pieces }, provenance: Some(provenance) })
        }
    }
}

/// Outcome of comparing the galaxy sequences of `I` and `(S, lex)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub prefix_length: usize,
    /// Elements covered, counting at most `INFINITE_WINDOW` per infinite galaxy.
    pub elements_covered: usize,
    pub galaxies_compared: usize,
    pub truncated: bool,
    pub first_mismatch: Option<String>,
    pub interpretation_galaxies: Vec<String>,
    pub set_galaxies: Vec<String>,
}

fn weight(t: &GalaxyType) -> usize {
    match t {
        GalaxyType::Finite(n) => *n,
        _ => INFINITE_WINDOW,
    }
}

/// Galaxy types of `I` in internal order, until their weights cover
/// `prefix` (or all of them if there are fewer).
fn interpretation_galaxies(ctx: &Context, prefix: usize) -> Result<(Vec<GalaxyType>, bool)> {
    let reps = match &ctx.shape {
        Shape::FiniteOrder(pts) => {
            return Ok((vec![GalaxyType::Finite(pts.len())], false));
        }
        Shape::Finite(reps) => reps.clone(),
        Shape::Omega => {
            let mut want = 16;
            loop {
                let reps = ascending_representatives(ctx, want)?;
                let mut covered = 0;
                let mut out = Vec::new();
                for r in &reps {
                    let t = ctx.analyzer.galaxy_type(r)?;
                    covered += weight(&t);
                    out.push(t);
                    if covered >= prefix {
                        return Ok((out, false));
                    }
                }
                want *= 2;
            }
        }
    };
    let mut covered = 0;
    let mut out = Vec::new();
    for r in &reps {
        let t = ctx.analyzer.galaxy_type(r)?;
        covered += weight(&t);
        out.push(t);
        if covered >= prefix {
            break;
        }
    }
    Ok((out, false))
}

/// Compares `I` with `(R.set, lex)` galaxy by galaxy until `prefix`
/// elements are covered.
pub fn verify_lex_rep(interp: &Interpretation, rep: &LexRepresentation, prefix: usize) -> Result<VerificationReport> {
    verify_lex_rep_with(interp, rep, prefix, Limits::default())
}

pub fn verify_lex_rep_with(
    interp: &Interpretation,
    rep: &LexRepresentation,
    prefix: usize,
    limits: Limits,
) -> Result<VerificationReport> {
    let ctx = context(interp, limits)?;
    let (left, left_truncated) = interpretation_galaxies(&ctx, prefix)?;
    let (right, right_truncated) = lex_galaxies(&rep.set, prefix)?;
    let mut covered = 0;
    let mut compared = 0;
    let mut mismatch = None;
    for (i, (a, b)) in left.iter().zip(&right).enumerate() {
        if a != b {
            mismatch = Some(format!("galaxy {i}: interpretation has {a}, set has {b}"));
            break;
        }
        compared += 1;
        covered += weight(a);
        if covered >= prefix {
            break;
        }
    }
    if mismatch.is_none() && covered < prefix && left.len() != right.len() {
        let i = compared;
        let show = |v: &[GalaxyType]| v.get(i).map_or("nothing".to_string(), |t| t.to_string());
        mismatch = Some(format!("galaxy {i}: interpretation has {}, set has {}", show(&left), show(&right)));
    }
    let complete = covered >= prefix || (left.len() == right.len() && !left_truncated && !right_truncated);
    let truncated = mismatch.is_none() && !complete;
    Ok(VerificationReport {
        passed: mismatch.is_none() && complete,
        prefix_length: prefix,
        elements_covered: covered.min(prefix),
        galaxies_compared: compared,
        truncated,
        first_mismatch: mismatch,
        interpretation_galaxies: left.iter().map(ToString::to_string).collect(),
        set_galaxies: right.iter().map(ToString::to_string).collect(),
    })
}
