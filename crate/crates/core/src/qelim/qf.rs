use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linear::Linear;
use super::var::Var;
use crate::error::{Error, Result};
use crate::formula::{Formula, Rel, Term};

/// Normalised literal over an integer linear form `e`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    /// `e <= 0`
    Le(Linear),
    /// `e = 0`
    Eq(Linear),
    /// `e != 0`
    Ne(Linear),
    /// `d | e`, `d >= 2` once normalised
    Dvd(BigInt, Linear),
    /// `!(d | e)`
    NDvd(BigInt, Linear),
}

/// A quantifier-free formula in negation normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Qf {
    True,
    False,
    Atom(Atom),
    And(Vec<Qf>),
    Or(Vec<Qf>),
}

pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Atom {
    pub fn linear(&self) -> &Linear {
        match self {
            Atom::Le(e) | Atom::Eq(e) | Atom::Ne(e) | Atom::Dvd(_, e) | Atom::NDvd(_, e) => e,
        }
    }

    pub fn map_linear(&self, f: impl Fn(&Linear) -> Linear) -> Atom {
        match self {
            Atom::Le(e) => Atom::Le(f(e)),
            Atom::Eq(e) => Atom::Eq(f(e)),
            Atom::Ne(e) => Atom::Ne(f(e)),
            Atom::Dvd(d, e) => Atom::Dvd(d.clone(), f(e)),
            Atom::NDvd(d, e) => Atom::NDvd(d.clone(), f(e)),
        }
    }

    pub fn negate(&self) -> Atom {
        match self {
            Atom::Le(e) => Atom::Le(e.neg().add_constant(&BigInt::one())),
            Atom::Eq(e) => Atom::Ne(e.clone()),
            Atom::Ne(e) => Atom::Eq(e.clone()),
            Atom::Dvd(d, e) => Atom::NDvd(d.clone(), e.clone()),
            Atom::NDvd(d, e) => Atom::Dvd(d.clone(), e.clone()),
        }
    }

    /// Canonical form, or a constant when the atom is decided.
    pub fn normalize(self) -> Qf {
        match self {
            Atom::Le(e) => {
                if e.is_constant() {
                    return Qf::bool(!e.constant_part().is_positive());
                }
                // Variables range over N, so a one-signed form is bounded on one side.
                match coeff_sign(&e) {
                    Some(true) if e.constant_part().is_positive() => return Qf::False,
                    Some(false) if !e.constant_part().is_positive() => return Qf::True,
                    _ => {}
                }
                let g = e.content();
                if g.is_one() {
                    return Qf::Atom(Atom::Le(e));
                }
                // g*h + k <= 0  <=>  h + ceil(k/g) <= 0
                let k = ceil_div(e.constant_part(), &g);
                Qf::Atom(Atom::Le(e.homogeneous().divide_exact(&g).add_constant(&k)))
            }
            Atom::Eq(e) => match normalize_equation(e) {
                Ok(e) => Qf::Atom(Atom::Eq(e)),
                Err(b) => Qf::bool(b),
            },
            Atom::Ne(e) => match normalize_equation(e) {
                Ok(e) => Qf::Atom(Atom::Ne(e)),
                Err(b) => Qf::bool(!b),
            },
            Atom::Dvd(d, e) => match normalize_divisibility(d, e) {
                Ok((d, e)) => Qf::Atom(Atom::Dvd(d, e)),
                Err(b) => Qf::bool(b),
            },
            Atom::NDvd(d, e) => match normalize_divisibility(d, e) {
                Ok((d, e)) => Qf::Atom(Atom::NDvd(d, e)),
                Err(b) => Qf::bool(!b),
            },
        }
    }

    fn eval(&self, lookup: &dyn Fn(Var) -> Option<BigInt>) -> Option<bool> {
        let v = self.linear().eval(lookup)?;
        Some(match self {
            Atom::Le(_) => !v.is_positive(),
            Atom::Eq(_) => v.is_zero(),
            Atom::Ne(_) => !v.is_zero(),
            Atom::Dvd(d, _) => v.mod_floor(d).is_zero(),
            Atom::NDvd(d, _) => !v.mod_floor(d).is_zero(),
        })
    }
}

/// `Some(true)` if every coefficient is positive, `Some(false)` if every one
/// is negative.
fn coeff_sign(e: &Linear) -> Option<bool> {
    let mut it = e.coeffs().iter().map(|(_, c)| c.is_positive());
    let first = it.next()?;
    it.all(|s| s == first).then_some(first)
}

/// `Err(truth)` when the equation `e = 0` is decided outright.
fn normalize_equation(e: Linear) -> std::result::Result<Linear, bool> {
    if e.is_constant() {
        return Err(e.constant_part().is_zero());
    }
    let g = e.content();
    if !e.constant_part().is_multiple_of(&g) {
        return Err(false);
    }
    match coeff_sign(&e) {
        Some(true) if e.constant_part().is_positive() => return Err(false),
        Some(false) if e.constant_part().is_negative() => return Err(false),
        _ => {}
    }
    let e = if g.is_one() { e } else { e.divide_exact(&g) };
    Ok(e.sign_normalized().0)
}

/// `Err(truth)` when `d | e` is decided outright.
fn normalize_divisibility(d: BigInt, e: Linear) -> std::result::Result<(BigInt, Linear), bool> {
    let d = d.abs();
    if d.is_one() {
        return Err(true);
    }
    let e = e.reduce_mod(&d);
    if e.is_constant() {
        return Err(e.constant_part().is_zero());
    }
    let g = e.content().gcd(&d);
    if !e.constant_part().is_multiple_of(&g) {
        return Err(false);
    }
    if g.is_one() {
        return Ok((d, e));
    }
    let d2 = &d / &g;
    if d2.is_one() {
        return Err(true);
    }
    Ok((d2.clone(), e.divide_exact(&g).reduce_mod(&d2)))
}

impl Qf {
    pub fn bool(b: bool) -> Qf {
        if b {
            Qf::True
        } else {
            Qf::False
        }
    }

    pub fn atom(a: Atom) -> Qf {
        a.normalize()
    }

    pub fn and(items: Vec<Qf>) -> Qf {
        simplify_and(items)
    }

    pub fn or(items: Vec<Qf>) -> Qf {
        simplify_or(items)
    }

    pub fn negate(&self) -> Qf {
        match self {
            Qf::True => Qf::False,
            Qf::False => Qf::True,
            Qf::Atom(a) => a.negate().normalize(),
            Qf::And(xs) => Qf::or(xs.iter().map(Qf::negate).collect()),
            Qf::Or(xs) => Qf::and(xs.iter().map(Qf::negate).collect()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Qf::True | Qf::False | Qf::Atom(_) => 1,
            Qf::And(xs) | Qf::Or(xs) => 1 + xs.iter().map(Qf::node_count).sum::<usize>(),
        }
    }

    pub fn mentions(&self, v: Var) -> bool {
        match self {
            Qf::True | Qf::False => false,
            Qf::Atom(a) => a.linear().mentions(v),
            Qf::And(xs) | Qf::Or(xs) => xs.iter().any(|x| x.mentions(v)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| out.extend(a.linear().vars()));
        out
    }

    pub fn for_each_atom(&self, f: &mut dyn FnMut(&Atom)) {
        match self {
            Qf::True | Qf::False => {}
            Qf::Atom(a) => f(a),
            Qf::And(xs) | Qf::Or(xs) => xs.iter().for_each(|x| x.for_each_atom(f)),
        }
    }

    /// Rebuilds the formula with every atom replaced, simplifying on the way up.
    pub fn map_atoms(&self, f: &dyn Fn(&Atom) -> Qf) -> Qf {
        match self {
            Qf::True | Qf::False => self.clone(),
            Qf::Atom(a) => f(a),
            Qf::And(xs) => simplify_and(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Qf::Or(xs) => simplify_or(xs.iter().map(|x| x.map_atoms(f)).collect()),
        }
    }

    /// Replaces `v` by a linear form.
    pub fn substitute(&self, v: Var, replacement: &Linear) -> Qf {
        self.map_atoms(&|a| {
            if a.linear().mentions(v) {
                a.map_linear(|e| e.substitute(v, replacement)).normalize()
            } else {
                Qf::Atom(a.clone())
            }
        })
    }

    /// Simultaneous substitution of integer constants.
    pub fn substitute_values(&self, values: &HashMap<Var, BigInt>) -> Qf {
        self.map_atoms(&|a| {
            if a.linear().vars().any(|v| values.contains_key(&v)) {
                let mut e = a.linear().clone();
                for (v, k) in values {
                    if e.mentions(*v) {
                        e = e.substitute(*v, &Linear::constant(k.clone()));
                    }
                }
                a.map_linear(|_| e.clone()).normalize()
            } else {
                Qf::Atom(a.clone())
            }
        })
    }

    /// Truth value; `None` if a variable has no value.
    pub fn eval(&self, lookup: &dyn Fn(Var) -> Option<BigInt>) -> Option<bool> {
        Some(match self {
            Qf::True => true,
            Qf::False => false,
            Qf::Atom(a) => a.eval(lookup)?,
            Qf::And(xs) => {
                for x in xs {
                    if !x.eval(lookup)? {
                        return Some(false);
                    }
                }
                true
            }
            Qf::Or(xs) => {
                for x in xs {
                    if x.eval(lookup)? {
                        return Some(true);
                    }
                }
                false
            }
        })
    }

    /// Evaluates with `vars[i] = point[i]`.
    pub fn eval_point(&self, vars: &[Var], point: &[i64]) -> Result<bool> {
        let lookup = |v: Var| vars.iter().position(|w| *w == v).map(|i| BigInt::from(point[i]));
        self.eval(&lookup).ok_or_else(|| {
            let missing = self.vars().into_iter().find(|v| !vars.contains(v));
            Error::UnboundVariable(missing.map(|v| v.name()).unwrap_or_default())
        })
    }

    /// Converts a quantifier-free [`Formula`] into negation normal form.
    pub fn from_formula(phi: &Formula) -> Result<Qf> {
        Ok(match phi {
            Formula::Atom(rel, l, r) => {
                let (l, r) = (term_linear(l), term_linear(r));
                let one = BigInt::one();
                match rel {
                    Rel::Eq => Atom::Eq(l.sub(&r)),
                    Rel::Ne => Atom::Ne(l.sub(&r)),
                    Rel::Le => Atom::Le(l.sub(&r)),
                    Rel::Lt => Atom::Le(l.sub(&r).add_constant(&one)),
                    Rel::Ge => Atom::Le(r.sub(&l)),
                    Rel::Gt => Atom::Le(r.sub(&l).add_constant(&one)),
                }
                .normalize()
            }
            Formula::Congruent(l, r, m) => {
                Atom::Dvd(BigInt::from(*m), term_linear(l).sub(&term_linear(r))).normalize()
            }
            Formula::Not(f) => Qf::from_formula(f)?.negate(),
            Formula::And(a, b) => simplify_and(vec![Qf::from_formula(a)?, Qf::from_formula(b)?]),
            Formula::Or(a, b) => simplify_or(vec![Qf::from_formula(a)?, Qf::from_formula(b)?]),
            Formula::Implies(a, b) => {
                simplify_or(vec![Qf::from_formula(a)?.negate(), Qf::from_formula(b)?])
            }
            Formula::Exists(..) | Formula::Forall(..) => return Err(Error::NotQuantifierFree),
        })
    }

    /// Renders back into the surface language (terms over `N`, so negative
    /// coefficients move to the other side).
    pub fn to_formula(&self) -> Result<Formula> {
        Ok(match self {
            Qf::True => Formula::truth(),
            Qf::False => Formula::falsity(),
            Qf::Atom(a) => {
                let (l, r) = split_sides(a.linear())?;
                match a {
                    Atom::Le(_) => Formula::Atom(Rel::Le, l, r),
                    Atom::Eq(_) => Formula::Atom(Rel::Eq, l, r),
                    Atom::Ne(_) => Formula::Atom(Rel::Ne, l, r),
                    Atom::Dvd(d, _) => Formula::Congruent(l, r, to_u64(d)?),
                    Atom::NDvd(d, _) => Formula::not(Formula::Congruent(l, r, to_u64(d)?)),
                }
            }
            Qf::And(xs) => Formula::conj(xs.iter().map(Qf::to_formula).collect::<Result<Vec<_>>>()?),
            Qf::Or(xs) => Formula::disj(xs.iter().map(Qf::to_formula).collect::<Result<Vec<_>>>()?),
        })
    }

    /// Disjunctive normal form as a list of literal conjunctions; `None` if it
    /// would exceed `limit` conjunctions.
    pub fn dnf(&self, limit: usize) -> Option<Vec<Vec<Atom>>> {
        match self {
            Qf::True => Some(vec![vec![]]),
            Qf::False => Some(vec![]),
            Qf::Atom(a) => Some(vec![vec![a.clone()]]),
            Qf::Or(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    out.extend(x.dnf(limit)?);
                    if out.len() > limit {
                        return None;
                    }
                }
                Some(out)
            }
            Qf::And(xs) => {
                let mut acc: Vec<Vec<Atom>> = vec![vec![]];
                for x in xs {
                    let d = x.dnf(limit)?;
                    if acc.len() * d.len() > limit {
                        return None;
                    }
                    let mut next = Vec::with_capacity(acc.len() * d.len());
                    for a in &acc {
                        for b in &d {
                            let mut c = a.clone();
                            c.extend(b.iter().cloned());
                            next.push(c);
                        }
                    }
                    acc = next;
                }
                Some(acc)
            }
        }
    }
}

fn to_u64(d: &BigInt) -> Result<u64> {
    d.to_u64().ok_or_else(|| Error::Overflow(format!("modulus {d} does not fit in 64 bits")))
}

fn term_linear(t: &Term) -> Linear {
    match t {
        Term::Var(v) => Linear::var(Var::new(v)),
        Term::Num(n) => Linear::constant(*n),
        Term::Add(a, b) => term_linear(a).add(&term_linear(b)),
        Term::Mul(k, t) => term_linear(t).scale(&BigInt::from(*k)),
    }
}

fn coeff_term(c: &BigInt, v: Var) -> Result<Term> {
    let k = c.to_u64().ok_or_else(|| Error::Overflow(format!("coefficient {c} too large")))?;
    Ok(if k == 1 { Term::Var(v.name()) } else { Term::scale(k, Term::Var(v.name())) })
}

fn split_sides(e: &Linear) -> Result<(Term, Term)> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (v, c) in e.coeffs() {
        if c.is_positive() {
            left.push(coeff_term(c, *v)?);
        } else {
            right.push(coeff_term(&-c, *v)?);
        }
    }
    let k = e.constant_part();
    let num = |k: &BigInt| {
        k.to_u64().map(Term::Num).ok_or_else(|| Error::Overflow(format!("constant {k} too large")))
    };
    if k.is_positive() {
        left.push(num(k)?);
    } else if k.is_negative() {
        right.push(num(&-k)?);
    }
    Ok((Term::sum(left), Term::sum(right)))
}

/// Conjunction with flattening, constant folding, duplicate removal and
/// bound tightening on opposite inequalities over the same linear part.
fn simplify_and(items: Vec<Qf>) -> Qf {
    let mut flat = Vec::with_capacity(items.len());
    for it in items {
        match it {
            Qf::True => {}
            Qf::False => return Qf::False,
            Qf::And(xs) => flat.extend(xs),
            other => flat.push(other),
        }
    }
    // Tightest upper bound per homogeneous part: h + k <= 0 means h <= -k.
    let mut upper: HashMap<Linear, BigInt> = HashMap::new();
    let mut eqs: HashMap<Linear, BigInt> = HashMap::new();
    let mut rest = Vec::new();
    for it in flat {
        match it {
            Qf::Atom(Atom::Le(e)) => {
                let h = e.homogeneous();
                let b = -e.constant_part();
                let slot = upper.entry(h).or_insert_with(|| b.clone());
                if b < *slot {
                    *slot = b;
                }
            }
            Qf::Atom(Atom::Eq(e)) => {
                let (h, flipped) = e.homogeneous().sign_normalized();
                let b = if flipped { e.constant_part().clone() } else { -e.constant_part() };
                if let Some(prev) = eqs.get(&h) {
                    if *prev != b {
                        return Qf::False;
                    }
                } else {
                    eqs.insert(h, b);
                }
            }
            other => rest.push(other),
        }
    }
    let mut out: BTreeSet<Qf> = BTreeSet::new();
    let mut consumed: BTreeSet<Linear> = BTreeSet::new();
    for (h, b) in &upper {
        if consumed.contains(h) {
            continue;
        }
        let neg = h.neg();
        // h <= b  and  -h <= c  i.e.  -c <= h <= b
        if let Some(c) = upper.get(&neg) {
            let lo = -c;
            if lo > *b {
                return Qf::False;
            }
            consumed.insert(neg.clone());
            consumed.insert(h.clone());
            if lo == *b {
                let (hn, flipped) = h.sign_normalized();
                let val = if flipped { -b.clone() } else { b.clone() };
                match eqs.get(&hn) {
                    Some(v) if *v != val => return Qf::False,
                    _ => {
                        eqs.insert(hn, val);
                    }
                }
                continue;
            }
            out.insert(Qf::Atom(Atom::Le(neg.add_constant(&-c))));
        }
        out.insert(Qf::Atom(Atom::Le(h.add_constant(&-b))));
    }
    // Equalities decide inequalities on the same part.
    let mut final_out = BTreeSet::new();
    for it in out {
        if let Qf::Atom(Atom::Le(e)) = &it {
            let h = e.homogeneous();
            let (hn, flipped) = h.sign_normalized();
            if let Some(v) = eqs.get(&hn) {
                let hv = if flipped { -v.clone() } else { v.clone() };
                if hv + e.constant_part() > BigInt::zero() {
                    return Qf::False;
                }
                continue;
            }
        }
        final_out.insert(it);
    }
    for (h, v) in eqs {
        final_out.insert(Qf::Atom(Atom::Eq(h.add_constant(&-v))));
    }
    for it in rest {
        if let Qf::Atom(Atom::Ne(e)) = &it {
            if let Some(v) = eq_value(&final_out, e) {
                if v {
                    continue;
                }
                return Qf::False;
            }
        }
        final_out.insert(it);
    }
    // d | h + k  and  d | h + k'  with k != k' (mod d) cannot both hold.
    let mut residues: HashMap<(&BigInt, Linear), &BigInt> = HashMap::new();
    for it in &final_out {
        if let Qf::Atom(Atom::Dvd(d, e)) = it {
            let k = e.constant_part();
            match residues.entry((d, e.homogeneous())) {
                std::collections::hash_map::Entry::Occupied(o) => {
                    if !(*o.get() - k).is_multiple_of(d) {
                        return Qf::False;
                    }
                }
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(k);
                }
            }
        }
    }
    for it in &final_out {
        if let Qf::Atom(a) = it {
            if matches!(a, Atom::Dvd(..) | Atom::NDvd(..) | Atom::Ne(_))
                && final_out.contains(&Qf::Atom(a.negate()))
            {
                return Qf::False;
            }
        }
    }
    match final_out.len() {
        0 => Qf::True,
        1 => final_out.into_iter().next().unwrap(),
        _ => Qf::And(final_out.into_iter().collect()),
    }
}

// For `e != 0`: Some(true) if an equality in the set already makes it true,
// Some(false) if an equality makes it false.
fn eq_value(set: &BTreeSet<Qf>, e: &Linear) -> Option<bool> {
    let h = e.homogeneous();
    for it in set {
        if let Qf::Atom(Atom::Eq(f)) = it {
            if f.homogeneous() == h {
                return Some(f.constant_part() != e.constant_part());
            }
        }
    }
    None
}

fn simplify_or(items: Vec<Qf>) -> Qf {
    let mut flat = Vec::with_capacity(items.len());
    for it in items {
        match it {
            Qf::False => {}
            Qf::True => return Qf::True,
            Qf::Or(xs) => flat.extend(xs),
            other => flat.push(other),
        }
    }
    // Loosest upper bound per homogeneous part.
    let mut upper: HashMap<Linear, BigInt> = HashMap::new();
    let mut out: BTreeSet<Qf> = BTreeSet::new();
    for it in flat {
        match it {
            Qf::Atom(Atom::Le(e)) => {
                let h = e.homogeneous();
                let b = -e.constant_part();
                let slot = upper.entry(h).or_insert_with(|| b.clone());
                if b > *slot {
                    *slot = b;
                }
            }
            other => {
                out.insert(other);
            }
        }
    }
    for (h, b) in &upper {
        // h <= b  or  -h <= c  covers everything when -c <= b + 1
        if let Some(c) = upper.get(&h.neg()) {
            if -c <= b + BigInt::one() {
                return Qf::True;
            }
        }
        out.insert(Qf::Atom(Atom::Le(h.add_constant(&-b))));
    }
    for it in &out {
        if let Qf::Atom(a) = it {
            if !matches!(a, Atom::Le(_)) && out.contains(&Qf::Atom(a.negate())) {
                return Qf::True;
            }
            // h != v  or  h <= b  holds everywhere once v <= b.
            if let Atom::Ne(e) = a {
                let h = e.homogeneous();
                let v = -e.constant_part();
                if upper.get(&h).is_some_and(|b| v <= *b) || upper.get(&h.neg()).is_some_and(|c| -&v <= *c) {
                    return Qf::True;
                }
            }
        }
    }
    match out.len() {
        0 => Qf::False,
        1 => out.into_iter().next().unwrap(),
        _ => Qf::Or(out.into_iter().collect()),
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, a: &Atom) -> fmt::Result {
    match a {
        Atom::Le(e) => write!(f, "{e} <= 0"),
        Atom::Eq(e) => write!(f, "{e} = 0"),
        Atom::Ne(e) => write!(f, "{e} != 0"),
        Atom::Dvd(d, e) => write!(f, "{d} | {e}"),
        Atom::NDvd(d, e) => write!(f, "!({d} | {e})"),
    }
}

impl fmt::Display for Qf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_formula() {
            Ok(phi) => write!(f, "{phi}"),
            Err(_) => match self {
                Qf::True => write!(f, "true"),
                Qf::False => write!(f, "false"),
                Qf::Atom(a) => write_atom(f, a),
                Qf::And(xs) | Qf::Or(xs) => {
                    let sep = if matches!(self, Qf::And(_)) { " & " } else { " | " };
                    write!(f, "(")?;
                    for (i, x) in xs.iter().enumerate() {
                        if i > 0 {
                            write!(f, "{sep}")?;
                        }
                        write!(f, "{x}")?;
                    }
                    write!(f, ")")
                }
            },
        }
    }
}
