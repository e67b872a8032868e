use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::var::Var;

/// Integer linear form `sum c_i * v_i + constant`.
///
/// Coefficients are kept sorted by variable with zeros removed, so equal
/// forms compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Linear {
    coeffs: Vec<(Var, BigInt)>,
    constant: BigInt,
}

impl Linear {
    pub fn zero() -> Linear {
        Linear::default()
    }

    pub fn constant(k: impl Into<BigInt>) -> Linear {
        Linear { coeffs: Vec::new(), constant: k.into() }
    }

    pub fn var(v: Var) -> Linear {
        Linear { coeffs: vec![(v, BigInt::one())], constant: BigInt::zero() }
    }

    pub fn term(v: Var, c: impl Into<BigInt>) -> Linear {
        let c = c.into();
        if c.is_zero() {
            return Linear::zero();
        }
        Linear { coeffs: vec![(v, c)], constant: BigInt::zero() }
    }

    pub fn from_parts(mut coeffs: Vec<(Var, BigInt)>, constant: BigInt) -> Linear {
        coeffs.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(Var, BigInt)> = Vec::with_capacity(coeffs.len());
        for (v, c) in coeffs {
            match merged.last_mut() {
                Some((w, d)) if *w == v => *d += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Linear { coeffs: merged, constant }
    }

    pub fn coeffs(&self) -> &[(Var, BigInt)] {
        &self.coeffs
    }

    pub fn constant_part(&self) -> &BigInt {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, v: Var) -> BigInt {
        match self.coeffs.binary_search_by_key(&v, |(w, _)| *w) {
            Ok(i) => self.coeffs[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.coeffs.binary_search_by_key(&v, |(w, _)| *w).is_ok()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.iter().map(|(v, _)| *v)
    }

    /// The form with `v` dropped.
    pub fn without(&self, v: Var) -> Linear {
        Linear {
            coeffs: self.coeffs.iter().filter(|(w, _)| *w != v).cloned().collect(),
            constant: self.constant.clone(),
        }
    }

    /// The form with the constant dropped.
    pub fn homogeneous(&self) -> Linear {
        Linear { coeffs: self.coeffs.clone(), constant: BigInt::zero() }
    }

    pub fn add(&self, other: &Linear) -> Linear {
        let mut out = Vec::with_capacity(self.coeffs.len() + other.coeffs.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.coeffs, &other.coeffs);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                let c = &a[i].1 + &b[j].1;
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Linear { coeffs: out, constant: &self.constant + &other.constant }
    }

    pub fn sub(&self, other: &Linear) -> Linear {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Linear {
        Linear {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, -c)).collect(),
            constant: -&self.constant,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Linear {
        if k.is_zero() {
            return Linear::zero();
        }
        Linear {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn add_constant(&self, k: &BigInt) -> Linear {
        Linear { coeffs: self.coeffs.clone(), constant: &self.constant + k }
    }

    /// Replaces `v` by `replacement`.
    pub fn substitute(&self, v: Var, replacement: &Linear) -> Linear {
        let c = self.coeff(v);
        if c.is_zero() {
            return self.clone();
        }
        self.without(v).add(&replacement.scale(&c))
    }

    /// gcd of the variable coefficients (0 for a constant form).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
    }

    pub fn divide_exact(&self, g: &BigInt) -> Linear {
        Linear {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, c / g)).collect(),
            constant: &self.constant / g,
        }
    }

    /// Reduces every coefficient and the constant into `[0, m)`.
    pub fn reduce_mod(&self, m: &BigInt) -> Linear {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(v, c)| (*v, c.mod_floor(m)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Linear { coeffs, constant: self.constant.mod_floor(m) }
    }

    pub fn eval(&self, lookup: &dyn Fn(Var) -> Option<BigInt>) -> Option<BigInt> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * lookup(*v)?;
        }
        Some(acc)
    }

    /// Sign-normalised copy: first coefficient positive. Returns whether the
    /// form was negated.
    pub fn sign_normalized(&self) -> (Linear, bool) {
        match self.coeffs.first() {
            Some((_, c)) if c.is_negative() => (self.neg(), true),
            _ => (self.clone(), false),
        }
    }
}

impl fmt::Debug for Linear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Linear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            let sign = if c.is_negative() { "-" } else { "+" };
            if !first || c.is_negative() {
                write!(f, "{}{}", if first { "" } else { " " }, sign)?;
                if !first {
                    write!(f, " ")?;
                }
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{a}*{v}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", self.constant.abs())
        } else {
            Ok(())
        }
    }
}
