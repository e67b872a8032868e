//! Interpretations of linear orders in `(N, +)`: a domain `D` in `N^m`, a
//! strict order `<` on it and an optional equality, each a formula over the
//! conventional variables `x1..xm` (and `y1..ym` for binary relations).

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{fresh_var, parse, Assignment, Formula, Rel, Term};
use crate::qelim::{self, Qf, Var};

/// `x1..xm`.
pub fn xs(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

/// `y1..ym`.
pub fn ys(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("y{i}")).collect()
}

/// `m` fresh variable names sharing a hint.
pub fn fresh_vars(hint: &str, m: usize) -> Vec<String> {
    (0..m).map(|_| fresh_var(hint)).collect()
}

/// Variables as terms.
pub fn vars_to_terms(vars: &[String]) -> Vec<Term> {
    vars.iter().map(|v| Term::var(v.as_str())).collect()
}

/// Point coordinates as numerals.
pub fn point_terms(p: &[u64]) -> Vec<Term> {
    p.iter().map(|&k| Term::Num(k)).collect()
}

/// Strict external lexicographic comparison `a <lex b` of two tuples.
pub fn lex_less(a: &[Term], b: &[Term]) -> Formula {
    Formula::disj((0..a.len()).map(|i| {
        let prefix = (0..i).map(|j| Formula::atom(Rel::Eq, a[j].clone(), b[j].clone()));
        Formula::conj(prefix.chain(std::iter::once(Formula::atom(Rel::Lt, a[i].clone(), b[i].clone()))))
    }))
}

/// Tuple coincidence.
pub fn tuple_eq(a: &[Term], b: &[Term]) -> Formula {
    Formula::conj(a.iter().zip(b).map(|(s, t)| Formula::atom(Rel::Eq, s.clone(), t.clone())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub name: String,
    pub dim: usize,
    pub domain: Formula,
    pub less: Formula,
    pub equality: Option<Formula>,
}

#[derive(Serialize, Deserialize)]
struct InterpretationFile {
    name: String,
    dim: usize,
    domain: String,
    less: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equality: Option<String>,
}

/// One decided order axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub axioms: Vec<AxiomVerdict>,
}

impl ValidationReport {
    pub fn all_hold(&self) -> bool {
        self.axioms.iter().all(|a| a.holds)
    }

    pub fn verdict(&self, axiom: &str) -> Option<bool> {
        self.axioms.iter().find(|a| a.axiom == axiom).map(|a| a.holds)
    }
}

/// Domain points of a box sorted by the internal order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ascending {
    pub points: Vec<Vec<u64>>,
    pub truncated: bool,
}

impl Interpretation {
    /// Builds an interpretation, checking the variable conventions.
    pub fn new(name: &str, dim: usize, domain: Formula, less: Formula, equality: Option<Formula>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInterpretation("dim: dimension must be at least 1".into()));
        }
        let x = xs(dim);
        let mut xy = x.clone();
        xy.extend(ys(dim));
        let check = |field: &str, f: &Formula, allowed: &[String]| -> Result<()> {
            match f.free_vars().into_iter().find(|v| !allowed.contains(v)) {
                Some(v) => Err(Error::InvalidInterpretation(format!("{field}: unexpected free variable `{v}`"))),
                None => Ok(()),
            }
        };
        check("domain", &domain, &x)?;
        check("less", &less, &xy)?;
        if let Some(e) = &equality {
            check("equality", e, &xy)?;
        }
        Ok(Interpretation { name: name.to_string(), dim, domain, less, equality })
    }

    /// Parses an interpretation from formula strings.
    pub fn from_strings(name: &str, dim: usize, domain: &str, less: &str, equality: Option<&str>) -> Result<Self> {
        let field = |f: &str, s: &str| parse(s).map_err(|e| Error::InvalidInterpretation(format!("{f}: {e}")));
        let eq = equality.map(|s| field("equality", s)).transpose()?;
        Interpretation::new(name, dim, field("domain", domain)?, field("less", less)?, eq)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let f: InterpretationFile = serde_json::from_str(text).map_err(|e| {
            Error::InvalidInterpretation(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        Interpretation::from_strings(&f.name, f.dim, &f.domain, &f.less, f.equality.as_deref())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(InterpretationFile {
            name: self.name.clone(),
            dim: self.dim,
            domain: self.domain.to_string(),
            less: self.less.to_string(),
            equality: self.equality.as_ref().map(|e| e.to_string()),
        })
        .expect("interpretation serialises")
    }

    fn subst(f: &Formula, from: &[String], to: &[Term]) -> Formula {
        let map: HashMap<String, Term> = from.iter().cloned().zip(to.iter().cloned()).collect();
        f.substitute_terms(&map)
    }

    /// `D(a)`.
    pub fn domain_at(&self, a: &[Term]) -> Formula {
        Self::subst(&self.domain, &xs(self.dim), a)
    }

    /// `a < b`.
    pub fn less_at(&self, a: &[Term], b: &[Term]) -> Formula {
        let mut from = xs(self.dim);
        from.extend(ys(self.dim));
        let to: Vec<Term> = a.iter().chain(b).cloned().collect();
        Self::subst(&self.less, &from, &to)
    }

    /// `a ~ b` (tuple coincidence when no equality is given).
    pub fn equal_at(&self, a: &[Term], b: &[Term]) -> Formula {
        match &self.equality {
            None => tuple_eq(a, b),
            Some(e) => {
                let mut from = xs(self.dim);
                from.extend(ys(self.dim));
                let to: Vec<Term> = a.iter().chain(b).cloned().collect();
                Self::subst(e, &from, &to)
            }
        }
    }

    fn sentences(&self) -> Vec<(&'static str, Formula)> {
        let m = self.dim;
        let (a, b, c, d) = (fresh_vars("a", m), fresh_vars("b", m), fresh_vars("c", m), fresh_vars("d", m));
        let (ta, tb, tc, td) = (vars_to_terms(&a), vars_to_terms(&b), vars_to_terms(&c), vars_to_terms(&d));
        let da = self.domain_at(&ta);
        let db = self.domain_at(&tb);
        let dc = self.domain_at(&tc);
        let dd = self.domain_at(&td);
        let all = |vs: Vec<&Vec<String>>, f: Formula| {
            let flat: Vec<String> = vs.into_iter().flatten().cloned().collect();
            Formula::forall_many(&flat, f)
        };
        let mut out = vec![
            ("irreflexivity", all(vec![&a], Formula::implies(da.clone(), Formula::not(self.less_at(&ta, &ta))))),
            (
                "transitivity",
                all(
                    vec![&a, &b, &c],
                    Formula::implies(
                        Formula::conj([
                            da.clone(),
                            db.clone(),
                            dc.clone(),
                            self.less_at(&ta, &tb),
                            self.less_at(&tb, &tc),
                        ]),
                        self.less_at(&ta, &tc),
                    ),
                ),
            ),
            (
                "trichotomy",
                all(
                    vec![&a, &b],
                    Formula::implies(
                        Formula::and(da.clone(), db.clone()),
                        Formula::disj([self.less_at(&ta, &tb), self.less_at(&tb, &ta), self.equal_at(&ta, &tb)]),
                    ),
                ),
            ),
        ];
        if self.equality.is_some() {
            out.push(("equality reflexive", all(vec![&a], Formula::implies(da.clone(), self.equal_at(&ta, &ta)))));
            out.push((
                "equality symmetric",
                all(
                    vec![&a, &b],
                    Formula::implies(
                        Formula::conj([da.clone(), db.clone(), self.equal_at(&ta, &tb)]),
                        self.equal_at(&tb, &ta),
                    ),
                ),
            ));
            out.push((
                "equality transitive",
                all(
                    vec![&a, &b, &c],
                    Formula::implies(
                        Formula::conj([
                            da.clone(),
                            db.clone(),
                            dc.clone(),
                            self.equal_at(&ta, &tb),
                            self.equal_at(&tb, &tc),
                        ]),
                        self.equal_at(&ta, &tc),
                    ),
                ),
            ));
            out.push((
                "equality congruence",
                all(
                    vec![&a, &b, &c, &d],
                    Formula::implies(
                        Formula::conj([
                            da,
                            db,
                            dc,
                            dd,
                            self.equal_at(&ta, &tc),
                            self.equal_at(&tb, &td),
                            self.less_at(&ta, &tb),
                        ]),
                        self.less_at(&tc, &td),
                    ),
                ),
            ));
        }
        out
    }

    /// Decides the linear-order axioms (and equality axioms when present).
    pub fn validate(&self) -> Result<ValidationReport> {
        self.validate_with(&qelim::Budget::default())
    }

    pub fn validate_with(&self, budget: &qelim::Budget) -> Result<ValidationReport> {
        let mut axioms = Vec::new();
        for (name, s) in self.sentences() {
            axioms.push(AxiomVerdict { axiom: name.to_string(), holds: qelim::decide_with(&s, budget)? });
        }
        Ok(ValidationReport { name: self.name.clone(), axioms })
    }

    fn holds_at(f: &Formula) -> Result<bool> {
        if f.is_quantifier_free() {
            f.evaluate(&Assignment::new())
        } else {
            qelim::decide(f)
        }
    }

    pub fn contains(&self, p: &[u64]) -> Result<bool> {
        if p.len() != self.dim {
            return Err(Error::ArityMismatch { expected: self.dim, found: p.len() });
        }
        Self::holds_at(&self.domain_at(&point_terms(p)))
    }

    /// Truth of `a < b` for domain points.
    pub fn internal_less(&self, a: &[u64], b: &[u64]) -> Result<bool> {
        for p in [a, b] {
            if !self.contains(p)? {
                return Err(Error::OutsideDomain(p.to_vec()));
            }
        }
        Self::holds_at(&self.less_at(&point_terms(a), &point_terms(b)))
    }

    /// Quantifier-free forms of the domain and order for fast evaluation.
    pub fn compile(&self) -> Result<CompiledOrder> {
        let m = self.dim;
        let mut vars: Vec<Var> = xs(m).iter().map(|v| Var::new(v)).collect();
        let domain = qelim::eliminate(&self.domain)?;
        vars.extend(ys(m).iter().map(|v| Var::new(v)));
        let less = qelim::eliminate(&self.less)?;
        Ok(CompiledOrder { dim: m, vars, domain, less })
    }

    /// The first `count` domain points of `[0, bound]^m` in internal order.
    pub fn enumerate_ascending(&self, count: usize, bound: u64) -> Result<Ascending> {
        let c = self.compile()?;
        let mut pts = c.domain_points(bound)?;
        c.sort(&mut pts)?;
        let truncated = pts.len() < count;
        pts.truncate(count);
        Ok(Ascending { points: pts, truncated })
    }

    /// `T(a, b)`: both in the domain, and the internal interval between
    /// them (either orientation, strict) is bounded.
    pub fn same_galaxy_at(&self, a: &[Term], b: &[Term]) -> Formula {
        let m = self.dim;
        let bound = fresh_var("b");
        let z = fresh_vars("z", m);
        let tz = vars_to_terms(&z);
        let between = Formula::or(
            Formula::and(self.less_at(a, &tz), self.less_at(&tz, b)),
            Formula::and(self.less_at(b, &tz), self.less_at(&tz, a)),
        );
        let bounded = Formula::conj(tz.iter().map(|t| Formula::atom(Rel::Le, t.clone(), Term::var(bound.as_str()))));
        let body = Formula::forall_many(&z, Formula::implies(Formula::and(self.domain_at(&tz), between), bounded));
        Formula::conj([self.domain_at(a), self.domain_at(b), Formula::exists(bound, body)])
    }

    /// `T(x, y)` over `x1..xm, y1..ym`.
    pub fn same_galaxy_formula(&self) -> Formula {
        self.same_galaxy_at(&vars_to_terms(&xs(self.dim)), &vars_to_terms(&ys(self.dim)))
    }

    /// `D'(x)`: `x` is the lexicographically least member of its galaxy.
    pub fn lex_min_representative_formula(&self) -> Formula {
        let m = self.dim;
        let tx = vars_to_terms(&xs(m));
        let w = fresh_vars("w", m);
        let tw = vars_to_terms(&w);
        let body = Formula::implies(
            Formula::and(self.same_galaxy_at(&tx, &tw), Formula::not(tuple_eq(&tx, &tw))),
            lex_less(&tx, &tw),
        );
        Formula::and(self.domain_at(&tx), Formula::forall_many(&w, body))
    }
}

/// Domain and order of an interpretation as quantifier-free formulas.
#[derive(Debug, Clone)]
pub struct CompiledOrder {
    pub dim: usize,
    vars: Vec<Var>,
    pub domain: Qf,
    pub less: Qf,
}

impl CompiledOrder {
    pub fn contains(&self, p: &[u64]) -> Result<bool> {
        let pt: Vec<i64> = p.iter().map(|&k| k as i64).collect();
        self.domain.eval_point(&self.vars[..self.dim], &pt)
    }

    pub fn less(&self, a: &[u64], b: &[u64]) -> Result<bool> {
        let pt: Vec<i64> = a.iter().chain(b).map(|&k| k as i64).collect();
        self.less.eval_point(&self.vars, &pt)
    }

    /// Domain points of `[0, bound]^m` in lexicographic (external) order.
    pub fn domain_points(&self, bound: u64) -> Result<Vec<Vec<u64>>> {
        let mut out = Vec::new();
        let mut p = vec![0u64; self.dim];
        loop {
            if self.contains(&p)? {
                out.push(p.clone());
            }
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                p[i] += 1;
                if p[i] <= bound {
                    break;
                }
                p[i] = 0;
            }
        }
    }

    /// Sorts points by the internal order (points equal under it keep
    /// their relative order).
    pub fn sort(&self, pts: &mut [Vec<u64>]) -> Result<()> {
        let mut err = None;
        pts.sort_by(|a, b| {
            if a == b {
                return Ordering::Equal;
            }
            match (self.less(a, b), self.less(b, a)) {
                (Ok(true), _) => Ordering::Less,
                (_, Ok(true)) => Ordering::Greater,
                (Ok(false), Ok(false)) => Ordering::Equal,
                (Err(e), _) | (_, Err(e)) => {
                    err.get_or_insert(e);
                    Ordering::Equal
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests;
