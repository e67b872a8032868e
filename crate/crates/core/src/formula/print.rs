use std::fmt;

use super::{Formula, Rel, Term};

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Num(n) => write!(f, "{n}"),
            Term::Add(a, b) => write!(f, "{a} + {b}"),
            Term::Mul(k, t) => match &**t {
                Term::Var(v) => write!(f, "{k}*{v}"),
                Term::Num(n) => match k.checked_mul(*n) {
                    Some(p) => write!(f, "{p}"),
                    None => write!(f, "{}", vec![n.to_string(); *k as usize].join(" + ")),
                },
                // k*(a + b) has no concrete syntax; distribute instead.
                Term::Add(a, b) => {
                    write!(f, "{} + {}", Term::scale(*k, (**a).clone()), Term::scale(*k, (**b).clone()))
                }
                Term::Mul(j, inner) => match k.checked_mul(*j) {
                    Some(p) => write!(f, "{}", Term::scale(p, (**inner).clone())),
                    None => write!(f, "{}", vec![t.to_string(); *k as usize].join(" + ")),
                },
            },
        }
    }
}

// Binding strength, loosest first; mirrors the grammar levels.
fn level(phi: &Formula) -> u8 {
    match phi {
        Formula::Exists(..) | Formula::Forall(..) => 0,
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, phi: &Formula, min: u8) -> fmt::Result {
    if level(phi) < min {
        write!(f, "(")?;
        write_at(f, phi, 0)?;
        return write!(f, ")");
    }
    match phi {
        Formula::Atom(rel, l, r) => write!(f, "{l} {rel} {r}"),
        Formula::Congruent(l, r, m) => write!(f, "{l} == {r} mod {m}"),
        Formula::Not(a) => {
            write!(f, "!")?;
            write_at(f, a, 4)
        }
        Formula::And(a, b) => {
            write_at(f, a, 3)?;
            write!(f, " & ")?;
            write_at(f, b, 4)
        }
        Formula::Or(a, b) => {
            write_at(f, a, 2)?;
            write!(f, " | ")?;
            write_at(f, b, 3)
        }
        Formula::Implies(a, b) => {
            write_at(f, a, 2)?;
            write!(f, " -> ")?;
            write_at(f, b, 1)
        }
        Formula::Exists(v, body) => {
            write!(f, "exists {v}. ")?;
            write_at(f, body, 0)
        }
        Formula::Forall(v, body) => {
            write!(f, "forall {v}. ")?;
            write_at(f, body, 0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, 0)
    }
}
