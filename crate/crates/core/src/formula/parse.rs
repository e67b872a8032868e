use super::{Formula, Rel, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Forall,
    Exists,
    Mod,
    Dot,
    Arrow,
    Bar,
    Amp,
    Bang,
    LParen,
    RParen,
    Plus,
    Star,
    CongEq,
    Rel(Rel),
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &str| text[i..].starts_with(s);
        let tok = if c.is_ascii_lowercase() {
            while i < bytes.len()
                && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
            {
                i += 1;
            }
            match &text[start..i] {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "mod" => Tok::Mod,
                w => Tok::Ident(w.to_string()),
            }
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i]
                .parse::<u64>()
                .map_err(|_| Error::NumeralOverflow { position: start })?;
            Tok::Num(n)
        } else if two("->") {
            i += 2;
            Tok::Arrow
        } else if two("==") {
            i += 2;
            Tok::CongEq
        } else if two("!=") {
            i += 2;
            Tok::Rel(Rel::Ne)
        } else if two("<=") {
            i += 2;
            Tok::Rel(Rel::Le)
        } else if two(">=") {
            i += 2;
            Tok::Rel(Rel::Ge)
        } else {
            i += 1;
            match c {
                b'.' => Tok::Dot,
                b'|' => Tok::Bar,
                b'&' => Tok::Amp,
                b'!' => Tok::Bang,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'+' => Tok::Plus,
                b'*' => Tok::Star,
                b'=' => Tok::Rel(Rel::Eq),
                b'<' => Tok::Rel(Rel::Lt),
                b'>' => Tok::Rel(Rel::Gt),
                _ => {
                    let ch = text[start..].chars().next().unwrap_or('?');
                    return Err(Error::Syntax {
                        position: start,
                        message: format!("unexpected character `{ch}`"),
                    });
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { position: self.offset(), message: msg.to_string() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let v = match self.peek().clone() {
                    Tok::Ident(v) => {
                        self.bump();
                        v
                    }
                    _ => return self.fail("expected variable after quantifier"),
                };
                self.expect(Tok::Dot, "`.`")?;
                let body = self.formula()?;
                Ok(if universal { Formula::forall(v, body) } else { Formula::exists(v, body) })
            }
            _ => self.implic(),
        }
    }

    fn implic(&mut self) -> Result<Formula> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implic()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.neg()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = Formula::and(f, self.neg()?);
        }
        Ok(f)
    }

    fn neg(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.neg()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        match self.peek().clone() {
            Tok::Rel(rel) => {
                self.bump();
                let rhs = self.term()?;
                Ok(Formula::Atom(rel, lhs, rhs))
            }
            Tok::CongEq => {
                self.bump();
                let rhs = self.term()?;
                self.expect(Tok::Mod, "`mod`")?;
                let at = self.offset();
                match self.peek().clone() {
                    Tok::Num(0) => Err(Error::ZeroModulus { position: at }),
                    Tok::Num(n) => {
                        self.bump();
                        Ok(Formula::Congruent(lhs, rhs, n))
                    }
                    _ => self.fail("expected modulus"),
                }
            }
            _ => self.fail("expected relation"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.factor()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            t = t.add(self.factor()?);
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                if *self.peek() == Tok::Star {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Ident(v) => {
                            self.bump();
                            Ok(Term::scale(n, Term::Var(v)))
                        }
                        _ => self.fail("expected variable after `*`"),
                    }
                } else {
                    Ok(Term::Num(n))
                }
            }
            Tok::Ident(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            _ => self.fail("expected term"),
        }
    }
}

/// Parses one formula in the ASCII concrete syntax.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(f)
}
