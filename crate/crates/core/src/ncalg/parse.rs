//! Text form of algebra elements: sums of products of symbol names, scalars and
//! parenthesized subexpressions. A `*` directly after a name that has a starred
//! partner is the star; otherwise `*` is multiplication. Juxtaposition also multiplies.

use crate::paramfield::{BigInt, BigRational, RationalFunction};

use super::presentation::Presentation;
use super::word::{Terms, Word};
use super::NcError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Plus,
    Minus,
    Times,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(pres: &Presentation, text: &str) -> Result<Vec<Tok>, NcError> {
    let cs: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() || c == '·' {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = cs[st..i].iter().collect();
            out.push(Tok::Num(s.parse().expect("digits")));
        } else if c.is_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            let mut s: String = cs[st..i].iter().collect();
            if i < cs.len() && cs[i] == '*' {
                let starred = format!("{s}*");
                if pres.symbol_by_name(&starred).is_some() {
                    s = starred;
                    i += 1;
                }
            }
            out.push(Tok::Name(s));
        } else {
            out.push(match c {
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' => Tok::Times,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(NcError::Parse(format!("unexpected character {c:?}"))),
            });
            i += 1;
        }
    }
    Ok(out)
}

struct Parser<'a> {
    pres: &'a Presentation,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Terms, NcError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn starts_factor(t: &Tok) -> bool {
        matches!(t, Tok::Num(_) | Tok::Name(_) | Tok::LParen)
    }

    fn term(&mut self) -> Result<Terms, NcError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Times) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    let c = scalar_of(&d)
                        .ok_or_else(|| NcError::Parse("division by a non-scalar".into()))?;
                    let inv = c
                        .recip()
                        .map_err(|_| NcError::Parse("division by zero".into()))?;
                    acc = acc.scale(&inv);
                }
                Some(t) if Self::starts_factor(t) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Terms, NcError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Terms, NcError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let e: i32 = match self.bump() {
            Some(Tok::Num(n)) => n
                .try_into()
                .map_err(|_| NcError::Parse("exponent too large".into()))?,
            _ => return Err(NcError::Parse("expected exponent".into())),
        };
        if neg {
            let c = scalar_of(&base)
                .ok_or_else(|| NcError::Parse("negative power of a non-scalar".into()))?;
            if c.is_zero() {
                return Err(NcError::Parse("division by zero".into()));
            }
            return Ok(Terms::scalar(c.pow(-e)));
        }
        let mut acc = Terms::one();
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Terms, NcError> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Terms::scalar(RationalFunction::from_ratio(
                BigRational::from_integer(n),
            ))),
            Some(Tok::Name(s)) => match s.as_str() {
                "p" => Ok(Terms::scalar(RationalFunction::p())),
                "q" => Ok(Terms::scalar(RationalFunction::q())),
                "s" => Ok(Terms::scalar(RationalFunction::s())),
                _ => self
                    .pres
                    .symbol_by_name(&s)
                    .map(|x| Terms::word(Word::letter(x)))
                    .ok_or(NcError::UnknownSymbol(s)),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(NcError::Parse("expected ')'".into())),
                }
            }
            t => Err(NcError::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

fn scalar_of(t: &Terms) -> Option<RationalFunction> {
    if t.is_zero() {
        return Some(RationalFunction::zero());
    }
    if t.len() == 1 {
        let (w, c) = t.iter().next()?;
        if w.is_empty() {
            return Some(c.clone());
        }
    }
    None
}

/// Parses an element of the free algebra over `pres` (no reduction is applied).
pub fn parse_terms(pres: &Presentation, text: &str) -> Result<Terms, NcError> {
    let toks = tokenize(pres, text)?;
    let mut p = Parser { pres, toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(NcError::Parse(format!("trailing input in {text:?}")));
    }
    Ok(e)
}
