//! Recursive-descent parser for rational expressions over `p`, `q`, `s`.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := unary (('*'|'/') unary)*`,
//! `unary := '-' unary | power`, `power := atom ('^' '-'? int)?`,
//! `atom := int | p | q | s | '(' expr ')'`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::Var;
use super::ratfun::RationalFunction;
use super::ParamError;

pub fn parse_rational_function(input: &str) -> Result<RationalFunction, ParamError> {
    let mut parser = Parser {
        chars: input.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let value = parser.expr()?;
    if parser.pos != parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(value)
}

/// Parses an exact rational literal such as `-3`, `1/2` or `0`.
pub fn parse_rational(input: &str) -> Result<BigRational, ParamError> {
    let value = parse_rational_function(input)?;
    value
        .as_constant()
        .ok_or_else(|| ParamError::Parse(format!("'{input}' is not a rational constant")))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, msg: &str) -> ParamError {
        ParamError::Parse(format!("{msg} at position {}", self.pos))
    }

    fn expr(&mut self) -> Result<RationalFunction, ParamError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, ParamError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                '/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.try_div(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction, ParamError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.peek() == Some('+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction, ParamError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let neg = if self.peek() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e: i32 = e
                .try_into()
                .map_err(|_| self.error("exponent out of range"))?;
            if neg && base.is_zero() {
                return Err(ParamError::DivisionByZero);
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ParamError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse::<BigInt>()
            .map_err(|e| ParamError::Parse(e.to_string()))
    }

    fn atom(&mut self) -> Result<RationalFunction, ParamError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('p') => {
                self.pos += 1;
                Ok(RationalFunction::var(Var::P))
            }
            Some('q') => {
                self.pos += 1;
                Ok(RationalFunction::var(Var::Q))
            }
            Some('s') => {
                self.pos += 1;
                Ok(RationalFunction::var(Var::S))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalFunction::from_ratio(BigRational::from_integer(n)))
            }
            Some(c) => Err(self.error(&format!("unexpected character '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_expression() {
        let x = parse_rational_function("(1 - q^2)/(1 - q) * s^-1").unwrap();
        let y = parse_rational_function("(1+q)/s").unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational_function("1 + x").is_err());
        assert!(parse_rational_function("(1 + q").is_err());
        assert!(parse_rational_function("1/0").is_err());
    }

    #[test]
    fn rational_literal() {
        assert_eq!(
            parse_rational("1/3").unwrap(),
            BigRational::new(1.into(), 3.into())
        );
        assert!(parse_rational("q").is_err());
    }
}
