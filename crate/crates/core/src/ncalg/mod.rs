//! Noncommutative polynomials over `Q(p, q, s)` and rewriting to normal form.

mod confluence;
mod parse;
mod presentation;
mod shipped;
mod word;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::paramfield::RationalFunction;

pub use confluence::{check_confluence, Overlap};
pub use parse::parse_terms;
pub use presentation::{Presentation, PresentationBuilder, Rule, RuleFamily, Run, Symbol};
pub use shipped::{
    build_heegaard, build_podles, build_qsu2, build_s2pq, heegaard, heegaard_presentation, podles,
    podles_presentation, qsu2, qsu2_presentation, s2pq, s2pq_presentation,
};
pub use word::{Sym, Terms, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("operands belong to different presentations")]
    PresentationMismatch,
    #[error("rule {0} does not decrease in the word order")]
    TerminationViolation(String),
    #[error("rule {0} is not homogeneous for the grading")]
    GradingViolation(String),
    #[error("symbol {0} has an inconsistent star partner")]
    InvalidStar(String),
    #[error("relation {name} does not reduce to zero; residual {residual}")]
    RelationNotDerivable { name: String, residual: String },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("presentation has no grading")]
    NoGrading,
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Element of the free algebra on a presentation's alphabet.
///
/// Values are not reduced automatically; call [`NCPolynomial::normal_form`].
#[derive(Clone)]
pub struct NCPolynomial {
    pres: Arc<Presentation>,
    terms: Terms,
}

impl NCPolynomial {
    pub fn new(pres: &Arc<Presentation>, terms: Terms) -> Self {
        NCPolynomial {
            pres: pres.clone(),
            terms,
        }
    }

    pub fn zero(pres: &Arc<Presentation>) -> Self {
        Self::new(pres, Terms::zero())
    }

    pub fn one(pres: &Arc<Presentation>) -> Self {
        Self::new(pres, Terms::one())
    }

    pub fn scalar(pres: &Arc<Presentation>, c: RationalFunction) -> Self {
        Self::new(pres, Terms::scalar(c))
    }

    pub fn word(pres: &Arc<Presentation>, w: Word) -> Self {
        Self::new(pres, Terms::word(w))
    }

    pub fn generator(pres: &Arc<Presentation>, s: Sym) -> Self {
        Self::word(pres, Word::letter(s))
    }

    pub fn parse(pres: &Arc<Presentation>, text: &str) -> Result<Self, NcError> {
        Ok(Self::new(pres, parse_terms(pres, text)?))
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, w: &Word) -> RationalFunction {
        self.terms.coeff(w)
    }

    fn same(&self, other: &Self) -> Result<(), NcError> {
        if self.pres.id() == other.pres.id() {
            Ok(())
        } else {
            Err(NcError::PresentationMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NcError> {
        self.same(other)?;
        Ok(Self::new(&self.pres, self.terms.add(&other.terms)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NcError> {
        self.same(other)?;
        Ok(Self::new(&self.pres, self.terms.sub(&other.terms)))
    }

    /// Free (concatenation) product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, NcError> {
        self.same(other)?;
        Ok(Self::new(&self.pres, self.terms.mul(&other.terms)))
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        Self::new(&self.pres, self.terms.scale(c))
    }

    pub fn normal_form(&self) -> Self {
        Self::new(&self.pres, self.pres.normal_form(&self.terms))
    }

    /// Normal form of the product.
    pub fn mul_nf(&self, other: &Self) -> Result<Self, NcError> {
        self.same(other)?;
        Ok(Self::new(
            &self.pres,
            self.pres.mul_nf(&self.terms, &other.terms),
        ))
    }

    pub fn star(&self) -> Self {
        Self::new(&self.pres, self.pres.star_terms(&self.terms))
    }

    /// Common grading degree of all words. The zero element has degree 0.
    pub fn degree(&self) -> Result<i64, NcError> {
        if !self.pres.is_graded() {
            return Err(NcError::NoGrading);
        }
        let mut deg = None;
        for (w, _) in self.terms.iter() {
            let d = self.pres.word_grade(w).ok_or(NcError::NoGrading)?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(NcError::NotHomogeneous),
                _ => {}
            }
        }
        Ok(deg.unwrap_or(0))
    }

    /// Equality in the algebra (compares normal forms).
    pub fn equals_in_algebra(&self, other: &Self) -> Result<bool, NcError> {
        Ok(self.try_sub(other)?.normal_form().is_zero())
    }
}

impl PartialEq for NCPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.pres.id() == other.pres.id() && self.terms == other.terms
    }
}

impl fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pres.terms_text(&self.terms))
    }
}

impl fmt::Debug for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.pres.name(), self)
    }
}

pub fn nc_mul(x: &NCPolynomial, y: &NCPolynomial) -> Result<NCPolynomial, NcError> {
    x.try_mul(y)
}

pub fn normal_form(x: &NCPolynomial) -> NCPolynomial {
    x.normal_form()
}

pub fn star(x: &NCPolynomial) -> NCPolynomial {
    x.star()
}

pub fn degree(x: &NCPolynomial) -> Result<i64, NcError> {
    x.degree()
}

#[cfg(test)]
mod tests;
