use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::ncalg::{NCPolynomial, Presentation, Terms, Word};
use crate::paramfield::RationalFunction;

/// Element of `P ⊗ P` with both legs in normal form.
#[derive(Clone)]
pub struct TensorSquare {
    pres: Arc<Presentation>,
    terms: BTreeMap<(Word, Word), RationalFunction>,
}

/// One `coeff · left ⊗ right` entry in text form.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TensorTermText {
    pub coeff: String,
    pub left: String,
    pub right: String,
}

impl TensorSquare {
    pub fn zero(pres: &Arc<Presentation>) -> Self {
        TensorSquare {
            pres: pres.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(pres: &Arc<Presentation>) -> Self {
        let mut t = Self::zero(pres);
        t.add_term(Word::unit(), Word::unit(), RationalFunction::one());
        t
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Word, &RationalFunction)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    /// Adds `c · l ⊗ r`; the words must already be normal.
    pub fn add_term(&mut self, l: Word, r: Word, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((l, r)) {
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// Adds `c · x ⊗ y`, normal-forming both legs and expanding.
    pub fn add_product(&mut self, x: &Terms, y: &Terms, c: &RationalFunction) {
        let x = self.pres.normal_form(x);
        let y = self.pres.normal_form(y);
        for (l, a) in x.iter() {
            for (r, b) in y.iter() {
                self.add_term(l.clone(), r.clone(), &(a * b) * c);
            }
        }
    }

    pub fn from_legs(pres: &Arc<Presentation>, x: &Terms, y: &Terms) -> Self {
        let mut t = Self::zero(pres);
        t.add_product(x, y, &RationalFunction::one());
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &RationalFunction::one());
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &RationalFunction::from_int(-1));
        r
    }

    pub fn add_scaled(&mut self, other: &Self, c: &RationalFunction) {
        for ((l, r), a) in &other.terms {
            self.add_term(l.clone(), r.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        let mut r = Self::zero(&self.pres);
        r.add_scaled(self, c);
        r
    }

    /// Componentwise product `(l ⊗ r)(l' ⊗ r') = l l' ⊗ r r'`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.pres);
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                let c = c1 * c2;
                let ls = self.pres.normal_word(&l1.concat(l2));
                let rs = self.pres.normal_word(&r1.concat(r2));
                for (l, a) in ls.iter() {
                    for (r, b) in rs.iter() {
                        out.add_term(l.clone(), r.clone(), &(a * b) * &c);
                    }
                }
            }
        }
        out
    }

    /// `x · (left legs)` and `(right legs) · y`.
    pub fn sandwich(&self, x: &Terms, y: &Terms) -> Self {
        let mut out = Self::zero(&self.pres);
        for ((l, r), c) in &self.terms {
            let left = self.pres.mul_nf(x, &Terms::word(l.clone()));
            let right = self.pres.mul_nf(&Terms::word(r.clone()), y);
            for (lw, a) in left.iter() {
                for (rw, b) in right.iter() {
                    out.add_term(lw.clone(), rw.clone(), &(a * b) * c);
                }
            }
        }
        out
    }

    /// Multiplication map `l ⊗ r ↦ l r`, normal-formed.
    pub fn contract(&self) -> NCPolynomial {
        let mut out = Terms::zero();
        for ((l, r), c) in &self.terms {
            out.add_scaled(&self.pres.normal_word(&l.concat(r)), c);
        }
        NCPolynomial::new(&self.pres, out)
    }

    /// Applies a linear map to each leg.
    pub fn map_legs(&self, f: impl Fn(&Word) -> Terms, g: impl Fn(&Word) -> Terms) -> Self {
        let mut out = Self::zero(&self.pres);
        for ((l, r), c) in &self.terms {
            out.add_product(&f(l), &g(r), c);
        }
        out
    }

    pub fn to_text(&self) -> Vec<TensorTermText> {
        self.terms
            .iter()
            .map(|((l, r), c)| TensorTermText {
                coeff: c.to_string(),
                left: self.pres.word_text(l),
                right: self.pres.word_text(r),
            })
            .collect()
    }
}

impl PartialEq for TensorSquare {
    fn eq(&self, other: &Self) -> bool {
        self.pres.id() == other.pres.id() && self.terms == other.terms
    }
}

impl fmt::Display for TensorSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .to_text()
            .into_iter()
            .map(|t| format!("({})*{} ⊗ {}", t.coeff, t.left, t.right))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for TensorSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
