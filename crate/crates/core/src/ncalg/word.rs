use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::paramfield::RationalFunction;

/// Index of a generator in a presentation's alphabet.
pub type Sym = u8;

/// Product of generators; the empty word is the unit.
///
/// Ordered shortlex (length first, then symbol indices) for deterministic
/// storage. The rewriting order lives on [`super::Presentation`].
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word(pub Vec<Sym>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(s: Sym) -> Self {
        Word(vec![s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Sym] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn power(s: Sym, n: usize) -> Word {
        Word(vec![s; n])
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Sym>> for Word {
    fn from(v: Vec<Sym>) -> Self {
        Word(v)
    }
}

impl From<&[Sym]> for Word {
    fn from(v: &[Sym]) -> Self {
        Word(v.to_vec())
    }
}

/// Presentation-agnostic linear combination of words (an element of the free algebra).
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Terms(pub BTreeMap<Word, RationalFunction>);

impl Terms {
    pub fn zero() -> Self {
        Terms(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::word(Word::unit())
    }

    pub fn word(w: Word) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w, RationalFunction::one());
        Terms(m)
    }

    pub fn scalar(c: RationalFunction) -> Self {
        let mut t = Terms::zero();
        t.add_term(Word::unit(), c);
        t
    }

    pub fn from_pairs<I: IntoIterator<Item = (Word, RationalFunction)>>(it: I) -> Self {
        let mut t = Terms::zero();
        for (w, c) in it {
            t.add_term(w, c);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &RationalFunction)> {
        self.0.iter()
    }

    pub fn add_term(&mut self, w: Word, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Terms, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.0 {
            if c.is_one() {
                self.add_term(w.clone(), a.clone());
            } else {
                self.add_term(w.clone(), a * c);
            }
        }
    }

    pub fn scale(&self, c: &RationalFunction) -> Terms {
        if c.is_zero() {
            return Terms::zero();
        }
        Terms(self.0.iter().map(|(w, a)| (w.clone(), a * c)).collect())
    }

    pub fn neg(&self) -> Terms {
        Terms(self.0.iter().map(|(w, a)| (w.clone(), -a)).collect())
    }

    pub fn add(&self, other: &Terms) -> Terms {
        let mut r = self.clone();
        r.add_scaled(other, &RationalFunction::one());
        r
    }

    pub fn sub(&self, other: &Terms) -> Terms {
        let mut r = self.clone();
        r.add_scaled(other, &RationalFunction::from_int(-1));
        r
    }

    /// Free (concatenation) product.
    pub fn mul(&self, other: &Terms) -> Terms {
        let mut r = Terms::zero();
        for (w1, c1) in &self.0 {
            for (w2, c2) in &other.0 {
                r.add_term(w1.concat(w2), c1 * c2);
            }
        }
        r
    }

    pub fn coeff(&self, w: &Word) -> RationalFunction {
        self.0
            .get(w)
            .cloned()
            .unwrap_or_else(RationalFunction::zero)
    }

    pub fn max_len(&self) -> usize {
        self.0.keys().map(Word::len).max().unwrap_or(0)
    }
}
