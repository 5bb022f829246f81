//! Hopf structure of quantum SU(2), the U(1)-coactions of both fibrations and
//! the quotient coalgebra by the coideal right ideal of the Podleś sphere.

mod quotient;
mod tensor;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ncalg::{
    heegaard_presentation, qsu2, qsu2_presentation, NCPolynomial, Presentation, Sym, Terms, Word,
};
use crate::paramfield::{parse_rational, BigRational, RationalFunction as RF};

pub use quotient::{coaction_family2, quotient_basis, QuotientBasis, QuotientDump};
pub use tensor::{TensorSquare, TensorTermText};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("element does not belong to the expected presentation")]
    PresentationMismatch,
    #[error("quotient dimension {found} at degree {degree}, expected {expected}")]
    DegenerateQuotient {
        degree: usize,
        found: usize,
        expected: usize,
    },
    #[error("element of degree {found} exceeds the quotient degree bound {bound}")]
    DegreeExceeded { found: usize, bound: usize },
}

/// The Podleś parameter: a fixed rational value or the indeterminate `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SValue {
    Symbolic,
    Exact(BigRational),
}

impl SValue {
    pub fn rf(&self) -> RF {
        match self {
            SValue::Symbolic => RF::s(),
            SValue::Exact(r) => RF::from_ratio(r.clone()),
        }
    }

    /// Substitutes this value for `s` in `x` (no-op when symbolic).
    pub fn specialize(&self, x: &RF) -> RF {
        match self {
            SValue::Symbolic => x.clone(),
            SValue::Exact(r) => x.substitute(crate::paramfield::Var::S, &RF::from_ratio(r.clone())),
        }
    }
}

impl fmt::Display for SValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SValue::Symbolic => f.write_str("symbolic"),
            SValue::Exact(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for SValue {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("symbolic") {
            return Ok(SValue::Symbolic);
        }
        parse_rational(t)
            .map(SValue::Exact)
            .map_err(|e| format!("invalid s value {text:?}: {e}"))
    }
}

impl Serialize for SValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn require_qsu2(x: &NCPolynomial) -> Result<Arc<Presentation>, HopfError> {
    let g = qsu2_presentation();
    if x.presentation().id() == g.id() {
        Ok(g)
    } else {
        Err(HopfError::PresentationMismatch)
    }
}

fn letter(s: Sym) -> Terms {
    Terms::word(Word::letter(s))
}

fn generator_coproduct(pres: &Arc<Presentation>, s: Sym) -> TensorSquare {
    use qsu2::*;
    let q = RF::q();
    let mut t = TensorSquare::zero(pres);
    let one = RF::one();
    let w = Word::letter;
    match s {
        ALPHA => {
            t.add_term(w(ALPHA), w(ALPHA), one);
            t.add_term(w(GAMMA_STAR), w(GAMMA), -&q);
        }
        GAMMA => {
            t.add_term(w(GAMMA), w(ALPHA), one.clone());
            t.add_term(w(ALPHA_STAR), w(GAMMA), one);
        }
        GAMMA_STAR => {
            t.add_term(w(GAMMA_STAR), w(ALPHA_STAR), one.clone());
            t.add_term(w(ALPHA), w(GAMMA_STAR), one);
        }
        ALPHA_STAR => {
            t.add_term(w(ALPHA_STAR), w(ALPHA_STAR), one);
            t.add_term(w(GAMMA), w(GAMMA_STAR), -&q);
        }
        _ => unreachable!("QSU2 has four generators"),
    }
    t
}

fn coproduct_cache() -> &'static Mutex<HashMap<Word, Arc<TensorSquare>>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, Arc<TensorSquare>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coproduct of a single word, memoized.
pub fn coproduct_word(w: &Word) -> Arc<TensorSquare> {
    let pres = qsu2_presentation();
    if let Some(t) = coproduct_cache().lock().expect("lock").get(w) {
        return t.clone();
    }
    let t = if w.is_empty() {
        TensorSquare::one(&pres)
    } else {
        let head = generator_coproduct(&pres, w.symbols()[0]);
        let tail = coproduct_word(&Word(w.symbols()[1..].to_vec()));
        head.mul(&tail)
    };
    let t = Arc::new(t);
    coproduct_cache()
        .lock()
        .expect("lock")
        .insert(w.clone(), t.clone());
    t
}

/// Δ on QSU2, extended multiplicatively from the fundamental corepresentation.
pub fn coproduct(x: &NCPolynomial) -> Result<TensorSquare, HopfError> {
    let pres = require_qsu2(x)?;
    let mut out = TensorSquare::zero(&pres);
    for (w, c) in x.normal_form().terms().iter() {
        out.add_scaled(&coproduct_word(w), c);
    }
    Ok(out)
}

pub fn counit_word(w: &Word) -> RF {
    use qsu2::*;
    if w.symbols().iter().all(|&s| s == ALPHA || s == ALPHA_STAR) {
        RF::one()
    } else {
        RF::zero()
    }
}

pub fn counit_terms(t: &Terms) -> RF {
    t.iter()
        .map(|(w, c)| c * &counit_word(w))
        .fold(RF::zero(), |a, b| &a + &b)
}

pub fn counit(x: &NCPolynomial) -> Result<RF, HopfError> {
    require_qsu2(x)?;
    Ok(counit_terms(x.terms()))
}

fn antipode_letter(s: Sym) -> Terms {
    use qsu2::*;
    let q = RF::q();
    match s {
        ALPHA => letter(ALPHA_STAR),
        ALPHA_STAR => letter(ALPHA),
        GAMMA => letter(GAMMA).scale(&-&q),
        GAMMA_STAR => letter(GAMMA_STAR).scale(&-&q.pow(-1)),
        _ => unreachable!("QSU2 has four generators"),
    }
}

/// S applied to a word: an antihomomorphism, normal-formed.
pub fn antipode_word(w: &Word) -> Terms {
    let pres = qsu2_presentation();
    let mut acc = Terms::one();
    for &s in w.symbols().iter().rev() {
        acc = acc.mul(&antipode_letter(s));
    }
    pres.normal_form(&acc)
}

pub fn antipode(x: &NCPolynomial) -> Result<NCPolynomial, HopfError> {
    let pres = require_qsu2(x)?;
    let mut out = Terms::zero();
    for (w, c) in x.terms().iter() {
        out.add_scaled(&antipode_word(w), c);
    }
    Ok(NCPolynomial::new(&pres, out))
}

/// Splits the normal form of `x` into homogeneous components of the grading.
fn split_by_grade(x: &NCPolynomial) -> Vec<(NCPolynomial, i64)> {
    let pres = x.presentation().clone();
    let mut parts: BTreeMap<i64, Terms> = BTreeMap::new();
    for (w, c) in x.normal_form().terms().iter() {
        let d = pres.word_grade(w).expect("graded presentation");
        parts.entry(d).or_default().add_term(w.clone(), c.clone());
    }
    parts
        .into_iter()
        .filter(|(_, t)| !t.is_zero())
        .map(|(d, t)| (NCPolynomial::new(&pres, t), d))
        .collect()
}

/// Right U(1)-coaction on the Heegaard 3-sphere as (component, winding) pairs.
pub fn coaction_family1(x: &NCPolynomial) -> Result<Vec<(NCPolynomial, i64)>, HopfError> {
    if x.presentation().id() != heegaard_presentation().id() {
        return Err(HopfError::PresentationMismatch);
    }
    Ok(split_by_grade(x))
}

fn gamma_minus_q_gamma_star() -> Terms {
    use qsu2::*;
    letter(GAMMA).add(&letter(GAMMA_STAR).scale(&-&RF::q()))
}

/// `h_j = (α + q^j s(γ − qγ*) + q^{2j} s² α*) / (1 + q^{2j} s²)`.
pub fn h_elem(j: u32, s: &SValue) -> NCPolynomial {
    use qsu2::*;
    let pres = qsu2_presentation();
    let qj = RF::q().pow(j as i32);
    let s = s.rf();
    let t = &qj * &s;
    let t2 = &t * &t;
    let num = letter(ALPHA)
        .add(&gamma_minus_q_gamma_star().scale(&t))
        .add(&letter(ALPHA_STAR).scale(&t2));
    let den = &RF::one() + &t2;
    NCPolynomial::new(
        &pres,
        num.scale(&den.recip().expect("1 + q^2j s^2 is nonzero")),
    )
}

/// `k_j = (α* − q^{-j} s(γ − qγ*) + q^{-2j} s² α) / (1 + q^{-2j} s²)`.
pub fn k_elem(j: u32, s: &SValue) -> NCPolynomial {
    use qsu2::*;
    let pres = qsu2_presentation();
    let qj = RF::q().pow(-(j as i32));
    let s = s.rf();
    let t = &qj * &s;
    let t2 = &t * &t;
    let num = letter(ALPHA_STAR)
        .add(&gamma_minus_q_gamma_star().scale(&-&t))
        .add(&letter(ALPHA).scale(&t2));
    let den = &RF::one() + &t2;
    NCPolynomial::new(
        &pres,
        num.scale(&den.recip().expect("1 + q^-2j s^2 is nonzero")),
    )
}

/// The splitting `i(u^n)`: `h_0 h_1 … h_{n-1}` for `n > 0`, `k_0 … k_{|n|-1}` for `n < 0`.
pub fn lift(n: i64, s: &SValue) -> NCPolynomial {
    let pres = qsu2_presentation();
    let mut acc = NCPolynomial::one(&pres);
    for j in 0..n.unsigned_abs() as u32 {
        let f = if n > 0 { h_elem(j, s) } else { k_elem(j, s) };
        acc = acc.mul_nf(&f).expect("same presentation");
    }
    acc
}

/// The embedded Podleś generators `K`, `L`, `L*` in QSU2 at the given `s`.
pub fn podles_generators(s: &SValue) -> [NCPolynomial; 3] {
    let pres = qsu2_presentation();
    let sv = s.rf();
    let k = NCPolynomial::parse(
        &pres,
        "s*(gamma alpha + alpha* gamma*) + (1 - s^2) gamma* gamma",
    )
    .expect("K formula parses");
    let l = NCPolynomial::parse(&pres, "s*(alpha^2 - q gamma*^2) + (1 - s^2) alpha gamma*")
        .expect("L formula parses");
    let fix = |x: NCPolynomial| {
        let t = Terms::from_pairs(
            x.terms()
                .iter()
                .map(|(w, c)| (w.clone(), c.substitute(crate::paramfield::Var::S, &sv))),
        );
        NCPolynomial::new(&pres, pres.normal_form(&t))
    };
    let k = fix(k);
    let l = fix(l);
    let ls = l.star().normal_form();
    [k, l, ls]
}
