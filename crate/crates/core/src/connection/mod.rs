//! Strong connections `ℓ(u^{-μ})`, the idempotents of the associated line
//! bundles and their degree-zero Chern–Galois trace elements.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ncalg::{heegaard_presentation, NCPolynomial, Presentation, Terms, Word};
use crate::paramfield::{gcd, MultiPoly, RationalFunction};
use crate::quantumhopf::{
    antipode_word, coaction_family2, coproduct, lift, HopfError, QuotientBasis, SValue,
    TensorSquare, TensorTermText,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Heegaard-type quantum 3-sphere over the mirror quantum sphere.
    Heegaard,
    /// Quantum SU(2) over a Podleś sphere.
    Podles,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Heegaard => "heegaard",
            Family::Podles => "podles",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "heegaard" | "1" => Ok(Family::Heegaard),
            "podles" | "2" | "qsu2" => Ok(Family::Podles),
            _ => Err(format!(
                "unknown family {s:?} (expected heegaard or podles)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("family {0} needs a quotient basis for the canonical-map check")]
    MissingQuotient(Family),
}

/// `ℓ(u^{-μ}) = Σ_i l_i ⊗ r_i`.
#[derive(Clone, Debug)]
pub struct ConnectionValue {
    pub family: Family,
    pub mu: i64,
    pub s: Option<SValue>,
    pub value: TensorSquare,
    /// Number of summands produced by the recursion before merging.
    pub raw_terms: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConnectionDump {
    pub family: Family,
    pub mu: i64,
    pub s: Option<String>,
    pub raw_terms: u64,
    pub terms: Vec<TensorTermText>,
}

fn parse_h(text: &str) -> Terms {
    NCPolynomial::parse(&heegaard_presentation(), text)
        .expect("built-in formula parses")
        .into_terms()
}

/// Legs `(u^[1], u^[2])` of `ℓ(u)` (`forward`) or `ℓ(u*)`.
fn family1_base(forward: bool) -> Vec<(Terms, Terms)> {
    if forward {
        vec![
            (parse_h("a*"), parse_h("a")),
            (parse_h("q b (1 - a a*)"), parse_h("b*")),
        ]
    } else {
        vec![
            (parse_h("b*"), parse_h("b")),
            (parse_h("p a (1 - b b*)"), parse_h("a*")),
        ]
    }
}

/// Family 1 via the recursion `ℓ(u^n) = u^[1] ℓ(u^{n-1}) u^[2]`, with argument `u^{-μ}`.
pub fn ell_family1(mu: i64) -> ConnectionValue {
    let pres = heegaard_presentation();
    let n = -mu;
    let base = family1_base(n > 0);
    let mut value = TensorSquare::one(&pres);
    let mut raw = 1u64;
    for _ in 0..n.unsigned_abs() {
        let mut next = TensorSquare::zero(&pres);
        for (x, y) in &base {
            next = next.add(&value.sandwich(x, y));
        }
        value = next;
        raw = raw.saturating_mul(base.len() as u64);
    }
    ConnectionValue {
        family: Family::Heegaard,
        mu,
        s: None,
        value,
        raw_terms: raw,
    }
}

/// Family 2: `ℓ = (S ⊗ id) ∘ Δ ∘ i` at `u^{-μ}`.
pub fn ell_family2(mu: i64, s: &SValue) -> ConnectionValue {
    let x = lift(-mu, s);
    let delta = coproduct(&x).expect("lift lies in QSU2");
    let raw = delta.len() as u64;
    let value = delta.map_legs(antipode_word, |w| Terms::word(w.clone()));
    ConnectionValue {
        family: Family::Podles,
        mu,
        s: Some(s.clone()),
        value,
        raw_terms: raw,
    }
}

pub fn ell(family: Family, mu: i64, s: &SValue) -> ConnectionValue {
    match family {
        Family::Heegaard => ell_family1(mu),
        Family::Podles => ell_family2(mu, s),
    }
}

impl ConnectionValue {
    pub fn presentation(&self) -> &Arc<Presentation> {
        self.value.presentation()
    }

    /// `Σ_i l_i ⊗ r_i` with one term per distinct right-leg word.
    pub fn split(&self) -> Vec<(Terms, Word)> {
        let mut by_right: BTreeMap<Word, Terms> = BTreeMap::new();
        for (l, r, c) in self.value.iter() {
            by_right
                .entry(r.clone())
                .or_default()
                .add_term(l.clone(), c.clone());
        }
        by_right
            .into_iter()
            .filter(|(_, l)| !l.is_zero())
            .map(|(r, l)| (l, r))
            .collect()
    }

    pub fn dump(&self) -> ConnectionDump {
        ConnectionDump {
            family: self.family,
            mu: self.mu,
            s: self.s.as_ref().map(|s| s.to_string()),
            raw_terms: self.raw_terms,
            terms: self.value.to_text(),
        }
    }
}

/// Least common multiple of all coefficient denominators.
fn common_denominator<'a>(ts: impl IntoIterator<Item = &'a Terms>) -> RationalFunction {
    let mut l = MultiPoly::one();
    for (_, c) in ts.into_iter().flat_map(|t| t.iter()) {
        let d = c.denom();
        if d.is_one() {
            continue;
        }
        let g = gcd(&l, d);
        l = l.mul(&d.div_exact(&g).expect("gcd divides"));
    }
    RationalFunction::from_poly(l)
}

/// `E_ij = r_i l_j` in normal form.
#[derive(Clone, Debug)]
pub struct IdempotentMatrix {
    pres: Arc<Presentation>,
    pub entries: Vec<Vec<Terms>>,
}

impl IdempotentMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> NCPolynomial {
        NCPolynomial::new(&self.pres, self.entries[i][j].clone())
    }

    pub fn square(&self) -> IdempotentMatrix {
        let n = self.size();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut free = Terms::zero();
                        for k in 0..n {
                            let t = self.entries[i][k].mul(&self.entries[k][j]);
                            free.add_scaled(&t, &RationalFunction::one());
                        }
                        self.pres.normal_form(&free)
                    })
                    .collect()
            })
            .collect();
        IdempotentMatrix {
            pres: self.pres.clone(),
            entries,
        }
    }

    fn common_denominator(&self) -> RationalFunction {
        common_denominator(self.entries.iter().flatten())
    }

    fn scale(&self, c: &RationalFunction) -> IdempotentMatrix {
        IdempotentMatrix {
            pres: self.pres.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|t| t.scale(c)).collect())
                .collect(),
        }
    }

    /// Entries of `E² − E` that are nonzero, as `(i, j, residual)`.
    ///
    /// Computed as `(DE)² − D·(DE)` with `D` the common denominator, then divided by `D²`.
    pub fn idempotency_defect(&self) -> Vec<(usize, usize, String)> {
        let d = self.common_denominator();
        let scaled = self.scale(&d);
        let sq = scaled.square();
        let inv = (&d * &d).recip().expect("nonzero denominator");
        let mut out = Vec::new();
        for (i, row) in sq.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let r = e.sub(&scaled.entries[i][j].scale(&d));
                if !r.is_zero() {
                    out.push((i, j, self.pres.terms_text(&r.scale(&inv))));
                }
            }
        }
        out
    }

    /// Entries of `star(E_ij) − E_ji` that are nonzero.
    pub fn star_defect(&self) -> Vec<(usize, usize, String)> {
        let n = self.size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let st = self
                    .pres
                    .normal_form(&self.pres.star_terms(&self.entries[i][j]));
                let d = st.sub(&self.entries[j][i]);
                if !d.is_zero() {
                    out.push((i, j, self.pres.terms_text(&d)));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> NCPolynomial {
        let mut acc = Terms::zero();
        for (i, row) in self.entries.iter().enumerate() {
            acc = acc.add(&row[i]);
        }
        NCPolynomial::new(&self.pres, acc)
    }
}

pub fn idempotent(c: &ConnectionValue) -> IdempotentMatrix {
    let pres = c.presentation().clone();
    let split = c.split();
    let entries = split
        .iter()
        .map(|(_, ri)| {
            split
                .iter()
                .map(|(lj, _)| pres.mul_nf(&Terms::word(ri.clone()), lj))
                .collect()
        })
        .collect();
    IdempotentMatrix { pres, entries }
}

/// `Σ_i r_i l_i` in normal form.
pub fn trace_element(c: &ConnectionValue) -> NCPolynomial {
    let pres = c.presentation().clone();
    let mut acc = Terms::zero();
    for (l, r, coef) in c.value.iter() {
        acc.add_scaled(&pres.normal_word(&r.concat(l)), coef);
    }
    NCPolynomial::new(&pres, acc)
}

/// `Σ_i l_i r_i` in normal form.
pub fn m_contraction(c: &ConnectionValue) -> NCPolynomial {
    c.value.contract()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConnectionReport {
    pub family: Family,
    pub mu: i64,
    pub unit_ok: bool,
    pub m_contraction_ok: bool,
    pub m_contraction: String,
    pub canonical_ok: bool,
    /// Winding → residual of `Σ_i l_i r_i^{(w)} − δ_{w,−μ}` where nonzero.
    pub canonical_residuals: BTreeMap<i64, String>,
}

impl ConnectionReport {
    pub fn passed(&self) -> bool {
        self.unit_ok && self.m_contraction_ok && self.canonical_ok
    }
}

/// Right-leg winding decomposition: family 1 by grading, family 2 via the quotient.
fn right_components(
    c: &ConnectionValue,
    r: &Word,
    qb: Option<&QuotientBasis>,
) -> Result<Vec<(Terms, i64)>, ConnectionError> {
    let pres = c.presentation();
    let x = NCPolynomial::word(pres, r.clone());
    match c.family {
        Family::Heegaard => {
            let d = pres.word_grade(r).expect("HEEGAARD is graded");
            Ok(vec![(x.into_terms(), d)])
        }
        Family::Podles => {
            let qb = qb.ok_or(ConnectionError::MissingQuotient(c.family))?;
            Ok(coaction_family2(&x, qb)?
                .into_iter()
                .map(|(p, w)| (p.into_terms(), w))
                .collect())
        }
    }
}

/// Checks `ℓ(1) = 1⊗1`, `Σ l_i r_i = 1` and `can(ℓ(u^{-μ})) = 1 ⊗ u^{-μ}`.
pub fn verify_connection(
    c: &ConnectionValue,
    qb: Option<&QuotientBasis>,
) -> Result<ConnectionReport, ConnectionError> {
    let pres = c.presentation().clone();
    let unit = match c.family {
        Family::Heegaard => ell_family1(0),
        Family::Podles => ell_family2(0, c.s.as_ref().unwrap_or(&SValue::Symbolic)),
    };
    let unit_ok = unit.value == TensorSquare::one(&pres);
    let m = m_contraction(c);
    let m_ok = m == NCPolynomial::one(&pres);
    // Denominators are cleared before multiplying; residuals are divided back.
    let mut parts = Vec::new();
    for (l, r) in c.split() {
        parts.push((l, right_components(c, &r, qb)?));
    }
    let dl = common_denominator(parts.iter().map(|(l, _)| l));
    let dc = common_denominator(parts.iter().flat_map(|(_, cs)| cs.iter().map(|(t, _)| t)));
    let mut by_winding: BTreeMap<i64, Terms> = BTreeMap::new();
    for (l, comps) in &parts {
        let l = l.scale(&dl);
        for (comp, w) in comps {
            let t = l.mul(&comp.scale(&dc));
            by_winding
                .entry(*w)
                .or_default()
                .add_scaled(&t, &RationalFunction::one());
        }
    }
    for t in by_winding.values_mut() {
        *t = pres.normal_form(t);
    }
    let d = &dl * &dc;
    let inv = d.recip().expect("nonzero denominator");
    let target = -c.mu;
    by_winding.entry(target).or_default();
    let mut residuals = BTreeMap::new();
    for (w, t) in by_winding {
        let expect = if w == target {
            Terms::scalar(d.clone())
        } else {
            Terms::zero()
        };
        let r = t.sub(&expect);
        if !r.is_zero() {
            residuals.insert(w, pres.terms_text(&r.scale(&inv)));
        }
    }
    Ok(ConnectionReport {
        family: c.family,
        mu: c.mu,
        unit_ok,
        m_contraction_ok: m_ok,
        m_contraction: m.to_string(),
        canonical_ok: residuals.is_empty(),
        canonical_residuals: residuals,
    })
}
