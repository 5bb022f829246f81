use std::collections::BTreeMap;
use std::fmt;

use crate::paramfield::RationalFunction as RF;

/// Polynomial in the level variable `x` with coefficients in `Q(p, q, s)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct XPoly(BTreeMap<u32, RF>);

impl XPoly {
    pub fn zero() -> Self {
        XPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::constant(RF::one())
    }

    pub fn constant(c: RF) -> Self {
        Self::from_coeffs([(0, c)])
    }

    pub fn x() -> Self {
        Self::from_coeffs([(1, RF::one())])
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, RF)>>(it: I) -> Self {
        let mut out = XPoly::zero();
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: u32, c: RF) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(m).or_insert_with(RF::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, m: u32) -> RF {
        self.0.get(&m).cloned().unwrap_or_else(RF::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &RF)> {
        self.0.iter().map(|(m, c)| (*m, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.keys().next_back().copied()
    }

    pub fn add(&self, other: &XPoly) -> XPoly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &XPoly) -> XPoly {
        self.add(&other.scale(&-RF::one()))
    }

    pub fn scale(&self, c: &RF) -> XPoly {
        XPoly::from_coeffs(self.0.iter().map(|(m, a)| (*m, a * c)))
    }

    pub fn mul(&self, other: &XPoly) -> XPoly {
        let mut out = XPoly::zero();
        for (m, a) in &self.0 {
            for (n, b) in &other.0 {
                out.add_term(m + n, a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> XPoly {
        (0..e).fold(XPoly::one(), |acc, _| acc.mul(self))
    }

    /// `x ↦ t·x`.
    pub fn dilate(&self, t: &RF) -> XPoly {
        XPoly::from_coeffs(self.0.iter().map(|(m, c)| (*m, c * &t.pow(*m as i32))))
    }

    pub fn eval(&self, x: &RF) -> RF {
        self.0.iter().map(|(m, c)| c * &x.pow(*m as i32)).sum()
    }

    /// Coefficients evaluated at `[p, q, s]`, indexed by power of `x`.
    pub fn to_f64(&self, at: &[f64; 3]) -> Vec<(u32, f64)> {
        self.0.iter().map(|(m, c)| (*m, c.eval_f64(at))).collect()
    }
}

pub(crate) fn eval_f64(coeffs: &[(u32, f64)], x: f64) -> f64 {
    coeffs.iter().map(|(m, c)| c * x.powi(*m as i32)).sum()
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(m, c)| match m {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{m}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
