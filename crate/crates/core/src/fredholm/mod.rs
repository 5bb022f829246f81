//! Weighted-shift representations, exact trace pairings and the Chern number pipeline.

mod rep;
mod xpoly;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::connection::{ell, trace_element, ConnectionError, Family};
use crate::ncalg::{heegaard_presentation, NCPolynomial, Terms, Word};
use crate::paramfield::{BigInt, BigRational, RationalFunction as RF};
use crate::quantumhopf::{counit, HopfError, SValue};
use crate::subspan::{express_escalating, SubspanError};

pub use rep::{
    lambda_minus_sq, lambda_plus_sq, pi_minus, pi_plus, rho1, rho2, sigma1, sigma2, Base,
    Direction, Generator, ShiftRepresentation,
};
pub use xpoly::XPoly;

use rep::{operator_sum, operator_vanishes, word_operator, Action};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FredholmError {
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("operands belong to different presentations")]
    PresentationMismatch,
    #[error("{rep} violates {rule}")]
    RelationViolated { rep: String, rule: String },
    #[error("{rep} does not restrict correctly on {generator}")]
    MismatchedRestriction { rep: String, generator: String },
    #[error("constant diagonal terms do not cancel (difference {difference})")]
    NotSummable { difference: String },
    #[error("pairing {value} is not an integer")]
    NotConstant { value: String },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error(transparent)]
    Subspan(#[from] SubspanError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

/// `D(k) = Σ_m c_m (base^m)^k`, with `corrections[k]` subtracted at the first levels.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSeries {
    pub base: Base,
    pub coeffs: XPoly,
    pub corrections: Vec<RF>,
}

impl DiagonalSeries {
    fn zero(base: Base) -> Self {
        DiagonalSeries {
            base,
            coeffs: XPoly::zero(),
            corrections: Vec::new(),
        }
    }

    fn add_scaled(&mut self, other: &DiagonalSeries, c: &RF) {
        self.coeffs = self.coeffs.add(&other.coeffs.scale(c));
        if self.corrections.len() < other.corrections.len() {
            self.corrections.resize(other.corrections.len(), RF::zero());
        }
        for (a, b) in self.corrections.iter_mut().zip(&other.corrections) {
            *a = &*a + &(b * c);
        }
    }

    pub fn constant(&self) -> RF {
        self.coeffs.coeff(0)
    }

    pub fn value_at(&self, k: u64) -> RF {
        let v = self.coeffs.eval(&self.base.rf().pow(k as i32));
        match self.corrections.get(k as usize) {
            Some(c) => &v - c,
            None => v,
        }
    }

    /// `Σ_k (D(k) - c_0)` in closed form.
    pub fn regularized_sum(&self) -> RF {
        let b = self.base.rf();
        let series: RF = self
            .coeffs
            .iter()
            .filter(|(m, _)| *m > 0)
            .map(|(m, c)| c / &(RF::one() - b.pow(m as i32)))
            .sum();
        let corr: RF = self.corrections.iter().cloned().sum();
        &series - &corr
    }
}

/// Diagonal of a word; `None` when the word shifts levels.
pub fn diagonal(
    w: &Word,
    rep: &ShiftRepresentation,
) -> Result<Option<DiagonalSeries>, FredholmError> {
    let op = word_operator(rep, w)?;
    if op.shift != 0 {
        return Ok(None);
    }
    let b = rep.base().rf();
    let corrections = (0..op.start)
        .map(|k| op.poly.eval(&b.pow(k as i32)))
        .collect();
    Ok(Some(DiagonalSeries {
        base: rep.base(),
        coeffs: op.poly,
        corrections,
    }))
}

pub fn diagonal_terms(
    t: &Terms,
    rep: &ShiftRepresentation,
) -> Result<DiagonalSeries, FredholmError> {
    let mut acc = DiagonalSeries::zero(rep.base());
    for (w, c) in t.iter() {
        if let Some(d) = diagonal(w, rep)? {
            acc.add_scaled(&d, c);
        }
    }
    Ok(acc)
}

/// `Tr(plus(x) - minus(x))` summed in closed form.
pub fn trace_pairing(
    x: &NCPolynomial,
    plus: &ShiftRepresentation,
    minus: &ShiftRepresentation,
) -> Result<RF, FredholmError> {
    let id = x.presentation().id();
    if plus.presentation().id() != id || minus.presentation().id() != id {
        return Err(FredholmError::PresentationMismatch);
    }
    let dp = diagonal_terms(x.terms(), plus)?;
    let dm = diagonal_terms(x.terms(), minus)?;
    let c0 = &dp.constant() - &dm.constant();
    if !c0.is_zero() {
        return Err(FredholmError::NotSummable {
            difference: c0.to_string(),
        });
    }
    Ok(&dp.regularized_sum() - &dm.regularized_sum())
}

/// Checks every rewrite rule, relation and starred relation on `rep`.
/// Returns the number of identities checked.
pub fn rep_check(rep: &ShiftRepresentation) -> Result<usize, FredholmError> {
    let pres = rep.presentation();
    let mut checks: Vec<(String, Terms)> = pres
        .all_check_rules()
        .into_iter()
        .map(|r| (r.name.clone(), Terms::word(r.lhs.clone()).sub(&r.rhs)))
        .collect();
    for (name, t) in pres.relations() {
        checks.push((name.clone(), t.clone()));
        checks.push((format!("{name}*"), pres.star_terms(t)));
    }
    for (name, t) in &checks {
        if !operator_vanishes(rep.base(), &operator_sum(rep, t)?) {
            return Err(FredholmError::RelationViolated {
                rep: rep.name().to_string(),
                rule: name.clone(),
            });
        }
    }
    Ok(checks.len())
}

/// `σ_i(bb*) = ρ_i(f0)`, `σ_i(ab) = ρ_i(f1)`, `σ_i(b*a*) = ρ_i(f1*)` for i = 1, 2.
pub fn restriction_check() -> Result<(), FredholmError> {
    let h = heegaard_presentation();
    for (sigma, rho) in [(sigma1(), rho1()), (sigma2(), rho2())] {
        let mismatch = |g: &str| FredholmError::MismatchedRestriction {
            rep: sigma.name().to_string(),
            generator: g.to_string(),
        };
        if sigma.base() != rho.base() || sigma.edge() != rho.edge() {
            return Err(mismatch("edge weights"));
        }
        for (g, image) in [("f0", "b b*"), ("f1", "a b"), ("f1*", "b* a*")] {
            let img = NCPolynomial::parse(&h, image).expect("built-in image parses");
            let sym = rho
                .presentation()
                .symbol_by_name(g)
                .expect("S2PQ generator");
            let mut sum = operator_sum(&sigma, img.terms())?;
            for (shift, parts) in operator_sum(&rho, &Terms::word(Word::letter(sym)))? {
                let e = sum.entry(shift).or_default();
                e.extend(parts.into_iter().map(|(st, p)| (st, p.scale(&-RF::one()))));
            }
            if !operator_vanishes(sigma.base(), &sum) {
                return Err(mismatch(g));
            }
        }
    }
    Ok(())
}

/// Evaluates a character given by scalar values on every generator.
pub fn character(x: &NCPolynomial, values: &[RF]) -> RF {
    x.terms()
        .iter()
        .map(|(w, c)| {
            w.0.iter()
                .fold(c.clone(), |acc, &s| &acc * &values[s as usize])
        })
        .sum()
}

/// `δ` on HEEGAARD: every generator maps to 1.
pub fn delta(x: &NCPolynomial) -> RF {
    character(x, &vec![RF::one(); x.presentation().symbols().len()])
}

/// Exact pairing of the Chern–Galois trace element with the trace functional.
#[derive(Clone, Debug, Serialize)]
pub struct ExactPairing {
    pub family: Family,
    pub mu: i64,
    pub s: Option<String>,
    pub trace_element: String,
    pub base_expression: Option<BTreeMap<String, String>>,
    pub pairing: RF,
}

impl ExactPairing {
    pub fn chern(&self) -> Result<BigInt, FredholmError> {
        self.pairing
            .as_integer()
            .map_err(|_| FredholmError::NotConstant {
                value: self.pairing.to_string(),
            })
    }
}

type BaseText = BTreeMap<String, String>;

/// Trace element in the base algebra: HEEGAARD itself for family 1 (σ acts there),
/// the Podleś expression for family 2.
fn base_element(
    family: Family,
    mu: i64,
    s: &SValue,
) -> Result<(NCPolynomial, NCPolynomial, Option<BaseText>), FredholmError> {
    let x = trace_element(&ell(family, mu, s));
    match family {
        Family::Heegaard => Ok((x.clone(), x, None)),
        Family::Podles => {
            let (e, _) = express_escalating(&x, family, s)?;
            let text = e.to_text();
            Ok((x, e.to_polynomial(), Some(text)))
        }
    }
}

pub fn exact_pairing(family: Family, mu: i64, s: &SValue) -> Result<ExactPairing, FredholmError> {
    let (x, base, expr) = base_element(family, mu, s)?;
    let pairing = match family {
        Family::Heegaard => trace_pairing(&base, &sigma2(), &sigma1())?,
        Family::Podles => s.specialize(&trace_pairing(&base, &pi_minus(), &pi_plus())?),
    };
    Ok(ExactPairing {
        family,
        mu,
        s: (family == Family::Podles).then(|| s.to_string()),
        trace_element: x.to_string(),
        base_expression: expr,
        pairing,
    })
}

pub fn chern_number(family: Family, mu: i64, s: &SValue) -> Result<BigInt, FredholmError> {
    exact_pairing(family, mu, s)?.chern()
}

/// `δ` (family 1) or the counit (family 2) applied to the trace element.
pub fn rank_pairing(family: Family, mu: i64, s: &SValue) -> Result<RF, FredholmError> {
    let x = trace_element(&ell(family, mu, s));
    Ok(match family {
        Family::Heegaard => delta(&x),
        Family::Podles => counit(&x)?,
    })
}

/// Parameter values for the floating-point cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericParams {
    pub p: BigRational,
    pub q: BigRational,
    pub s: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericPairing {
    pub estimate: f64,
    pub tail_bound: f64,
}

struct NumRep {
    base: f64,
    edge: Vec<(u32, f64)>,
    actions: Vec<NumAction>,
}

enum NumAction {
    Scalar(f64),
    Diagonal(Vec<(u32, f64)>),
    Raise,
    Lower,
}

impl NumRep {
    fn new(rep: &ShiftRepresentation, at: &[f64; 3]) -> Self {
        NumRep {
            base: rep.base().eval_f64(at),
            edge: rep.edge().map(|e| e.to_f64(at)).unwrap_or_default(),
            actions: rep
                .actions
                .iter()
                .map(|a| match a {
                    Action::Scalar(c) => NumAction::Scalar(c.eval_f64(at)),
                    Action::Diagonal(d) => NumAction::Diagonal(d.to_f64(at)),
                    Action::Raise => NumAction::Raise,
                    Action::Lower => NumAction::Lower,
                })
                .collect(),
        }
    }

    fn weight(&self, level: i64) -> f64 {
        xpoly::eval_f64(&self.edge, self.base.powi(level as i32))
            .max(0.0)
            .sqrt()
    }

    /// `⟨e_k, w e_k⟩` by applying the truncated matrices letter by letter.
    fn diagonal_entry(&self, w: &Word, k: i64) -> f64 {
        let mut level = k;
        let mut amp = 1.0;
        for &sym in w.0.iter().rev() {
            match &self.actions[sym as usize] {
                NumAction::Scalar(c) => amp *= c,
                NumAction::Diagonal(d) => amp *= xpoly::eval_f64(d, self.base.powi(level as i32)),
                NumAction::Raise => {
                    amp *= self.weight(level);
                    level += 1;
                }
                NumAction::Lower => {
                    if level == 0 {
                        return 0.0;
                    }
                    level -= 1;
                    amp *= self.weight(level);
                }
            }
        }
        if level == k {
            amp
        } else {
            0.0
        }
    }
}

fn to_f64(r: &BigRational) -> f64 {
    crate::paramfield::ratio_to_f64(r)
}

/// Truncated trace over the first `n` levels plus a geometric bound on the rest.
pub fn numeric_pairing(
    family: Family,
    mu: i64,
    params: &NumericParams,
    n: usize,
) -> Result<NumericPairing, FredholmError> {
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    let open = |v: &BigRational, name: &str| {
        if *v <= zero || *v >= one {
            Err(FredholmError::ParameterOutOfRange(format!(
                "{name} = {v} not in ]0,1["
            )))
        } else {
            Ok(())
        }
    };
    match family {
        Family::Heegaard => {
            open(&params.p, "p")?;
            open(&params.q, "q")?;
        }
        Family::Podles => {
            open(&params.q, "q")?;
            if params.s < zero || params.s > one {
                return Err(FredholmError::ParameterOutOfRange(format!(
                    "s = {} not in [0,1]",
                    params.s
                )));
            }
        }
    }
    let at = [to_f64(&params.p), to_f64(&params.q), to_f64(&params.s)];
    let s = SValue::Exact(params.s.clone());
    let (_, base, _) = base_element(family, mu, &s)?;
    let (plus, minus) = match family {
        Family::Heegaard => (sigma2(), sigma1()),
        Family::Podles => (pi_minus(), pi_plus()),
    };
    let np = NumRep::new(&plus, &at);
    let nm = NumRep::new(&minus, &at);
    let coeffs: Vec<(&Word, f64)> = base
        .terms()
        .iter()
        .map(|(w, c)| (w, c.eval_f64(&at)))
        .collect();
    let mut estimate = 0.0;
    for k in 0..n as i64 {
        for (w, c) in &coeffs {
            estimate += c * (np.diagonal_entry(w, k) - nm.diagonal_entry(w, k));
        }
    }
    let tail_bound = tail_bound(&base, &plus, &minus, &at, n)?;
    Ok(NumericPairing {
        estimate,
        tail_bound,
    })
}

/// `C r^N / (1 - r)` with `C = Σ_{m≥1} |c_m|` over both diagonals and `r` the larger base.
fn tail_bound(
    x: &NCPolynomial,
    plus: &ShiftRepresentation,
    minus: &ShiftRepresentation,
    at: &[f64; 3],
    n: usize,
) -> Result<f64, FredholmError> {
    let mut c = 0.0;
    for rep in [plus, minus] {
        let d = diagonal_terms(x.terms(), rep)?;
        c += d
            .coeffs
            .iter()
            .filter(|(m, _)| *m > 0)
            .map(|(_, v)| v.eval_f64(at).abs())
            .sum::<f64>();
    }
    let r = plus.base().eval_f64(at).max(minus.base().eval_f64(at));
    Ok(c * r.powi(n as i32) / (1.0 - r))
}

/// Exact value of a pairing at a parameter point.
pub fn eval_at(x: &RF, params: &NumericParams) -> f64 {
    let at = [to_f64(&params.p), to_f64(&params.q), to_f64(&params.s)];
    x.eval_f64(&at)
}

/// `λ₀^± = 0`: both squared weights vanish at `x = 1`.
pub fn lambda_boundary_holds() -> bool {
    lambda_minus_sq().eval(&RF::one()).is_zero() && lambda_plus_sq().eval(&RF::one()).is_zero()
}

#[cfg(test)]
mod tests;
