//! Exact arithmetic in the parameter field `Q(p, q, s)`.
//!
//! Negative powers of a parameter are represented by moving the parameter to
//! the denominator; there are no Laurent monomials.

mod gcd;
mod parse;
mod poly;
mod ratfun;

use thiserror::Error;

pub use gcd::gcd;
pub use parse::{parse_rational, parse_rational_function};
pub use poly::{ratio_to_f64, Monomial, MultiPoly, Var};
pub use ratfun::{NotConstant, RationalFunction};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Which binary field operation [`rf_arith`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rf_arith(
    x: &RationalFunction,
    y: &RationalFunction,
    op: ArithOp,
) -> Result<RationalFunction, ParamError> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.try_div(y)?,
    })
}

pub fn rf_equals(x: &RationalFunction, y: &RationalFunction) -> bool {
    x.equals(y)
}

/// Point in parameter space for exact evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamPoint {
    pub p: Option<BigRational>,
    pub q: Option<BigRational>,
    pub s: Option<BigRational>,
}

impl ParamPoint {
    fn as_array(&self) -> [BigRational; 3] {
        use num_traits::Zero;
        [
            self.p.clone().unwrap_or_else(BigRational::zero),
            self.q.clone().unwrap_or_else(BigRational::zero),
            self.s.clone().unwrap_or_else(BigRational::zero),
        ]
    }
}

/// Evaluates `x`; parameters absent from `at` must not occur in `x`.
pub fn rf_eval(x: &RationalFunction, at: &ParamPoint) -> Result<BigRational, ParamError> {
    for (v, val) in [(Var::P, &at.p), (Var::Q, &at.q), (Var::S, &at.s)] {
        if val.is_none() && x.contains_var(v) {
            return Err(ParamError::Parse(format!(
                "no value supplied for parameter {}",
                v.name()
            )));
        }
    }
    x.eval(&at.as_array())
}

pub fn rf_as_integer(x: &RationalFunction) -> Result<BigInt, NotConstant> {
    x.as_integer()
}

/// `base^e` for a possibly negative exponent.
pub fn rf_pow(base: &RationalFunction, e: i64) -> RationalFunction {
    base.pow(e as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        let coeff = -3i64..=3;
        let poly =
            proptest::collection::vec((coeff, 0u32..3, 0u32..3, 0u32..2), 1..4).prop_map(|terms| {
                MultiPoly::from_terms(terms.into_iter().map(|(c, ep, eq, es)| {
                    (
                        Monomial([ep, eq, es]),
                        BigRational::from_integer(BigInt::from(c)),
                    )
                }))
            });
        (poly.clone(), poly).prop_filter_map("nonzero denominator", |(n, d)| {
            RationalFunction::new(n, d).ok()
        })
    }

    fn sample_points() -> Vec<[BigRational; 3]> {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        vec![
            [r(1, 3), r(1, 2), r(2, 5)],
            [r(3, 7), r(2, 9), r(1, 11)],
            [r(5, 13), r(7, 17), r(3, 4)],
            [r(-2, 3), r(11, 5), r(1, 19)],
            [r(6, 23), r(-1, 29), r(9, 31)],
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn field_axioms(a in small_rf(), b in small_rf(), c in small_rf()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.recip().unwrap()).is_one());
            }
        }

        #[test]
        fn equality_agrees_with_evaluation(a in small_rf(), b in small_rf()) {
            let eq = rf_equals(&a, &b);
            prop_assert_eq!(eq, a == b);
            if eq {
                for pt in sample_points() {
                    if let (Ok(x), Ok(y)) = (a.eval(&pt), b.eval(&pt)) {
                        prop_assert_eq!(x, y);
                    }
                }
            }
        }

        #[test]
        fn normalization_idempotent(a in small_rf()) {
            let again = RationalFunction::new(a.numer().clone(), a.denom().clone()).unwrap();
            prop_assert_eq!(again, a);
        }

        #[test]
        fn print_parse_round_trip(a in small_rf()) {
            let text = a.to_string();
            let back: RationalFunction = text.parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }

    #[test]
    fn equality_is_an_equivalence() {
        let xs: Vec<RationalFunction> = ["q/q", "1", "(1-q^2)/(1-q)", "1+q", "p"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for a in &xs {
            assert!(rf_equals(a, a));
            for b in &xs {
                assert_eq!(rf_equals(a, b), rf_equals(b, a));
                for c in &xs {
                    if rf_equals(a, b) && rf_equals(b, c) {
                        assert!(rf_equals(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn eval_requires_all_parameters() {
        let x: RationalFunction = "p+q".parse().unwrap();
        let at = ParamPoint {
            q: Some(BigRational::from_integer(1.into())),
            ..Default::default()
        };
        assert!(rf_eval(&x, &at).is_err());
    }
}
