use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gcd::gcd;
use super::poly::{MultiPoly, Var};
use super::ParamError;

/// Element of `Q(p, q, s)`.
///
/// Stored in lowest terms with a monic denominator (leading coefficient 1 in
/// the graded-lex order), so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

/// Returned by [`RationalFunction::as_integer`] when the value is not a constant integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotConstant;

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        RationalFunction {
            num: MultiPoly::from_int(n),
            den: MultiPoly::one(),
        }
    }

    pub fn from_ratio(r: BigRational) -> Self {
        RationalFunction {
            num: MultiPoly::constant(r),
            den: MultiPoly::one(),
        }
    }

    pub fn from_fraction(n: i64, d: i64) -> Self {
        Self::from_ratio(BigRational::new(n.into(), d.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    pub fn p() -> Self {
        Self::var(Var::P)
    }

    pub fn q() -> Self {
        Self::var(Var::Q)
    }

    pub fn s() -> Self {
        Self::var(Var::S)
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunction {
            num: p,
            den: MultiPoly::one(),
        }
    }

    /// Builds `num / den` and brings it to lowest terms.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ParamError> {
        if den.is_zero() {
            return Err(ParamError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            if c.is_one() {
                return RationalFunction { num, den };
            }
            return RationalFunction {
                num: num.scale(&c.recip()),
                den: MultiPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant rational value, if the function does not depend on any parameter.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn recip(&self) -> Result<Self, ParamError> {
        if self.is_zero() {
            return Err(ParamError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ParamError> {
        if other.is_zero() {
            return Err(ParamError::DivisionByZero);
        }
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: i32) -> Self {
        if e < 0 {
            let inv = self.recip().expect("negative power of zero");
            return inv.pow(-e);
        }
        // Numerator and denominator stay coprime under powers.
        RationalFunction {
            num: self.num.pow(e as u32),
            den: self.den.pow(e as u32),
        }
        .renormalize_lc()
    }

    fn renormalize_lc(self) -> Self {
        let lc = self.den.leading_coeff();
        if lc.is_one() || self.num.is_zero() {
            if self.num.is_zero() {
                return Self::zero();
            }
            return self;
        }
        let inv = lc.recip();
        RationalFunction {
            num: self.num.scale(&inv),
            den: self.den.scale(&inv),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Zero test on the cross-multiplied difference; never uses floating point.
    pub fn equals(&self, other: &Self) -> bool {
        self.num
            .mul(&other.den)
            .sub(&other.num.mul(&self.den))
            .is_zero()
    }

    /// Exact evaluation at a rational point `[p, q, s]`.
    pub fn eval(&self, at: &[BigRational; 3]) -> Result<BigRational, ParamError> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(ParamError::PoleAtPoint);
        }
        Ok(self.num.eval(at) / d)
    }

    pub fn eval_f64(&self, at: &[f64; 3]) -> f64 {
        self.num.eval_f64(at) / self.den.eval_f64(at)
    }

    /// Substitutes a rational function for one of the parameters.
    pub fn substitute(&self, v: Var, value: &RationalFunction) -> RationalFunction {
        // Homogenize: num(v = a/b) = N(a, b) / b^deg.
        let dn = self.num.degree_in(v);
        let dd = self.den.degree_in(v);
        let deg = dn.max(dd);
        let hom = |poly: &MultiPoly| -> MultiPoly {
            let coeffs = poly.coeffs_in(v);
            let mut out = MultiPoly::zero();
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let t = c
                    .mul(&value.num.pow(i as u32))
                    .mul(&value.den.pow(deg - i as u32));
                out = out.add(&t);
            }
            out
        };
        let n = hom(&self.num);
        let d = hom(&self.den);
        RationalFunction::new(n, d).expect("substitution produced a zero denominator")
    }

    /// `Ok(n)` when the function is identically the integer `n`.
    pub fn as_integer(&self) -> Result<BigInt, NotConstant> {
        let c = self.as_constant().ok_or(NotConstant)?;
        if !c.is_integer() {
            return Err(NotConstant);
        }
        let n = c.to_integer();
        let candidate = RationalFunction::from_ratio(BigRational::from_integer(n.clone()));
        if self.equals(&candidate) {
            Ok(n)
        } else {
            Err(NotConstant)
        }
    }

    /// Numerator and denominator scaled to coprime integer coefficients.
    pub fn integral_parts(&self) -> (MultiPoly, MultiPoly) {
        use num_integer::Integer;
        let l = self.num.denominator_lcm().lcm(&self.den.denominator_lcm());
        let lr = BigRational::from_integer(l);
        let n = self.num.scale(&lr);
        let d = self.den.scale(&lr);
        let g = n.numerator_gcd().gcd(&d.numerator_gcd());
        let gr = BigRational::new(BigInt::one(), g);
        let (n, d) = (n.scale(&gr), d.scale(&gr));
        if d.leading_coeff().is_negative() {
            (n.neg(), d.neg())
        } else {
            (n, d)
        }
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (mut n, mut d) = self.integral_parts();
        // Display with a positive lowest-order denominator term.
        if d.terms().next().is_some_and(|(_, c)| c.is_negative()) {
            n = n.neg();
            d = d.neg();
        }
        if d.is_one() {
            if n.num_terms() > 1 {
                write!(f, "(")?;
                n.write_terms(f)?;
                write!(f, ")")
            } else {
                n.write_terms(f)
            }
        } else {
            write!(f, "(")?;
            n.write_terms(f)?;
            write!(f, ")/(")?;
            d.write_terms(f)?;
            write!(f, ")")
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for RationalFunction {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_rational_function(s)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RationalFunction::from_poly(self.num.add(&o.num));
            }
            return RationalFunction::normalized(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            return RationalFunction::normalized(self.num.mul(&o.den).add(&o.num), o.den.clone());
        }
        if o.den.is_one() {
            return RationalFunction::normalized(
                o.num.mul(&self.den).add(&self.num),
                self.den.clone(),
            );
        }
        let g = gcd(&self.den, &o.den);
        let (b1, d1) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (
                self.den.div_exact(&g).unwrap(),
                o.den.div_exact(&g).unwrap(),
            )
        };
        let num = self.num.mul(&d1).add(&o.num.mul(&b1));
        let den = b1.mul(&o.den);
        RationalFunction::normalized(num, den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RationalFunction::from_poly(self.num.mul(&o.num));
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let div = |a: &MultiPoly, g: &MultiPoly| {
            if g.is_one() {
                a.clone()
            } else {
                a.div_exact(g).unwrap()
            }
        };
        let num = div(&self.num, &g1).mul(&div(&o.num, &g2));
        let den = div(&self.den, &g2).mul(&div(&o.den, &g1));
        RationalFunction { num, den }.renormalize_lc()
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, o: &RationalFunction) -> RationalFunction {
        self.try_div(o)
            .expect("division by the zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: &RationalFunction) -> RationalFunction {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<RationalFunction> for &'a RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = RationalFunction>>(iter: I) -> Self {
        iter.fold(RationalFunction::zero(), |a, b| a + b)
    }
}
