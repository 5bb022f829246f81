//! Multivariate polynomial gcd over `Q` by recursive primitive remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{MultiPoly, Var};

/// Monic gcd of `a` and `b`. `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a == b {
        return a.monic();
    }
    // Pull out the common monomial factor first; it is cheap and common.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.meet(&mb);
    let a = if ma.is_one() {
        a.clone()
    } else {
        a.div_monomial(&ma)
    };
    let b = if mb.is_one() {
        b.clone()
    } else {
        b.div_monomial(&mb)
    };
    let core = gcd_monomial_free(&a, &b);
    if mg.is_one() {
        core
    } else {
        core.mul_monomial(&mg)
    }
}

fn gcd_monomial_free(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let ia = primitive_rational(a);
    let ib = primitive_rational(b);
    if let Some(h) = heuristic_gcd(&ia, &ib) {
        return h.monic();
    }
    prs_gcd(a, b)
}

const HEU_GCD_ATTEMPTS: usize = 6;

/// Heuristic gcd of integer-coefficient polynomials: evaluate one variable at a
/// large integer, recurse, and lift the result back by `x`-adic expansion.
/// Returns `None` when every evaluation point fails the trial division.
fn heuristic_gcd(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    let cf = f.numerator_gcd();
    let cg = g.numerator_gcd();
    let c = cf.gcd(&cg);
    if f.is_constant() || g.is_constant() {
        return Some(MultiPoly::constant(BigRational::from_integer(c)));
    }
    let f = f.scale(&BigRational::new(BigInt::one(), cf));
    let g = g.scale(&BigRational::new(BigInt::one(), cg));
    let v = Var::ALL
        .into_iter()
        .rev()
        .find(|&v| f.contains_var(v) || g.contains_var(v))?;
    let f_norm = max_norm(&f);
    let g_norm = max_norm(&g);
    let bound = BigInt::from(2) * (&f_norm).min(&g_norm) + BigInt::from(29);
    let lf = f.leading_coeff().numer().abs();
    let lg = g.leading_coeff().numer().abs();
    let alt = BigInt::from(2) * (&f_norm / &lf).min(&g_norm / &lg) + BigInt::from(4);
    let mut x = bound.clone().min(BigInt::from(99) * bound.sqrt()).max(alt);
    for _ in 0..HEU_GCD_ATTEMPTS {
        let xr = MultiPoly::constant(BigRational::from_integer(x.clone()));
        let ff = f.substitute(v, &xr);
        let gg = g.substitute(v, &xr);
        if !ff.is_zero() && !gg.is_zero() {
            let h = heuristic_gcd(&ff, &gg)?;
            let h = interpolate(&h, &x, v);
            if !h.is_zero() {
                let h = primitive_rational(&h);
                if f.div_exact(&h).is_some() && g.div_exact(&h).is_some() {
                    return Some(h.scale(&BigRational::from_integer(c)));
                }
            }
        }
        x = BigInt::from(73794) * &x * x.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

fn max_norm(f: &MultiPoly) -> BigInt {
    f.terms()
        .map(|(_, c)| c.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Symmetric `x`-adic expansion of the integer coefficients of `h` into powers of `v`.
fn interpolate(h: &MultiPoly, x: &BigInt, v: Var) -> MultiPoly {
    let half = x / BigInt::from(2);
    let mut rest = h.clone();
    let mut coeffs: Vec<MultiPoly> = Vec::new();
    let xr = BigRational::from_integer(x.clone());
    while !rest.is_zero() {
        let mut digit = MultiPoly::zero();
        for (m, c) in rest.terms() {
            let mut r = c.numer().mod_floor(x);
            if r > half {
                r -= x;
            }
            digit.add_term(*m, BigRational::from_integer(r));
        }
        rest = rest.sub(&digit).scale(&xr.recip());
        coeffs.push(digit);
    }
    let out = MultiPoly::from_coeffs_in(v, &coeffs);
    if out.leading_coeff().is_negative() {
        out.neg()
    } else {
        out
    }
}

fn prs_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let v = match main_var(a, b) {
        Some(v) => v,
        None => return MultiPoly::one(),
    };
    let a_has = a.contains_var(v);
    let b_has = b.contains_var(v);
    if !a_has {
        return gcd(a, &content_in(b, v));
    }
    if !b_has {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let gc = gcd(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            g = MultiPoly::one();
            break;
        }
        f = g;
        let cr = content_in(&r, v);
        g = r.div_exact(&cr).expect("content divides");
    }
    let pg = if g.is_constant() {
        MultiPoly::one()
    } else {
        let cg = content_in(&g, v);
        g.div_exact(&cg).expect("content divides")
    };
    gc.mul(&pg).monic()
}

/// Variable present in both operands with the smallest combined degree, else any present one.
fn main_var(a: &MultiPoly, b: &MultiPoly) -> Option<Var> {
    let mut best: Option<(bool, u32, Var)> = None;
    for v in Var::ALL {
        let da = a.degree_in(v);
        let db = b.degree_in(v);
        if da == 0 && db == 0 {
            continue;
        }
        let both = da > 0 && db > 0;
        let key = (both, u32::MAX - (da + db), v);
        if best.is_none_or(|b| (key.0, key.1) > (b.0, b.1)) {
            best = Some(key);
        }
    }
    best.map(|b| b.2)
}

/// Gcd of the coefficients of `a` viewed as a polynomial in `v`.
pub fn content_in(a: &MultiPoly, v: Var) -> MultiPoly {
    let coeffs = a.coeffs_in(v);
    let mut g = MultiPoly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Pseudo-remainder of `f` by `g` in the variable `v`.
fn pseudo_rem(f: &MultiPoly, g: &MultiPoly, v: Var) -> MultiPoly {
    let gc = g.coeffs_in(v);
    let n = gc.len() - 1;
    let lc = gc[n].clone();
    let mut r = f.coeffs_in(v);
    while r.len() > n && !r.is_empty() {
        let m = r.len() - 1;
        let top = r[m].clone();
        if top.is_zero() {
            r.pop();
            continue;
        }
        for c in r.iter_mut() {
            *c = c.mul(&lc);
        }
        for (i, gi) in gc.iter().enumerate() {
            let idx = m - n + i;
            r[idx] = r[idx].sub(&gi.mul(&top));
        }
        debug_assert!(r[m].is_zero());
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    let r = MultiPoly::from_coeffs_in(v, &r);
    // Scaling by the rational content keeps coefficient sizes in check.
    primitive_rational(&r)
}

fn primitive_rational(r: &MultiPoly) -> MultiPoly {
    if r.is_zero() {
        return r.clone();
    }
    let l = r.denominator_lcm();
    let scaled = r.scale(&num_rational::BigRational::from_integer(l));
    let g = scaled.numerator_gcd();
    scaled.scale(&num_rational::BigRational::new(1.into(), g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> MultiPoly {
        MultiPoly::var(x)
    }
    fn c(n: i64) -> MultiPoly {
        MultiPoly::from_int(n)
    }

    #[test]
    fn univariate_gcd() {
        let q = v(Var::Q);
        let a = c(1).sub(&q.pow(2)); // (1-q)(1+q)
        let b = c(1).sub(&q.pow(3)); // (1-q)(1+q+q^2)
        assert_eq!(gcd(&a, &b), q.sub(&c(1)).monic());
    }

    #[test]
    fn bivariate_gcd() {
        let q = v(Var::Q);
        let s = v(Var::S);
        let f = c(1).add(&q.mul(&s)); // 1 + qs
        let a = f.mul(&c(1).sub(&q)).mul(&s.pow(2));
        let b = f.mul(&c(2).add(&s)).mul(&s);
        let g = gcd(&a, &b);
        assert_eq!(g, f.mul(&s).monic());
    }

    #[test]
    fn coprime_is_one() {
        let p = v(Var::P);
        let q = v(Var::Q);
        assert!(gcd(&c(1).sub(&p), &c(1).sub(&q)).is_one());
    }
}
