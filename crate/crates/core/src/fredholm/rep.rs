use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::xpoly::XPoly;
use super::FredholmError;
use crate::ncalg::{
    heegaard_presentation, podles_presentation, s2pq_presentation, Presentation, Terms, Word,
};
use crate::paramfield::RationalFunction as RF;

/// Decay base of a representation; level `k` carries `x = base^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Base {
    P,
    Q,
    QSquared,
}

impl Base {
    pub fn rf(self) -> RF {
        match self {
            Base::P => RF::p(),
            Base::Q => RF::q(),
            Base::QSquared => RF::q().pow(2),
        }
    }

    pub fn eval_f64(self, at: &[f64; 3]) -> f64 {
        match self {
            Base::P => at[0],
            Base::Q => at[1],
            Base::QSquared => at[1] * at[1],
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::P => "p",
            Base::Q => "q",
            Base::QSquared => "q^2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// Action of a generator on the basis `e_k`.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Scalar(RF),
    /// `e_k ↦ D(base^k) e_k`.
    Diagonal(XPoly),
    /// Up: `e_k ↦ √W(base^k) e_{k+1}`. Down: `e_k ↦ √W(base^k) e_{k-1}`, `e_0 ↦ 0`.
    Shift(Direction, XPoly),
}

#[derive(Clone, Debug)]
pub(crate) enum Action {
    Scalar(RF),
    Diagonal(XPoly),
    Raise,
    Lower,
}

/// A representation on `ℓ²(ℕ)` in which every generator is scalar, diagonal
/// or a weighted shift along one common edge weight.
#[derive(Clone, Debug)]
pub struct ShiftRepresentation {
    name: String,
    base: Base,
    pres: Arc<Presentation>,
    /// Squared weight of the edge `(k, k+1)` as a polynomial in `x = base^k`.
    edge: Option<XPoly>,
    pub(crate) actions: Vec<Action>,
    descriptors: Vec<(String, Generator)>,
}

impl ShiftRepresentation {
    /// Starred generators get the adjoint action (parameters are real).
    pub fn new(
        name: &str,
        base: Base,
        pres: &Arc<Presentation>,
        gens: Vec<(&str, Generator)>,
    ) -> Result<Self, FredholmError> {
        let invalid = |m: String| FredholmError::InvalidRepresentation(format!("{name}: {m}"));
        let mut actions: Vec<Option<Action>> = vec![None; pres.symbols().len()];
        let mut edge: Option<XPoly> = None;
        let mut set_edge = |e: XPoly| -> Result<(), FredholmError> {
            match &edge {
                Some(old) if *old != e => Err(invalid("shifts with different edge weights".into())),
                _ => {
                    edge = Some(e);
                    Ok(())
                }
            }
        };
        for (sym_name, g) in &gens {
            let sym = pres
                .symbol_by_name(sym_name)
                .ok_or_else(|| FredholmError::UnknownSymbol(sym_name.to_string()))?;
            let star = pres.star_symbol(sym);
            let (a, b) = match g {
                Generator::Scalar(c) => (Action::Scalar(c.clone()), Action::Scalar(c.clone())),
                Generator::Diagonal(d) => {
                    (Action::Diagonal(d.clone()), Action::Diagonal(d.clone()))
                }
                Generator::Shift(Direction::Up, w) => {
                    set_edge(w.clone())?;
                    (Action::Raise, Action::Lower)
                }
                Generator::Shift(Direction::Down, w) => {
                    set_edge(w.dilate(&base.rf()))?;
                    (Action::Lower, Action::Raise)
                }
            };
            actions[sym as usize] = Some(a);
            if star != sym {
                actions[star as usize] = Some(b);
            }
        }
        let actions = actions
            .into_iter()
            .enumerate()
            .map(|(i, a)| {
                a.ok_or_else(|| invalid(format!("no action for {}", pres.symbol_name(i as u8))))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ShiftRepresentation {
            name: name.to_string(),
            base,
            pres: pres.clone(),
            edge,
            actions,
            descriptors: gens.into_iter().map(|(n, g)| (n.to_string(), g)).collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn edge(&self) -> Option<&XPoly> {
        self.edge.as_ref()
    }

    pub fn descriptors(&self) -> &[(String, Generator)] {
        &self.descriptors
    }
}

fn poly(terms: &[(u32, RF)]) -> XPoly {
    XPoly::from_coeffs(terms.iter().cloned())
}

fn one_minus(t: RF) -> XPoly {
    poly(&[(0, RF::one()), (1, -t)])
}

pub fn rho1() -> ShiftRepresentation {
    ShiftRepresentation::new(
        "rho1",
        Base::P,
        &s2pq_presentation(),
        vec![
            ("f0", Generator::Diagonal(one_minus(RF::one()))),
            ("f1", Generator::Shift(Direction::Up, one_minus(RF::p()))),
        ],
    )
    .expect("rho1 is well formed")
}

pub fn rho2() -> ShiftRepresentation {
    ShiftRepresentation::new(
        "rho2",
        Base::Q,
        &s2pq_presentation(),
        vec![
            ("f0", Generator::Scalar(RF::one())),
            ("f1", Generator::Shift(Direction::Up, one_minus(RF::q()))),
        ],
    )
    .expect("rho2 is well formed")
}

pub fn sigma1() -> ShiftRepresentation {
    ShiftRepresentation::new(
        "sigma1",
        Base::P,
        &heegaard_presentation(),
        vec![
            ("a", Generator::Scalar(RF::one())),
            ("b", Generator::Shift(Direction::Up, one_minus(RF::p()))),
        ],
    )
    .expect("sigma1 is well formed")
}

pub fn sigma2() -> ShiftRepresentation {
    ShiftRepresentation::new(
        "sigma2",
        Base::Q,
        &heegaard_presentation(),
        vec![
            ("a", Generator::Shift(Direction::Up, one_minus(RF::q()))),
            ("b", Generator::Scalar(RF::one())),
        ],
    )
    .expect("sigma2 is well formed")
}

/// `λ_-²(x) = s²(1 - (1-s²)x - s²x²)`.
pub fn lambda_minus_sq() -> XPoly {
    let s2 = RF::s().pow(2);
    poly(&[
        (0, RF::one()),
        (1, -(RF::one() - s2.clone())),
        (2, -s2.clone()),
    ])
    .scale(&s2)
}

/// `λ_+²(x) = s² + (1-s²)x - x²`.
pub fn lambda_plus_sq() -> XPoly {
    let s2 = RF::s().pow(2);
    poly(&[(0, s2.clone()), (1, RF::one() - s2), (2, -RF::one())])
}

pub fn pi_minus() -> ShiftRepresentation {
    ShiftRepresentation::new(
        "pi_minus",
        Base::QSquared,
        &podles_presentation(),
        vec![
            ("K", Generator::Diagonal(poly(&[(1, -RF::s().pow(2))]))),
            ("L", Generator::Shift(Direction::Down, lambda_minus_sq())),
        ],
    )
    .expect("pi_minus is well formed")
}

pub fn pi_plus() -> ShiftRepresentation {
    ShiftRepresentation::new(
        "pi_plus",
        Base::QSquared,
        &podles_presentation(),
        vec![
            ("K", Generator::Diagonal(XPoly::x())),
            ("L", Generator::Shift(Direction::Down, lambda_plus_sq())),
        ],
    )
    .expect("pi_plus is well formed")
}

/// Operator of a word: `e_k ↦ poly(x)·√(odd edges)·e_{k+shift}` for `k ≥ start`, else 0.
#[derive(Clone, Debug)]
pub(crate) struct WordOperator {
    pub shift: i64,
    pub start: u64,
    pub poly: XPoly,
}

pub(crate) fn word_operator(
    rep: &ShiftRepresentation,
    w: &Word,
) -> Result<WordOperator, FredholmError> {
    let base = rep.base.rf();
    let mut off = 0i64;
    let mut low = 0i64;
    let mut poly = XPoly::one();
    let mut crossings: BTreeMap<i64, u32> = BTreeMap::new();
    for &sym in w.0.iter().rev() {
        let act = rep
            .actions
            .get(sym as usize)
            .ok_or_else(|| FredholmError::UnknownSymbol(format!("#{sym}")))?;
        match act {
            Action::Scalar(c) => poly = poly.scale(c),
            Action::Diagonal(d) => poly = poly.mul(&d.dilate(&base.pow(off as i32))),
            Action::Raise => {
                *crossings.entry(off).or_default() += 1;
                off += 1;
            }
            Action::Lower => {
                off -= 1;
                low = low.min(off);
                *crossings.entry(off).or_default() += 1;
            }
        }
    }
    if let Some(edge) = &rep.edge {
        for (j, n) in crossings {
            if n >= 2 {
                poly = poly.mul(&edge.dilate(&base.pow(j as i32)).pow(n / 2));
            }
        }
    }
    Ok(WordOperator {
        shift: off,
        start: (-low) as u64,
        poly,
    })
}

/// Shift → list of `(start, polynomial)` summands.
pub(crate) type OperatorSum = BTreeMap<i64, Vec<(u64, XPoly)>>;

pub(crate) fn operator_sum(
    rep: &ShiftRepresentation,
    t: &Terms,
) -> Result<OperatorSum, FredholmError> {
    let mut out = OperatorSum::new();
    for (w, c) in t.iter() {
        let op = word_operator(rep, w)?;
        out.entry(op.shift)
            .or_default()
            .push((op.start, op.poly.scale(c)));
    }
    Ok(out)
}

/// Exact zero test of an operator sum on every level.
pub(crate) fn operator_vanishes(base: Base, sum: &OperatorSum) -> bool {
    let b = base.rf();
    sum.values().all(|parts| {
        let top = parts.iter().map(|(s, _)| *s).max().unwrap_or(0);
        let total = parts.iter().fold(XPoly::zero(), |acc, (_, p)| acc.add(p));
        total.is_zero()
            && (0..top).all(|k| {
                let x = b.pow(k as i32);
                let v: RF = parts
                    .iter()
                    .filter(|(s, _)| *s <= k)
                    .map(|(_, p)| p.eval(&x))
                    .sum();
                v.is_zero()
            })
    })
}
