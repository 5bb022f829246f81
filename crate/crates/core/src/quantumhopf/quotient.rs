use std::collections::{BTreeMap, HashMap};
use std::ops::Bound;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::ncalg::{qsu2, qsu2_presentation, NCPolynomial, Presentation, Terms, Word};
use crate::paramfield::RationalFunction as RF;

use super::{coproduct_word, lift, podles_generators, require_qsu2, HopfError, SValue};

/// Column key for the elimination: long words first, then ordinary words,
/// then the candidate representatives `1, α^n, α*^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct ColKey {
    group: u8,
    word: Word,
}

type Row = BTreeMap<ColKey, RF>;

const MAX_SLACK: usize = 6;

/// Filtered slice `P_{≤d} / (J_s ∩ P_{≤d})` of the quotient coalgebra.
pub struct QuotientBasis {
    s: SValue,
    degree: usize,
    pres: Arc<Presentation>,
    pivots: BTreeMap<ColKey, Row>,
    reps: Vec<Word>,
    /// `to_grouplike[i][n + d]`: coordinate of representative `i` on `class(i(u^n))`.
    to_grouplike: Vec<Vec<RF>>,
    slack: usize,
    cache: Mutex<HashMap<Word, Arc<BTreeMap<i64, RF>>>>,
}

/// Serializable summary of a [`QuotientBasis`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QuotientDump {
    pub s: String,
    pub degree: usize,
    pub dimension: usize,
    pub representatives: Vec<String>,
    pub alpha_power_representatives: bool,
    pub ideal_rank: usize,
    pub slack: usize,
}

fn candidate(w: &Word) -> bool {
    let s = w.symbols();
    s.iter().all(|&x| x == qsu2::ALPHA) || s.iter().all(|&x| x == qsu2::ALPHA_STAR)
}

fn key(w: &Word, d: usize) -> ColKey {
    let group = if w.len() > d {
        0
    } else if candidate(w) {
        2
    } else {
        1
    };
    ColKey {
        group,
        word: w.clone(),
    }
}

fn to_row(t: &Terms, d: usize) -> Row {
    t.iter().map(|(w, c)| (key(w, d), c.clone())).collect()
}

/// Normal words `α^i γ^m γ*^n` and `α*^j γ^m γ*^n` of length at most `len`.
fn normal_words(len: usize) -> Vec<Word> {
    use qsu2::*;
    let mut out = Vec::new();
    for total in 0..=len {
        for a in 0..=total {
            for m in 0..=total - a {
                let n = total - a - m;
                for head in [ALPHA, ALPHA_STAR] {
                    if head == ALPHA_STAR && a == 0 {
                        continue;
                    }
                    let mut v = vec![head; a];
                    v.extend(std::iter::repeat_n(GAMMA, m));
                    v.extend(std::iter::repeat_n(GAMMA_STAR, n));
                    out.push(Word(v));
                }
            }
        }
    }
    out
}

fn reduce(pivots: &BTreeMap<ColKey, Row>, mut row: Row) -> Row {
    let mut lower: Option<ColKey> = None;
    loop {
        let range = match &lower {
            None => row.range::<ColKey, _>(..),
            Some(k) => row.range::<ColKey, _>((Bound::Excluded(k), Bound::Unbounded)),
        };
        let hit = range
            .filter(|(k, _)| pivots.contains_key(*k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .next();
        let Some((k, c)) = hit else {
            return row;
        };
        for (kk, a) in &pivots[&k] {
            let v = row.get(kk).cloned().unwrap_or_else(RF::zero) - a * &c;
            if v.is_zero() {
                row.remove(kk);
            } else {
                row.insert(kk.clone(), v);
            }
        }
        lower = Some(k);
    }
}

fn insert_row(pivots: &mut BTreeMap<ColKey, Row>, row: Row) {
    let row = reduce(pivots, row);
    let Some((k, lead)) = row.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
        return;
    };
    let inv = lead.recip().expect("nonzero pivot");
    let row: Row = row.into_iter().map(|(kk, c)| (kk, &c * &inv)).collect();
    pivots.insert(k, row);
}

fn invert(m: &[Vec<RF>]) -> Option<Vec<Vec<RF>>> {
    let n = m.len();
    let mut a: Vec<Vec<RF>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { RF::one() } else { RF::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip().ok()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(p * &f);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Computes `J_s ∩ P_{≤d}` by exact elimination, where `P_{≤d}` is spanned by
/// normal words of length at most `d`, and a complement of it. Columns are
/// ordered so that the complement prefers `1, α^n, α*^n` (`n ≤ d`).
///
/// Rows `g w` with `w` longer than `d - 2` are added until the quotient has
/// dimension `2d + 1`; the classes of the lifts `i(u^n)`, `|n| ≤ d`, must then
/// form a basis.
pub fn quotient_basis(s: &SValue, d: usize) -> Result<QuotientBasis, HopfError> {
    let pres = qsu2_presentation();
    let [k, l, ls] = podles_generators(s);
    let sv = s.rf();
    let shift = |x: &NCPolynomial| x.terms().sub(&Terms::scalar(sv.clone()));
    let gens = [k.terms().clone(), shift(&l), shift(&ls)];
    let expected = 2 * d + 1;
    let all_short = normal_words(d);
    let mut pivots: BTreeMap<ColKey, Row> = BTreeMap::new();
    let mut done_len: Option<usize> = None;
    let mut slack = 0;
    loop {
        let max_len = (d + slack).checked_sub(2);
        if let Some(ml) = max_len {
            let words = normal_words(ml);
            for w in words
                .iter()
                .filter(|w| done_len.is_none_or(|dl| w.len() > dl))
            {
                for g in &gens {
                    let t = pres.mul_nf(g, &Terms::word(w.clone()));
                    insert_row(&mut pivots, to_row(&t, d));
                }
            }
            done_len = Some(ml);
        }
        let rank = pivots.keys().filter(|k| k.group > 0).count();
        let dim = all_short.len() - rank;
        if dim < expected {
            return Err(HopfError::DegenerateQuotient {
                degree: d,
                found: dim,
                expected,
            });
        }
        if dim == expected {
            break;
        }
        slack += 1;
        if slack > MAX_SLACK {
            return Err(HopfError::DegenerateQuotient {
                degree: d,
                found: dim,
                expected,
            });
        }
    }
    let mut reps: Vec<Word> = all_short
        .iter()
        .filter(|w| !pivots.contains_key(&key(w, d)))
        .cloned()
        .collect();
    let winding = |w: &Word| -> (bool, i64) {
        let n = w.len() as i64;
        let signed = if w.symbols().first() == Some(&qsu2::ALPHA_STAR) {
            -n
        } else {
            n
        };
        (!candidate(w), signed)
    };
    reps.sort_by_key(winding);
    let mut qb = QuotientBasis {
        s: s.clone(),
        degree: d,
        pres: pres.clone(),
        pivots,
        reps,
        to_grouplike: Vec::new(),
        slack,
        cache: Mutex::new(HashMap::new()),
    };
    let g: Vec<Vec<RF>> = (-(d as i64)..=d as i64)
        .map(|n| qb.rep_coordinates(lift(n, s).terms()))
        .collect();
    qb.to_grouplike = invert(&g).ok_or(HopfError::DegenerateQuotient {
        degree: d,
        found: 0,
        expected,
    })?;
    Ok(qb)
}

impl QuotientBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn s(&self) -> &SValue {
        &self.s
    }

    pub fn dimension(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Word] {
        &self.reps
    }

    /// Whether the complement found is spanned by `1, α^n, α*^n`.
    /// At `s = 1` it is not: `α − α*` lies in `J_1`.
    pub fn alpha_power_representatives(&self) -> bool {
        self.reps.iter().all(candidate)
    }

    pub fn slack(&self) -> usize {
        self.slack
    }

    fn rep_coordinates(&self, t: &Terms) -> Vec<RF> {
        let r = reduce(&self.pivots, to_row(t, self.degree));
        self.reps
            .iter()
            .map(|w| {
                r.get(&key(w, self.degree))
                    .cloned()
                    .unwrap_or_else(RF::zero)
            })
            .collect()
    }

    /// Coordinates over the representative words of the class of `t`.
    pub fn class_of(&self, t: &Terms) -> Result<Vec<RF>, HopfError> {
        let t = self.pres.normal_form(t);
        let m = t.max_len();
        if m > self.degree {
            return Err(HopfError::DegreeExceeded {
                found: m,
                bound: self.degree,
            });
        }
        Ok(self.rep_coordinates(&t))
    }

    /// `π_s` of a normal word in the group-like basis `u^n ↔ class(i(u^n))`.
    pub fn project_word(&self, w: &Word) -> Result<Arc<BTreeMap<i64, RF>>, HopfError> {
        if let Some(v) = self.cache.lock().expect("lock").get(w) {
            return Ok(v.clone());
        }
        let r = self.class_of(&Terms::word(w.clone()))?;
        let d = self.degree as i64;
        let mut out = BTreeMap::new();
        for n in -d..=d {
            let col = (n + d) as usize;
            let mut acc = RF::zero();
            for (ri, row) in r.iter().zip(&self.to_grouplike) {
                if !ri.is_zero() && !row[col].is_zero() {
                    acc = &acc + &(ri * &row[col]);
                }
            }
            if !acc.is_zero() {
                out.insert(n, acc);
            }
        }
        let out = Arc::new(out);
        self.cache
            .lock()
            .expect("lock")
            .insert(w.clone(), out.clone());
        Ok(out)
    }

    /// `π_s` of an element, as winding → coefficient.
    pub fn project(&self, t: &Terms) -> Result<BTreeMap<i64, RF>, HopfError> {
        let t = self.pres.normal_form(t);
        let mut out: BTreeMap<i64, RF> = BTreeMap::new();
        for (w, c) in t.iter() {
            for (n, a) in self.project_word(w)?.iter() {
                let e = out.entry(*n).or_insert_with(RF::zero);
                *e = &*e + &(a * c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn dump(&self) -> QuotientDump {
        QuotientDump {
            s: self.s.to_string(),
            degree: self.degree,
            dimension: self.dimension(),
            representatives: self.reps.iter().map(|w| self.pres.word_text(w)).collect(),
            alpha_power_representatives: self.alpha_power_representatives(),
            ideal_rank: self.pivots.keys().filter(|k| k.group > 0).count(),
            slack: self.slack,
        }
    }
}

/// `(id ⊗ π_s) Δ(x)` split by winding.
pub fn coaction_family2(
    x: &NCPolynomial,
    qb: &QuotientBasis,
) -> Result<Vec<(NCPolynomial, i64)>, HopfError> {
    let pres = require_qsu2(x)?;
    let x = x.normal_form();
    let m = x.terms().max_len();
    if m > qb.degree {
        return Err(HopfError::DegreeExceeded {
            found: m,
            bound: qb.degree,
        });
    }
    let mut parts: BTreeMap<i64, Terms> = BTreeMap::new();
    for (w, c) in x.terms().iter() {
        for (l, r, a) in coproduct_word(w).iter() {
            let ca = c * a;
            for (n, b) in qb.project_word(r)?.iter() {
                parts.entry(*n).or_default().add_term(l.clone(), &ca * b);
            }
        }
    }
    Ok(parts
        .into_iter()
        .filter(|(_, t)| !t.is_zero())
        .map(|(n, t)| (NCPolynomial::new(&pres, t), n))
        .collect())
}
