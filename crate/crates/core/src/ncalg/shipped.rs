//! The four presentations used by the fibrations: the two total spaces and their bases.

use std::sync::{Arc, OnceLock};

use crate::paramfield::RationalFunction as RF;

use super::presentation::{Presentation, PresentationBuilder, RuleFamily, Run};
use super::word::{Sym, Terms, Word};

fn terms(pairs: Vec<(&[Sym], RF)>) -> Terms {
    Terms::from_pairs(pairs.into_iter().map(|(w, c)| (Word(w.to_vec()), c)))
}

fn one() -> RF {
    RF::one()
}

fn int(n: i64) -> RF {
    RF::from_int(n)
}

fn one_minus(x: RF) -> RF {
    &one() - &x
}

/// Symbol indices of the Heegaard-type quantum 3-sphere.
pub mod heegaard {
    use super::Sym;
    pub const A: Sym = 0;
    pub const A_STAR: Sym = 1;
    pub const B: Sym = 2;
    pub const B_STAR: Sym = 3;
}

/// Symbol indices of quantum SU(2).
pub mod qsu2 {
    use super::Sym;
    pub const ALPHA: Sym = 0;
    pub const ALPHA_STAR: Sym = 1;
    pub const GAMMA: Sym = 2;
    pub const GAMMA_STAR: Sym = 3;
}

/// Symbol indices of the mirror quantum sphere.
pub mod s2pq {
    use super::Sym;
    pub const F0: Sym = 0;
    pub const F1: Sym = 1;
    pub const F1_STAR: Sym = 2;
}

/// Symbol indices of the Podleś sphere.
pub mod podles {
    use super::Sym;
    pub const K: Sym = 0;
    pub const L: Sym = 1;
    pub const L_STAR: Sym = 2;
}

fn power_word(parts: &[(Sym, usize)]) -> Word {
    let mut v = Vec::new();
    for &(s, n) in parts {
        v.extend(std::iter::repeat_n(s, n));
    }
    Word(v)
}

/// `a a*^j b^k b* -> a a*^j b^(k-1) + a*^(j-1) b^k b* - a*^(j-1) b^(k-1)`.
fn heegaard_family_rhs(lens: &[usize]) -> Terms {
    use heegaard::*;
    let (j, k) = (lens[1], lens[2]);
    Terms::from_pairs([
        (power_word(&[(A, 1), (A_STAR, j), (B, k - 1)]), one()),
        (power_word(&[(A_STAR, j - 1), (B, k), (B_STAR, 1)]), one()),
        (power_word(&[(A_STAR, j - 1), (B, k - 1)]), int(-1)),
    ])
}

pub fn build_heegaard() -> Presentation {
    use heegaard::*;
    let (p, q) = (RF::p(), RF::q());
    let mut b = PresentationBuilder::new("HEEGAARD");
    let (a, a_s) = b.star_pair("a", 1, Some(1));
    let (bb, b_s) = b.star_pair("b", 1, Some(-1));
    debug_assert_eq!((a, a_s, bb, b_s), (A, A_STAR, B, B_STAR));
    b.rule(
        "a*a",
        &[A_STAR, A],
        terms(vec![(&[A, A_STAR], q.clone()), (&[], one_minus(q.clone()))]),
    );
    b.rule(
        "b*b",
        &[B_STAR, B],
        terms(vec![(&[B, B_STAR], p.clone()), (&[], one_minus(p.clone()))]),
    );
    b.rule("ba", &[B, A], terms(vec![(&[A, B], one())]));
    b.rule("ba*", &[B, A_STAR], terms(vec![(&[A_STAR, B], one())]));
    b.rule("b*a", &[B_STAR, A], terms(vec![(&[A, B_STAR], one())]));
    b.rule(
        "b*a*",
        &[B_STAR, A_STAR],
        terms(vec![(&[A_STAR, B_STAR], one())]),
    );
    b.family(RuleFamily {
        name: "a a*^j b^k b*".to_string(),
        runs: vec![
            (A, Run::Exactly(1)),
            (A_STAR, Run::AtLeast(1)),
            (B, Run::AtLeast(1)),
            (B_STAR, Run::Exactly(1)),
        ],
        rhs: heegaard_family_rhs,
        check_bound: 3,
    });
    b.relation(
        "a*a - q aa* = 1 - q",
        terms(vec![
            (&[A_STAR, A], one()),
            (&[A, A_STAR], -&q),
            (&[], int(-1) + q.clone()),
        ]),
    );
    b.relation(
        "b*b - p bb* = 1 - p",
        terms(vec![
            (&[B_STAR, B], one()),
            (&[B, B_STAR], -&p),
            (&[], int(-1) + p.clone()),
        ]),
    );
    b.relation("ab = ba", terms(vec![(&[A, B], one()), (&[B, A], int(-1))]));
    b.relation(
        "a*b = ba*",
        terms(vec![(&[A_STAR, B], one()), (&[B, A_STAR], int(-1))]),
    );
    b.relation(
        "(1 - aa*)(1 - bb*) = 0",
        terms(vec![
            (&[], one()),
            (&[A, A_STAR], int(-1)),
            (&[B, B_STAR], int(-1)),
            (&[A, A_STAR, B, B_STAR], one()),
        ]),
    );
    b.build().expect("HEEGAARD presentation is valid")
}

pub fn build_qsu2() -> Presentation {
    use qsu2::*;
    let q = RF::q();
    let qi = q.pow(-1);
    let mut b = PresentationBuilder::new("QSU2");
    b.star_pair("alpha", 2, None);
    b.star_pair("gamma", 1, None);
    b.rule(
        "gamma alpha",
        &[GAMMA, ALPHA],
        terms(vec![(&[ALPHA, GAMMA], qi.clone())]),
    );
    b.rule(
        "gamma* alpha",
        &[GAMMA_STAR, ALPHA],
        terms(vec![(&[ALPHA, GAMMA_STAR], qi.clone())]),
    );
    b.rule(
        "gamma alpha*",
        &[GAMMA, ALPHA_STAR],
        terms(vec![(&[ALPHA_STAR, GAMMA], q.clone())]),
    );
    b.rule(
        "gamma* alpha*",
        &[GAMMA_STAR, ALPHA_STAR],
        terms(vec![(&[ALPHA_STAR, GAMMA_STAR], q.clone())]),
    );
    b.rule(
        "gamma* gamma",
        &[GAMMA_STAR, GAMMA],
        terms(vec![(&[GAMMA, GAMMA_STAR], one())]),
    );
    b.rule(
        "alpha* alpha",
        &[ALPHA_STAR, ALPHA],
        terms(vec![(&[], one()), (&[GAMMA, GAMMA_STAR], int(-1))]),
    );
    b.rule(
        "alpha alpha*",
        &[ALPHA, ALPHA_STAR],
        terms(vec![(&[], one()), (&[GAMMA, GAMMA_STAR], -&q.pow(2))]),
    );
    b.relation(
        "alpha gamma = q gamma alpha",
        terms(vec![(&[ALPHA, GAMMA], one()), (&[GAMMA, ALPHA], -&q)]),
    );
    b.relation(
        "alpha gamma* = q gamma* alpha",
        terms(vec![
            (&[ALPHA, GAMMA_STAR], one()),
            (&[GAMMA_STAR, ALPHA], -&q),
        ]),
    );
    b.relation(
        "gamma gamma* = gamma* gamma",
        terms(vec![
            (&[GAMMA, GAMMA_STAR], one()),
            (&[GAMMA_STAR, GAMMA], int(-1)),
        ]),
    );
    b.relation(
        "alpha* alpha + gamma* gamma = 1",
        terms(vec![
            (&[ALPHA_STAR, ALPHA], one()),
            (&[GAMMA_STAR, GAMMA], one()),
            (&[], int(-1)),
        ]),
    );
    b.relation(
        "alpha alpha* + q^2 gamma gamma* = 1",
        terms(vec![
            (&[ALPHA, ALPHA_STAR], one()),
            (&[GAMMA, GAMMA_STAR], q.pow(2)),
            (&[], int(-1)),
        ]),
    );
    b.build().expect("QSU2 presentation is valid")
}

/// `f0 f1^k f1* -> f1^k f1* - f1^(k-1) f0 + f0 f1^(k-1) f0`.
fn s2pq_family_rhs(lens: &[usize]) -> Terms {
    use s2pq::*;
    let k = lens[1];
    Terms::from_pairs([
        (power_word(&[(F1, k), (F1_STAR, 1)]), one()),
        (power_word(&[(F1, k - 1), (F0, 1)]), int(-1)),
        (power_word(&[(F0, 1), (F1, k - 1), (F0, 1)]), one()),
    ])
}

pub fn build_s2pq() -> Presentation {
    use s2pq::*;
    let (p, q) = (RF::p(), RF::q());
    let pi = p.pow(-1);
    let mut b = PresentationBuilder::new("S2PQ");
    b.symbol("f0", 1, None);
    b.star_pair("f1", 1, None);
    b.rule(
        "f1* f1",
        &[F1_STAR, F1],
        terms(vec![
            (&[F1, F1_STAR], q.clone()),
            (&[F0], &p - &q),
            (&[], one_minus(p.clone())),
        ]),
    );
    b.rule(
        "f1 f0",
        &[F1, F0],
        terms(vec![
            (&[F0, F1], pi.clone()),
            (&[F1], -&(&pi * &one_minus(p.clone()))),
        ]),
    );
    b.rule(
        "f1* f0",
        &[F1_STAR, F0],
        terms(vec![
            (&[F0, F1_STAR], p.clone()),
            (&[F1_STAR], one_minus(p.clone())),
        ]),
    );
    b.family(RuleFamily {
        name: "f0 f1^k f1*".to_string(),
        runs: vec![
            (F0, Run::Exactly(1)),
            (F1, Run::AtLeast(1)),
            (F1_STAR, Run::Exactly(1)),
        ],
        rhs: s2pq_family_rhs,
        check_bound: 4,
    });
    b.relation(
        "f1* f1 - q f1 f1* = (p - q) f0 + 1 - p",
        terms(vec![
            (&[F1_STAR, F1], one()),
            (&[F1, F1_STAR], -&q),
            (&[F0], &q - &p),
            (&[], &p - &one()),
        ]),
    );
    b.relation(
        "f0 f1 - p f1 f0 = (1 - p) f1",
        terms(vec![
            (&[F0, F1], one()),
            (&[F1, F0], -&p),
            (&[F1], &p - &one()),
        ]),
    );
    b.relation(
        "(1 - f0)(f1 f1* - f0) = 0",
        terms(vec![
            (&[F1, F1_STAR], one()),
            (&[F0], int(-1)),
            (&[F0, F1, F1_STAR], int(-1)),
            (&[F0, F0], one()),
        ]),
    );
    b.build().expect("S2PQ presentation is valid")
}

pub fn build_podles() -> Presentation {
    use podles::*;
    let (q, s) = (RF::q(), RF::s());
    let s2 = s.pow(2);
    let mut b = PresentationBuilder::new("PODLES");
    b.symbol("K", 1, None);
    b.star_pair("L", 1, None);
    b.rule("L K", &[L, K], terms(vec![(&[K, L], q.pow(2))]));
    b.rule("L* K", &[L_STAR, K], terms(vec![(&[K, L_STAR], q.pow(-2))]));
    b.rule(
        "L* L",
        &[L_STAR, L],
        terms(vec![
            (&[K, K], int(-1)),
            (&[K], one_minus(s2.clone())),
            (&[], s2.clone()),
        ]),
    );
    b.rule(
        "L L*",
        &[L, L_STAR],
        terms(vec![
            (&[K, K], -&q.pow(4)),
            (&[K], &one_minus(s2.clone()) * &q.pow(2)),
            (&[], s2.clone()),
        ]),
    );
    b.relation(
        "L K = q^2 K L",
        terms(vec![(&[L, K], one()), (&[K, L], -&q.pow(2))]),
    );
    b.relation(
        "L* L + K^2 = (1 - s^2) K + s^2",
        terms(vec![
            (&[L_STAR, L], one()),
            (&[K, K], one()),
            (&[K], &s2 - &one()),
            (&[], -&s2),
        ]),
    );
    b.relation(
        "L L* + q^4 K^2 = (1 - s^2) q^2 K + s^2",
        terms(vec![
            (&[L, L_STAR], one()),
            (&[K, K], q.pow(4)),
            (&[K], &(&s2 - &one()) * &q.pow(2)),
            (&[], -&s2),
        ]),
    );
    b.build().expect("PODLES presentation is valid")
}

macro_rules! shared {
    ($fn_name:ident, $builder:ident) => {
        pub fn $fn_name() -> Arc<Presentation> {
            static CELL: OnceLock<Arc<Presentation>> = OnceLock::new();
            CELL.get_or_init(|| Arc::new($builder())).clone()
        }
    };
}

shared!(heegaard_presentation, build_heegaard);
shared!(qsu2_presentation, build_qsu2);
shared!(s2pq_presentation, build_s2pq);
shared!(podles_presentation, build_podles);
