use super::*;
use crate::ncalg::{podles_presentation, s2pq_presentation};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn exact(n: i64, d: i64) -> SValue {
    SValue::Exact(rat(n, d))
}

fn s2(t: &str) -> NCPolynomial {
    NCPolynomial::parse(&s2pq_presentation(), t).unwrap()
}

fn pod(t: &str) -> NCPolynomial {
    NCPolynomial::parse(&podles_presentation(), t).unwrap()
}

fn rf(t: &str) -> RF {
    t.parse().unwrap()
}

#[test]
fn shipped_representations_satisfy_relations() {
    for rep in [rho1(), rho2(), sigma1(), sigma2(), pi_minus(), pi_plus()] {
        let n = rep_check(&rep).unwrap_or_else(|e| panic!("{e}"));
        assert!(n > 0);
    }
}

#[test]
fn wrong_weight_is_caught() {
    let bad = ShiftRepresentation::new(
        "bad",
        Base::P,
        &s2pq_presentation(),
        vec![
            (
                "f0",
                Generator::Diagonal(XPoly::from_coeffs([(0, RF::one()), (1, -RF::one())])),
            ),
            (
                "f1",
                Generator::Shift(
                    Direction::Up,
                    XPoly::from_coeffs([(0, RF::one()), (1, -RF::q())]),
                ),
            ),
        ],
    )
    .unwrap();
    assert!(matches!(
        rep_check(&bad),
        Err(FredholmError::RelationViolated { .. })
    ));
}

#[test]
fn restrictions_match() {
    restriction_check().unwrap();
}

#[test]
fn lambda_vanishes_at_bottom() {
    assert!(lambda_boundary_holds());
    // λ_-² at x = 1: s²(1 - (1 - s²) - s²)
    assert_eq!(lambda_minus_sq().eval(&RF::one()), RF::zero());
    assert_eq!(
        lambda_plus_sq(),
        XPoly::from_coeffs([(0, rf("s^2")), (1, rf("1 - s^2")), (2, rf("-1"))])
    );
}

#[test]
fn diagonal_examples() {
    let w = s2("f1* f1").terms().iter().next().unwrap().0.clone();
    let d = diagonal(&w, &rho1()).unwrap().unwrap();
    assert_eq!(
        d.coeffs,
        XPoly::from_coeffs([(0, RF::one()), (1, -RF::p())])
    );
    assert!(d.corrections.is_empty());
    let k = Word::letter(crate::ncalg::podles::K);
    let d = diagonal(&k, &pi_minus()).unwrap().unwrap();
    assert_eq!(d.coeffs, XPoly::from_coeffs([(1, rf("-s^2"))]));
    let a = Word::letter(crate::ncalg::heegaard::A);
    assert!(diagonal(&a, &sigma2()).unwrap().is_none());
    // f1 f1* vanishes on e_0
    let w = Word(vec![crate::ncalg::s2pq::F1, crate::ncalg::s2pq::F1_STAR]);
    let d = diagonal(&w, &rho1()).unwrap().unwrap();
    assert!(d.value_at(0).is_zero());
    assert_eq!(d.value_at(2), rf("1 - p^2"));
}

#[test]
fn trace_pairing_examples() {
    let v = trace_pairing(&s2("f0"), &rho2(), &rho1()).unwrap();
    assert_eq!(v, rf("1/(1 - p)"));
    let v = trace_pairing(&pod("K"), &pi_minus(), &pi_plus()).unwrap();
    assert_eq!(v, rf("-(1 + s^2)/(1 - q^2)"));
    assert!(trace_pairing(&s2("1"), &rho2(), &rho1()).unwrap().is_zero());
    let two = ShiftRepresentation::new(
        "double",
        Base::Q,
        &s2pq_presentation(),
        vec![
            ("f0", Generator::Scalar(RF::from_int(2))),
            (
                "f1",
                Generator::Shift(
                    Direction::Up,
                    XPoly::from_coeffs([(0, RF::one()), (1, -RF::q())]),
                ),
            ),
        ],
    )
    .unwrap();
    assert!(matches!(
        trace_pairing(&s2("f0"), &two, &rho1()),
        Err(FredholmError::NotSummable { .. })
    ));
    assert_eq!(
        trace_pairing(&pod("K"), &rho2(), &rho1()),
        Err(FredholmError::PresentationMismatch)
    );
}

#[test]
fn family1_anchor() {
    let r = exact_pairing(Family::Heegaard, -1, &SValue::Symbolic).unwrap();
    let x = NCPolynomial::parse(&heegaard_presentation(), "q + (1 - q) a a*").unwrap();
    assert_eq!(r.trace_element, x.to_string());
    // σ₂ diagonal 1 - (1 - q) q^k, σ₁ diagonal 1
    let d2 = diagonal_terms(x.terms(), &sigma2()).unwrap();
    for k in 0..4 {
        assert_eq!(
            d2.value_at(k),
            &RF::one() - &(&(RF::one() - RF::q()) * &RF::q().pow(k as i32))
        );
    }
    let d1 = diagonal_terms(x.terms(), &sigma1()).unwrap();
    assert_eq!(d1.coeffs, XPoly::one());
    assert_eq!(r.pairing, RF::from_int(-1));
}

#[test]
fn chern_numbers_small() {
    for mu in -2i64..=2 {
        assert_eq!(
            chern_number(Family::Heegaard, mu, &SValue::Symbolic),
            Ok(mu.into())
        );
        assert_eq!(
            chern_number(Family::Podles, mu, &exact(1, 2)),
            Ok(mu.into()),
            "mu={mu}"
        );
    }
    assert_eq!(
        chern_number(Family::Podles, 1, &SValue::Symbolic),
        Ok(1.into())
    );
    assert_eq!(
        chern_number(Family::Podles, 0, &SValue::Symbolic),
        Ok(0.into())
    );
}

#[test]
fn rank_pairings() {
    for mu in -3i64..=3 {
        assert!(rank_pairing(Family::Heegaard, mu, &SValue::Symbolic)
            .unwrap()
            .is_one());
    }
    assert!(rank_pairing(Family::Podles, 0, &SValue::Symbolic)
        .unwrap()
        .is_one());
    assert!(rank_pairing(Family::Podles, 2, &SValue::Symbolic)
        .unwrap()
        .is_one());
    assert!(rank_pairing(Family::Podles, -1, &exact(1, 3))
        .unwrap()
        .is_one());
}

#[test]
fn numeric_examples() {
    let params = NumericParams {
        p: rat(1, 3),
        q: rat(1, 2),
        s: rat(1, 2),
    };
    let r = numeric_pairing(Family::Heegaard, -1, &params, 64).unwrap();
    assert!((r.estimate + 1.0).abs() < 1e-12, "{r:?}");
    assert!(r.tail_bound < 1e-15);
    let r = numeric_pairing(Family::Podles, 1, &params, 64).unwrap();
    assert!((r.estimate - 1.0).abs() < 1e-10, "{r:?}");
    let r = numeric_pairing(Family::Heegaard, 0, &params, 64).unwrap();
    assert_eq!(r.estimate, 0.0);
    let bad = NumericParams {
        q: rat(3, 2),
        ..params
    };
    assert!(matches!(
        numeric_pairing(Family::Podles, 1, &bad, 8),
        Err(FredholmError::ParameterOutOfRange(_))
    ));
}

#[test]
fn numeric_agrees_with_exact_on_random_points() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for family in [Family::Heegaard, Family::Podles] {
        for _ in 0..5 {
            let params = NumericParams {
                p: rat(rng.gen_range(1..9), 10),
                q: rat(rng.gen_range(1..9), 10),
                s: rat(rng.gen_range(0..=4), 4),
            };
            for mu in -2i64..=2 {
                let s = SValue::Exact(params.s.clone());
                let exact = exact_pairing(family, mu, &s).unwrap().pairing;
                let r = numeric_pairing(family, mu, &params, 64).unwrap();
                let diff = (r.estimate - eval_at(&exact, &params)).abs();
                assert!(
                    diff <= r.tail_bound + 1e-9,
                    "{family} mu={mu} {params:?} {r:?}"
                );
            }
        }
    }
}

fn s2pq_word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u8..3, 0..4).prop_map(Word)
}

fn podles_word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u8..3, 0..4).prop_map(Word)
}

/// Elements of the form `f0 · w` are trace class for (ρ₂, ρ₁) only when their
/// constants cancel; the properties are checked where both sides are summable.
fn pairing_or_none(
    x: &NCPolynomial,
    plus: &ShiftRepresentation,
    minus: &ShiftRepresentation,
) -> Option<RF> {
    trace_pairing(&x.normal_form(), plus, minus).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pairing_is_linear(x in s2pq_word(), y in s2pq_word(), c in -3i64..=3) {
        let pres = s2pq_presentation();
        let px = NCPolynomial::word(&pres, x);
        let py = NCPolynomial::word(&pres, y);
        let sum = NCPolynomial::new(&pres, px.terms().add(&py.terms().scale(&RF::from_int(c))));
        let (a, b, ab) = (
            pairing_or_none(&px, &rho2(), &rho1()),
            pairing_or_none(&py, &rho2(), &rho1()),
            pairing_or_none(&sum, &rho2(), &rho1()),
        );
        if let (Some(a), Some(b), Some(ab)) = (a, b, ab) {
            prop_assert_eq!(ab, &a + &(&b * &RF::from_int(c)));
        }
    }

    #[test]
    fn rho_pairing_is_a_trace(x in s2pq_word(), y in s2pq_word()) {
        let pres = s2pq_presentation();
        let xy = NCPolynomial::word(&pres, x.concat(&y));
        let yx = NCPolynomial::word(&pres, y.concat(&x));
        if let (Some(a), Some(b)) = (pairing_or_none(&xy, &rho2(), &rho1()), pairing_or_none(&yx, &rho2(), &rho1())) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn pi_pairing_is_a_trace(x in podles_word(), y in podles_word()) {
        let pres = podles_presentation();
        let xy = NCPolynomial::word(&pres, x.concat(&y));
        let yx = NCPolynomial::word(&pres, y.concat(&x));
        if let (Some(a), Some(b)) = (pairing_or_none(&xy, &pi_minus(), &pi_plus()), pairing_or_none(&yx, &pi_minus(), &pi_plus())) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn normal_form_does_not_change_diagonal(w in proptest::collection::vec(0u8..4, 0..5)) {
        let pres = heegaard_presentation();
        let x = NCPolynomial::word(&pres, Word(w));
        for rep in [sigma1(), sigma2()] {
            let raw = diagonal_terms(x.terms(), &rep).unwrap();
            let nf = diagonal_terms(x.normal_form().terms(), &rep).unwrap();
            for k in 0..6 {
                prop_assert_eq!(raw.value_at(k), nf.value_at(k));
            }
        }
    }
}
