use super::*;
use crate::paramfield::RationalFunction as RF;
use proptest::prelude::*;

fn h() -> Arc<Presentation> {
    heegaard_presentation()
}

fn g() -> Arc<Presentation> {
    qsu2_presentation()
}

fn poly(pres: &Arc<Presentation>, s: &str) -> NCPolynomial {
    NCPolynomial::parse(pres, s).unwrap()
}

fn assert_nf(pres: &Arc<Presentation>, input: &str, expected: &str) {
    let x = poly(pres, input).normal_form();
    let y = poly(pres, expected);
    assert_eq!(x, y, "{input} -> {x}, expected {y}");
}

#[test]
fn free_product() {
    let p = h();
    assert_eq!(
        nc_mul(&poly(&p, "a"), &poly(&p, "b")).unwrap(),
        NCPolynomial::word(&p, Word(vec![heegaard::A, heegaard::B]))
    );
    assert_eq!(
        nc_mul(&poly(&p, "a + b"), &poly(&p, "a*")).unwrap(),
        poly(&p, "a a* + b a*")
    );
    let x = poly(&p, "q*a b* - 3");
    assert_eq!(nc_mul(&NCPolynomial::one(&p), &x).unwrap(), x);
}

#[test]
fn presentation_mismatch() {
    let x = NCPolynomial::one(&h());
    let y = NCPolynomial::one(&g());
    assert_eq!(nc_mul(&x, &y), Err(NcError::PresentationMismatch));
}

#[test]
fn heegaard_rules() {
    let p = h();
    assert_nf(&p, "a* a", "q a a* + 1 - q");
    assert_nf(&p, "a a* b b*", "a a* + b b* - 1");
    assert_nf(&p, "b a", "a b");
    assert_nf(&p, "b* a*", "a* b*");
}

#[test]
fn qsu2_rules() {
    let p = g();
    assert_nf(&p, "alpha* alpha", "1 - gamma gamma*");
    assert_nf(&p, "alpha alpha*", "1 - q^2 gamma gamma*");
    assert_nf(&p, "gamma alpha", "q^-1 alpha gamma");
    assert_nf(&p, "gamma* gamma", "gamma gamma*");
}

#[test]
fn star_examples() {
    let p = h();
    assert_eq!(star(&poly(&p, "a b")), poly(&p, "b* a*"));
    let x = poly(&p, "q*a a* b + 2");
    assert_eq!(star(&star(&x)), x);
    let p = g();
    let k = poly(
        &p,
        "s*(gamma alpha + alpha* gamma*) + (1 - s^2) gamma* gamma",
    );
    assert!(k.star().equals_in_algebra(&k).unwrap());
}

#[test]
fn degree_examples() {
    let p = h();
    assert_eq!(degree(&poly(&p, "a b")), Ok(0));
    assert_eq!(degree(&poly(&p, "a")), Ok(1));
    assert_eq!(degree(&poly(&p, "a + b")), Err(NcError::NotHomogeneous));
    assert_eq!(degree(&poly(&g(), "alpha")), Err(NcError::NoGrading));
}

#[test]
fn shipped_presentations_are_confluent() {
    for p in [h(), g(), s2pq_presentation(), podles_presentation()] {
        let bad = check_confluence(&p);
        assert!(bad.is_empty(), "{}: {:?}", p.name(), bad);
    }
}

#[test]
fn toy_system_rejected() {
    let mut b = PresentationBuilder::new("toy");
    let a = b.symbol("a", 1, None);
    let bb = b.symbol("b", 1, None);
    b.rule("ba", &[bb, a], Terms::word(Word(vec![a, bb])));
    b.rule("ab", &[a, bb], Terms::word(Word(vec![bb, a])));
    assert!(matches!(b.build(), Err(NcError::TerminationViolation(_))));
}

#[test]
fn ungraded_rule_rejected() {
    let mut b = PresentationBuilder::new("toy");
    let (a, a_s) = b.star_pair("a", 1, Some(1));
    b.rule("a*a", &[a_s, a], Terms::word(Word(vec![a])));
    assert!(matches!(b.build(), Err(NcError::GradingViolation(_))));
}

#[test]
fn base_relations_hold_in_total_spaces() {
    let hp = h();
    let f0 = poly(&hp, "b b*");
    let f1 = poly(&hp, "a b");
    let sp = s2pq_presentation();
    for (name, rel) in sp.relations() {
        let img = substitute(
            &hp,
            rel,
            &[
                f0.terms().clone(),
                f1.terms().clone(),
                f1.star().terms().clone(),
            ],
        );
        assert!(hp.normal_form(&img).is_zero(), "{name}");
    }
    let qp = g();
    let k = poly(
        &qp,
        "s*(gamma alpha + alpha* gamma*) + (1 - s^2) gamma* gamma",
    );
    let l = poly(&qp, "s*(alpha^2 - q gamma*^2) + (1 - s^2) alpha gamma*");
    let pp = podles_presentation();
    for (name, rel) in pp.relations() {
        let img = substitute(
            &qp,
            rel,
            &[
                k.terms().clone(),
                l.terms().clone(),
                l.star().terms().clone(),
            ],
        );
        assert!(qp.normal_form(&img).is_zero(), "{name}");
    }
}

fn substitute(target: &Arc<Presentation>, rel: &Terms, images: &[Terms]) -> Terms {
    let mut out = Terms::zero();
    for (w, c) in rel.iter() {
        let mut t = Terms::one();
        for &s in w.symbols() {
            t = target.mul_nf(&t, &images[s as usize]);
        }
        out.add_scaled(&t, c);
    }
    out
}

#[test]
fn textual_form_is_deterministic() {
    let p = h();
    let x = poly(&p, "a* a").normal_form();
    assert_eq!(x.to_string(), "(1 - q) + q*a a*");
    assert_eq!(poly(&p, &x.to_string()), x);
}

fn word_strategy(n_syms: u8, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..n_syms, 0..=max_len).prop_map(Word)
}

fn coeff_strategy() -> impl Strategy<Value = RF> {
    prop_oneof![
        (-3i64..=3).prop_map(RF::from_int),
        Just(RF::q()),
        Just(RF::p()),
        Just(RF::s()),
        Just(&RF::one() - &RF::q()),
    ]
}

fn poly_strategy(max_len: usize) -> impl Strategy<Value = Terms> {
    proptest::collection::vec((word_strategy(4, max_len), coeff_strategy()), 0..4)
        .prop_map(Terms::from_pairs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_idempotent(x in poly_strategy(5)) {
        for p in [h(), g()] {
            let n = p.normal_form(&x);
            prop_assert_eq!(p.normal_form(&n), n.clone());
            for (w, _) in n.iter() {
                prop_assert!(p.is_normal_word(w));
            }
        }
    }

    #[test]
    fn normal_form_is_multiplicative(x in poly_strategy(3), y in poly_strategy(3)) {
        for p in [h(), g()] {
            let lhs = p.normal_form(&x.mul(&y));
            let rhs = p.normal_form(&p.normal_form(&x).mul(&p.normal_form(&y)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn heegaard_grading_preserved(w in word_strategy(4, 6)) {
        let p = h();
        let d = p.word_grade(&w).unwrap();
        for (u, _) in p.normal_word(&w).iter() {
            prop_assert_eq!(p.word_grade(u).unwrap(), d);
        }
    }

    #[test]
    fn qsu2_normal_words_are_pbw(w in word_strategy(4, 6)) {
        use qsu2::*;
        let p = g();
        for (u, _) in p.normal_word(&w).iter() {
            let s = u.symbols();
            let has_a = s.contains(&ALPHA);
            let has_as = s.contains(&ALPHA_STAR);
            prop_assert!(!(has_a && has_as));
            // alpha-letters first, then gamma^m gamma*^n
            let first_g = s.iter().position(|&x| x == GAMMA || x == GAMMA_STAR).unwrap_or(s.len());
            prop_assert!(s[first_g..].iter().all(|&x| x == GAMMA || x == GAMMA_STAR));
            prop_assert!(s.windows(2).all(|v| !(v[0] == GAMMA_STAR && v[1] == GAMMA)));
        }
    }

    #[test]
    fn star_is_involutive_and_antimultiplicative(x in poly_strategy(3), y in poly_strategy(3)) {
        for p in [h(), g()] {
            prop_assert_eq!(p.star_terms(&p.star_terms(&x)), x.clone());
            let lhs = p.normal_form(&p.star_terms(&x.mul(&y)));
            let rhs = p.normal_form(&p.star_terms(&y).mul(&p.star_terms(&x)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn base_rewrite_rules_hold_in_total_space() {
    let hp = h();
    let f0 = poly(&hp, "b b*");
    let f1 = poly(&hp, "a b");
    let images = [
        f0.terms().clone(),
        f1.terms().clone(),
        f1.star().terms().clone(),
    ];
    let sp = s2pq_presentation();
    for r in sp.all_check_rules() {
        let mut rel = Terms::word(r.lhs.clone());
        rel.add_scaled(&r.rhs, &RF::from_int(-1));
        assert!(
            hp.normal_form(&substitute(&hp, &rel, &images)).is_zero(),
            "{}",
            r.name
        );
    }
}
