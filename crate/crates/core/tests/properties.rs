use apollonian::config::{lift_ccm_to_acc, AccMatrix};
use apollonian::forms::{is_automorph, Form4};
use apollonian::group::{Generator, GroupWord};
use apollonian::moebius::{moebius_to_autqw, ExactChain, ExactOp, MoebiusElement};
use apollonian::rational::{frac, half, Rat};
use num_complex::Complex64;
use proptest::prelude::*;

fn any_word(max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec(0usize..8, 0..=max_len)
        .prop_map(|v| GroupWord(v.into_iter().map(|k| Generator::new(k % 4, k >= 4)).collect()))
}

fn apollonian_word(max_len: usize) -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec(0usize..4, 0..=max_len)
        .prop_map(|v| v.into_iter().map(|k| Generator::new(k, false)).collect())
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| frac(n, d))
}

/// A rational point on the unit circle from a Pythagorean parametrization.
fn unit_rat() -> impl Strategy<Value = (Rat, Rat)> {
    (-6i64..=6, 1i64..=6).prop_map(|(p, q)| {
        let n = p * p + q * q;
        (frac(q * q - p * p, n), frac(2 * p * q, n))
    })
}

fn exact_op() -> impl Strategy<Value = ExactOp> {
    prop_oneof![
        (small_rat(), small_rat()).prop_map(|(x, y)| ExactOp::Translate(x, y)),
        (1i64..=9, 1i64..=9).prop_map(|(n, d)| ExactOp::Dilate(frac(n, d))),
        unit_rat().prop_map(|(c, s)| ExactOp::Rotate(c, s)),
        Just(ExactOp::Conjugate),
        Just(ExactOp::Invert),
    ]
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn moebius() -> impl Strategy<Value = MoebiusElement> {
    (complex(), complex(), complex(), complex(), any::<bool>())
        .prop_filter("far from singular", |(a, b, c, d, _)| (a * d - b * c).norm() > 0.1)
        .prop_map(|(a, b, c, d, conj)| {
            let mut g = MoebiusElement::new(a, b, c, d).unwrap();
            g.conjugate = conj;
            g
        })
}

proptest! {
    #[test]
    fn words_stay_in_the_descartes_group(w in any_word(8)) {
        prop_assert!(w.matrix().is_descartes_automorph());
    }

    #[test]
    fn normal_form_is_a_normal_form_of_the_same_element(w in any_word(8)) {
        let nf = w.normal_form();
        prop_assert!(nf.is_normal_form());
        prop_assert!(nf.len() <= w.len());
        prop_assert_eq!(nf.normal_form(), nf.clone());
        prop_assert_eq!(nf.matrix(), w.matrix());
    }

    #[test]
    fn word_text_round_trips(w in any_word(8)) {
        prop_assert_eq!(w.to_string().parse::<GroupWord>().unwrap(), w);
    }

    #[test]
    fn orbit_configurations_lift_back(word in apollonian_word(6), flip in any::<bool>()) {
        let mut w = if flip { AccMatrix::strip() } else { AccMatrix::unit_gasket() };
        for g in word {
            w = AccMatrix::new(g.apply_left(w.matrix())).unwrap();
        }
        prop_assert_eq!(lift_ccm_to_acc(&w.curvature_center()).unwrap(), w.clone());
        for (i, r) in w.rows().iter().enumerate() {
            prop_assert!(r.is_valid());
            for s in w.rows().iter().skip(i + 1) {
                prop_assert_eq!(r.tangency_value(s), -half());
            }
        }
    }

    #[test]
    fn exact_chains_preserve_validity(ops in prop::collection::vec(exact_op(), 1..5)) {
        let chain = ExactChain(ops);
        let r = chain.action_matrix().unwrap();
        prop_assert!(is_automorph(&r, &Form4::wilker()));
        let image = chain.apply(&AccMatrix::unit_gasket()).unwrap();
        // Every step here keeps the total orientation.
        prop_assert_eq!(image.total_orientation(), 1);
    }

    #[test]
    fn pi_is_a_homomorphism(g in moebius(), h in moebius()) {
        let lhs = moebius_to_autqw(&g.compose(&h)).unwrap();
        let rhs = &moebius_to_autqw(&g).unwrap() * &moebius_to_autqw(&h).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) / (1.0 + rhs.max_abs()) < 1e-9);
    }
}
