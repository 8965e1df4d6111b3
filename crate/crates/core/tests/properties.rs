use mayer_core::dynamics::{orbit_product, periodic_point, reduced_matrix, word_trace, CfWord};
use mayer_core::operator::{contains_image, DiscDomain};
use mayer_core::specfun::{gamma, hurwitz_zeta};
use mayer_core::spectral::{det_finite, weight_from_trace, DetKind, OrbitWeight};
use mayer_core::ComplexPoint;
use proptest::prelude::*;

fn word(max_len: usize, max_digit: u32) -> impl Strategy<Value = CfWord> {
    prop::collection::vec(1..=max_digit, 1..=max_len).prop_map(|d| CfWord::new(d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_recurrence(re in 0.1f64..8.0, im in -15.0f64..15.0) {
        let z = ComplexPoint::new(re, im);
        let a = gamma(z + 1.0).unwrap();
        let b = z * gamma(z).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn hurwitz_shift(re in 1.2f64..6.0, im in -10.0f64..10.0, q in 0.05f64..5.0) {
        let w = ComplexPoint::new(re, im);
        let d = hurwitz_zeta(w, q).unwrap() - hurwitz_zeta(w, q + 1.0).unwrap();
        let want = (-w * q.ln()).exp();
        prop_assert!((d - want).norm() <= 1e-12 * want.norm().max(1.0));
    }

    #[test]
    fn rotation_keeps_trace_and_orbit_product(w in word(6, 9), k in 0usize..6) {
        let r = w.rotated(k % w.len());
        prop_assert_eq!(word_trace(&w).unwrap(), word_trace(&r).unwrap());
        let (a, b) = (orbit_product(&w).unwrap(), orbit_product(&r).unwrap());
        prop_assert!((a - b).abs() <= 1e-13 * a);
    }

    #[test]
    fn norm_orbit_duality(w in word(3, 12)) {
        let even = w.repeated(if w.len() % 2 == 0 { 1 } else { 2 });
        let p = orbit_product(&even).unwrap();
        prop_assert!((p * p * reduced_matrix(&even).unwrap().norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn periodic_point_has_the_word_as_expansion(w in word(3, 20)) {
        // digits of the continued fraction of x are the word, repeated; each
        // step of the Gauss map amplifies rounding by about d², so words stay short
        let mut x = periodic_point(&w).unwrap().to_f64();
        for &d in w.digits() {
            prop_assert_eq!((1.0 / x).floor() as u32, d);
            x = 1.0 / x - d as f64;
        }
        prop_assert!((x - periodic_point(&w).unwrap().to_f64()).abs() < 1e-6);
    }

    #[test]
    fn trace_weight_matches_orbit_product(w in word(4, 10), sigma in 0.6f64..3.0) {
        let s = ComplexPoint::new(sigma, 0.0);
        let t = word_trace(&w).unwrap() as f64;
        let p = orbit_product(&w).unwrap();
        let plain = weight_from_trace(s, w.len(), OrbitWeight::Plain, t);
        prop_assert!((plain.re - p.powf(2.0 * sigma)).abs() <= 1e-12 * plain.re);
        let sign = if w.len() % 2 == 0 { 1.0 } else { -1.0 };
        let traced = weight_from_trace(s, w.len(), OrbitWeight::Trace, t);
        prop_assert!((traced.re - p.powf(2.0 * sigma) / (1.0 - sign * p * p)).abs() <= 1e-12 * traced.re);
    }

    #[test]
    fn image_discs_nest_below_golden_ratio(r in 1.0f64..1.618, n in 1u64..100_000) {
        prop_assert!(contains_image(n, r).unwrap());
        prop_assert!(DiscDomain::new(r).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn determinant_factorises(re in 0.6f64..3.0, im in -12.0f64..12.0) {
        let s = ComplexPoint::new(re, im);
        let minus = det_finite(s, DetKind::Minus, 24).unwrap().value;
        let plus = det_finite(s, DetKind::Plus, 24).unwrap().value;
        let square = det_finite(s, DetKind::MinusSquare, 24).unwrap().value;
        prop_assert!((square - minus * plus).norm() <= 1e-9 * square.norm().max(1.0));
    }

    #[test]
    fn determinant_conjugate_symmetry(re in 0.6f64..3.0, im in 0.0f64..12.0) {
        let s = ComplexPoint::new(re, im);
        let a = det_finite(s, DetKind::MinusSquare, 24).unwrap().value;
        let b = det_finite(s.conj(), DetKind::MinusSquare, 24).unwrap().value;
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
    }
}
