mod common;

use common::{brute_force_power, expansion, midpoint_rule, positive_expansion};
use cubicbranch::spectral::{
    cube, eval_center, positivity_check, product_to_sine, quadratic_norms, quartic_sum, read_csv, sextic_sum,
    sup_bound, write_csv,
};
use cubicbranch::{Interval, SineExpansion};
use proptest::prelude::*;

/// Overlap, and midpoints within `tol` relative to `max(1, |value|)`.
fn close(a: Interval, b: Interval, tol: f64) -> bool {
    a.overlaps(&b) && (a.mid() - b.mid()).abs() <= tol * a.mid().abs().max(1.0)
}

#[test]
fn single_mode_sextic_and_quartic() {
    let w = SineExpansion::fundamental(1, Interval::ONE);
    assert!(sextic_sum(&w).contains(25.0 / 256.0));
    assert!(quartic_sum(&w, None).contains(9.0 / 64.0));
    let w5 = SineExpansion::fundamental(5, Interval::ONE);
    assert!(sextic_sum(&w5).contains(25.0 / 256.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sextic_matches_enumeration(n in 1usize..=5, seed in expansion(5)) {
        let w = seed.resized(n).to_interval();
        let fast = sextic_sum(&w);
        let slow = brute_force_power(&w, 6);
        prop_assert!(close(fast, slow, 1e-11), "{fast:?} vs {slow:?}");
    }

    #[test]
    fn quartic_matches_enumeration(n in 1usize..=5, seed in expansion(5)) {
        let w = seed.resized(n).to_interval();
        let fast = quartic_sum(&w, None);
        let slow = brute_force_power(&w, 4);
        prop_assert!(close(fast, slow, 1e-11), "{fast:?} vs {slow:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_against_quadrature(w in expansion(7)) {
        let n = quadratic_norms(&w.to_interval(), Interval::ONE);
        let quad = midpoint_rule(64, |x, y| w.eval_float(x, y).powi(2));
        prop_assert!((n.l2_sq.mid() - quad).abs() <= 1e-9, "{:?} vs {quad}", n.l2_sq);
    }

    #[test]
    fn sextic_scales_like_sixth_power(w in expansion(5), c in -3.0f64..3.0) {
        let wi = w.to_interval();
        let scaled = wi.scaled(Interval::point(c));
        let want = sextic_sum(&wi) * Interval::point(c).powi(6);
        prop_assert!(sextic_sum(&scaled).overlaps(&want));
    }

    #[test]
    fn transpose_leaves_integrals_unchanged(w in expansion(5)) {
        let (a, b) = (w.to_interval(), w.transpose().to_interval());
        // summation order changes, so equality holds up to rounding only
        prop_assert!(close(sextic_sum(&a), sextic_sum(&b), 1e-13));
        prop_assert!(close(quartic_sum(&a, None), quartic_sum(&b, None), 1e-13));
        let h = |w| quadratic_norms(w, Interval::ONE).h01_sq;
        prop_assert!(close(h(&a), h(&b), 1e-12));
    }

    #[test]
    fn products_agree_pointwise(a in expansion(5), b in expansion(3), c in expansion(5), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let p = product_to_sine(&[&a, &b], &c).unwrap();
        let want = a.eval_float(x, y) * b.eval_float(x, y) * c.eval_float(x, y);
        prop_assert!((p.eval_float(x, y) - want).abs() <= 1e-11, "{} vs {want}", p.eval_float(x, y));
        let cu = cube(&a);
        prop_assert!((cu.eval_float(x, y) - a.eval_float(x, y).powi(3)).abs() <= 1e-11);
    }

    #[test]
    fn positivity_implies_positive_samples(w in positive_expansion(9)) {
        if positivity_check(&w.to_interval()) {
            for a in 0..101 {
                for b in 0..101 {
                    let (x, y) = ((a as f64 + 0.5) / 101.0, (b as f64 + 0.5) / 101.0);
                    prop_assert!(w.eval_float(x, y) > 0.0);
                }
            }
        }
    }

    #[test]
    fn center_and_sup_enclose_samples(w in expansion(7)) {
        let wi = w.to_interval();
        prop_assert!((eval_center(&wi).mid() - w.eval_float(0.5, 0.5)).abs() < 1e-13);
        let s = sup_bound(&wi).hi();
        for k in 0..50 {
            let t = (k as f64 + 0.5) / 50.0;
            prop_assert!(w.eval_float(t, 1.0 - t).abs() <= s);
        }
    }

    #[test]
    fn csv_round_trip(w in expansion(7)) {
        let mut buf = Vec::new();
        write_csv(&w, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, w);
    }
}

#[test]
fn non_positive_expansion_is_rejected() {
    let w = SineExpansion::from_fn(3, |i, j| {
        if (i, j) == (1, 1) {
            1.0
        } else if (i, j) == (3, 3) {
            -2.0
        } else {
            0.0
        }
    });
    // at the centre: 1 - 2 < 0
    assert!(w.eval_float(0.5, 0.5) < 0.0);
    assert!(!positivity_check(&w.to_interval()));
}

#[test]
fn sextic_cost_grows_at_most_like_n6() {
    let time = |n: usize| {
        let w = SineExpansion::from_fn(n, |i, j| 1.0 / (i * j) as f64).to_interval();
        let t = std::time::Instant::now();
        for _ in 0..3 {
            std::hint::black_box(sextic_sum(&w));
        }
        t.elapsed().as_secs_f64()
    };
    let (t8, t16) = (time(8), time(16));
    assert!(t16 <= 100.0 * t8.max(1e-4), "{t8} -> {t16}");
}
