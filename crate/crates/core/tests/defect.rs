mod common;

use std::f64::consts::PI;

use common::{midpoint_rule, positive_expansion};
use cubicbranch::defect::{defect_bounds, h_minus1_defect, l2_defect, DefectError};
use cubicbranch::{Interval, SineExpansion};
use proptest::prelude::*;

/// Pointwise residual `-Δω - λω - ω³`.
fn residual(w: &SineExpansion<f64>, lambda: f64) -> impl Fn(f64, f64) -> f64 + '_ {
    let lap = w.map(|i, j, c| c * (i * i + j * j) as f64 * PI * PI);
    move |x, y| {
        let v = w.eval_float(x, y);
        lap.eval_float(x, y) - lambda * v - v.powi(3)
    }
}

#[test]
fn single_mode_closed_form_for_twenty_pairs() {
    let l1 = 2.0 * PI * PI;
    for k in 0..20 {
        let a = 0.25 + 0.3 * k as f64;
        let lambda = 0.9 * k as f64;
        let w = SineExpansion::fundamental(1, Interval::point(a));
        let d = l2_defect(&w, Interval::point(lambda)).unwrap();
        let g = l1 - lambda;
        let want = (g * g * a * a / 4.0 - 2.0 * g * 9.0 * a.powi(4) / 64.0 + 25.0 * a.powi(6) / 256.0).sqrt();
        // the float closed form carries its own rounding error
        let slack = 1e-13 * want.max(1.0);
        assert!(
            d.lo() - slack <= want && want <= d.hi() + slack,
            "a={a} lambda={lambda}: {want} vs {d:?}"
        );
        assert!(d.width() <= 1e-11 * want.max(1.0));
    }
}

#[test]
fn unverified_positivity_is_refused() {
    let w = SineExpansion::from_fn(3, |i, j| if (i, j) == (3, 3) { 1.0 } else { 0.1 }).to_interval();
    assert!(matches!(
        l2_defect(&w, Interval::ONE),
        Err(DefectError::PositivityNotVerified)
    ));
}

#[test]
fn dual_norm_uses_poincare() {
    let d = h_minus1_defect(Interval::point(1.0), Interval::ONE).unwrap();
    assert!(d.contains(1.0 / (2.0 * PI * PI + 1.0).sqrt()));
    assert!(h_minus1_defect(Interval::new(-1.0, 1.0).unwrap(), Interval::ONE).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn encloses_quadrature_estimate(w in positive_expansion(5), lambda in 0.0f64..19.0) {
        let wi = w.to_interval();
        prop_assume!(cubicbranch::spectral::positivity_check(&wi));
        let d = l2_defect(&wi, Interval::point(lambda)).unwrap();
        let r = residual(&w, lambda);
        // degree at most 30 in each variable after squaring, so 200 points are exact up to rounding
        let quad = midpoint_rule(200, |x, y| r(x, y).powi(2)).sqrt();
        let budget = 1e-10 * quad.max(1.0);
        prop_assert!(d.lo() - budget <= quad && quad <= d.hi() + budget, "{quad} vs {d:?}");
    }

    #[test]
    fn dual_bound_is_strictly_smaller(w in positive_expansion(5), lambda in 0.0f64..19.0) {
        let wi = w.to_interval();
        prop_assume!(cubicbranch::spectral::positivity_check(&wi));
        let b = defect_bounds(&wi, Interval::point(lambda), Interval::ONE).unwrap();
        if b.delta_hat.hi() > 0.0 {
            prop_assert!(b.delta.hi() < b.delta_hat.hi());
        }
    }

    #[test]
    fn truncation_moves_defect_by_at_most_the_discarded_part(w in positive_expansion(5), lambda in 0.0f64..19.0) {
        let wi = w.to_interval();
        let t = w.resized(3);
        prop_assume!(cubicbranch::spectral::positivity_check(&wi) && cubicbranch::spectral::positivity_check(&t.to_interval()));
        let full = l2_defect(&wi, Interval::point(lambda)).unwrap().mid();
        let cut = l2_defect(&t.to_interval(), Interval::point(lambda)).unwrap().mid();
        let dropped = w.sub(&t.resized(5));
        let lin = residual(&dropped, lambda);
        let linear = midpoint_rule(200, |x, y| (lin(x, y) + dropped.eval_float(x, y).powi(3)).powi(2)).sqrt();
        let cubic = midpoint_rule(200, |x, y| {
            let (a, b) = (w.eval_float(x, y), t.eval_float(x, y));
            (a.powi(3) - b.powi(3)).powi(2)
        }).sqrt();
        prop_assert!(cut >= full - linear - cubic - 1e-9, "{cut} < {full} - {linear} - {cubic}");
    }
}
