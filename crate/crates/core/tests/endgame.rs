use std::f64::consts::PI;

use cubicbranch::branch::EmbeddingPack;
use cubicbranch::endgame::{l6_norm, sup_error_bound, SupNormPack};
use cubicbranch::{Interval, SineExpansion};
use proptest::prelude::*;

fn packs() -> (SupNormPack, EmbeddingPack) {
    (
        SupNormPack::unit_square().unwrap(),
        EmbeddingPack::unit_square(Interval::ONE).unwrap(),
    )
}

#[test]
fn single_mode_example_term_by_term() {
    let (p, e) = packs();
    let omega = SineExpansion::fundamental(1, Interval::point(3.0));
    let l6 = l6_norm(&omega).unwrap();
    let want_l6 = 3.0 * (25.0f64 / 256.0).powf(1.0 / 6.0);
    assert!((l6.mid() - want_l6).abs() < 1e-12);

    let (alpha, dhat, lb) = (0.01, 0.01, 18.5);
    let got = sup_error_bound(
        Interval::point(alpha),
        Interval::point(dhat),
        l6,
        Interval::point(lb),
        &p,
        &e,
    )
    .unwrap();
    let (c1, c2) = (p.c1_hat.mid(), p.c2_hat.mid());
    let c6 = e.c6.mid();
    let linear = (1.0 + lb * c2) / (2.0 * PI * PI + 1.0).sqrt() + c1;
    let cubic = 3.0 * c6 * c2 * (want_l6.powi(2) + c6 * want_l6 * alpha + (c6 * alpha).powi(2) / 3.0);
    let want = (linear + cubic) * alpha + c2 * dhat;
    assert!(
        got.lo() <= want * (1.0 + 1e-12) && want <= got.hi() * (1.0 + 1e-12),
        "{got:?} vs {want}"
    );
    // the two leading terms the example singles out
    assert!((c1 * alpha - 0.0094).abs() < 1e-4 && (c2 * dhat - 0.0018).abs() < 1e-4);
}

proptest! {
    #[test]
    fn nondecreasing_in_each_input(
        a in 0.0f64..0.2, d in 0.0f64..0.05, l in 0.0f64..5.0,
        da in 0.0f64..0.1, dd in 0.0f64..0.1, dl in 0.0f64..1.0,
    ) {
        let (p, e) = packs();
        let f = |a: f64, d: f64, l: f64| {
            sup_error_bound(Interval::point(a), Interval::point(d), Interval::point(l), Interval::point(18.5), &p, &e)
                .unwrap()
                .hi()
        };
        let base = f(a, d, l);
        prop_assert!(f(a + da, d, l) >= base);
        prop_assert!(f(a, d + dd, l) >= base);
        prop_assert!(f(a, d, l + dl) >= base);
    }
}
