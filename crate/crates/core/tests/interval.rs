mod common;

use common::{check_op, operand, q, OPS};
use cubicbranch::Interval;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(15_000))]

    #[test]
    fn every_op_contains_the_exact_result(a in operand(), b in operand()) {
        for op in 0..OPS.len() {
            if let Err(e) = check_op(op, a, b) {
                return Err(TestCaseError::fail(e));
            }
        }
    }
}

proptest! {
    #[test]
    fn widening_never_shrinks(a in operand(), b in operand(), grow in 0.0f64..1.0) {
        let wide = Interval::new(a.lo() - grow, a.hi() + grow).unwrap();
        prop_assert!((wide + b).encloses(&(a + b)));
        prop_assert!((wide - b).encloses(&(a - b)));
        prop_assert!((wide * b).encloses(&(a * b)));
        prop_assert!(wide.sqr().encloses(&a.sqr()));
        if let (Ok(x), Ok(y)) = (wide.checked_div(b), a.checked_div(b)) {
            prop_assert!(x.encloses(&y));
        }
    }

    #[test]
    fn repeated_evaluation_is_bit_identical(a in operand(), b in operand()) {
        let f = || ((a * b + a).sqr() - b).abs().sqrt().unwrap();
        let (x, y) = (f(), f());
        prop_assert_eq!(x.lo().to_bits(), y.lo().to_bits());
        prop_assert_eq!(x.hi().to_bits(), y.hi().to_bits());
    }

    #[test]
    fn roots_contain_exact_power(x in 1e-6f64..1e6) {
        let r = Interval::point(x).nth_root(6).unwrap();
        let (lo, hi) = (q(r.lo()), q(r.hi()));
        let pow6 = |t: &num_rational::BigRational| t * t * t * t * t * t;
        prop_assert!(pow6(&lo) <= q(x) && q(x) <= pow6(&hi));
    }
}

#[test]
fn pi_is_enclosed() {
    let p = cubicbranch::interval::pi();
    assert!(p.contains(std::f64::consts::PI));
    assert!(p.width() <= 8.0 * f64::EPSILON);
    // the double nearest pi lies below pi
    assert!(p.hi() > std::f64::consts::PI);
}

#[test]
fn division_by_zero_interval_is_an_error() {
    let z = Interval::new(-1.0, 1.0).unwrap();
    assert!(Interval::ONE.checked_div(z).is_err());
    assert!(Interval::new(2.0, 1.0).is_err());
    assert!(Interval::new(f64::NAN, 1.0).is_err());
}
