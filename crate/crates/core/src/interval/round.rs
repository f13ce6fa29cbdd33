//! Directed rounding on top of round-to-nearest.
//!
//! Each primitive computes the nearest result and recovers the exact rounding
//! error with an error-free transformation (TwoSum, FMA remainder). The result
//! is moved by one ulp only when the error points the wrong way, so exact
//! operations stay exact and inexact ones are rounded in the requested
//! direction. Below `TINY` the FMA error terms are no longer exact; there the
//! result is widened by one ulp unconditionally.

/// Below this magnitude FMA-based error terms may be inexact (2^-969).
const TINY: f64 = 2.004_168_360_008_973e-292;

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::INFINITY && a.is_finite() && b.is_finite() {
            f64::MAX
        } else {
            s
        };
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            f64::MIN
        } else {
            s
        };
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if !p.is_finite() {
        return if p == f64::INFINITY && a.is_finite() && b.is_finite() {
            f64::MAX
        } else {
            p
        };
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if !p.is_finite() {
        return if p == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            f64::MIN
        } else {
            p
        };
    }
    if p.abs() < TINY {
        return p.next_up();
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Sign of `a/b - fl(a/b)`, or `None` when it cannot be determined exactly.
#[inline]
fn div_error_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if q.abs() < TINY || a.abs() < 1e-270 || !b.is_finite() {
        return None;
    }
    let r = (-q).mul_add(b, a);
    Some(if r == 0.0 { 0.0 } else { r.signum() * b.signum() })
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if a == 0.0 {
        return 0.0;
    }
    if !q.is_finite() {
        return if q == f64::INFINITY && a.is_finite() {
            f64::MAX
        } else {
            q
        };
    }
    match div_error_sign(a, b, q) {
        Some(e) if e >= 0.0 => q,
        _ => q.next_down(),
    }
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if a == 0.0 {
        return 0.0;
    }
    if !q.is_finite() {
        return if q == f64::NEG_INFINITY && a.is_finite() {
            f64::MIN
        } else {
            q
        };
    }
    match div_error_sign(a, b, q) {
        Some(e) if e <= 0.0 => q,
        _ => q.next_up(),
    }
}

#[inline]
pub fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 || !s.is_finite() {
        return s;
    }
    if x < 1e-270 {
        return s.next_down().max(0.0);
    }
    // x - s^2 < 0 means s overshoots sqrt(x).
    if (-s).mul_add(s, x) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 || !s.is_finite() {
        return s;
    }
    if x < 1e-270 {
        return s.next_up();
    }
    if (-s).mul_add(s, x) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_operations_are_not_widened() {
        assert_eq!(add_down(1.0, 3.0), 4.0);
        assert_eq!(add_up(2.0, 4.0), 6.0);
        assert_eq!(mul_down(-1.0, 4.0), -4.0);
        assert_eq!(mul_up(2.0, 4.0), 8.0);
        assert_eq!(div_down(1.0, 4.0), 0.25);
        assert_eq!(sqrt_down(9.0), 3.0);
        assert_eq!(sqrt_up(4.0), 2.0);
    }

    #[test]
    fn inexact_operations_bracket() {
        let lo = div_down(1.0, 3.0);
        let hi = div_up(1.0, 3.0);
        assert!(lo < hi);
        assert_eq!(lo.next_up(), hi);
        // 3*lo < 1 < 3*hi, checked with exact FMA residuals.
        assert!(3.0f64.mul_add(lo, -1.0) < 0.0);
        assert!(3.0f64.mul_add(hi, -1.0) > 0.0);

        let a = 0.1;
        let b = 0.2;
        assert!(add_down(a, b) < add_up(a, b));
    }

    #[test]
    fn overflow_keeps_a_finite_lower_bound() {
        assert_eq!(add_down(f64::MAX, f64::MAX), f64::MAX);
        assert_eq!(add_up(f64::MAX, f64::MAX), f64::INFINITY);
        assert_eq!(mul_down(1e200, 1e200), f64::MAX);
    }

    #[test]
    fn underflow_is_bracketed() {
        let lo = mul_down(1e-200, 1e-200);
        let hi = mul_up(1e-200, 1e-200);
        assert!(lo <= 0.0 && hi > 0.0);
    }
}
