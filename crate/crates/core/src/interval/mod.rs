//! Closed floating-point intervals with outward rounding.
//!
//! Every verified quantity in this crate is an [`Interval`]. Arithmetic is
//! emulated directed rounding (see [`round`]): results enclose the exact real
//! result of the operation applied to any reals drawn from the operands.
//! Endpoints that become non-finite are not silently propagated into proofs;
//! callers check [`Interval::ensure_finite`] at every verified checkpoint.

mod matrix;
pub mod round;

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use matrix::IntervalMatrix;

/// Name of the active rounding strategy, recorded in certificates.
///
/// Stable Rust (and wasm) gives no control over the FPU rounding mode, so the
/// only strategy is round-to-nearest plus error-free-transformation correction.
pub const ROUNDING_MODE: &str = "nearest+eft-directed";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("division by an interval containing zero: {0}")]
    DivisionByZero(Interval),
    #[error("root of an interval with a negative part: {0}")]
    NegativeRoot(Interval),
    #[error("invalid interval endpoints [{lo}, {hi}]")]
    InvalidEndpoints { lo: f64, hi: f64 },
    #[error("non-finite enclosure for {context}: {value}")]
    NonFinite { context: String, value: Interval },
}

/// A closed interval `[lo, hi]` of reals with `lo <= hi`.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(IntervalError::InvalidEndpoints { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval `[x, x]`. Panics on NaN.
    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN cannot be an interval endpoint");
        Self { lo: x, hi: x }
    }

    /// Smallest interval containing both `a` and `b`.
    pub fn span(a: f64, b: f64) -> Self {
        assert!(!a.is_nan() && !b.is_nan());
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Approximate midpoint; always inside the interval.
    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound for the width.
    pub fn width(&self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    /// Upper bound for the radius around [`Interval::mid`].
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        round::sub_up(self.hi, m).max(round::sub_up(m, self.lo))
    }

    /// Magnitude `max |x|`.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Mignitude `min |x|`.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Returns `self` or a [`IntervalError::NonFinite`] naming `context`.
    pub fn ensure_finite(self, context: &str) -> Result<Self, IntervalError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(IntervalError::NonFinite {
                context: context.to_string(),
                value: self,
            })
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Every element of `self` is strictly below every element of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi < 0.0
    }

    /// `[0, hi]`: the set of values between zero and the upper bound.
    pub fn upper_bound(&self) -> Interval {
        Interval {
            lo: 0.0_f64.min(self.hi),
            hi: self.hi,
        }
    }

    /// Multiplication by a float, cheaper than a full interval product.
    #[inline]
    pub fn mul_f64(self, x: f64) -> Interval {
        if !self.is_finite() || !x.is_finite() {
            return Self::ENTIRE;
        }
        if x >= 0.0 {
            Interval {
                lo: round::mul_down(self.lo, x),
                hi: round::mul_up(self.hi, x),
            }
        } else {
            Interval {
                lo: round::mul_down(self.hi, x),
                hi: round::mul_up(self.lo, x),
            }
        }
    }

    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval {
                lo: round::mul_down(self.lo, self.lo),
                hi: round::mul_up(self.hi, self.hi),
            }
        } else if self.hi <= 0.0 {
            Interval {
                lo: round::mul_down(self.hi, self.hi),
                hi: round::mul_up(self.lo, self.lo),
            }
        } else {
            Interval {
                lo: 0.0,
                hi: round::mul_up(self.lo, self.lo).max(round::mul_up(self.hi, self.hi)),
            }
        }
    }

    /// `self^n` for a natural exponent.
    pub fn powi(self, n: u32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        if n % 2 == 0 {
            let base = self.abs();
            pow_nonneg(base, n)
        } else if self.lo >= 0.0 {
            pow_nonneg(self, n)
        } else if self.hi <= 0.0 {
            -pow_nonneg(-self, n)
        } else {
            // Odd powers are increasing, so the endpoints map to the endpoints.
            let lo = -pow_nonneg(Interval::point(-self.lo), n).hi;
            let hi = pow_nonneg(Interval::point(self.hi), n).hi;
            Interval { lo, hi }
        }
    }

    pub fn recip(self) -> Result<Interval, IntervalError> {
        Interval::ONE.checked_div(self)
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZero(rhs));
        }
        if !self.is_finite() || !rhs.is_finite() {
            return Ok(Self::ENTIRE);
        }
        let cands = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = cands
            .iter()
            .map(|&(a, b)| round::div_down(a, b))
            .fold(f64::INFINITY, f64::min);
        let hi = cands
            .iter()
            .map(|&(a, b)| round::div_up(a, b))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval { lo, hi })
    }

    /// Division by a nonzero float.
    pub fn div_f64(self, x: f64) -> Result<Interval, IntervalError> {
        self.checked_div(Interval::point(x))
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::NegativeRoot(self));
        }
        Ok(Interval {
            lo: round::sqrt_down(self.lo),
            hi: round::sqrt_up(self.hi),
        })
    }

    pub fn fourth_root(self) -> Result<Interval, IntervalError> {
        self.sqrt()?.sqrt()
    }

    /// `self^(1/n)` for `n >= 1`.
    pub fn nth_root(self, n: u32) -> Result<Interval, IntervalError> {
        assert!(n >= 1);
        if self.lo < 0.0 {
            return Err(IntervalError::NegativeRoot(self));
        }
        match n {
            1 => return Ok(self),
            2 => return self.sqrt(),
            4 => return self.fourth_root(),
            _ => {}
        }
        if !self.is_finite() {
            return Ok(Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        let inv = 1.0 / n as f64;
        let mut lo = self.lo.powf(inv);
        while lo > 0.0 && Interval::point(lo).powi(n).hi > self.lo {
            lo = lo.next_down();
        }
        let mut hi = self.hi.powf(inv);
        while Interval::point(hi).powi(n).lo < self.hi {
            hi = hi.next_up();
        }
        Ok(Interval { lo: lo.max(0.0), hi })
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval {
                lo: 0.0,
                hi: self.mag(),
            }
        }
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }
}

fn pow_nonneg(base: Interval, mut n: u32) -> Interval {
    debug_assert!(base.lo >= 0.0);
    let mut acc = Interval::ONE;
    let mut b = base;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * b;
        }
        n >>= 1;
        if n > 0 {
            b = b.sqr();
        }
    }
    acc
}

/// Rigorous enclosures of `pi`, `lambda_1 = 2 pi^2` and `lambda_2 = 5 pi^2`.
#[derive(Clone, Copy, Debug)]
pub struct Constants {
    pub pi: Interval,
    pub lambda1: Interval,
    pub lambda2: Interval,
}

/// `f64::consts::PI` is the double just below pi.
pub fn pi() -> Interval {
    Interval {
        lo: std::f64::consts::PI,
        hi: std::f64::consts::PI.next_up(),
    }
}

pub fn constants() -> Constants {
    let pi = pi();
    let pi_sq = pi.sqr();
    Constants {
        pi,
        lambda1: pi_sq * 2.0,
        lambda2: pi_sq * 5.0,
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::add_down(self.lo, rhs.lo),
            hi: round::add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::sub_down(self.lo, rhs.hi),
            hi: round::sub_up(self.hi, rhs.lo),
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        if !self.is_finite() || !rhs.is_finite() {
            return Interval::ENTIRE;
        }
        if self.is_point() {
            return rhs.mul_f64(self.lo);
        }
        if rhs.is_point() {
            return self.mul_f64(rhs.lo);
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = round::mul_down(a, c)
            .min(round::mul_down(a, d))
            .min(round::mul_down(b, c))
            .min(round::mul_down(b, d));
        let hi = round::mul_up(a, c)
            .max(round::mul_up(a, d))
            .max(round::mul_up(b, c))
            .max(round::mul_up(b, d));
        Interval { lo, hi }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self.mul_f64(rhs)
    }
}

impl AddAssign for Interval {
    #[inline]
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    #[inline]
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

impl MulAssign for Interval {
    #[inline]
    fn mul_assign(&mut self, rhs: Interval) {
        *self = *self * rhs;
    }
}

impl Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}

impl PartialOrd for Interval {
    /// Certain ordering only: `Some` when the intervals are disjoint or equal points.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self == other && self.is_point() {
            Some(Ordering::Equal)
        } else if self.certainly_lt(other) {
            Some(Ordering::Less)
        } else if other.certainly_lt(self) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(d)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn integer_endpoint_arithmetic_is_exact() {
        assert_eq!(iv(1.0, 2.0) + iv(3.0, 4.0), iv(4.0, 6.0));
        assert_eq!(iv(-1.0, 2.0) * iv(3.0, 4.0), iv(-4.0, 8.0));
        assert_eq!(iv(1.0, 2.0) - iv(3.0, 4.0), iv(-3.0, -1.0));
        assert_eq!(-iv(1.0, 2.0), iv(-2.0, -1.0));
        assert_eq!(iv(-2.0, 3.0).powi(2), iv(0.0, 9.0));
        assert_eq!(iv(-2.0, 3.0).powi(3), iv(-8.0, 27.0));
    }

    #[test]
    fn one_third_is_tight() {
        let third = Interval::ONE.checked_div(Interval::point(3.0)).unwrap();
        assert!(!third.is_point());
        assert!(third.hi() <= third.lo().next_up().next_up());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let err = Interval::ONE.checked_div(iv(-1.0, 1.0)).unwrap_err();
        assert!(matches!(err, IntervalError::DivisionByZero(_)));
        assert!(Interval::ONE.checked_div(Interval::ZERO).is_err());
    }

    #[test]
    fn elementary_functions() {
        assert_eq!(iv(4.0, 9.0).sqrt().unwrap(), iv(2.0, 3.0));
        let r2 = Interval::point(2.0).sqrt().unwrap();
        assert!(r2.lo().next_up().next_up() >= r2.hi());
        assert!(r2.lo() * r2.lo() <= 2.0 && r2.hi() * r2.hi() >= 2.0);
        assert_eq!(iv(-3.0, 1.0).abs(), iv(0.0, 3.0));
        assert!(iv(-1.0, 4.0).sqrt().is_err());
        assert_eq!(iv(16.0, 81.0).fourth_root().unwrap(), iv(2.0, 3.0));
        let c = iv(8.0, 27.0).nth_root(3).unwrap();
        assert!(c.contains(2.0) && c.contains(3.0));
        assert!(c.lo() > 2.0 - 1e-14 && c.hi() < 3.0 + 1e-14);
        assert_eq!(iv(1.0, 5.0).max(iv(2.0, 3.0)), iv(2.0, 5.0));
        assert_eq!(iv(1.0, 5.0).min(iv(2.0, 3.0)), iv(1.0, 3.0));
    }

    #[test]
    fn pi_and_dirichlet_eigenvalues() {
        let c = constants();
        assert_eq!(c.pi.lo(), 3.141592653589793);
        assert!(c.pi.hi() > c.pi.lo());
        assert!(c.pi.lo().next_up() == c.pi.hi());
        assert!(c.lambda1.contains(19.739208802178716));
        assert!(c.lambda2.contains(49.34802200544679));
        assert!(c.lambda1.width() < 1e-13);
    }

    #[test]
    fn serde_as_pair() {
        let x = iv(-0.5, 2.25);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[-0.5,2.25]");
        let y: Interval = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(serde_json::from_str::<Interval>("[2.0,1.0]").is_err());
    }

    #[test]
    fn non_finite_is_reported() {
        let big = Interval::point(f64::MAX);
        let r = (big + big).ensure_finite("overflow test");
        assert!(matches!(r, Err(IntervalError::NonFinite { .. })));
    }
}
