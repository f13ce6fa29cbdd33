//! Coefficient types shared by the float solver and the verified code.

use std::fmt::Debug;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::interval::Interval;

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + Sum
{
    fn zero() -> Self;
    /// Exact embedding of a float.
    fn from_f64(x: f64) -> Self;
    /// Float approximation (the midpoint for intervals).
    fn approx(self) -> f64;
    fn scale(self, x: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn approx(self) -> f64 {
        self
    }
    #[inline]
    fn scale(self, x: f64) -> Self {
        self * x
    }
}

impl Scalar for Interval {
    #[inline]
    fn zero() -> Self {
        Interval::ZERO
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        Interval::point(x)
    }
    #[inline]
    fn approx(self) -> f64 {
        self.mid()
    }
    #[inline]
    fn scale(self, x: f64) -> Self {
        self.mul_f64(x)
    }
}
