//! Double sine expansions with odd indices and their exact integral calculus.
//!
//! A [`SineExpansion`] stores `sum a_ij sin(i pi x) sin(j pi y)` over odd
//! `i, j <= max_index`. Products of such series are again finite
//! trigonometric series; [`PartialSumTable`] holds their coefficients on the
//! signed index lattice produced by the product-to-sum identities, and every
//! integral over the unit square reduces to sums of table entries.

mod io;
mod products;
mod table;

use std::f64::consts::PI;

use thiserror::Error;

use crate::interval::Interval;
use crate::scalar::Scalar;

pub use io::{read_csv, read_csv_file, write_csv, write_csv_file};
pub use products::{cube, product_to_sine, quartic_sum, sextic_sum, square_cosine, CosineExpansion};
pub use table::{signed_convolve, PartialSumTable};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("index ({i}, {j}) is even; only odd indices carry coefficients")]
    EvenIndex { i: usize, j: usize },
    #[error("index ({i}, {j}) outside 1..={max_index}")]
    OutOfRange { i: usize, j: usize, max_index: usize },
    #[error("product of {0} sine factors is a cosine series")]
    CosineProduct(usize),
    #[error("coefficient file line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("coefficient file: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// `sum a_ij sin(i pi x) sin(j pi y)` over odd `i, j <= max_index`.
///
/// Coefficients live in a dense `side x side` grid where slot `(a, b)` holds
/// the mode `(2a+1, 2b+1)`. Even modes are identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SineExpansion<T> {
    max_index: usize,
    side: usize,
    coeffs: Vec<T>,
}

/// Slot of an odd index.
#[inline]
fn slot(i: usize) -> usize {
    (i - 1) / 2
}

impl<T: Scalar> SineExpansion<T> {
    pub fn zeros(max_index: usize) -> Self {
        assert!(max_index >= 1, "an expansion needs at least the mode (1,1)");
        let side = max_index.div_ceil(2);
        Self {
            max_index,
            side,
            coeffs: vec![T::zero(); side * side],
        }
    }

    pub fn from_fn(max_index: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut out = Self::zeros(max_index);
        for a in 0..out.side {
            for b in 0..out.side {
                out.coeffs[a * out.side + b] = f(2 * a + 1, 2 * b + 1);
            }
        }
        out
    }

    /// `amplitude * sin(pi x) sin(pi y)`, stored with room up to `max_index`.
    pub fn fundamental(max_index: usize, amplitude: T) -> Self {
        let mut out = Self::zeros(max_index);
        out.coeffs[0] = amplitude;
        out
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// Largest odd index that can be nonzero.
    pub fn max_odd(&self) -> usize {
        2 * self.side - 1
    }

    /// Number of odd indices per axis.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of mode `(i, j)`; zero for even or out-of-range indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if i % 2 == 0 || j % 2 == 0 || i > self.max_odd() || j > self.max_odd() {
            return T::zero();
        }
        self.coeffs[slot(i) * self.side + slot(j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) -> Result<(), SpectralError> {
        if i == 0 || j == 0 || i > self.max_index || j > self.max_index {
            return Err(SpectralError::OutOfRange {
                i,
                j,
                max_index: self.max_index,
            });
        }
        if i % 2 == 0 || j % 2 == 0 {
            return Err(SpectralError::EvenIndex { i, j });
        }
        let s = self.side;
        self.coeffs[slot(i) * s + slot(j)] = value;
        Ok(())
    }

    /// All stored modes `(i, j, a_ij)` in row-major order.
    pub fn modes(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let s = self.side;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(n, &c)| (2 * (n / s) + 1, 2 * (n % s) + 1, c))
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(usize, usize, T) -> U) -> SineExpansion<U> {
        SineExpansion {
            max_index: self.max_index,
            side: self.side,
            coeffs: self.modes().map(|(i, j, c)| f(i, j, c)).collect(),
        }
    }

    /// Same function with the coordinate roles swapped.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.max_index, |i, j| self.get(j, i))
    }

    /// Copy with a different maximal index, truncating or zero-padding.
    pub fn resized(&self, max_index: usize) -> Self {
        Self::from_fn(max_index, |i, j| self.get(i, j))
    }

    pub fn scaled(&self, c: T) -> Self {
        self.map(|_, _, a| a * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.max_index.max(other.max_index);
        Self::from_fn(n, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.max_index.max(other.max_index);
        Self::from_fn(n, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == T::zero())
    }

    /// Non-rigorous pointwise value, for diagnostics and plots.
    pub fn eval_float(&self, x1: f64, x2: f64) -> f64 {
        let sx: Vec<f64> = (0..self.side).map(|a| ((2 * a + 1) as f64 * PI * x1).sin()).collect();
        let sy: Vec<f64> = (0..self.side).map(|b| ((2 * b + 1) as f64 * PI * x2).sin()).collect();
        let mut acc = 0.0;
        for a in 0..self.side {
            for b in 0..self.side {
                acc += self.coeffs[a * self.side + b].approx() * sx[a] * sy[b];
            }
        }
        acc
    }
}

impl SineExpansion<f64> {
    /// Exact interval copy of a float expansion.
    pub fn to_interval(&self) -> SineExpansion<Interval> {
        self.map(|_, _, c| Interval::point(c))
    }
}

impl SineExpansion<Interval> {
    pub fn mid(&self) -> SineExpansion<f64> {
        self.map(|_, _, c| c.mid())
    }
}

/// Sign of `sin(i pi / 2)` for odd `i`.
#[inline]
fn center_sign(i: usize) -> f64 {
    if (i / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Enclosure of `omega(1/2, 1/2)` using exact signs.
pub fn eval_center(omega: &SineExpansion<Interval>) -> Interval {
    omega
        .modes()
        .map(|(i, j, c)| c.mul_f64(center_sign(i) * center_sign(j)))
        .sum()
}

/// Sufficient test for `omega > 0` on the open square.
///
/// Uses `sin(i pi x) = U_i(x) sin(pi x)` with `U_i = 1 + 2 sum_{k=1}^{(i-1)/2} cos(2k pi x)`,
/// so `U_i` ranges in `[2 - i, i]`. `false` is inconclusive, not a disproof.
pub fn positivity_check(omega: &SineExpansion<Interval>) -> bool {
    let mut acc = Interval::ZERO;
    for (i, j, c) in omega.modes() {
        acc += c * dirichlet_range(i) * dirichlet_range(j);
    }
    acc.certainly_positive() && acc.is_finite()
}

/// Range enclosure of `sin(i pi x) / sin(pi x)` over `x in (0, 1)` for odd `i`.
fn dirichlet_range(i: usize) -> Interval {
    let n = i as f64;
    Interval::span(2.0 - n, n)
}

/// `{ ||omega||_{L2}^2, ||omega||_{H01}^2 }` with `<u,v> = (grad u, grad v) + sigma (u,v)`.
#[derive(Clone, Copy, Debug)]
pub struct QuadraticNorms {
    pub l2_sq: Interval,
    pub h01_sq: Interval,
}

/// Enclosure of `(i^2 + j^2) pi^2`.
pub fn laplace_eigenvalue(i: usize, j: usize) -> Interval {
    crate::interval::pi().sqr() * ((i * i + j * j) as f64)
}

pub fn quadratic_norms(omega: &SineExpansion<Interval>, sigma: Interval) -> QuadraticNorms {
    let mut l2 = Interval::ZERO;
    let mut h1 = Interval::ZERO;
    for (i, j, c) in omega.modes() {
        let c2 = c.sqr();
        l2 += c2;
        h1 += c2 * (laplace_eigenvalue(i, j) + sigma);
    }
    QuadraticNorms {
        l2_sq: l2 * 0.25,
        h01_sq: h1 * 0.25,
    }
}

/// Upper bound for `||omega||_inf`: the l1 norm of the coefficients.
pub fn sup_bound(omega: &SineExpansion<Interval>) -> Interval {
    let s: Interval = omega.modes().map(|(_, _, c)| c.abs()).sum();
    Interval::point(s.hi())
}
