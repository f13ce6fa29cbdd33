use nalgebra::DMatrix;

use super::{Interval, IntervalError};

/// Dense row-major matrix of intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Interval::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Point matrix from floats; the entries are taken as exact.
    pub fn from_points(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| Interval::point(m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Interval] {
        &self.entries
    }

    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mid())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(Interval::is_finite)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Replaces `(i,j)` and `(j,i)` by their intersection.
    ///
    /// Valid when both entries enclose the same real number, which holds for
    /// enclosures of a symmetric matrix computed along different paths.
    pub fn symmetrize(&mut self) -> Result<(), IntervalError> {
        assert_eq!(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..i {
                let a = self[(i, j)];
                let b = self[(j, i)];
                let c = a
                    .intersect(&b)
                    .ok_or(IntervalError::InvalidEndpoints { lo: a.lo, hi: b.hi })?;
                self[(i, j)] = c;
                self[(j, i)] = c;
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: Interval) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Interval::ZERO;
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, j)];
            }
            acc
        })
    }

    /// `self * x` for an exact float matrix `x`.
    pub fn mul_points(&self, x: &DMatrix<f64>) -> Self {
        assert_eq!(self.cols, x.nrows());
        Self::from_fn(self.rows, x.ncols(), |i, j| {
            let mut acc = Interval::ZERO;
            for k in 0..self.cols {
                acc += self[(i, k)].mul_f64(x[(k, j)]);
            }
            acc
        })
    }

    /// `x^T * self * x` for an exact float matrix `x`, symmetrized.
    pub fn congruence(&self, x: &DMatrix<f64>) -> Self {
        let ax = self.mul_points(x);
        let mut out = Self::from_fn(x.ncols(), x.ncols(), |i, j| {
            let mut acc = Interval::ZERO;
            for k in 0..x.nrows() {
                acc += ax[(k, j)].mul_f64(x[(k, i)]);
            }
            acc
        });
        if self.is_symmetric() {
            // Both triangles enclose the same entry of the symmetric product.
            out.symmetrize().expect("congruence of a symmetric matrix");
        }
        out
    }

    /// Interval Cholesky factor `L` with `A = L L^T` for every symmetric `A` in `self`.
    ///
    /// Success proves that every symmetric matrix enclosed by `self` is
    /// positive definite. Returns `None` when a pivot cannot be shown positive.
    pub fn cholesky(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)].sqr();
            }
            if !(d.lo() > 0.0) || !d.is_finite() {
                return None;
            }
            let ljj = d.sqrt().ok()?;
            l[(j, j)] = ljj;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s.checked_div(ljj).ok()?;
            }
        }
        Some(l)
    }

    /// Solves `L X = B` for lower-triangular `L = self`.
    pub fn forward_solve(&self, b: &Self) -> Result<Self, IntervalError> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let mut x = Self::zeros(n, b.cols);
        for c in 0..b.cols {
            for i in 0..n {
                let mut s = b[(i, c)];
                for k in 0..i {
                    s -= self[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s.checked_div(self[(i, i)])?;
            }
        }
        Ok(x)
    }
}

impl std::ops::Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntervalMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.entries[i * self.cols + j]
    }
}
