use crate::scalar::Scalar;

use super::SineExpansion;

/// Values on a rectangle of the signed lattice with a fixed parity.
///
/// Entry `(k, l)` exists for `k` in `k_min..=k_max` and `l` in `l_min..=l_max`
/// with `k`, `l` congruent to the bounds modulo 2. Storage is dense with step
/// two, so only the populated parity class costs memory.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSumTable<T> {
    k_min: i64,
    k_max: i64,
    l_min: i64,
    l_max: i64,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> PartialSumTable<T> {
    pub fn zeros(k_min: i64, k_max: i64, l_min: i64, l_max: i64) -> Self {
        assert!(k_min <= k_max && l_min <= l_max);
        assert!((k_max - k_min) % 2 == 0 && (l_max - l_min) % 2 == 0);
        let rows = ((k_max - k_min) / 2 + 1) as usize;
        let cols = ((l_max - l_min) / 2 + 1) as usize;
        Self {
            k_min,
            k_max,
            l_min,
            l_max,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// The coefficient grid of a sine expansion, placed at positive `(i, j)`.
    pub fn from_expansion(a: &SineExpansion<T>) -> Self {
        let n = a.max_odd() as i64;
        let mut t = Self::zeros(1, n, 1, n);
        for (i, j, c) in a.modes() {
            *t.slot_mut(i as i64, j as i64) = c;
        }
        t
    }

    pub fn k_range(&self) -> (i64, i64) {
        (self.k_min, self.k_max)
    }

    pub fn l_range(&self) -> (i64, i64) {
        (self.l_min, self.l_max)
    }

    #[inline]
    fn index(&self, k: i64, l: i64) -> Option<usize> {
        if k < self.k_min || k > self.k_max || l < self.l_min || l > self.l_max {
            return None;
        }
        let dk = k - self.k_min;
        let dl = l - self.l_min;
        if dk % 2 != 0 || dl % 2 != 0 {
            return None;
        }
        Some((dk / 2) as usize * self.cols + (dl / 2) as usize)
    }

    /// Entry at `(k, l)`; zero off the lattice.
    #[inline]
    pub fn get(&self, k: i64, l: i64) -> T {
        match self.index(k, l) {
            Some(n) => self.data[n],
            None => T::zero(),
        }
    }

    #[inline]
    fn slot_mut(&mut self, k: i64, l: i64) -> &mut T {
        let n = self
            .index(k, l)
            .unwrap_or_else(|| panic!("({k}, {l}) is off the table lattice"));
        &mut self.data[n]
    }

    /// Populated lattice points `(k, l, value)` in row-major ascending order.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, T)> + '_ {
        let cols = self.cols;
        self.data.iter().enumerate().map(move |(n, &v)| {
            (
                self.k_min + 2 * (n / cols) as i64,
                self.l_min + 2 * (n % cols) as i64,
                v,
            )
        })
    }
}

/// `Y(k, l) = sum_{s, r = +-1} s r sum_{i, j} X(k - s i, l - r j) b_ij`.
///
/// Multiplying the product represented by `X` with one more sine factor adds
/// one signed index per axis; this is that step on the lattice. Accumulation
/// order is fixed so results are bit-reproducible.
pub fn signed_convolve<T: Scalar>(x: &PartialSumTable<T>, b: &SineExpansion<T>) -> PartialSumTable<T> {
    let n = b.max_odd() as i64;
    let mut y = PartialSumTable::zeros(x.k_min - n, x.k_max + n, x.l_min - n, x.l_max + n);
    let nonzero: Vec<(i64, i64, T)> = b
        .modes()
        .filter(|&(_, _, c)| c != T::zero())
        .map(|(i, j, c)| (i as i64, j as i64, c))
        .collect();
    for (k, l, v) in x.entries() {
        if v == T::zero() {
            continue;
        }
        for &(i, j, c) in &nonzero {
            let p = v * c;
            *y.slot_mut(k + i, l + j) += p;
            *y.slot_mut(k - i, l + j) -= p;
            *y.slot_mut(k + i, l - j) -= p;
            *y.slot_mut(k - i, l - j) += p;
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_indexing() {
        let mut t = PartialSumTable::<f64>::zeros(-3, 5, 1, 3);
        *t.slot_mut(-1, 3) = 2.0;
        assert_eq!(t.get(-1, 3), 2.0);
        assert_eq!(t.get(0, 3), 0.0);
        assert_eq!(t.get(7, 3), 0.0);
        let pts: Vec<_> = t.entries().filter(|e| e.2 != 0.0).collect();
        assert_eq!(pts, vec![(-1, 3, 2.0)]);
    }

    #[test]
    fn convolution_matches_direct_enumeration() {
        let a = SineExpansion::from_fn(3, |i, j| (i * 10 + j) as f64);
        let b = SineExpansion::from_fn(3, |i, j| 1.0 / (i + 2 * j) as f64);
        let h = signed_convolve(&PartialSumTable::from_expansion(&a), &b);
        for k in -4..=7i64 {
            for l in -4..=7i64 {
                let mut want = 0.0;
                for (i1, j1, x) in a.modes() {
                    for (i2, j2, y) in b.modes() {
                        for s in [-1i64, 1] {
                            for r in [-1i64, 1] {
                                if i1 as i64 + s * i2 as i64 == k && j1 as i64 + r * j2 as i64 == l {
                                    want += (s * r) as f64 * x * y;
                                }
                            }
                        }
                    }
                }
                assert!((h.get(k, l) - want).abs() < 1e-12, "({k},{l})");
            }
        }
    }
}
