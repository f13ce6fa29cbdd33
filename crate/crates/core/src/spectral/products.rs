use crate::interval::Interval;
use crate::scalar::Scalar;

use super::table::{signed_convolve, PartialSumTable};
use super::{SineExpansion, SpectralError};

/// `sum c_kl cos(k pi x) cos(l pi y)` over even `k, l` in `0..=max_index`.
///
/// This is the form of a product of two odd sine expansions, e.g. `omega^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CosineExpansion<T> {
    max_index: usize,
    side: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> CosineExpansion<T> {
    pub fn zeros(max_index: usize) -> Self {
        let side = max_index / 2 + 1;
        Self {
            max_index,
            side,
            coeffs: vec![T::zero(); side * side],
        }
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> T {
        if k % 2 != 0 || l % 2 != 0 || k > self.max_index || l > self.max_index {
            return T::zero();
        }
        self.coeffs[(k / 2) * self.side + l / 2]
    }

    fn add_at(&mut self, k: usize, l: usize, v: T) {
        let s = self.side;
        self.coeffs[(k / 2) * s + l / 2] += v;
    }

    pub fn modes(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let s = self.side;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(n, &c)| (2 * (n / s), 2 * (n % s), c))
    }

    pub fn eval_float(&self, x1: f64, x2: f64) -> f64 {
        use std::f64::consts::PI;
        self.modes()
            .map(|(k, l, c)| c.approx() * (k as f64 * PI * x1).cos() * (l as f64 * PI * x2).cos())
            .sum()
    }

    /// `int_Omega self * sin(a1 pi x) sin(a2 pi y) * sin(b1 pi x) sin(b2 pi y)`.
    ///
    /// Only the cosine modes `|a - b|` and `a + b` per axis contribute, so each
    /// entry costs at most four lookups.
    pub fn sine_gram(&self, a: (usize, usize), b: (usize, usize)) -> T {
        let (xs, nx) = gram_weights(a.0, b.0);
        let (ys, ny) = gram_weights(a.1, b.1);
        let mut acc = T::zero();
        for &(k, wk) in &xs[..nx] {
            for &(l, wl) in &ys[..ny] {
                acc += self.get(k, l).scale(wk * wl);
            }
        }
        acc
    }

    /// Sine coefficients of `self * phi`.
    pub fn mul_sine(&self, phi: &SineExpansion<T>) -> SineExpansion<T> {
        // cos(k t) sin(i t) = (sin((i + k) t) + sin((i - k) t)) / 2
        let n = self.max_index + phi.max_odd();
        let mut out = SineExpansion::zeros(n);
        let mut acc = vec![T::zero(); out.side() * out.side()];
        let side = out.side();
        for (k, l, c) in self.modes() {
            if c == T::zero() {
                continue;
            }
            for (i, j, p) in phi.modes() {
                if p == T::zero() {
                    continue;
                }
                let v = (c * p).scale(0.25);
                for (x, sx) in fold_sine(i as i64 + k as i64, i as i64 - k as i64) {
                    for (y, sy) in fold_sine(j as i64 + l as i64, j as i64 - l as i64) {
                        let slot = (x - 1) / 2 * side + (y - 1) / 2;
                        acc[slot] += v.scale(sx * sy);
                    }
                }
            }
        }
        for (slot, v) in acc.into_iter().enumerate() {
            let (i, j) = (2 * (slot / side) + 1, 2 * (slot % side) + 1);
            out.set(i, j, v).expect("odd index within range");
        }
        out
    }
}

/// The two sine modes `sin(p t) + sin(q t)` rewritten with positive indices.
fn fold_sine(p: i64, q: i64) -> impl Iterator<Item = (usize, f64)> {
    [p, q].into_iter().filter(|&m| m != 0).map(|m| {
        if m > 0 {
            (m as usize, 1.0)
        } else {
            ((-m) as usize, -1.0)
        }
    })
}

/// `int_0^1 cos(k pi t) sin(a pi t) sin(b pi t) dt` as `(k, weight)` pairs.
fn gram_weights(a: usize, b: usize) -> ([(usize, f64); 2], usize) {
    let d = a.abs_diff(b);
    if d == 0 {
        ([(0, 0.5), (a + b, -0.25)], 2)
    } else {
        ([(d, 0.25), (a + b, -0.25)], 2)
    }
}

/// Per-axis prefactor of a product of `n` sines after `n - 1` product-to-sum steps.
fn axis_prefactor(n: usize) -> f64 {
    let mut c = 1.0;
    for r in 1..n {
        c *= if r % 2 == 1 { -0.5 } else { 0.5 };
    }
    c
}

/// Table of `prod factors` on the signed lattice, without prefactor.
fn product_table<T: Scalar>(factors: &[&SineExpansion<T>]) -> PartialSumTable<T> {
    let mut t = PartialSumTable::from_expansion(factors[0]);
    for f in &factors[1..] {
        t = signed_convolve(&t, f);
    }
    t
}

fn table_to_cosine<T: Scalar>(t: &PartialSumTable<T>, prefactor: f64) -> CosineExpansion<T> {
    let (k_lo, k_hi) = t.k_range();
    let (l_lo, l_hi) = t.l_range();
    let n = k_lo.abs().max(k_hi).max(l_lo.abs()).max(l_hi) as usize;
    let mut out = CosineExpansion::zeros(n);
    for (k, l, v) in t.entries() {
        if v != T::zero() {
            out.add_at(k.unsigned_abs() as usize, l.unsigned_abs() as usize, v.scale(prefactor));
        }
    }
    out
}

fn table_to_sine<T: Scalar>(t: &PartialSumTable<T>, prefactor: f64) -> SineExpansion<T> {
    let n = t.k_range().1.max(t.l_range().1).max(1) as usize;
    SineExpansion::from_fn(n, |i, j| {
        let (k, l) = (i as i64, j as i64);
        (t.get(k, l) - t.get(-k, l) - t.get(k, -l) + t.get(-k, -l)).scale(prefactor)
    })
}

/// Exact sine coefficients of `(prod factors) * phi`.
///
/// The total number of sine factors must be odd; an empty factor list returns
/// `phi` unchanged.
pub fn product_to_sine<T: Scalar>(
    factors: &[&SineExpansion<T>],
    phi: &SineExpansion<T>,
) -> Result<SineExpansion<T>, SpectralError> {
    if factors.len() % 2 != 0 {
        return Err(SpectralError::CosineProduct(factors.len() + 1));
    }
    if factors.is_empty() {
        return Ok(phi.clone());
    }
    let mut all = Vec::with_capacity(factors.len() + 1);
    all.push(phi);
    all.extend_from_slice(factors);
    let c = axis_prefactor(all.len());
    Ok(table_to_sine(&product_table(&all), c * c))
}

/// `omega^2` as a cosine expansion.
pub fn square_cosine<T: Scalar>(omega: &SineExpansion<T>) -> CosineExpansion<T> {
    let c = axis_prefactor(2);
    table_to_cosine(&product_table(&[omega, omega]), c * c)
}

/// `omega^3` as a sine expansion with indices up to three times those of `omega`.
pub fn cube<T: Scalar>(omega: &SineExpansion<T>) -> SineExpansion<T> {
    product_to_sine(&[omega, omega], omega).expect("three factors")
}

/// `int_Omega psi * omega^3` where `psi = sum w(i,j) a_ij sin sin` (or `omega` itself).
///
/// Both pair products are kept on the signed lattice:
/// `psi omega = (1/4) sum H1(k,l) cos cos` and likewise `omega^2` with `H2`, and
/// `int cos(k t) cos(k' t) = (delta_{k-k'} + delta_{k+k'}) / 2` leaves
/// `(1/64) sum H1(k,l) [H2(k,l) + H2(-k,l) + H2(k,-l) + H2(-k,-l)]`.
pub fn quartic_sum(omega: &SineExpansion<Interval>, weights: Option<&dyn Fn(usize, usize) -> Interval>) -> Interval {
    let psi = match weights {
        Some(w) => omega.map(|i, j, c| c * w(i, j)),
        None => omega.clone(),
    };
    let h1 = signed_convolve(&PartialSumTable::from_expansion(&psi), omega);
    let h2 = signed_convolve(&PartialSumTable::from_expansion(omega), omega);
    let mut acc = Interval::ZERO;
    for (k, l, v) in h1.entries() {
        if v == Interval::ZERO {
            continue;
        }
        let s = h2.get(k, l) + h2.get(-k, l) + h2.get(k, -l) + h2.get(-k, -l);
        acc += v * s;
    }
    acc * (1.0 / 64.0)
}

/// `int_Omega omega^6`.
///
/// The first three factors give `F(k,l)` on the signed lattice, i.e. the
/// signed triple sums over `i1 + s2 i2 + s3 i3 = k`. The last three factors
/// contribute the same sums at `-k` with the sign of the leading factor folded
/// in, which is `S(k,l) = F(k,l) - F(-k,l) - F(k,-l) + F(-k,-l)`. With the
/// `1/32` prefactor per axis this is `(1/1024) sum F(k,l) S(k,l)`.
pub fn sextic_sum(omega: &SineExpansion<Interval>) -> Interval {
    let f = product_table(&[omega, omega, omega]);
    let mut acc = Interval::ZERO;
    for (k, l, v) in f.entries() {
        if v == Interval::ZERO {
            continue;
        }
        let s = v - f.get(-k, l) - f.get(k, -l) + f.get(-k, -l);
        acc += v * s;
    }
    acc * (1.0 / 1024.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: f64) -> Interval {
        Interval::point(x)
    }

    #[test]
    fn single_mode_integrals() {
        let w = SineExpansion::fundamental(1, iv(1.0));
        assert!(quartic_sum(&w, None).contains(9.0 / 64.0));
        assert!(sextic_sum(&w).contains(25.0 / 256.0));
        assert_eq!(sextic_sum(&w), iv(25.0 / 256.0));
        let z = SineExpansion::<Interval>::zeros(5);
        assert_eq!(quartic_sum(&z, None), Interval::ZERO);
        assert_eq!(sextic_sum(&z), Interval::ZERO);
    }

    #[test]
    fn cube_of_fundamental() {
        // sin^3 t = (3 sin t - sin 3t) / 4 per axis.
        let w = SineExpansion::fundamental(1, 1.0);
        let c = cube(&w);
        assert_eq!(c.get(1, 1), 9.0 / 16.0);
        assert_eq!(c.get(1, 3), -3.0 / 16.0);
        assert_eq!(c.get(3, 3), 1.0 / 16.0);
    }

    #[test]
    fn square_of_fundamental() {
        // sin^2 t = (1 - cos 2t) / 2 per axis.
        let w = SineExpansion::fundamental(1, 1.0);
        let s = square_cosine(&w);
        assert_eq!(s.get(0, 0), 0.25);
        assert_eq!(s.get(2, 0), -0.25);
        assert_eq!(s.get(2, 2), 0.25);
        assert_eq!(s.sine_gram((1, 1), (1, 1)), 9.0 / 64.0);
    }

    #[test]
    fn odd_factor_count_is_rejected() {
        let w = SineExpansion::fundamental(1, 1.0);
        assert!(product_to_sine(&[&w], &w).is_err());
        assert_eq!(product_to_sine(&[], &w).unwrap(), w);
    }
}
