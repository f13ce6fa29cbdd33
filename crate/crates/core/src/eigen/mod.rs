//! Two-sided bounds for `<u, v>_{H¹₀} = κ ∫ W u v` on reflection-symmetric functions.
//!
//! Upper bounds come from Rayleigh-Ritz, lower bounds from Lehmann's method,
//! and the a priori bound Lehmann needs comes from a coefficient homotopy
//! that starts at a constant weight with explicitly known spectrum.

mod homotopy;
mod pencil;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalError, IntervalMatrix};
use crate::spectral::{laplace_eigenvalue, square_cosine, sup_bound, CosineExpansion, SineExpansion};

pub use homotopy::{base_spectrum, grid_point_eigen, homotopy_bound, HomotopyOutcome, HomotopyStep};
pub use pencil::enclose_pencil;

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("{0} is not verifiably positive definite")]
    NotPositiveDefinite(String),
    #[error("non-finite entries in {0}")]
    NonFinite(String),
    #[error("Rayleigh-Ritz bound {upper} for index {m} is not below rho = {rho}")]
    RhoTooSmall { m: usize, upper: f64, rho: f64 },
    #[error("Lehmann pencil has only {found} certainly negative eigenvalues, {needed} needed")]
    TooFewNegative { found: usize, needed: usize },
    #[error("homotopy chain broke at s = {s}: {reason}")]
    HomotopyBroken { s: f64, reason: String },
    #[error("eigenvalue 1 is not separated: upper(kappa_1) = {kappa1_upper}, lower(kappa_2) = {kappa2_lower}")]
    NotSeparated { kappa1_upper: f64, kappa2_lower: f64 },
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// `W^(s) = σ + λ + 3((1 - s) c₀ + s ω²)`.
#[derive(Clone, Debug)]
pub struct WeightFunction {
    pub sigma: Interval,
    pub lambda: Interval,
    pub omega_sq: CosineExpansion<Interval>,
    omega_sq_float: CosineExpansion<f64>,
    /// Constant upper bound for `ω²`.
    pub c0: f64,
    pub s: f64,
}

impl WeightFunction {
    /// Target weight `s = 1`, with `c₀` the squared l1 bound of `ω`.
    pub fn new(omega: &SineExpansion<Interval>, lambda: Interval, sigma: Interval) -> Self {
        let c0 = sup_bound(omega).sqr().hi();
        Self {
            sigma,
            lambda,
            omega_sq: square_cosine(omega),
            omega_sq_float: square_cosine(&omega.mid()),
            c0,
            s: 1.0,
        }
    }

    /// Weight with `ω = 0` and a given `c₀`, i.e. a constant for every `s`.
    pub fn constant(lambda: Interval, sigma: Interval, c0: f64) -> Self {
        let zero = SineExpansion::<Interval>::zeros(1);
        Self {
            sigma,
            lambda,
            omega_sq: square_cosine(&zero),
            omega_sq_float: square_cosine(&zero.mid()),
            c0,
            s: 1.0,
        }
    }

    pub fn at(&self, s: f64) -> Self {
        assert!((0.0..=1.0).contains(&s));
        Self { s, ..self.clone() }
    }

    /// `σ + λ + 3 (1 - s) c₀`.
    pub fn constant_part(&self) -> Interval {
        let tail = (Interval::ONE - Interval::point(self.s)) * Interval::point(self.c0) * 3.0;
        self.sigma + self.lambda + tail
    }

    fn constant_part_float(&self) -> f64 {
        self.sigma.mid() + self.lambda.mid() + 3.0 * (1.0 - self.s) * self.c0
    }
}

/// Odd-odd sine modes with both indices at most `n`, row-major.
pub fn symmetric_modes(n: usize) -> Vec<(usize, usize)> {
    let odd: Vec<usize> = (1..=n).step_by(2).collect();
    odd.iter().flat_map(|&i| odd.iter().map(move |&j| (i, j))).collect()
}

fn h01_diag(mode: (usize, usize), sigma: Interval) -> Interval {
    laplace_eigenvalue(mode.0, mode.1) + sigma
}

/// Float Galerkin version of the eigenproblem on `modes`, for trial functions.
///
/// Returns eigenvalues ascending and the coefficient vectors as columns.
pub fn discrete_eigenpairs(w: &WeightFunction, modes: &[(usize, usize)]) -> (Vec<f64>, DMatrix<f64>) {
    let n = modes.len();
    let sigma = w.sigma.mid();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let m_diag: Vec<f64> = modes
        .iter()
        .map(|&(i, j)| 0.25 * ((i * i + j * j) as f64 * pi2 + sigma))
        .collect();
    let c = w.constant_part_float();
    // S = M^{-1/2} N M^{-1/2} has eigenvalues 1/κ.
    let s = DMatrix::from_fn(n, n, |r, q| {
        let mut v = 3.0 * w.s * w.omega_sq_float.sine_gram(modes[r], modes[q]);
        if r == q {
            v += 0.25 * c;
        }
        v / (m_diag[r] * m_diag[q]).sqrt()
    });
    let eig = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let kappa = order.iter().map(|&k| 1.0 / eig.eigenvalues[k]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, q| eig.eigenvectors[(r, order[q])] / m_diag[r].sqrt());
    (kappa, vecs)
}

/// Interval matrices of the Rayleigh-Ritz and Lehmann procedures.
#[derive(Clone, Debug)]
pub struct RitzData {
    /// `<φ_i, φ_j>_{H¹₀}`
    pub a1: IntervalMatrix,
    /// `∫ W φ_i φ_j`
    pub a0: IntervalMatrix,
    /// `<Φ⁻¹(W φ_i), Φ⁻¹(W φ_j)>_{H¹₀}` with `Φ = -Δ + σ`
    pub a2: IntervalMatrix,
}

impl RitzData {
    pub fn m(&self) -> usize {
        self.a1.rows()
    }
}

/// Assembles the matrices for trial functions `Σ_b phi[b, r] s_b` over `modes`.
///
/// `W φ` is a finite sine series, and `Φ⁻¹` divides mode `k` by
/// `(k₁² + k₂²) π² + σ`, so `A2` is computed exactly in the sine basis.
pub fn assemble_coefficients(
    modes: &[(usize, usize)],
    phi: &DMatrix<f64>,
    w: &WeightFunction,
) -> Result<RitzData, EigenError> {
    let nb = modes.len();
    assert_eq!(phi.nrows(), nb);
    let m = phi.ncols();
    let c = w.constant_part();
    let s = Interval::point(w.s);
    let quarter_c = c * 0.25;

    let m_diag = IntervalMatrix::from_fn(nb, nb, |r, q| {
        if r == q {
            h01_diag(modes[r], w.sigma) * 0.25
        } else {
            Interval::ZERO
        }
    });
    let a1 = m_diag.congruence(phi);

    let three_s = s * 3.0;
    let n_mat = IntervalMatrix::from_fn(nb, nb, |r, q| {
        let g = if w.s == 0.0 {
            Interval::ZERO
        } else {
            three_s * w.omega_sq.sine_gram(modes[r], modes[q])
        };
        if r == q {
            g + quarter_c
        } else {
            g
        }
    });
    let a0 = n_mat.congruence(phi);

    // Coefficients of W φ_r on the extended odd-mode set.
    let n_basis = modes.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(1);
    let ext_n = if w.s == 0.0 {
        n_basis
    } else {
        n_basis + w.omega_sq.max_index()
    };
    let ext = symmetric_modes(ext_n);
    let basis_pos: std::collections::HashMap<(usize, usize), usize> =
        modes.iter().enumerate().map(|(n, &md)| (md, n)).collect();
    let mut v = IntervalMatrix::zeros(ext.len(), m);
    for (k, &mode_k) in ext.iter().enumerate() {
        let t_row: Vec<Interval> = if w.s == 0.0 {
            Vec::new()
        } else {
            modes
                .iter()
                .map(|&mb| three_s * w.omega_sq.sine_gram(mode_k, mb) * 4.0)
                .collect()
        };
        for r in 0..m {
            let mut acc = Interval::ZERO;
            if let Some(&b) = basis_pos.get(&mode_k) {
                acc += c.mul_f64(phi[(b, r)]);
            }
            for (b, t) in t_row.iter().enumerate() {
                if *t != Interval::ZERO {
                    acc += t.mul_f64(phi[(b, r)]);
                }
            }
            v[(k, r)] = acc;
        }
    }
    let inv_d: Vec<Interval> = ext
        .iter()
        .map(|&md| Interval::ONE.checked_div(h01_diag(md, w.sigma)))
        .collect::<Result<_, _>>()?;
    let mut a2 = IntervalMatrix::zeros(m, m);
    for r in 0..m {
        for q in r..m {
            let mut acc = Interval::ZERO;
            for k in 0..ext.len() {
                acc += v[(k, r)] * v[(k, q)] * inv_d[k];
            }
            let val = acc * 0.25;
            a2[(r, q)] = val;
            a2[(q, r)] = val;
        }
    }
    let data = RitzData { a1, a0, a2 };
    if data.a1.cholesky().is_none() {
        return Err(EigenError::NotPositiveDefinite(
            "A1 (trial functions dependent?)".into(),
        ));
    }
    if data.a0.cholesky().is_none() {
        return Err(EigenError::NotPositiveDefinite("A0".into()));
    }
    Ok(data)
}

/// [`assemble_coefficients`] for trial functions given as expansions.
pub fn assemble(trial: &[SineExpansion<f64>], w: &WeightFunction) -> Result<RitzData, EigenError> {
    let n = trial.iter().map(|t| t.max_odd()).max().unwrap_or(1);
    let modes = symmetric_modes(n);
    let phi = DMatrix::from_fn(modes.len(), trial.len(), |b, r| trial[r].get(modes[b].0, modes[b].1));
    assemble_coefficients(&modes, &phi, w)
}

/// Enclosures of the Rayleigh-Ritz values `Λ_1 <= ... <= Λ_m`; `κ_i <= Λ_i.hi()`.
pub fn rr_upper(data: &RitzData) -> Result<Vec<Interval>, EigenError> {
    enclose_pencil(&data.a1, &data.a0)
}

/// Lehmann lower bounds for `κ_1, ..., κ_m`, given `Λ_m < ρ <= κ_{m+1}`.
///
/// With `τ_1 <= ... <= τ_m < 0` the eigenvalues of
/// `(A1 - ρ A0) x = τ (A1 - 2ρ A0 + ρ² A2) x`, `κ_{m+1-i} >= ρ τ_i / (τ_i - 1)`.
/// The map `τ -> ρ τ / (τ - 1)` is decreasing, so the upper end of each `τ`
/// enclosure gives the bound.
pub fn lehmann_lower(data: &RitzData, rho: f64) -> Result<Vec<f64>, EigenError> {
    let m = data.m();
    let r = Interval::point(rho);
    let lam = rr_upper(data)?;
    if !(lam[m - 1].hi() < rho) {
        return Err(EigenError::RhoTooSmall {
            m,
            upper: lam[m - 1].hi(),
            rho,
        });
    }
    let lhs = data.a1.add(&data.a0.scale(-r));
    let rhs = data.a1.add(&data.a0.scale(r * -2.0)).add(&data.a2.scale(r.sqr()));
    let tau = enclose_pencil(&lhs, &rhs)?;
    let negative = tau.iter().filter(|t| t.certainly_negative()).count();
    if negative < m {
        return Err(EigenError::TooFewNegative {
            found: negative,
            needed: m,
        });
    }
    let mut lower = vec![0.0; m];
    for (i, t) in tau.iter().enumerate() {
        let th = Interval::point(t.hi());
        let bound = (r * th).checked_div(th - 1.0)?;
        lower[m - 1 - i] = bound.lo();
    }
    Ok(lower)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenEnclosure {
    pub index: usize,
    pub lower: f64,
    pub upper: f64,
}

impl EigenEnclosure {
    pub fn interval(&self) -> Interval {
        Interval::span(self.lower, self.upper)
    }
}

/// `K = max{ κ̄₁ / (1 - κ̄₁), κ̲₂ / (κ̲₂ - 1) }`, requiring `κ̄₁ < 1 < κ̲₂`.
pub fn compute_k(enclosures: &[EigenEnclosure]) -> Result<Interval, EigenError> {
    let k1 = enclosures
        .iter()
        .find(|e| e.index == 1)
        .ok_or_else(|| EigenError::NonFinite("missing kappa_1".into()))?;
    let k2 = enclosures
        .iter()
        .find(|e| e.index == 2)
        .ok_or_else(|| EigenError::NonFinite("missing kappa_2".into()))?;
    if !(k1.upper < 1.0 && k2.lower > 1.0) {
        return Err(EigenError::NotSeparated {
            kappa1_upper: k1.upper,
            kappa2_lower: k2.lower,
        });
    }
    let u = Interval::point(k1.upper);
    let l = Interval::point(k2.lower);
    let a = u.checked_div(Interval::ONE - u)?;
    let b = l.checked_div(l - 1.0)?;
    Ok(a.max(b))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct EigenConfig {
    /// Largest mode index of the discretization used for trial functions.
    pub n_e: usize,
    /// Upper limit for the number of trial functions.
    pub m_max: usize,
    /// First attempt at the homotopy schedule (after `s = 0`).
    pub initial_steps: Vec<f64>,
    /// Maximal number of homotopy steps before giving up.
    pub max_steps: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            n_e: 21,
            m_max: 40,
            initial_steps: vec![0.5, 1.0],
            max_steps: 200,
        }
    }
}

/// Float helper: the trial coefficient block made of the first `m` eigenvectors.
pub(crate) fn leading_columns(v: &DMatrix<f64>, m: usize) -> DMatrix<f64> {
    v.columns(0, m).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn const_weight(c0: f64) -> WeightFunction {
        WeightFunction::constant(Interval::ZERO, Interval::ONE, c0)
    }

    #[test]
    fn single_mode_matrices() {
        let w = const_weight(2.0).at(0.0);
        let trial = vec![SineExpansion::fundamental(1, 1.0)];
        let d = assemble(&trial, &w).unwrap();
        let c = 1.0 + 6.0;
        let d11 = 2.0 * PI * PI + 1.0;
        assert!(d.a1[(0, 0)].contains(d11 / 4.0));
        assert!(d.a0[(0, 0)].contains(c / 4.0));
        assert!((d.a2[(0, 0)].mid() - c * c / (4.0 * d11)).abs() < 1e-13);
        let lam = rr_upper(&d).unwrap();
        assert!((lam[0].mid() - d11 / c).abs() < 1e-13);
    }

    #[test]
    fn lehmann_on_exact_mode_is_sharp() {
        let w = const_weight(2.0).at(0.0);
        let trial = vec![SineExpansion::fundamental(1, 1.0)];
        let d = assemble(&trial, &w).unwrap();
        let kappa = (2.0 * PI * PI + 1.0) / 7.0;
        let lo = lehmann_lower(&d, 10.0 * kappa).unwrap();
        assert!((lo[0] - kappa).abs() < 1e-12 * kappa, "{} vs {kappa}", lo[0]);
    }

    #[test]
    fn k_examples() {
        let e = |index, lower, upper| EigenEnclosure { index, lower, upper };
        let k = compute_k(&[e(1, 0.4, 0.5), e(2, 2.0, 2.1)]).unwrap();
        assert_eq!(k.hi(), 2.0);
        let k = compute_k(&[e(1, 0.8923, 0.89237445994742), e(2, 4.46288110093, 4.463)]).unwrap();
        assert!((k.mid() - 8.2915).abs() < 1e-3, "{k:?}");
        assert!(compute_k(&[e(1, 0.9, 1.01), e(2, 2.0, 2.1)]).is_err());
    }
}
