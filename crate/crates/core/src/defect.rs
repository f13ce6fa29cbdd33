//! Verified L² and H⁻¹ bounds for the residual `-Δω - λω - ω³`.

use serde::Serialize;
use thiserror::Error;

use crate::interval::{constants, Interval, IntervalError};
use crate::spectral::{laplace_eigenvalue, positivity_check, quartic_sum, sextic_sum, SineExpansion};

#[derive(Debug, Error)]
pub enum DefectError {
    #[error("positivity of the approximation is not verified; |ω|³ = ω³ cannot be used")]
    PositivityNotVerified,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DefectBounds {
    pub lambda: Interval,
    /// Upper bound for the L² norm of the residual.
    pub delta_hat: Interval,
    /// Upper bound for the H⁻¹ norm of the residual.
    pub delta: Interval,
}

/// Enclosure of `||-Δω - λω - ω³||_{L²}`.
///
/// The squared norm expands as
/// `(1/4) sum w_ij² a_ij² - 2 int (Σ w a sin sin) ω³ + int ω⁶` with
/// `w_ij = (i² + j²) π² - λ`; the middle term is a weighted quartic sum and
/// the last a sextic sum. Refuses to run unless `ω > 0` is verified.
pub fn l2_defect(omega: &SineExpansion<Interval>, lambda: Interval) -> Result<Interval, DefectError> {
    if !positivity_check(omega) {
        return Err(DefectError::PositivityNotVerified);
    }
    let weight = |i: usize, j: usize| laplace_eigenvalue(i, j) - lambda;
    let quadratic: Interval = omega
        .modes()
        .map(|(i, j, a)| (weight(i, j) * a).sqr())
        .sum::<Interval>()
        * 0.25;
    let cross = quartic_sum(omega, Some(&weight));
    let sextic = sextic_sum(omega);
    let sq = (quadratic - cross * 2.0 + sextic).ensure_finite("squared L2 defect")?;
    // The exact value is a squared norm; only the enclosure can dip below zero.
    let sq = Interval::new(sq.lo().max(0.0), sq.hi().max(0.0))?;
    Ok(sq.sqrt()?)
}

/// `δ = δ̂ / sqrt(λ₁ + σ)`, from `||u||_{H⁻¹} <= ||u||_{L²} / sqrt(λ₁ + σ)`.
pub fn h_minus1_defect(delta_hat: Interval, sigma: Interval) -> Result<Interval, DefectError> {
    if delta_hat.lo() < 0.0 {
        return Err(IntervalError::NegativeRoot(delta_hat).into());
    }
    let denom = (constants().lambda1 + sigma).sqrt()?;
    let d = delta_hat.checked_div(denom)?;
    Ok(Interval::new(d.lo().max(0.0), d.hi())?)
}

pub fn defect_bounds(
    omega: &SineExpansion<Interval>,
    lambda: Interval,
    sigma: Interval,
) -> Result<DefectBounds, DefectError> {
    let delta_hat = l2_defect(omega, lambda)?;
    let delta = h_minus1_defect(delta_hat, sigma)?;
    Ok(DefectBounds {
        lambda,
        delta_hat,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_closed_form() {
        let w = SineExpansion::fundamental(1, Interval::point(1.0));
        let d = l2_defect(&w, Interval::ZERO).unwrap();
        let l1 = 2.0 * PI * PI;
        let want = (l1 * l1 / 4.0 - 2.0 * l1 * 9.0 / 64.0 + 25.0 / 256.0).sqrt();
        assert!((d.mid() - want).abs() < 1e-12);
        assert!(d.width() < 1e-12);
    }

    #[test]
    fn dual_embedding_examples() {
        let one = Interval::ONE;
        assert_eq!(h_minus1_defect(Interval::ZERO, one).unwrap(), Interval::ZERO);
        let d = h_minus1_defect(one, one).unwrap();
        assert!(d.contains(1.0 / (2.0 * PI * PI + 1.0).sqrt()));
        let s = (constants().lambda1 + one).sqrt().unwrap();
        let d = h_minus1_defect(s, one).unwrap();
        assert!(d.contains(1.0));
    }

    #[test]
    fn sign_changing_input_is_refused() {
        let mut w = SineExpansion::fundamental(3, Interval::point(1.0));
        w.set(3, 3, Interval::point(0.5)).unwrap();
        assert!(matches!(
            l2_defect(&w, Interval::ZERO),
            Err(DefectError::PositivityNotVerified)
        ));
    }
}
