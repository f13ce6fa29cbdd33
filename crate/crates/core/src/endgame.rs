//! Sup-norm error at `λ̄` and the threshold `‖u_λ̄‖_∞ < √(λ̄/2)`.
//!
//! Once the threshold holds, uniqueness on `[λ̄, λ₁)` is an analytic matter.

use serde::Serialize;

use crate::branch::EmbeddingPack;
use crate::interval::{constants, Interval, IntervalError};
use crate::spectral::{eval_center, sextic_sum, SineExpansion};

/// Constants of `‖u‖_∞ <= Ĉ₀‖u‖ + Ĉ₁‖∇u‖ + Ĉ₂‖u_xx‖` on `H²(Ω) ∩ H¹₀(Ω)`, `Ω = (0,1)²`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SupNormPack {
    pub c0_hat: Interval,
    pub c1_hat: Interval,
    pub c2_hat: Interval,
}

impl SupNormPack {
    pub fn unit_square() -> Result<Self, IntervalError> {
        let two_thirds = Interval::point(2.0).checked_div(Interval::point(3.0))?;
        let ratio = Interval::point(28.0).checked_div(Interval::point(45.0))?;
        Ok(Self {
            c0_hat: Interval::ONE,
            c1_hat: two_thirds.sqrt()? * 1.1548,
            c2_hat: ratio.sqrt()? * 0.22361,
        })
    }
}

/// Bound for `‖u_λ̄ - ω‖_∞` from `‖u_λ̄ - ω‖_{H¹₀} <= α` and the `L²` defect `δ̂`.
///
/// `Δ(u - ω)` is split into the defect, `λ̄(u - ω)` and `u³ - ω³`; the last is
/// bounded through `L⁶` norms. Convexity gives `‖u_xx‖ <= ‖Δu‖`.
pub fn sup_error_bound(
    alpha: Interval,
    delta_hat: Interval,
    l6: Interval,
    lambda_bar: Interval,
    pack: &SupNormPack,
    emb: &EmbeddingPack,
) -> Result<Interval, IntervalError> {
    let c6 = emb.c6;
    let poincare = (constants().lambda1 + emb.sigma).sqrt()?;
    let cubic = c6 * pack.c2_hat * (l6.sqr() + c6 * l6 * alpha + (c6 * alpha).sqr().div_f64(3.0)?) * 3.0;
    let linear = (pack.c0_hat + lambda_bar * pack.c2_hat).checked_div(poincare)? + pack.c1_hat;
    Ok((linear + cubic) * alpha + pack.c2_hat * delta_hat)
}

/// `‖ω‖_{L⁶}` via the sextic integral.
pub fn l6_norm(omega: &SineExpansion<Interval>) -> Result<Interval, IntervalError> {
    let s = sextic_sum(omega);
    Interval::new(s.lo().max(0.0), s.hi().max(0.0))?.nth_root(6)
}

/// `√(λ̄/2)`.
pub fn threshold(lambda_bar: Interval) -> Result<Interval, IntervalError> {
    (lambda_bar * 0.5).sqrt()
}

/// `((λ₂ - λ₁)/p)^{1/(p-1)} (λ̄/λ₁)^{1/(p-1)}` for the power nonlinearity `u^p`.
pub fn general_threshold(lambda_bar: Interval, p: u32) -> Result<Interval, IntervalError> {
    let c = constants();
    let a = (c.lambda2 - c.lambda1).div_f64(p as f64)?;
    let b = lambda_bar.checked_div(c.lambda1)?;
    (a * b).nth_root(p - 1)
}

/// `ω(x_M) + sup_err < √(λ̄/2)`, certainly.
pub fn uniqueness_threshold(
    omega: &SineExpansion<Interval>,
    sup_err: Interval,
    lambda_bar: Interval,
) -> Result<bool, IntervalError> {
    let top = eval_center(omega) + sup_err;
    Ok(top.hi() < threshold(lambda_bar)?.lo())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EndgameRecord {
    pub lambda_bar: Interval,
    pub alpha: Interval,
    pub delta_hat: Interval,
    pub l6_norm: Interval,
    pub omega_center: Interval,
    pub sup_err: Interval,
    pub threshold: Interval,
    pub passed: bool,
}

pub fn run_endgame(
    omega: &SineExpansion<Interval>,
    alpha: Interval,
    delta_hat: Interval,
    lambda_bar: Interval,
    pack: &SupNormPack,
    emb: &EmbeddingPack,
) -> Result<EndgameRecord, IntervalError> {
    let l6 = l6_norm(omega)?;
    let sup_err = sup_error_bound(alpha, delta_hat, l6, lambda_bar, pack, emb)?;
    Ok(EndgameRecord {
        lambda_bar,
        alpha,
        delta_hat,
        l6_norm: l6,
        omega_center: eval_center(omega),
        sup_err,
        threshold: threshold(lambda_bar)?,
        passed: uniqueness_threshold(omega, sup_err, lambda_bar)?,
    })
}
