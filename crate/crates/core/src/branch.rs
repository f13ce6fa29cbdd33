//! From verified grid points to a certificate on the whole interval `[λ⁰, λᴹ]`.
//!
//! Between grid points `ω_λ` is the linear interpolant. Each subinterval is split
//! at its midpoint; on each half the defect bound, the inverse bound `K` and an
//! `L⁴` bound are constant, and the smallest admissible `α` is searched.

use serde::Serialize;
use thiserror::Error;

use crate::defect::DefectBounds;
use crate::interval::{constants, Interval, IntervalError};
use crate::spectral::{quadratic_norms, quartic_sum, sextic_sum, sup_bound, SineExpansion};

#[derive(Debug, Error)]
pub enum BranchError {
    #[error("grid too coarse near lambda = {lambda}: zeta = {zeta} is not below 1")]
    GridTooCoarse { lambda: f64, zeta: Interval },
    #[error("defect too large: recompute omega more accurately or refine grid (delta = {delta}, max psi = {psi_max})")]
    DefectTooLarge { delta: Interval, psi_max: Interval },
    #[error("grid needs at least two points in nondecreasing order")]
    BadGrid,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Embedding constants for `H¹₀((0,1)²)` with `<u,v> = (∇u,∇v) + σ(u,v)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EmbeddingPack {
    pub sigma: Interval,
    /// `3 C₄³`
    pub gamma: Interval,
    /// `H⁻¹` norm bound of `L^∞` functions: `√|Ω| C₂`.
    pub c1: Interval,
    /// Poincaré: `1 / √(λ₁ + σ)`.
    pub c2: Interval,
    pub c4: Interval,
    pub c6: Interval,
}

impl EmbeddingPack {
    /// Ladyzhenskaya's argument gives `‖u‖₄⁴ <= ½ ‖u‖² ‖∇u‖²` and
    /// `‖u‖₆⁶ <= (9/16) ‖u‖² ‖∇u‖⁴`; maximizing under `‖∇u‖² >= λ₁‖u‖²` yields
    /// `C_p^p = c_p / (λ₁ + pσ/2)` with `c₄ = 1/2`, `c₆ = 9/16`.
    pub fn unit_square(sigma: Interval) -> Result<Self, IntervalError> {
        let l1 = constants().lambda1;
        let c2 = (l1 + sigma).sqrt()?.recip()?;
        let c4 = Interval::point(0.5).checked_div(l1 + sigma * 2.0)?.fourth_root()?;
        let c6 = Interval::point(0.5625).checked_div(l1 + sigma * 3.0)?.nth_root(6)?;
        Ok(Self {
            sigma,
            gamma: c4.powi(3) * 3.0,
            c1: c2,
            c2,
            c4,
            c6,
        })
    }

    pub fn with_c6(self, c6: Interval) -> Self {
        Self { c6, ..self }
    }
}

/// `x^(1/n)` of an enclosure of a nonnegative quantity.
fn nonneg_root(x: Interval, n: u32) -> Result<Interval, IntervalError> {
    Interval::new(x.lo().max(0.0), x.hi().max(0.0))?.nth_root(n)
}

/// Verified data at one grid point.
#[derive(Clone, Debug, Serialize)]
pub struct GridPoint {
    pub lambda: Interval,
    #[serde(skip)]
    pub omega: SineExpansion<Interval>,
    /// `H⁻¹` defect bound.
    pub delta: Interval,
    /// `L²` defect bound.
    pub delta_hat: Interval,
    pub k: Interval,
    pub l4_norm: Interval,
    pub l6_norm: Interval,
    pub h01_norm: Interval,
    pub sup_norm_bound: Interval,
}

impl GridPoint {
    pub fn new(
        omega: SineExpansion<Interval>,
        defect: &DefectBounds,
        k: Interval,
        sigma: Interval,
    ) -> Result<Self, IntervalError> {
        let l4_norm = nonneg_root(quartic_sum(&omega, None), 4)?;
        let l6_norm = nonneg_root(sextic_sum(&omega), 6)?;
        let h01_norm = nonneg_root(quadratic_norms(&omega, sigma).h01_sq, 2)?;
        let sup_norm_bound = sup_bound(&omega);
        Ok(Self {
            lambda: defect.lambda,
            omega,
            delta: defect.delta,
            delta_hat: defect.delta_hat,
            k,
            l4_norm,
            l6_norm,
            h01_norm,
            sup_norm_bound,
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct InterpDefect {
    pub delta: Interval,
    /// Interpolation error of the cubic term.
    pub rho: Interval,
    /// Interpolation error of `λω`.
    pub tau: Interval,
}

/// Defect bound valid on all of `[left.λ, right.λ]`.
pub fn interp_defect(left: &GridPoint, right: &GridPoint, pack: &EmbeddingPack) -> InterpDefect {
    let d = sup_bound(&right.omega.sub(&left.omega));
    let sup = left.sup_norm_bound.max(right.sup_norm_bound);
    let rho = pack.c1 * sup * d.sqr() * 0.75;
    let tau = pack.c1 * (right.lambda - left.lambda) * d * 0.25;
    InterpDefect {
        delta: left.delta.max(right.delta) + rho + tau,
        rho,
        tau,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct InterpK {
    pub k: Interval,
    /// Bound for `|λ - λⁱ|`.
    pub mu: Interval,
    /// Bound for `‖ω_λ - ωⁱ‖_{H¹₀}`.
    pub nu: Interval,
    pub zeta: Interval,
}

/// `K` valid for every `λ` with `|λ - λⁱ| <= mu` and `‖ω_λ - ωⁱ‖_{H¹₀} <= nu`.
pub fn interp_k(gp: &GridPoint, mu: Interval, nu: Interval, pack: &EmbeddingPack) -> Result<InterpK, BranchError> {
    let l1s = constants().lambda1 + pack.sigma;
    let zeta = gp.k * (mu.checked_div(l1s)? + pack.gamma * (gp.l4_norm + pack.c4 * nu) * nu * 2.0);
    if !(zeta.hi() < 1.0) {
        return Err(BranchError::GridTooCoarse {
            lambda: gp.lambda.mid(),
            zeta,
        });
    }
    let k = gp.k.checked_div(Interval::ONE - zeta)?;
    Ok(InterpK { k, mu, nu, zeta })
}

/// `ψ(α) = α/K - γα²(‖ω‖₄ + C₄α)`.
pub fn psi(alpha: Interval, k: Interval, l4: Interval, pack: &EmbeddingPack) -> Result<Interval, IntervalError> {
    Ok(alpha.checked_div(k)? - pack.gamma * alpha.sqr() * (l4 + pack.c4 * alpha))
}

/// `2Kγα(‖ω‖₄ + C₄α)`; local uniqueness and non-degeneracy need it below 1.
pub fn contraction(alpha: Interval, k: Interval, l4: Interval, pack: &EmbeddingPack) -> Interval {
    k * pack.gamma * alpha * (l4 + pack.c4 * alpha) * 2.0
}

/// The maximizer of `ψ` on `α > 0`.
pub fn alpha_bar(k: Interval, l4: Interval, pack: &EmbeddingPack) -> Result<Interval, IntervalError> {
    let c4 = pack.c4;
    let inner = l4.sqr() + (c4 * 3.0).checked_div(k * pack.gamma)?;
    (inner.sqrt()? - l4).checked_div(c4 * 3.0)
}

/// `max ψ = (2r + gL) / (3K (r + gL)²)` with `g = γK`, `L = ‖ω‖₄`,
/// `r = √(g(gL² + 3C₄))`; the maximizer is `ᾱ = 1 / (r + gL)`.
pub fn psi_max(k: Interval, l4: Interval, pack: &EmbeddingPack) -> Result<Interval, IntervalError> {
    let g = pack.gamma * k;
    let r = (g * (g * l4.sqr() + pack.c4 * 3.0)).sqrt()?;
    let s = r + g * l4;
    (r * 2.0 + g * l4).checked_div(k * s.sqr() * 3.0)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AlphaBound {
    /// Bracket of the minimal root of `ψ(α) = δ`; the upper end is verified.
    pub alpha: Interval,
    pub alpha_bar: Interval,
}

/// Smallest verified `α` with `δ <= ψ(α)`, by bisection on `(0, ᾱ]` where `ψ` increases.
///
/// `ψ` decreases in `K` and `‖ω‖₄`, so only their upper ends matter.
pub fn alpha_min(delta: Interval, k: Interval, l4: Interval, pack: &EmbeddingPack) -> Result<AlphaBound, BranchError> {
    let (k, l4) = (Interval::point(k.hi()), Interval::point(l4.hi()));
    let abar = alpha_bar(k, l4, pack)?;
    let admissible =
        |a: f64| -> Result<bool, IntervalError> { Ok(psi(Interval::point(a), k, l4, pack)?.lo() >= delta.hi()) };
    let top = abar.mid();
    if !(top > 0.0) || !admissible(top)? {
        return Err(BranchError::DefectTooLarge {
            delta,
            psi_max: psi_max(k, l4, pack)?,
        });
    }
    let (mut lo, mut hi) = (0.0_f64, top);
    for _ in 0..200 {
        if hi - lo <= 1e-3 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if admissible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(AlphaBound {
        alpha: Interval::span(lo, hi),
        alpha_bar: abar,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Checks {
    pub defect: bool,
    pub contraction: bool,
    pub contraction_eta: bool,
    pub nontrivial: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.defect && self.contraction && self.contraction_eta && self.nontrivial
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Aux {
    pub rho: Interval,
    pub tau: Interval,
    pub mu: Interval,
    pub nu: Interval,
    pub zeta: Interval,
}

#[derive(Clone, Debug, Serialize)]
pub struct HalfIntervalCertificate {
    /// The half-interval is `[lambda_lo.lo, lambda_hi.hi]`.
    pub lambda_lo: Interval,
    pub lambda_hi: Interval,
    /// Grid point whose `K` is used.
    pub anchor: usize,
    pub delta: Interval,
    pub k: Interval,
    pub l4_bound: Interval,
    pub alpha: Interval,
    pub alpha_bar: Interval,
    pub contraction: Interval,
    pub contraction_eta: Interval,
    pub h01_lower: Interval,
    pub checks: Checks,
    pub aux: Aux,
}

impl HalfIntervalCertificate {
    pub fn covers(&self, lambda: f64) -> bool {
        self.lambda_lo.lo() <= lambda && lambda <= self.lambda_hi.hi()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HalfIntervalFailure {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    pub certificates: Vec<HalfIntervalCertificate>,
    pub failures: Vec<HalfIntervalFailure>,
    /// Uniform margin for local uniqueness, a power of two.
    pub eta: Option<f64>,
    pub expected: usize,
}

impl BranchReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
            && self.eta.is_some()
            && self.certificates.len() == self.expected
            && self.certificates.iter().all(|c| c.checks.all())
    }

    /// Lower semicontinuous `α`: the smallest value over half-intervals containing `λ`.
    pub fn alpha_at(&self, lambda: f64) -> Option<f64> {
        self.certificates
            .iter()
            .filter(|c| c.covers(lambda))
            .map(|c| c.alpha.hi())
            .min_by(f64::total_cmp)
    }
}

/// Per subinterval `[λ^{i-1}, λ^i]` quantities shared by both halves.
struct Segment {
    mid: Interval,
    defect: InterpDefect,
    /// `‖ω^i - ω^{i-1}‖_{H¹₀}`
    diff_h01: Interval,
    /// Upper bound of `t` on the left half, lower bound of `t` on the right half.
    t_mid: Interval,
}

const ETA_START: i32 = 10;
const ETA_END: i32 = 60;

pub fn verify_branch(grid: &[GridPoint], pack: &EmbeddingPack) -> Result<BranchReport, BranchError> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[1].lambda.lo() < w[0].lambda.hi()) {
        return Err(BranchError::BadGrid);
    }
    let m = grid.len() - 1;
    let mut segments = Vec::with_capacity(m);
    for i in 1..=m {
        let (a, b) = (&grid[i - 1], &grid[i]);
        let diff = b.omega.sub(&a.omega);
        let diff_h01 = nonneg_root(quadratic_norms(&diff, pack.sigma).h01_sq, 2)?;
        let mid = (a.lambda + b.lambda) * 0.5;
        let gap = b.lambda - a.lambda;
        let t_mid = if gap.lo() > 0.0 {
            (mid - a.lambda).checked_div(gap)?
        } else {
            Interval::span(0.0, 1.0)
        };
        segments.push(Segment {
            mid,
            defect: interp_defect(a, b, pack),
            diff_h01,
            t_mid,
        });
    }

    // K around each grid point, valid on [mid_{i-1}, mid_i].
    let mut ks = Vec::with_capacity(grid.len());
    for (i, gp) in grid.iter().enumerate() {
        let mut mu = Interval::ZERO;
        let mut nu = Interval::ZERO;
        if i > 0 {
            let s = &segments[i - 1];
            mu = mu.max(gp.lambda - Interval::point(s.mid.lo()));
            nu = nu.max((Interval::ONE - s.t_mid) * s.diff_h01);
        }
        if i < m {
            let s = &segments[i];
            mu = mu.max(Interval::point(s.mid.hi()) - gp.lambda);
            nu = nu.max(s.t_mid * s.diff_h01);
        }
        ks.push(interp_k(gp, Interval::point(mu.hi()), Interval::point(nu.hi()), pack));
    }

    let mut certificates = Vec::with_capacity(2 * m);
    let mut failures = Vec::new();
    for i in 1..=m {
        let s = &segments[i - 1];
        let (a, b) = (&grid[i - 1], &grid[i]);
        let h01_lower = a.h01_norm.min(b.h01_norm) - s.diff_h01;
        // ‖(1-t)ω^{i-1} + tω^i‖₄ <= ‖ω^{i-1}‖₄ + t(‖ω^i‖₄ - ‖ω^{i-1}‖₄), extreme at the ends of each half.
        let at_mid = a.l4_norm + s.t_mid * (b.l4_norm - a.l4_norm);
        let halves = [
            (i - 1, a.lambda, Interval::point(s.mid.hi()), a.l4_norm.max(at_mid)),
            (i, Interval::point(s.mid.lo()), b.lambda, b.l4_norm.max(at_mid)),
        ];
        for (anchor, lo, hi, l4) in halves {
            let fail = |reason: String| HalfIntervalFailure {
                lambda_lo: lo.lo(),
                lambda_hi: hi.hi(),
                reason,
            };
            let kk = match &ks[anchor] {
                Ok(k) => *k,
                Err(e) => {
                    failures.push(fail(e.to_string()));
                    continue;
                }
            };
            let l4 = Interval::point(l4.hi());
            let found = match alpha_min(s.defect.delta, kk.k, l4, pack) {
                Ok(f) => f,
                Err(e) => {
                    failures.push(fail(e.to_string()));
                    continue;
                }
            };
            let alpha = Interval::point(found.alpha.hi());
            let defect_ok = psi(alpha, kk.k, l4, pack)?.lo() >= s.defect.delta.hi();
            let con = contraction(alpha, kk.k, l4, pack);
            let checks = Checks {
                defect: defect_ok,
                contraction: con.hi() < 1.0,
                contraction_eta: false,
                nontrivial: h01_lower.lo() > alpha.hi(),
            };
            if !checks.defect {
                failures.push(fail(format!("defect condition fails at alpha = {}", alpha.hi())));
            }
            if !checks.contraction {
                failures.push(fail(format!("contraction {con} is not below 1")));
            }
            if !checks.nontrivial {
                failures.push(fail(format!(
                    "H01 norm lower bound {} does not exceed alpha = {}",
                    h01_lower.lo(),
                    alpha.hi()
                )));
            }
            certificates.push(HalfIntervalCertificate {
                lambda_lo: lo,
                lambda_hi: hi,
                anchor,
                delta: s.defect.delta,
                k: kk.k,
                l4_bound: l4,
                alpha: found.alpha,
                alpha_bar: found.alpha_bar,
                contraction: con,
                contraction_eta: Interval::ZERO,
                h01_lower,
                checks,
                aux: Aux {
                    rho: s.defect.rho,
                    tau: s.defect.tau,
                    mu: kk.mu,
                    nu: kk.nu,
                    zeta: kk.zeta,
                },
            });
        }
    }

    let eta = select_eta(&mut certificates, pack);
    if eta.is_none() {
        failures.push(HalfIntervalFailure {
            lambda_lo: grid[0].lambda.lo(),
            lambda_hi: grid[m].lambda.hi(),
            reason: format!("no uniform eta >= 2^-{ETA_END} keeps the contraction below 1"),
        });
    }
    Ok(BranchReport {
        certificates,
        failures,
        eta,
        expected: 2 * m,
    })
}

/// Largest `2^-k <= 2^-10` keeping the contraction below 1 at `α + η` everywhere.
fn select_eta(certs: &mut [HalfIntervalCertificate], pack: &EmbeddingPack) -> Option<f64> {
    let at =
        |c: &HalfIntervalCertificate, eta: f64| contraction(Interval::point(c.alpha.hi()) + eta, c.k, c.l4_bound, pack);
    let eta = (ETA_START..=ETA_END)
        .map(|k| 2f64.powi(-k))
        .find(|&eta| certs.iter().all(|c| at(c, eta).hi() < 1.0))?;
    for c in certs.iter_mut() {
        c.contraction_eta = at(c, eta);
        c.checks.contraction_eta = c.contraction_eta.hi() < 1.0;
    }
    Some(eta)
}
