use serde::{Deserialize, Serialize};
use tracing::debug;

use crate::interval::Interval;
use crate::spectral::{laplace_eigenvalue, SineExpansion};

use super::{
    assemble_coefficients, compute_k, discrete_eigenpairs, leading_columns, lehmann_lower, rr_upper, symmetric_modes,
    EigenConfig, EigenEnclosure, EigenError, WeightFunction,
};

/// Lower endpoints of the first `count` eigenvalues of the constant-weight
/// problem `W^(0)`: `((i² + j²) π² + σ) / (σ + λ + 3 c₀)` over odd `i, j`.
pub fn base_spectrum(w: &WeightFunction, count: usize) -> Result<Vec<f64>, EigenError> {
    let denom = w.at(0.0).constant_part();
    let mut bound = 2 * ((count as f64).sqrt().ceil() as usize) + 3;
    loop {
        let mut sums: Vec<(usize, usize)> = symmetric_modes(bound);
        sums.sort_by_key(|&(i, j)| (i * i + j * j, i, j));
        sums.truncate(count);
        // The list is complete below 1 + (bound + 2)², the smallest missing sum.
        let complete = sums
            .last()
            .is_some_and(|&(i, j)| i * i + j * j < 1 + (bound + 2) * (bound + 2));
        if sums.len() == count && complete {
            return sums
                .into_iter()
                .map(|(i, j)| {
                    (laplace_eigenvalue(i, j) + w.sigma)
                        .checked_div(denom)
                        .map(|v| v.lo())
                        .map_err(EigenError::from)
                })
                .collect();
        }
        bound += 2;
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HomotopyStep {
    pub s: f64,
    pub m: usize,
    pub rho: f64,
}

#[derive(Clone, Debug)]
pub struct HomotopyOutcome {
    pub steps: Vec<HomotopyStep>,
    /// Verified lower bounds for `κ_1, κ_2, ...` of the target problem.
    pub lower: Vec<f64>,
    /// Two-sided enclosures from the last step, indices `1..=m`.
    pub enclosures: Vec<EigenEnclosure>,
}

impl HomotopyOutcome {
    pub fn final_m(&self) -> usize {
        self.steps.last().map_or(0, |s| s.m)
    }
}

struct StepResult {
    m: usize,
    rho: f64,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

/// One Lehmann step at `w`, using the largest `m <= m_cap` the current lower
/// bounds allow, falling back to smaller `m` if verification fails.
fn lehmann_step(
    w: &WeightFunction,
    modes: &[(usize, usize)],
    lb: &[f64],
    m_min: usize,
    m_cap: usize,
) -> Result<StepResult, String> {
    let (approx, vecs) = discrete_eigenpairs(w, modes);
    let m_cap = m_cap.min(modes.len()).min(lb.len() - 1);
    let mut candidates: Vec<usize> = (m_min..=m_cap)
        .rev()
        .filter(|&m| approx[m - 1] < lb[m] * (1.0 - 1e-9))
        .collect();
    candidates.truncate(4);
    let mut last_err = format!("no m in {m_min}..={m_cap} with an approximate gap");
    for m in candidates {
        let phi = leading_columns(&vecs, m);
        let attempt = assemble_coefficients(modes, &phi, w).and_then(|data| {
            let upper: Vec<f64> = rr_upper(&data)?.iter().map(Interval::hi).collect();
            let lower = lehmann_lower(&data, lb[m])?;
            Ok((upper, lower))
        });
        match attempt {
            Ok((upper, lower)) => {
                return Ok(StepResult {
                    m,
                    rho: lb[m],
                    lower,
                    upper,
                })
            }
            Err(e) => last_err = format!("m = {m}: {e}"),
        }
    }
    Err(last_err)
}

fn merge_lower(lb: &mut [f64], new: &[f64]) {
    for (l, &n) in lb.iter_mut().zip(new) {
        *l = l.max(n);
    }
    // A lower bound for κ_j also bounds every κ_k with k > j.
    for j in 1..lb.len() {
        lb[j] = lb[j].max(lb[j - 1]);
    }
}

fn run_chain(
    target: &WeightFunction,
    cfg: &EigenConfig,
    schedule: &[f64],
    adaptive: bool,
    m_final: usize,
) -> Result<HomotopyOutcome, EigenError> {
    let modes = symmetric_modes(cfg.n_e);
    let mut lb = base_spectrum(target, cfg.m_max.min(modes.len()) + 1)?;
    let mut queue: Vec<f64> = schedule.iter().rev().copied().collect();
    let mut s_prev = 0.0;
    let mut steps = Vec::new();
    let mut attempts = 0;
    let mut m_prev = cfg.m_max;
    while let Some(s) = queue.pop() {
        attempts += 1;
        if attempts > cfg.max_steps {
            return Err(EigenError::HomotopyBroken {
                s,
                reason: format!("more than {} attempts", cfg.max_steps),
            });
        }
        // Intermediate steps must keep enough eigenvalues in play, otherwise the
        // bounds for higher indices never move past the base spectrum.
        let m_min = if s == 1.0 {
            m_final
        } else {
            m_final.max(m_prev.div_ceil(2))
        };
        match lehmann_step(&target.at(s), &modes, &lb, m_min, cfg.m_max) {
            Ok(step) => {
                debug!(s, m = step.m, rho = step.rho, "homotopy step");
                merge_lower(&mut lb, &step.lower);
                steps.push(HomotopyStep {
                    s,
                    m: step.m,
                    rho: step.rho,
                });
                s_prev = s;
                m_prev = step.m;
                if s == 1.0 {
                    let enclosures = (0..step.m)
                        .map(|i| EigenEnclosure {
                            index: i + 1,
                            lower: step.lower[i],
                            upper: step.upper[i],
                        })
                        .collect();
                    return Ok(HomotopyOutcome {
                        steps,
                        lower: lb,
                        enclosures,
                    });
                }
            }
            Err(reason) => {
                let mid = 0.5 * (s_prev + s);
                if !adaptive || mid <= s_prev || mid >= s {
                    return Err(EigenError::HomotopyBroken { s, reason });
                }
                debug!(s, %reason, "homotopy step failed, halving");
                queue.push(s);
                queue.push(mid);
            }
        }
    }
    Err(EigenError::HomotopyBroken {
        s: s_prev,
        reason: "schedule does not end at s = 1".into(),
    })
}

/// Verified lower bound for `κ_{m+1}` of the target problem, chaining Lehmann
/// steps along the given `s` values (which must end at 1).
pub fn homotopy_bound(
    target: &WeightFunction,
    m: usize,
    steps: &[f64],
    cfg: &EigenConfig,
) -> Result<Interval, EigenError> {
    let out = run_chain(target, cfg, steps, false, 1)?;
    let v = out.lower[m];
    Ok(Interval::point(v))
}

/// Full eigenvalue verification at one grid point: adaptive homotopy, final
/// Rayleigh-Ritz and Lehmann enclosures for `κ₁, κ₂`, and `K`.
pub fn grid_point_eigen(
    omega: &SineExpansion<Interval>,
    lambda: Interval,
    sigma: Interval,
    cfg: &EigenConfig,
) -> Result<(HomotopyOutcome, Interval), EigenError> {
    let target = WeightFunction::new(omega, lambda, sigma);
    let out = run_chain(&target, cfg, &cfg.initial_steps, true, 2)?;
    let k = compute_k(&out.enclosures)?;
    Ok((out, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn base_spectrum_is_sorted_and_complete() {
        let w = WeightFunction::constant(Interval::ZERO, Interval::ONE, 0.0);
        let b = base_spectrum(&w, 6).unwrap();
        let want = [2.0, 10.0, 10.0, 18.0, 26.0, 26.0].map(|k| k * PI * PI + 1.0);
        for (x, y) in b.iter().zip(want) {
            assert!((x - y).abs() < 1e-12 * y && *x <= y);
        }
    }
}
