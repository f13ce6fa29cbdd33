//! Float Newton-Galerkin solver and continuation in λ.
//!
//! Nothing here is rigorous: the output is an approximation whose quality is
//! certified afterwards by the defect and eigenvalue bounds.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tracing::debug;

use crate::spectral::{cube, square_cosine, SineExpansion};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("Newton iteration at lambda = {lambda} did not converge in {iters} steps (last update {last_update:e}, residual {residual:e})")]
    NoConvergence {
        lambda: f64,
        iters: usize,
        last_update: f64,
        residual: f64,
    },
    #[error("Newton iteration at lambda = {lambda} collapsed to the trivial solution")]
    TrivialCollapse { lambda: f64 },
    #[error("singular Galerkin Jacobian at lambda = {lambda}")]
    SingularJacobian { lambda: f64 },
    #[error("invalid continuation config: {0}")]
    Config(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ContinuationConfig {
    /// Maximal mode index of the ansatz (odd indices up to `n` are used).
    pub n: usize,
    pub lambda_start: f64,
    pub lambda_grid: Vec<f64>,
    pub alpha0: f64,
    pub newton_tol: f64,
    pub max_iters: usize,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        Self {
            n: 16,
            lambda_start: 18.5,
            lambda_grid: vec![18.5],
            alpha0: 4.0,
            newton_tol: 1e-13,
            max_iters: 60,
        }
    }
}

impl ContinuationConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let lambda1 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
        if self.n == 0 {
            return Err(SolverError::Config("n must be positive".into()));
        }
        if !(self.alpha0 > 0.0) {
            return Err(SolverError::Config("alpha0 must be positive".into()));
        }
        if !(self.newton_tol > 0.0) {
            return Err(SolverError::Config("newton_tol must be positive".into()));
        }
        if let Some(bad) = self
            .lambda_grid
            .iter()
            .chain(std::iter::once(&self.lambda_start))
            .find(|&&l| !(0.0..lambda1).contains(&l))
        {
            return Err(SolverError::Config(format!("lambda {bad} outside [0, lambda_1)")));
        }
        Ok(())
    }
}

/// Result of one Newton solve.
#[derive(Clone, Debug)]
pub struct NewtonSolution {
    pub omega: SineExpansion<f64>,
    pub iterations: usize,
    /// Max-norm of each coefficient update, in order.
    pub updates: Vec<f64>,
    /// l2 norm of the Galerkin residual at the returned expansion.
    pub residual: f64,
}

fn laplace(i: usize, j: usize) -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    (i * i + j * j) as f64 * pi2
}

/// Galerkin residual `R_b = int (-Δω - λω - ω³) s_b`, in mode order of `omega`.
pub fn galerkin_residual(omega: &SineExpansion<f64>, lambda: f64) -> DVector<f64> {
    let c = cube(omega);
    let r: Vec<f64> = omega
        .modes()
        .map(|(i, j, a)| 0.25 * ((laplace(i, j) - lambda) * a - c.get(i, j)))
        .collect();
    DVector::from_vec(r)
}

/// Galerkin matrix of `L[v] = -Δv - λv - 3ω²v` on the modes of `omega`.
pub fn galerkin_jacobian(omega: &SineExpansion<f64>, lambda: f64) -> DMatrix<f64> {
    let sq = square_cosine(omega);
    let modes: Vec<(usize, usize)> = omega.modes().map(|(i, j, _)| (i, j)).collect();
    let n = modes.len();
    DMatrix::from_fn(n, n, |r, c| {
        let g = -3.0 * sq.sine_gram(modes[r], modes[c]);
        if r == c {
            g + 0.25 * (laplace(modes[r].0, modes[r].1) - lambda)
        } else {
            g
        }
    })
}

pub fn newton_solve(
    lambda: f64,
    omega0: &SineExpansion<f64>,
    cfg: &ContinuationConfig,
) -> Result<NewtonSolution, SolverError> {
    if omega0.max_index() > cfg.n {
        return Err(SolverError::Config(format!(
            "initial guess has index {} > n = {}",
            omega0.max_index(),
            cfg.n
        )));
    }
    let mut omega = omega0.resized(cfg.n);
    let mut updates = Vec::new();
    let scale = omega.coeffs()[0].abs().max(1.0);
    for it in 1..=cfg.max_iters {
        let r = galerkin_residual(&omega, lambda);
        let j = galerkin_jacobian(&omega, lambda);
        let v = j.lu().solve(&(-r)).ok_or(SolverError::SingularJacobian { lambda })?;
        let step = v.amax();
        let mut next = omega.clone();
        for (n, (i, jj, a)) in omega.modes().enumerate() {
            next.set(i, jj, a + v[n]).expect("mode of the same expansion");
        }
        omega = next;
        updates.push(step);
        debug!(lambda, it, step, "newton step");
        if omega.coeffs().iter().map(|c| c.abs()).sum::<f64>() < 1e-8 * scale {
            return Err(SolverError::TrivialCollapse { lambda });
        }
        if step < cfg.newton_tol {
            let residual = galerkin_residual(&omega, lambda).norm();
            return Ok(NewtonSolution {
                omega,
                iterations: it,
                updates,
                residual,
            });
        }
    }
    Err(SolverError::NoConvergence {
        lambda,
        iters: cfg.max_iters,
        last_update: *updates.last().unwrap_or(&f64::NAN),
        residual: galerkin_residual(&omega, lambda).norm(),
    })
}

/// Solves at `lambda_start` from `alpha0 sin sin`, then walks the grid downward,
/// seeding each solve with the previous solution. Returned in ascending λ.
pub fn continuation(cfg: &ContinuationConfig) -> Result<Vec<(f64, SineExpansion<f64>)>, SolverError> {
    cfg.validate()?;
    let seed = SineExpansion::fundamental(cfg.n, cfg.alpha0);
    let mut current = newton_solve(cfg.lambda_start, &seed, cfg)?.omega;
    let mut grid = cfg.lambda_grid.clone();
    grid.sort_by(|a, b| b.total_cmp(a));
    let mut out = Vec::with_capacity(grid.len());
    for lambda in grid {
        current = if lambda == cfg.lambda_start {
            current
        } else {
            newton_solve(lambda, &current, cfg)?.omega
        };
        out.push((lambda, current.clone()));
    }
    out.reverse();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converges_from_default_seed() {
        let cfg = ContinuationConfig::default();
        let sol = newton_solve(18.5, &SineExpansion::fundamental(16, 4.0), &cfg).unwrap();
        assert!(sol.residual < 10.0 * cfg.newton_tol, "{}", sol.residual);
        let a11 = sol.omega.get(1, 1);
        assert!(a11 > 1.0 && a11 < 2.0, "{a11}");
    }

    #[test]
    fn exact_solution_is_a_fixed_point() {
        let cfg = ContinuationConfig::default();
        let sol = newton_solve(18.5, &SineExpansion::fundamental(16, 4.0), &cfg).unwrap();
        let again = newton_solve(18.5, &sol.omega, &cfg).unwrap();
        assert_eq!(again.iterations, 1);
    }

    #[test]
    fn tiny_seed_collapses() {
        let cfg = ContinuationConfig::default();
        let err = newton_solve(18.5, &SineExpansion::fundamental(16, 0.01), &cfg).unwrap_err();
        assert!(matches!(err, SolverError::TrivialCollapse { .. }), "{err}");
    }
}
