use cubicbranch::solver::{continuation, galerkin_residual, newton_solve, ContinuationConfig, SolverError};
use cubicbranch::spectral::positivity_check;
use cubicbranch::SineExpansion;

fn cfg(n: usize, grid: Vec<f64>) -> ContinuationConfig {
    ContinuationConfig {
        n,
        lambda_grid: grid,
        ..ContinuationConfig::default()
    }
}

#[test]
fn branch_points_are_positive_with_small_residual() {
    let grid: Vec<f64> = (0..=37).map(|k| 0.5 * k as f64).collect();
    let c = cfg(12, grid.clone());
    let branch = continuation(&c).unwrap();
    assert_eq!(branch.len(), grid.len());
    assert!(branch.windows(2).all(|w| w[0].0 < w[1].0));
    for (lambda, w) in &branch {
        assert!(positivity_check(&w.to_interval()), "lambda = {lambda}");
        assert!(
            galerkin_residual(w, *lambda).norm() <= 10.0 * c.newton_tol,
            "lambda = {lambda}"
        );
    }
    // the branch grows as lambda decreases
    assert!(branch[0].1.get(1, 1) > branch.last().unwrap().1.get(1, 1));
}

#[test]
fn newton_converges_quadratically() {
    let c = cfg(16, vec![18.5]);
    let sol = newton_solve(18.5, &SineExpansion::fundamental(16, 4.0), &c).unwrap();
    let u = &sol.updates;
    let mut checked = 0;
    for k in 1..u.len() {
        // only the asymptotic phase, above the rounding floor
        if u[k - 1] < 1e-2 && u[k] > 1e-12 {
            assert!(u[k] <= 10.0 * u[k - 1] * u[k - 1], "{u:?}");
            checked += 1;
        }
    }
    assert!(checked >= 1, "{u:?}");
}

#[test]
fn out_of_range_lambda_is_a_config_error() {
    let c = cfg(8, vec![0.0, 25.0]);
    assert!(matches!(continuation(&c), Err(SolverError::Config(_))));
}
