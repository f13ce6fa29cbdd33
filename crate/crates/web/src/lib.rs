//! Browser bindings: three small computations on one branch point, returned as JSON strings.

use cubicbranch::branch::{alpha_min, contraction, psi_max, EmbeddingPack, GridPoint};
use cubicbranch::defect::defect_bounds;
use cubicbranch::eigen::{grid_point_eigen, EigenConfig};
use cubicbranch::solver::{continuation, ContinuationConfig};
use cubicbranch::spectral::{eval_center, positivity_check};
use cubicbranch::{Interval, SineExpansion};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const LAMBDA_START: f64 = 18.5;
const STEP: f64 = 0.5;

/// Newton continuation from `λ = 18.5` down to `lambda` in steps of 0.5.
pub fn branch_point(lambda: f64, n: usize) -> Result<SineExpansion<f64>, String> {
    if !(0.0..=LAMBDA_START).contains(&lambda) {
        return Err(format!("lambda must lie in [0, {LAMBDA_START}]"));
    }
    if !(1..=24).contains(&n) {
        return Err("N must lie in 1..=24".into());
    }
    let mut grid = vec![LAMBDA_START];
    let mut l = LAMBDA_START - STEP;
    while l > lambda {
        grid.push(l);
        l -= STEP;
    }
    grid.push(lambda);
    let cfg = ContinuationConfig {
        n,
        lambda_grid: grid,
        ..ContinuationConfig::default()
    };
    let branch = continuation(&cfg).map_err(|e| e.to_string())?;
    Ok(branch.into_iter().next().expect("grid is non-empty").1)
}

fn pair(x: Interval) -> Value {
    json!([x.lo(), x.hi()])
}

pub fn solve_json(lambda: f64, n: usize, resolution: usize) -> Result<Value, String> {
    let omega = branch_point(lambda, n)?;
    let w = omega.to_interval();
    let sigma = Interval::ONE;
    let lam = Interval::point(lambda);
    let d = defect_bounds(&w, lam, sigma).map_err(|e| e.to_string())?;
    let gp = GridPoint::new(w.clone(), &d, Interval::ONE, sigma).map_err(|e| e.to_string())?;
    let res = resolution.clamp(2, 200);
    let mut samples = Vec::with_capacity(res * res);
    for a in 0..res {
        for b in 0..res {
            let x = (a as f64 + 0.5) / res as f64;
            let y = (b as f64 + 0.5) / res as f64;
            samples.push(omega.eval_float(x, y));
        }
    }
    Ok(json!({
        "lambda": lambda,
        "n": n,
        "center": pair(eval_center(&w)),
        "positive": positivity_check(&w),
        "delta_hat": pair(d.delta_hat),
        "delta": pair(d.delta),
        "l4": pair(gp.l4_norm),
        "h01": pair(gp.h01_norm),
        "resolution": res,
        "samples": samples,
    }))
}

pub fn eigen_json(lambda: f64, n: usize, n_e: usize) -> Result<Value, String> {
    let omega = branch_point(lambda, n)?.to_interval();
    let cfg = EigenConfig {
        n_e: n_e.clamp(3, 21),
        ..EigenConfig::default()
    };
    let (out, k) = grid_point_eigen(&omega, Interval::point(lambda), Interval::ONE, &cfg).map_err(|e| e.to_string())?;
    let kappa: Vec<Value> = out
        .enclosures
        .iter()
        .take(2)
        .map(|e| json!([e.lower, e.upper]))
        .collect();
    let steps: Vec<Value> = out
        .steps
        .iter()
        .map(|s| json!({ "s": s.s, "m": s.m, "rho": s.rho }))
        .collect();
    Ok(json!({ "lambda": lambda, "kappa": kappa, "k": pair(k), "steps": steps }))
}

pub fn alpha_json(delta: f64, k: f64, l4: f64) -> Result<Value, String> {
    let pack = EmbeddingPack::unit_square(Interval::ONE).map_err(|e| e.to_string())?;
    let (d, k, l4) = (Interval::point(delta), Interval::point(k), Interval::point(l4));
    let pm = psi_max(k, l4, &pack).map_err(|e| e.to_string())?;
    match alpha_min(d, k, l4, &pack) {
        Ok(a) => Ok(json!({
            "ok": true,
            "alpha": a.alpha.hi(),
            "alpha_bar": pair(a.alpha_bar),
            "psi_max": pair(pm),
            "contraction": contraction(Interval::point(a.alpha.hi()), k, l4, &pack).hi(),
        })),
        Err(e) => Ok(json!({ "ok": false, "reason": e.to_string(), "psi_max": pair(pm) })),
    }
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Approximate solution, its sampled values and the verified defect bounds.
#[wasm_bindgen]
pub fn solve(lambda: f64, n: usize, resolution: usize) -> Result<String, JsError> {
    to_js(solve_json(lambda, n, resolution))
}

/// Enclosures for the two smallest eigenvalues of the linearization and the resulting `K`.
#[wasm_bindgen]
pub fn eigen(lambda: f64, n: usize, n_e: usize) -> Result<String, JsError> {
    to_js(eigen_json(lambda, n, n_e))
}

/// Smallest verified error radius `α` for given defect, inverse-norm bound and `‖ω‖₄`.
#[wasm_bindgen]
pub fn alpha(delta: f64, k: f64, l4: f64) -> Result<String, JsError> {
    to_js(alpha_json(delta, k, l4))
}
