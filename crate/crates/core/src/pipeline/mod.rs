//! Continuation, per-grid-point verification, branch certificates and the
//! endgame, folded into one certificate.

mod cache;
mod emit;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use tracing::{info, warn};

use crate::branch::{verify_branch, BranchReport, EmbeddingPack, GridPoint};
use crate::defect::{defect_bounds, DefectBounds};
use crate::eigen::{grid_point_eigen, EigenConfig, EigenEnclosure, HomotopyStep};
use crate::endgame::{run_endgame, EndgameRecord, SupNormPack};
use crate::interval::{Interval, ROUNDING_MODE};
use crate::solver::{continuation, ContinuationConfig};
use crate::spectral::{eval_center, positivity_check, SineExpansion};

pub use cache::{grid_key, omega_digest};
pub use emit::{emit, summary_text, table1_csv, table2_csv, EmitError, Format};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemParams {
    pub sigma: f64,
    /// Exponent of the nonlinearity; only 3 is supported.
    pub p: u32,
    pub lambda_bar: f64,
    /// Spacing after the first two points `0` and `grid_step / 2`.
    pub grid_step: f64,
    /// Explicit grid; overrides `grid_step` when set.
    pub grid: Option<Vec<f64>>,
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha0: f64,
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    /// Overrides the computed `C₆`.
    pub c6: Option<f64>,
    pub eigen: EigenConfig,
}

impl Default for ProblemParams {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            p: 3,
            lambda_bar: 18.5,
            grid_step: 0.2,
            grid: None,
            n: 16,
            alpha0: 4.0,
            newton_tol: 1e-13,
            max_newton_iters: 60,
            c6: None,
            eigen: EigenConfig::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid parameters: {0}")]
pub struct ParamsError(String);

/// Nearest double to the decimal rendering of `x` with nine digits.
fn tidy(x: f64) -> f64 {
    format!("{x:.9}").parse().unwrap_or(x)
}

impl ProblemParams {
    pub fn from_toml(text: &str) -> Result<Self, ParamsError> {
        toml::from_str(text).map_err(|e| ParamsError(e.to_string()))
    }

    pub fn default_toml() -> String {
        toml::to_string(&Self::default()).expect("defaults serialize")
    }

    /// `0, h/2, 3h/2, ...` up to and including `λ̄`.
    pub fn grid_points(&self) -> Vec<f64> {
        if let Some(g) = &self.grid {
            return g.clone();
        }
        let h = self.grid_step;
        let mut g = vec![0.0];
        let mut k = 0usize;
        loop {
            let v = tidy((2 * k + 1) as f64 * h / 2.0);
            if v >= self.lambda_bar - 1e-9 * h {
                break;
            }
            g.push(v);
            k += 1;
        }
        g.push(self.lambda_bar);
        g
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let bad = |m: String| Err(ParamsError(m));
        let l1 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
        if self.p != 3 {
            return bad(format!("p = {} is not supported, only p = 3", self.p));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad("sigma must be positive".into());
        }
        if !(self.lambda_bar > 0.0 && self.lambda_bar < l1) {
            return bad(format!("lambda_bar = {} outside (0, lambda_1)", self.lambda_bar));
        }
        if self.grid.is_none() && !(self.grid_step > 0.0) {
            return bad("grid_step must be positive".into());
        }
        if self.n == 0 || self.eigen.n_e == 0 || self.eigen.m_max < 2 {
            return bad("N, eigen.n_e must be positive and eigen.m_max >= 2".into());
        }
        let g = self.grid_points();
        if g.len() < 2 || g[0] != 0.0 || g.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("grid must start at 0 and increase strictly".into());
        }
        if *g.last().unwrap() != self.lambda_bar {
            return bad("grid must end at lambda_bar".into());
        }
        Ok(())
    }

    pub fn continuation_config(&self) -> ContinuationConfig {
        ContinuationConfig {
            n: self.n,
            lambda_start: self.lambda_bar,
            lambda_grid: self.grid_points(),
            alpha0: self.alpha0,
            newton_tol: self.newton_tol,
            max_iters: self.max_newton_iters,
        }
    }

    pub fn embedding(&self) -> Result<EmbeddingPack, ParamsError> {
        let pack = EmbeddingPack::unit_square(Interval::point(self.sigma)).map_err(|e| ParamsError(e.to_string()))?;
        Ok(match self.c6 {
            Some(c) => pack.with_c6(Interval::point(c)),
            None => pack,
        })
    }
}

/// Deliberate corruption used to check that a broken ingredient blocks the proof.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Fault {
    /// Replace `γ` by a value above 1/5.
    Gamma,
    /// Multiply the defect bounds at one grid point.
    Defect { index: usize, factor: f64 },
    /// Pull the lower bound of `κ₂` at one grid point below 1.
    Eigen { index: usize },
    /// Add to the sup-norm error at `λ̄`.
    Endgame { extra: f64 },
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// 0 uses all cores.
    pub workers: usize,
    /// Directory where verified grid-point results are stored.
    pub cache_dir: Option<PathBuf>,
    /// Read matching entries from `cache_dir` instead of recomputing.
    pub resume: bool,
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Location {
    pub module: String,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Proved,
    /// Branch verified on `[0, λ̄]`; the endgame was not attempted.
    ProvedOnSubinterval {
        lambda_bar: f64,
        note: String,
    },
    Failed {
        reason: String,
        location: Option<Location>,
    },
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved)
    }
}

/// Verified quantities at one grid point; also the cache payload.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridVerified {
    pub delta_hat: Interval,
    pub delta: Interval,
    pub enclosures: Vec<EigenEnclosure>,
    pub steps: Vec<HomotopyStep>,
    pub k: Interval,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridRecord {
    pub index: usize,
    pub lambda: f64,
    pub omega_sha256: String,
    pub omega_center: Interval,
    pub positive: bool,
    /// Not serialized, so resumed and cold runs give identical certificates.
    #[serde(skip)]
    pub cached: bool,
    pub verified: Option<GridVerified>,
    pub norms: Option<GridPoint>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fingerprint {
    pub crate_version: String,
    pub rounding_mode: String,
    pub target: String,
}

impl Fingerprint {
    fn current() -> Self {
        Self {
            crate_version: env!("CARGO_PKG_VERSION").into(),
            rounding_mode: ROUNDING_MODE.into(),
            target: format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofCertificate {
    pub schema_version: u32,
    pub params: ProblemParams,
    pub fingerprint: Fingerprint,
    pub embedding: Option<EmbeddingPack>,
    pub grid: Vec<GridRecord>,
    pub branch: Option<BranchReport>,
    pub endgame: Option<EndgameRecord>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub omegas: Vec<(f64, SineExpansion<f64>)>,
}

impl ProofCertificate {
    fn new(params: &ProblemParams, verdict: Verdict) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            params: params.clone(),
            fingerprint: Fingerprint::current(),
            embedding: None,
            grid: Vec::new(),
            branch: None,
            endgame: None,
            verdict,
            omegas: Vec::new(),
        }
    }

    /// Canonical JSON: sorted keys, shortest round-trip floats.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("certificate serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }
}

fn failed(module: &str, reason: impl Into<String>, lo: f64, hi: f64) -> Verdict {
    Verdict::Failed {
        reason: reason.into(),
        location: Some(Location {
            module: module.into(),
            lambda_lo: lo,
            lambda_hi: hi,
        }),
    }
}

fn verify_point(
    omega: &SineExpansion<Interval>,
    lambda: f64,
    sigma: Interval,
    cfg: &EigenConfig,
) -> Result<GridVerified, String> {
    let lam = Interval::point(lambda);
    let DefectBounds { delta_hat, delta, .. } = defect_bounds(omega, lam, sigma).map_err(|e| format!("defect: {e}"))?;
    let (out, k) = grid_point_eigen(omega, lam, sigma, cfg).map_err(|e| format!("eigen: {e}"))?;
    Ok(GridVerified {
        delta_hat,
        delta,
        enclosures: out.enclosures.into_iter().take(2).collect(),
        steps: out.steps,
        k,
    })
}

fn apply_fault(v: &mut GridVerified, index: usize, fault: Option<Fault>) {
    match fault {
        Some(Fault::Defect { index: i, factor }) if i == index => {
            v.delta = v.delta * factor;
            v.delta_hat = v.delta_hat * factor;
        }
        Some(Fault::Eigen { index: i }) if i == index => {
            if let Some(e) = v.enclosures.get_mut(1) {
                e.lower = 0.5;
            }
        }
        _ => {}
    }
}

fn process_point(
    index: usize,
    lambda: f64,
    omega: &SineExpansion<f64>,
    params: &ProblemParams,
    opts: &RunOptions,
) -> GridRecord {
    let sigma = Interval::point(params.sigma);
    let omega_i = omega.to_interval();
    let key = grid_key(params, lambda, omega);
    let mut record = GridRecord {
        index,
        lambda,
        omega_sha256: omega_digest(omega),
        omega_center: eval_center(&omega_i),
        positive: positivity_check(&omega_i),
        cached: false,
        verified: None,
        norms: None,
        error: None,
    };
    if !record.positive {
        record.error = Some("positivity of the approximation not verified".into());
        return record;
    }
    let cached = opts
        .cache_dir
        .as_deref()
        .filter(|_| opts.resume)
        .and_then(|d| cache::load(d, &key));
    record.cached = cached.is_some();
    let verified = match cached {
        Some(v) => Ok(v),
        None => verify_point(&omega_i, lambda, sigma, &params.eigen),
    };
    let mut v = match verified {
        Ok(v) => v,
        Err(e) => {
            record.error = Some(e);
            return record;
        }
    };
    if !record.cached {
        if let Some(dir) = &opts.cache_dir {
            if let Err(e) = cache::store(dir, &key, &v) {
                warn!(lambda, error = %e, "could not write cache entry");
            }
        }
    }
    apply_fault(&mut v, index, opts.fault);
    let check = crate::eigen::compute_k(&v.enclosures);
    match check {
        Ok(k) => v.k = k,
        Err(e) => {
            record.error = Some(format!("eigen: {e}"));
            record.verified = Some(v);
            return record;
        }
    }
    let defect = DefectBounds {
        lambda: Interval::point(lambda),
        delta_hat: v.delta_hat,
        delta: v.delta,
    };
    match GridPoint::new(omega_i, &defect, v.k, sigma) {
        Ok(gp) => record.norms = Some(gp),
        Err(e) => record.error = Some(format!("norms: {e}")),
    }
    info!(
        lambda,
        k = v.k.hi(),
        delta = v.delta.hi(),
        cached = record.cached,
        "grid point verified"
    );
    record.verified = Some(v);
    record
}

#[cfg(feature = "parallel")]
fn map_points<F>(n: usize, workers: usize, f: F) -> Vec<GridRecord>
where
    F: Fn(usize) -> GridRecord + Sync + Send,
{
    use rayon::prelude::*;
    let run = || (0..n).into_par_iter().map(&f).collect::<Vec<_>>();
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => (0..n).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_points<F>(n: usize, _workers: usize, f: F) -> Vec<GridRecord>
where
    F: Fn(usize) -> GridRecord,
{
    (0..n).map(f).collect()
}

/// The whole computation. Never panics on mathematical failure; the verdict says what went wrong.
pub fn run(params: &ProblemParams, opts: &RunOptions) -> ProofCertificate {
    if let Err(e) = params.validate() {
        return ProofCertificate::new(
            params,
            Verdict::Failed {
                reason: e.to_string(),
                location: None,
            },
        );
    }
    let mut cert = ProofCertificate::new(params, Verdict::Proved);
    let mut pack = match params.embedding() {
        Ok(p) => p,
        Err(e) => {
            cert.verdict = Verdict::Failed {
                reason: e.to_string(),
                location: None,
            };
            return cert;
        }
    };
    if opts.fault == Some(Fault::Gamma) {
        pack.gamma = Interval::point(0.25);
    }
    cert.embedding = Some(pack);
    let grid = params.grid_points();
    let (lo, hi) = (grid[0], *grid.last().unwrap());
    if !(pack.gamma.hi() < 0.2) {
        cert.verdict = failed("branch", format!("gamma = {} is not below 1/5", pack.gamma), lo, hi);
        return cert;
    }

    let omegas = match continuation(&params.continuation_config()) {
        Ok(o) => o,
        Err(e) => {
            cert.verdict = failed("solver", e.to_string(), lo, hi);
            return cert;
        }
    };
    info!(points = omegas.len(), "continuation done");
    cert.grid = map_points(omegas.len(), opts.workers, |i| {
        process_point(i, omegas[i].0, &omegas[i].1, params, opts)
    });
    cert.omegas = omegas;

    if let Some(bad) = cert.grid.iter().find(|r| r.error.is_some()) {
        let module = bad.error.as_deref().and_then(|e| e.split(':').next()).unwrap_or("grid");
        let module = if bad.positive { module } else { "spectral" };
        cert.verdict = failed(module, bad.error.clone().unwrap_or_default(), bad.lambda, bad.lambda);
        return cert;
    }
    let points: Vec<GridPoint> = cert.grid.iter().filter_map(|r| r.norms.clone()).collect();
    let report = match verify_branch(&points, &pack) {
        Ok(r) => r,
        Err(e) => {
            cert.verdict = failed("branch", e.to_string(), lo, hi);
            return cert;
        }
    };
    let branch_ok = report.is_valid();
    let first_failure = report.failures.first().cloned();
    let last_alpha = report.certificates.last().map(|c| Interval::point(c.alpha.hi()));
    cert.branch = Some(report);
    if !branch_ok {
        cert.verdict = match first_failure {
            Some(f) => failed("branch", f.reason, f.lambda_lo, f.lambda_hi),
            None => failed("branch", "incomplete set of half-interval certificates", lo, hi),
        };
        return cert;
    }

    let top = points.last().expect("at least two grid points");
    let lambda_bar = Interval::point(params.lambda_bar);
    let threshold = crate::endgame::threshold(lambda_bar).unwrap_or(Interval::ZERO);
    if eval_center(&top.omega).lo() >= threshold.hi() {
        cert.verdict = Verdict::ProvedOnSubinterval {
            lambda_bar: params.lambda_bar,
            note: format!(
                "endgame skipped: omega(x_M) = {} is not below sqrt(lambda_bar / 2) = {}",
                eval_center(&top.omega),
                threshold
            ),
        };
        return cert;
    }
    let sup_pack = SupNormPack::unit_square().expect("constant pack");
    let alpha = last_alpha.expect("valid branch has certificates");
    let record = run_endgame(&top.omega, alpha, top.delta_hat, lambda_bar, &sup_pack, &pack).map(|mut r| {
        if let Some(Fault::Endgame { extra }) = opts.fault {
            r.sup_err = r.sup_err + extra;
            r.passed = (r.omega_center + r.sup_err).hi() < r.threshold.lo();
        }
        r
    });
    match record {
        Ok(r) => {
            let passed = r.passed;
            cert.endgame = Some(r);
            if !passed {
                cert.verdict = failed(
                    "endgame",
                    "sup-norm bound at lambda_bar does not close below the threshold",
                    hi,
                    hi,
                );
            }
        }
        Err(e) => cert.verdict = failed("endgame", e.to_string(), hi, hi),
    }
    cert
}
