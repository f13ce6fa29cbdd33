use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use super::{ProofCertificate, Verdict};
use crate::spectral::{write_csv_file, SpectralError};

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("unknown output format {0:?} (expected json, csv or text)")]
    UnknownFormat(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = EmitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "txt" => Ok(Format::Text),
            other => Err(EmitError::UnknownFormat(other.into())),
        }
    }
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf, EmitError> {
    fs::write(&path, contents).map_err(|source| EmitError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}

fn csv_string(header: &[&str], rows: Vec<Vec<f64>>) -> Result<String, EmitError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|x| x.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

/// One row per grid point with `κ₁, κ₂` enclosures.
pub fn table1_csv(cert: &ProofCertificate) -> Result<String, EmitError> {
    let rows = cert
        .grid
        .iter()
        .filter_map(|r| {
            let v = r.verified.as_ref()?;
            let (k1, k2) = (v.enclosures.first()?, v.enclosures.get(1)?);
            Some(vec![r.lambda, k1.lower, k1.upper, k2.lower, k2.upper])
        })
        .collect();
    csv_string(&["lambda", "kappa1_lo", "kappa1_hi", "kappa2_lo", "kappa2_hi"], rows)
}

/// One row per half-interval with upper bounds for `δ`, `K`, `α`.
pub fn table2_csv(cert: &ProofCertificate) -> Result<String, EmitError> {
    let rows = cert
        .branch
        .iter()
        .flat_map(|b| &b.certificates)
        .map(|c| vec![c.lambda_lo.lo(), c.lambda_hi.hi(), c.delta.hi(), c.k.hi(), c.alpha.hi()])
        .collect();
    csv_string(&["lambda_lo", "lambda_hi", "delta", "K", "alpha"], rows)
}

pub fn summary_text(cert: &ProofCertificate) -> String {
    let mut s = String::new();
    let lb = cert.params.lambda_bar;
    match &cert.verdict {
        Verdict::Proved => {
            let _ = writeln!(s, "verdict: PROVED");
            let _ = writeln!(
                s,
                "uniqueness certified for lambda in [0, {lb}] and, by Proposition 2.1, on [{lb}, lambda_1)"
            );
        }
        Verdict::ProvedOnSubinterval { note, .. } => {
            let _ = writeln!(s, "verdict: PROVED ON SUBINTERVAL");
            let _ = writeln!(
                s,
                "existence, local uniqueness and non-degeneracy certified for lambda in [0, {lb}] only; no global uniqueness claim"
            );
            let _ = writeln!(s, "{note}");
        }
        Verdict::Failed { reason, location } => {
            let _ = writeln!(s, "verdict: FAILED");
            match location {
                Some(l) => {
                    let _ = writeln!(
                        s,
                        "first failure in {} on [{}, {}]: {reason}",
                        l.module, l.lambda_lo, l.lambda_hi
                    );
                }
                None => {
                    let _ = writeln!(s, "failure: {reason}");
                }
            }
        }
    }
    let verified = cert
        .grid
        .iter()
        .filter(|r| r.verified.is_some() && r.error.is_none())
        .count();
    let _ = writeln!(s, "grid points verified: {verified} of {}", cert.grid.len());
    if let Some(b) = &cert.branch {
        let ok = b.certificates.iter().filter(|c| c.checks.all()).count();
        let _ = writeln!(s, "half-intervals certified: {ok} of {}", b.expected);
        if let Some(eta) = b.eta {
            let _ = writeln!(s, "uniform eta: {eta}");
        }
        if let Some(worst) = b
            .certificates
            .iter()
            .max_by(|x, y| x.alpha.hi().total_cmp(&y.alpha.hi()))
        {
            let _ = writeln!(
                s,
                "largest alpha: {} on [{}, {}]",
                worst.alpha.hi(),
                worst.lambda_lo.lo(),
                worst.lambda_hi.hi()
            );
        }
    }
    if let Some(e) = &cert.endgame {
        let _ = writeln!(
            s,
            "endgame at lambda_bar = {lb}: omega(x_M) <= {}, sup error <= {}, threshold >= {}, {}",
            e.omega_center.hi(),
            e.sup_err.hi(),
            e.threshold.lo(),
            if e.passed { "closed" } else { "not closed" }
        );
    }
    s
}

/// Writes the requested outputs into `dir` and returns the paths written.
pub fn emit(cert: &ProofCertificate, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>, EmitError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| EmitError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    for f in formats {
        match f {
            Format::Json => written.push(write(dir.join("certificate.json"), &cert.to_json())?),
            Format::Csv => {
                written.push(write(dir.join("table1.csv"), &table1_csv(cert)?)?);
                written.push(write(dir.join("table2.csv"), &table2_csv(cert)?)?);
                let omega_dir = dir.join("omega");
                fs::create_dir_all(&omega_dir).map_err(io(&omega_dir))?;
                for (lambda, omega) in &cert.omegas {
                    let path = omega_dir.join(format!("omega_{lambda}.csv"));
                    write_csv_file(omega, &path)?;
                    written.push(path);
                }
            }
            Format::Text => written.push(write(dir.join("summary.txt"), &summary_text(cert))?),
        }
    }
    Ok(written)
}
