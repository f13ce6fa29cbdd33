use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{GridVerified, ProblemParams, SCHEMA_VERSION};
use crate::spectral::SineExpansion;

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn feed_omega(h: &mut Sha256, omega: &SineExpansion<f64>) {
    h.update((omega.max_index() as u64).to_le_bytes());
    for c in omega.coeffs() {
        h.update(c.to_bits().to_le_bytes());
    }
}

/// SHA-256 of the exact coefficient bits.
pub fn omega_digest(omega: &SineExpansion<f64>) -> String {
    let mut h = Sha256::new();
    feed_omega(&mut h, omega);
    hex(&h.finalize())
}

/// Key of a grid-point result: everything the verification at that point reads.
pub fn grid_key(params: &ProblemParams, lambda: f64, omega: &SineExpansion<f64>) -> String {
    let mut h = Sha256::new();
    h.update(SCHEMA_VERSION.to_le_bytes());
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update(params.sigma.to_bits().to_le_bytes());
    h.update(serde_json::to_vec(&params.eigen).expect("config serializes"));
    h.update(lambda.to_bits().to_le_bytes());
    feed_omega(&mut h, omega);
    hex(&h.finalize())
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    verified: GridVerified,
}

pub(super) fn load(dir: &Path, key: &str) -> Option<GridVerified> {
    let text = fs::read_to_string(dir.join(format!("{key}.json"))).ok()?;
    let entry: Entry = serde_json::from_str(&text).ok()?;
    (entry.key == key).then_some(entry.verified)
}

pub(super) fn store(dir: &Path, key: &str, verified: &GridVerified) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let entry = Entry {
        key: key.to_string(),
        verified: verified.clone(),
    };
    let tmp = dir.join(format!("{key}.json.tmp"));
    fs::write(&tmp, serde_json::to_vec(&entry).map_err(io::Error::other)?)?;
    fs::rename(tmp, dir.join(format!("{key}.json")))
}
