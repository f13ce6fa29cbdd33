use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SineExpansion, SpectralError};

#[derive(Serialize, Deserialize)]
struct Row {
    i: usize,
    j: usize,
    coeff: f64,
}

/// Writes `i,j,coeff` rows for every stored mode, shortest round-trip decimals.
pub fn write_csv<W: Write>(omega: &SineExpansion<f64>, out: W) -> Result<(), SpectralError> {
    let mut w = csv::Writer::from_writer(out);
    for (i, j, coeff) in omega.modes() {
        w.serialize(Row { i, j, coeff })?;
    }
    w.flush().map_err(|source| SpectralError::Io {
        path: "<writer>".into(),
        source,
    })?;
    Ok(())
}

/// Reads an `i,j,coeff` file; the maximal index is the largest index present.
pub fn read_csv<R: Read>(input: R) -> Result<SineExpansion<f64>, SpectralError> {
    let mut rows = Vec::new();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["i", "j", "coeff"] {
        return Err(SpectralError::Parse {
            line: 1,
            reason: format!(
                "expected header i,j,coeff, found {}",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    for (n, rec) in reader.deserialize::<Row>().enumerate() {
        let row = rec?;
        let line = n + 2;
        if row.i == 0 || row.j == 0 {
            return Err(SpectralError::Parse {
                line,
                reason: "indices start at 1".into(),
            });
        }
        if row.i % 2 == 0 || row.j % 2 == 0 {
            return Err(SpectralError::Parse {
                line,
                reason: format!("even index ({}, {})", row.i, row.j),
            });
        }
        if !row.coeff.is_finite() {
            return Err(SpectralError::Parse {
                line,
                reason: "non-finite coefficient".into(),
            });
        }
        rows.push(row);
    }
    let n = rows.iter().map(|r| r.i.max(r.j)).max().unwrap_or(1);
    let mut omega = SineExpansion::zeros(n);
    for r in rows {
        omega.set(r.i, r.j, r.coeff)?;
    }
    Ok(omega)
}

pub fn write_csv_file(omega: &SineExpansion<f64>, path: &Path) -> Result<(), SpectralError> {
    let f = File::create(path).map_err(|source| SpectralError::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_csv(omega, f)
}

pub fn read_csv_file(path: &Path) -> Result<SineExpansion<f64>, SpectralError> {
    let f = File::open(path).map_err(|source| SpectralError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let w = SineExpansion::from_fn(5, |i, j| 1.0 / (i as f64 + 0.1 * j as f64));
        let mut buf = Vec::new();
        write_csv(&w, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("i,j,coeff\n1,1,"));
        assert_eq!(read_csv(&buf[..]).unwrap(), w);
    }

    #[test]
    fn even_index_rejected() {
        let data = "i,j,coeff\n1,1,2.0\n2,1,0.5\n";
        let err = read_csv(data.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("even index"), "{err}");
    }

    #[test]
    fn bad_header_rejected() {
        assert!(read_csv("a,b,c\n1,1,1\n".as_bytes()).is_err());
    }
}
