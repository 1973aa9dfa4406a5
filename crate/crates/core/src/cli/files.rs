//! Matrix and vector files.
//!
//! JSON layout: `{"n": 2, "complex": false, "data": [[1.0, 0.0], [0.0, 1.0]]}`, with
//! complex entries written as `[re, im]` pairs. A `.csv` file holds a real
//! symmetric matrix, one row per line.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::psd::{CMat, CVec, HermitianMatrix};
use crate::tolerance::Tolerance;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn encode(z: Complex64, complex: bool) -> Self {
        if complex {
            Entry::Complex([z.re, z.im])
        } else {
            Entry::Real(z.re)
        }
    }

    fn decode(self, complex: bool) -> Result<Complex64, String> {
        match (self, complex) {
            (Entry::Real(x), _) => Ok(Complex64::new(x, 0.0)),
            (Entry::Complex([re, im]), true) => Ok(Complex64::new(re, im)),
            (Entry::Complex(_), false) => Err("[re, im] pair in a file with complex = false".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub complex: bool,
    pub data: Vec<Vec<Entry>>,
}

impl MatrixFile {
    pub fn from_hermitian(m: &HermitianMatrix) -> Self {
        let complex = !m.is_real();
        let n = m.dim();
        let data = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Entry::encode(m.as_matrix()[(i, j)], complex))
                    .collect()
            })
            .collect();
        MatrixFile { n, complex, data }
    }

    pub fn to_matrix(&self) -> Result<CMat, CliError> {
        if self.data.len() != self.n || self.data.iter().any(|r| r.len() != self.n) {
            return Err(CliError::Parse(format!(
                "data is not an {n}x{n} array",
                n = self.n
            )));
        }
        let mut m = CMat::zeros(self.n, self.n);
        for (i, row) in self.data.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                m[(i, j)] = e.decode(self.complex).map_err(CliError::Parse)?;
            }
        }
        Ok(m)
    }

    pub fn to_hermitian(&self, tol: &Tolerance) -> Result<HermitianMatrix, CliError> {
        if self.n == 0 {
            return Err(CliError::Parse("n must be at least 1".into()));
        }
        HermitianMatrix::with_tolerance(self.to_matrix()?, tol)
            .map_err(|e| CliError::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFile {
    pub n: usize,
    pub complex: bool,
    pub data: Vec<Entry>,
}

impl VectorFile {
    pub fn from_vector(v: &CVec) -> Self {
        let complex = v.iter().any(|z| z.im != 0.0);
        VectorFile {
            n: v.len(),
            complex,
            data: v.iter().map(|&z| Entry::encode(z, complex)).collect(),
        }
    }

    pub fn to_vector(&self) -> Result<CVec, CliError> {
        if self.data.len() != self.n || self.n == 0 {
            return Err(CliError::Parse(format!(
                "data does not hold {} entries",
                self.n
            )));
        }
        let entries = self
            .data
            .iter()
            .map(|e| e.decode(self.complex))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::Parse)?;
        Ok(CVec::from_vec(entries))
    }
}

/// A loaded input with the SHA-256 of its bytes.
pub struct Loaded<T> {
    pub value: T,
    pub sha256: String,
}

fn read(path: &Path) -> Result<(Vec<u8>, String), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    Ok((bytes, digest))
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn parse_csv(bytes: &[u8]) -> Result<MatrixFile, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut data = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse(e.to_string()))?;
        let row = record
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map(Entry::Real)
                    .map_err(|e| CliError::Parse(format!("{s:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        data.push(row);
    }
    Ok(MatrixFile {
        n: data.len(),
        complex: false,
        data,
    })
}

pub fn load_matrix(path: &Path, tol: &Tolerance) -> Result<Loaded<HermitianMatrix>, CliError> {
    let (bytes, sha256) = read(path)?;
    let file = if is_csv(path) {
        parse_csv(&bytes)?
    } else {
        serde_json::from_slice::<MatrixFile>(&bytes)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
    };
    Ok(Loaded {
        value: file.to_hermitian(tol)?,
        sha256,
    })
}

pub fn load_vector(path: &Path) -> Result<Loaded<CVec>, CliError> {
    let (bytes, sha256) = read(path)?;
    let file: VectorFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        value: file.to_vector()?,
        sha256,
    })
}
