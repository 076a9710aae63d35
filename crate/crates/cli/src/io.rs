use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use thiserror::Error;
use wavesets::lab::vector_from_pairs;
use wavesets::linalg::{CMatrix, CVector, MatrixJson};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Engine(#[from] wavesets::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io_error",
            CliError::Json { .. } => "malformed_json",
            CliError::Csv { .. } => "malformed_csv",
            CliError::Usage(_) => "usage",
            CliError::Engine(e) => e.code(),
        }
    }

    /// Infeasible decomposition requests are answers, not input mistakes.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(wavesets::Error::Infeasible(_)) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

pub fn read_matrix(path: &Path) -> CliResult<CMatrix> {
    let j: MatrixJson = read_json(path)?;
    Ok(CMatrix::try_from(j)?)
}

/// Vectors are stored as `[[re, im], ...]`.
pub fn read_vector(path: &Path) -> CliResult<CVector> {
    let pairs: Vec<[f64; 2]> = read_json(path)?;
    if pairs.is_empty() {
        return Err(CliError::Usage(format!("{}: empty vector", path.display())));
    }
    Ok(vector_from_pairs(&pairs))
}

/// Reads every numeric field of a CSV file in record order. A first record
/// that does not start with a number is taken as a header and skipped.
pub fn read_numbers(path: &Path) -> CliResult<Vec<f64>> {
    let text = read_text(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let bad = |line: u64, message: String| CliError::Csv {
        path: path.to_owned(),
        line: line as usize,
        message,
    };
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(0, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let fields: Vec<&str> = record.iter().filter(|f| !f.is_empty()).collect();
        if i == 0 && fields.first().is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        for f in fields {
            match f.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push(v),
                _ => return Err(bad(line, format!("not a finite number: {f:?}"))),
            }
        }
    }
    Ok(out)
}

/// Writes to `out` when given, stdout otherwise.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
