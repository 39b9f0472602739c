use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("physical grid of {m} points cannot resolve truncation K = {kmax} (need at least {required})")]
    GridTooSmall {
        m: usize,
        kmax: usize,
        required: usize,
    },

    #[error("Hermitian symmetry violated: defect {defect:e} exceeds {tolerance:e}")]
    HermitianViolation { defect: f64, tolerance: f64 },

    #[error("fields have different truncation orders ({left} vs {right})")]
    TruncationMismatch { left: usize, right: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("{}", format_config_error(*.line, .message))]
    Config { line: Option<usize>, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_config_error(line: Option<usize>, message: &str) -> String {
    match line {
        Some(line) => format!("config error at line {line}: {message}"),
        None => format!("config error: {message}"),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
