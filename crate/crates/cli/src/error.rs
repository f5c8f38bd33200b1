use std::path::PathBuf;

use numeral_core::bench::BenchError;
use numeral_core::corpus::CorpusError;
use numeral_core::records::RecordError;
use numeral_core::regression::RegressionError;
use numeral_core::scoring::ScoreError;
use numeral_core::{CodecError, DecimalError, FormatError};
use serde::Serialize;
use thiserror::Error;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;
pub const EXIT_NETWORK: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Records {
        path: PathBuf,
        #[source]
        source: RecordError,
    },
    #[error("{path}: {reason}")]
    Config { path: PathBuf, reason: String },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Decimal(#[from] DecimalError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Regression(#[from] RegressionError),
    #[error("{failed} of {attempted} requests failed; first error: {first}")]
    Network {
        failed: usize,
        attempted: usize,
        first: String,
    },
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    exit_code: u8,
    message: String,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Network { .. } => EXIT_NETWORK,
            _ => EXIT_DATA,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Records { .. } => "records",
            CliError::Config { .. } => "config",
            CliError::Codec(_) => "codec",
            CliError::Format(_) => "format",
            CliError::Decimal(_) => "decimal",
            CliError::Bench(_) => "bench",
            CliError::Score(_) => "score",
            CliError::Corpus(_) => "corpus",
            CliError::Regression(_) => "regression",
            CliError::Network { .. } => "network",
        }
    }

    /// One-line JSON object for stderr.
    pub fn record(&self) -> String {
        let record = ErrorRecord {
            error: self.kind(),
            exit_code: self.exit_code(),
            message: self.to_string(),
        };
        serde_json::to_string(&record).expect("error record serializes")
    }
}
