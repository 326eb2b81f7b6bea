//! One error type for the whole binary, each variant mapped to an exit
//! code: 2 for anything wrong with the inputs (files, formats, flags,
//! preconditions), 3 for numerical failures that arise after inputs were
//! accepted. Success is 0.

use std::path::PathBuf;

use newsstyle_core::classifier::{EvalError, PredictError, TrainError};
use newsstyle_core::corpus::CorpusError;
use newsstyle_core::features::FeatureError;
use newsstyle_core::lexicon::LexiconError;
use newsstyle_core::stats::StatsError;
use newsstyle_core::textproc::TextError;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Format { path: PathBuf, detail: String },
    #[error("configuration: {0}")]
    Config(String),
    #[error("corpus: {0}")]
    Corpus(#[from] CorpusError),
    #[error("text: {0}")]
    Text(#[from] TextError),
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("features: {0}")]
    Features(#[from] FeatureError),
    #[error("training: {0}")]
    Train(#[from] TrainError),
    #[error("prediction: {0}")]
    Predict(#[from] PredictError),
    #[error("evaluation: {0}")]
    Eval(#[from] EvalError),
    #[error("statistics: {0}")]
    Stats(#[from] StatsError),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn format(path: impl Into<PathBuf>, detail: impl Into<String>) -> CliError {
        CliError::Format { path: path.into(), detail: detail.into() }
    }

    /// Process exit code for this error. Every library error traces back
    /// to something in the inputs (files, formats, flags, data shape) and
    /// exits 2; only a non-finite result discovered after the inputs were
    /// accepted exits 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}
