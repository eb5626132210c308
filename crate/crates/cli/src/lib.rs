//! Front end for the smoothness checker: ideal files, reports and corpus runs.

pub mod corpus;
pub mod ideal_file;
pub mod report;

use std::path::Path;

use thiserror::Error;

pub use corpus::{run_corpus, CorpusReport, CorpusRow};
pub use ideal_file::{IdealFile, ParseError};
pub use report::{check, run_file, Report, Settings, Verdict};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Mode(String),
    #[error("{0}")]
    Algebra(String),
    #[error("run failed: {0}")]
    Run(String),
    #[error("{0}")]
    Corpus(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn parse(path: &str, source: ParseError) -> Self {
        CliError::Parse {
            path: path.to_string(),
            source,
        }
    }
}
