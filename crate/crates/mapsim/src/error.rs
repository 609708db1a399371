use std::io;
use std::path::PathBuf;

use mapsim_core::topology::ArchKind;

use crate::config::PaperConfig;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid {flag}: {reason}")]
    InvalidFlag { flag: &'static str, reason: String },
    #[error(transparent)]
    Model(#[from] mapsim_core::Error),
    #[error("run {arch} config {config} failed: {source}")]
    Run {
        arch: ArchKind,
        config: PaperConfig,
        source: mapsim_core::Error,
    },
    #[error("nothing to plot")]
    EmptyPlot,
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed {what}: {detail}")]
    Parse { what: &'static str, detail: String },
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Io { .. } | HarnessError::Csv(_) => 2,
            _ => 1,
        }
    }
}
