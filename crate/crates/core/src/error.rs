use std::path::PathBuf;

/// Errors produced by the simulation, sweep, and persistence layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("light distance r = {r} must exceed the success radius {success_radius}")]
    InvalidRadius { r: f64, success_radius: f64 },

    /// The integrator produced a non-finite state component. With the
    /// distance floor active this indicates a bug, not a bad controller.
    #[error("state became non-finite at step {step}{context}")]
    NumericalDivergence { step: usize, context: String },

    #[error("success matrices have mismatched dimensions: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    /// A resume was attempted against a manifest whose configuration
    /// snapshot differs from the requested sweep.
    #[error("manifest config does not match the requested sweep: {0}")]
    ChecksumMismatch(String),

    #[error("no matrix dump for design {design_index} at {path}")]
    MissingMatrixDump { design_index: usize, path: PathBuf },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
