//! Error type shared across the library and the experiment CLI.

use thiserror::Error;

/// Errors produced by simulation, experiment configuration, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A size cap was exceeded (statevector or dense-matrix path).
    #[error("{what}: requested {requested} qubits exceeds the {cap}-qubit cap")]
    ResourceCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    /// An API precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Invalid experiment configuration (bad field, unknown label, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A NaN or infinity surfaced where a finite number was required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::ResourceCap { .. } => 3,
            Error::NonFinite(_) => 4,
            Error::Contract(_) | Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
