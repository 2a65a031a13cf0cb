use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("qubit count {0} out of range 1..={max}", max = crate::MAX_QUBITS)]
    QubitCount(usize),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid wave packet: {0}")]
    InvalidPacket(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state preparation fit reached fidelity {achieved:.6}, below required {required}")]
    FidelityBelowThreshold { achieved: f64, required: f64 },

    #[error("kinetic circuit failed oracle self-test for n = {n_qubits} (max deviation {deviation:e})")]
    OracleSelfTest { n_qubits: usize, deviation: f64 },

    #[error("qasm line {line}: {message}")]
    Qasm { line: usize, message: String },

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
