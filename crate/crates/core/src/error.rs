use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("matrix is not Hermitian: relative asymmetry norm {norm:.3e}")]
    NotHermitian { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NotPositive { eigenvalue: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid model parameters: {0}")]
    InvalidModel(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),

    #[error("invalid noise configuration: {0}")]
    InvalidNoise(String),

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("propagation failed: {0}")]
    Propagation(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-norm {off:.3e})")]
    EigNoConvergence { sweeps: usize, off: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    ConfigParse(String),
}
