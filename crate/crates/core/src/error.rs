use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("inconsistent subsystem factorization: {0}")]
    Subsystems(String),

    #[error("occupation cap exceeded: {0}")]
    OccupationCap(String),

    #[error("expected a qubit (dimension 2), got dimension {0}")]
    NotQubit(usize),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParameters(Vec<String>),

    #[error("insufficient trials: need at least {required}, got {requested}")]
    InsufficientTrials { required: usize, requested: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DimensionOverflow { .. } => "dimension_overflow",
            Error::NotNormalized { .. } => "not_normalized",
            Error::NotUnitary { .. } => "not_unitary",
            Error::InvalidDensity(_) => "invalid_density",
            Error::Subsystems(_) => "subsystems",
            Error::OccupationCap(_) => "occupation_cap",
            Error::NotQubit(_) => "not_qubit",
            Error::OutOfRange(_) => "out_of_range",
            Error::InvalidParameters(_) => "invalid_parameters",
            Error::InsufficientTrials { .. } => "insufficient_trials",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }
}
