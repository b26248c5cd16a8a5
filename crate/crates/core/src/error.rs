use thiserror::Error;

pub type Result<T> = std::result::Result<T, IaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IaError {
    #[error("{}", .0.join("; "))]
    InvalidConfig(Vec<String>),
    #[error("{0}")]
    InfeasibleAntennas(String),
    #[error("{0}")]
    SingularConstruction(String),
    #[error("null space has dimension {available}, {requested} requested")]
    EmptyNullSpace { requested: usize, available: usize },
    #[error("matrix is numerically zero")]
    ZeroMatrix,
    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("{0}")]
    DimensionMismatch(String),
    #[error("approach {approach} is not defined for topology {topology}")]
    UnknownApproach { topology: String, approach: String },
    #[error("option d needs one codebook per cell")]
    MissingCodebook,
    #[error("slope window holds {0} points, at least 2 required")]
    InsufficientPoints(usize),
    #[error("trial {trial}: {source}")]
    TrialFailed { trial: usize, source: Box<IaError> },
    #[error("{0}")]
    Scenario(String),
    #[error("{0}")]
    Io(String),
}

impl IaError {
    /// Stable identifier used in CLI and FFI error reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            IaError::InvalidConfig(_) => "InvalidConfig",
            IaError::InfeasibleAntennas(_) => "InfeasibleAntennas",
            IaError::SingularConstruction(_) => "SingularConstruction",
            IaError::EmptyNullSpace { .. } => "EmptyNullSpace",
            IaError::ZeroMatrix => "ZeroMatrix",
            IaError::NotHermitian(_) => "NotHermitian",
            IaError::DimensionMismatch(_) => "DimensionMismatch",
            IaError::UnknownApproach { .. } => "UnknownApproach",
            IaError::MissingCodebook => "MissingCodebook",
            IaError::InsufficientPoints(_) => "InsufficientPoints",
            IaError::TrialFailed { source, .. } => source.kind(),
            IaError::Scenario(_) => "Scenario",
            IaError::Io(_) => "Io",
        }
    }

    /// The error with any trial wrapper removed.
    pub fn root(&self) -> &IaError {
        match self {
            IaError::TrialFailed { source, .. } => source.root(),
            other => other,
        }
    }
}

impl From<std::io::Error> for IaError {
    fn from(e: std::io::Error) -> Self {
        IaError::Io(e.to_string())
    }
}
