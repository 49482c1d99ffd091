use thiserror::Error;

/// Errors raised by the numerical and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("iteration did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("eigenspaces do not span the space: rank {rank} of {dim}, Σ E(α) ≠ I")]
    IncompleteSpan { rank: usize, dim: usize },
    #[error("eigenspaces for values {first} and {second} are not mutually orthogonal")]
    OverlappingEigenspaces { first: f64, second: f64 },
    #[error("eigenvalue {0} listed more than once")]
    DuplicateOutcome(f64),
    #[error("eigenspace for value {0} is empty")]
    EmptyEigenspace(f64),
    #[error("observable has no outcomes")]
    NoOutcomes,
    #[error("observable invariant violated: {0}")]
    InvalidObservable(String),
    #[error("{0} is not an outcome of the observable")]
    UnknownOutcome(f64),
    #[error("conditioning event has vanishing probability {probability:e}; conditional state undefined")]
    DegenerateCondition { probability: f64 },
    #[error("probability {0} exceeds 1 beyond tolerance")]
    ProbabilityOutOfRange(f64),
    #[error("slot {slot} out of range for {factors} tensor factors")]
    SlotOutOfRange { slot: usize, factors: usize },
    #[error("observables do not commute (commutator norm {deviation:e})")]
    NotCommuting { deviation: f64 },
    #[error("observable is not dichotomous (outcomes must be exactly ±1)")]
    NotDichotomous,
    #[error("observables A{a} and B{b} do not commute")]
    CrossPairNotCommuting { a: usize, b: usize },
    #[error("value pair ({0}, {1}) listed more than once")]
    DuplicatePair(f64, f64),
    #[error("measurement chain is empty")]
    EmptyChain,
}

impl Error {
    /// Stable identifier of the variant, used in reports and expectations.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::NonFinite => "NonFinite",
            Error::InvalidTolerance(_) => "InvalidTolerance",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::ZeroVector => "ZeroVector",
            Error::IncompleteSpan { .. } => "IncompleteSpan",
            Error::OverlappingEigenspaces { .. } => "OverlappingEigenspaces",
            Error::DuplicateOutcome(_) => "DuplicateOutcome",
            Error::EmptyEigenspace(_) => "EmptyEigenspace",
            Error::NoOutcomes => "NoOutcomes",
            Error::InvalidObservable(_) => "InvalidObservable",
            Error::UnknownOutcome(_) => "UnknownOutcome",
            Error::DegenerateCondition { .. } => "DegenerateCondition",
            Error::ProbabilityOutOfRange(_) => "ProbabilityOutOfRange",
            Error::SlotOutOfRange { .. } => "SlotOutOfRange",
            Error::NotCommuting { .. } => "NotCommuting",
            Error::NotDichotomous => "NotDichotomous",
            Error::CrossPairNotCommuting { .. } => "CrossPairNotCommuting",
            Error::DuplicatePair(..) => "DuplicatePair",
            Error::EmptyChain => "EmptyChain",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
