use thiserror::Error;

/// Errors raised by relation construction and the analysis engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("relation has no pairs")]
    EmptyRelation,
    #[error("point {point} is outside the carrier of size {n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("coordinate {0} is outside [0, 1]")]
    CoordinateOutOfRange(f64),
    #[error("finite carrier of size {n} exceeds the supported maximum {max}")]
    TooManyPoints { n: usize, max: usize },
    #[error("{what}: {requested} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },
    #[error("orbit cannot be extended past {at}: no successors")]
    DeadEnd { at: String },
    #[error("walk is not consistent with the relation: {0}")]
    InconsistentWalk(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid homeomorphism: {0}")]
    InvalidHomeomorphism(String),
    #[error("homeomorphism and relation live on different carriers")]
    BackendMismatch,
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty sample")]
    EmptySample,
    #[error("malformed input: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    /// True for malformed input as opposed to well-formed input that breaks a constraint.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
