use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("exponent p = {0} is outside [1, ∞) or too large")]
    InvalidExponent(String),

    #[error("window [{min}, {max}] has no levels")]
    EmptyWindow { min: i64, max: i64 },

    #[error("window [{min}, {max}] must contain level 0")]
    WindowMissesZero { min: i64, max: i64 },

    #[error("system has no cells")]
    NoCells,

    #[error("mu is missing level {0}")]
    MissingLevel(i64),

    #[error("mu has level {0} outside the window")]
    StrayLevel(i64),

    #[error("mu[{k}] has {found} entries, expected {expected}")]
    CellCountMismatch {
        k: i64,
        expected: usize,
        found: usize,
    },

    #[error("mu[{k}][{cell}] is not positive")]
    NonPositiveMeasure { k: i64, cell: usize },

    #[error("{side} tail ratio is not positive")]
    NonPositiveTail { side: &'static str },

    #[error("level {0} lies outside the window and the system has no tails")]
    OutsideWindow(i64),

    #[error("cell index {cell} at level {k} is out of range")]
    InvalidCell { k: i64, cell: usize },

    #[error("index {0} is not a valid unilateral index (must be ≥ 1)")]
    UnilateralIndex(i64),

    #[error("weight sequence is not positive at index {0}")]
    NonPositiveWeight(i64),

    #[error("weight sequence has no rule for index {0}")]
    WeightUndefined(i64),

    #[error("empty periodic tail pattern")]
    EmptyPattern,

    #[error("vector side does not match the weight sequence")]
    SideMismatch,

    #[error("schedule must be nonempty and strictly increasing")]
    InvalidSchedule,

    #[error("decay along the witness schedule failed within horizon {horizon}: {detail}")]
    InconsistentWitness { horizon: u64, detail: String },

    #[error("only {found} admissible levels, {needed} needed")]
    NoAdmissibleLevels { needed: usize, found: usize },

    #[error("block hypothesis fails at k = {k}: ratio {ratio} does not exceed {threshold}")]
    HypothesisViolated {
        k: i64,
        ratio: String,
        threshold: String,
    },

    #[error("no schedule within horizon {horizon} meets the error budget for target {target}")]
    HorizonExhausted { target: usize, horizon: u64 },

    #[error("a-posteriori check failed for target {target}: defect {defect:e} > eps {eps:e}")]
    VerificationFailed { target: usize, defect: f64, eps: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
