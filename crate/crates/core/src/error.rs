use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Dynkin type: {0}")]
    InvalidDynkin(String),

    #[error("invalid node set: {0}")]
    InvalidSigma(String),

    #[error("empty node set: the trivial parabolic P = G is not supported")]
    EmptySigma,

    #[error("element belongs to a different algebra")]
    AlgebraMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ad series does not terminate: element is not ad-nilpotent")]
    NotNilpotent,

    #[error("element has support outside the Cartan subalgebra and center (basis index {0})")]
    NotCartan(usize),

    #[error("{what} has a nonzero coefficient at {label} (degree {degree}), expected degree {expected}")]
    SliceViolation {
        what: &'static str,
        label: String,
        degree: i64,
        expected: String,
    },

    #[error("adjoint transport leaked outside the target slice by {0:e}")]
    SliceLeak(f64),

    #[error("{0} has no cominuscule node (types G2, F4 and E8 are excluded); use contact mode")]
    ExcludedType(String),

    #[error("contact grading needs rank >= 2, got component {0}")]
    RankOneContact(String),

    #[error("nilpotency law violated: ad^{power} != 0 on degree {degree} ({label})")]
    NilpotencyViolation {
        power: u32,
        degree: i64,
        label: String,
    },

    #[error("contact self-test failed: residual {0:e}")]
    ThetaInversion(f64),

    #[error("time {0} is not on the trajectory grid")]
    OffGrid(f64),

    #[error("time {t} lies beyond the breakdown time {breakdown}")]
    BeyondBreakdown { t: f64, breakdown: f64 },

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("invalid input path: {0}")]
    InvalidPath(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
