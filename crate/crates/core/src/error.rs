use thiserror::Error;

/// Errors produced by the algebra, the simulator and the synthesizer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported register dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(u32),

    #[error(
        "dimension mismatch: left is d={left_d}, n={left_n}; right is d={right_d}, n={right_n}"
    )]
    DimensionMismatch {
        left_d: u8,
        left_n: usize,
        right_d: u8,
        right_n: usize,
    },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("letter {letter:?} at position {position} is not valid for dimension {dim}")]
    InvalidLetter {
        letter: String,
        position: usize,
        dim: u8,
    },

    #[error("value {value} at register {site} is out of range for dimension {dim}")]
    OutOfRange { site: usize, value: u8, dim: u8 },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("enumeration cap exceeded: {count} errors requested, cap is {cap}")]
    CapExceeded { count: String, cap: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("duplicate error operator {0}")]
    DuplicateMember(String),

    #[error("illegal measurement {op}: does not commute with the current stabilizer")]
    IllegalMeasurement { op: String },

    #[error("redundant measurement {op}: already in the span of the current stabilizer")]
    RedundantMeasurement { op: String },

    #[error("unsound finish: surviving candidates occupy {classes} coset classes")]
    UnsoundFinish { classes: usize },

    #[error("no error of weight <= {t} is consistent with the measurement history")]
    EmptyCandidates { t: usize },

    #[error("strategy did not finish within {limit} steps")]
    NonTermination { limit: usize },

    #[error("no separating operator exists: all candidates are coset-equivalent")]
    NoSeparator,

    #[error("register index {index} out of range for n={n}")]
    RegisterOutOfRange { index: usize, n: usize },

    #[error("failed to start worker pool: {0}")]
    WorkerPool(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
