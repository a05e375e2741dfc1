use thiserror::Error;

use crate::chart::ChartKind;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pattern index must lie in 1..=6, got {0}")]
    PatternIndex(usize),

    #[error("{0:?} is not a permutation of 1..=3")]
    OneLineForm([u8; 3]),

    #[error("window values must be finite")]
    NonFiniteWindow,

    #[error("observation {index} is not finite")]
    NonFiniteObservation { index: u64 },

    #[error("smoothing parameter must lie strictly between 0 and 1, got {0}")]
    InvalidLambda(f64),

    #[error("control limit must be nonnegative, got {0}")]
    InvalidControlLimit(f64),

    #[error("probabilities must lie in [0,1] and sum to 1 within 1e-12")]
    InvalidPmf,

    #[error("invalid process specification: {0}")]
    InvalidDgp(String),

    #[error(
        "unknown process family `{0}`; valid families: iid-normal, ar1, tear1, aar1, qar1, qma1"
    )]
    UnknownDgpFamily(String),

    #[error(
        "unknown chart kind `{0}`; valid kinds: delta-pi, tau, beta, delta-tau, delta-k, mu-k"
    )]
    UnknownChartKind(String),

    #[error("cannot generate an empty series")]
    EmptyGeneration,

    #[error("replication count must be at least 1")]
    NoReplications,

    #[error("run-length horizon must be at least {min}, got {got}")]
    HorizonTooSmall { min: u64, got: u64 },

    #[error("calibration target must exceed 1, got {0}")]
    InvalidTarget(f64),

    #[error("calibration tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("calibration start value must be positive and finite, got {0}")]
    InvalidInitialLimit(f64),

    #[error("series holds {got} observations but the chart needs at least {need}")]
    SeriesTooShort { need: usize, got: usize },

    #[error("{path}:{line}: cannot parse `{text}` as a number")]
    ParseValue {
        path: String,
        line: usize,
        text: String,
    },

    #[error("{path}: no numeric values found")]
    EmptySeries { path: String },

    #[error("`{0}` is neither `builtin` nor a number")]
    InvalidClSpec(String),

    #[error("no built-in control limit for the {kind} chart at lambda={lambda}; pass an explicit limit or calibrate one")]
    NoBuiltinLimit { kind: ChartKind, lambda: f64 },

    #[error("unknown table {0}; available tables: 2..=7")]
    UnknownTable(u8),

    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },

    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}
