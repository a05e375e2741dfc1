//! Nonparametric monitoring of serial dependence in real-valued streams.
//!
//! A continuously distributed process that is i.i.d. emits, over its length-3
//! windows, ordinal patterns with a known law — uniform for the patterns
//! themselves, `(2,2,2,7,7,4)/24` for the transcripts between consecutive
//! patterns, `(1,2,7,2)/12` for their Kendall distances. Whatever the marginal
//! distribution, deviations from those laws mean serial dependence. This crate
//! turns that into distribution-free EWMA control charts, plus the Monte-Carlo
//! machinery to measure their average run lengths (ARL) and to calibrate
//! control limits to a target in-control ARL.
//!
//! The pieces:
//!
//! - [`pattern`] — the S3 algebra: window encoding, composition, transcripts,
//!   Kendall/Cayley distances, transition feasibility.
//! - [`chart`] — six EWMA chart statistics over pattern or transcript PMFs,
//!   stepped online one observation at a time.
//! - [`dgp`] — seedable generators for the in-control model and five
//!   dependent alternatives (AR(1), TEAR(1), AAR(1), QAR(1), QMA(1)).
//! - [`arl`] — parallel, bit-reproducible run-length estimation and
//!   control-limit calibration via common random numbers.
//! - [`series`] / [`cli`] — file ingestion with optional jitter, plot-ready
//!   CSV/JSON output, and the operations behind the `ordchart` binary.
//!
//! Start with the runnable examples: `cargo run --release --example
//! pattern_algebra` (and `generate_series`, `online_monitoring`,
//! `arl_simulation`, `calibrate_limits`, `ties_and_jitter`).
//!
//! ```
//! use ordchart::{ChartDesign, ChartKind};
//!
//! // monitor a short stream with the built-in mu-K design at lambda = 0.25
//! let design = ChartDesign::builtin(ChartKind::MuK, 0.25).unwrap();
//! let mut chart = design.state();
//! for x in [0.3, -1.2, 0.8, -0.9, 1.1, -1.0] {
//!     let out = chart.step(x).unwrap();
//!     if let Some(stat) = out.statistic {
//!         println!("t={} statistic={stat:.4} alarm={}", out.original_time, out.alarm);
//!     }
//! }
//! ```

pub mod arl;
pub mod chart;
pub mod cli;
pub mod dgp;
mod error;
pub mod pattern;
pub mod rng;
pub mod series;

pub use arl::{
    calibrate_cl, estimate_arl, run_length, CalibrationResult, CalibrationSettings, ExperimentSpec,
    RunLength, RunLengthClock, RunLengthSummary,
};
pub use chart::{ChartDesign, ChartKind, ChartState, Pmf4, Pmf6, StepOutcome};
pub use dgp::{generate, Dgp, DgpSpec, DgpState};
pub use error::Error;
pub use pattern::{
    cayley_distance, is_feasible_transition, kendall_distance, transcript, Pattern, Window3,
};
pub use series::{load_series, monitor_series, SummaryRecord, TrajectoryRecord};
