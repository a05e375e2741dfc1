//! Monte-Carlo run-length estimation and control-limit calibration.
//!
//! Replication `r` of an experiment always draws from the substream
//! `(seed, Replication, r)`, so estimates are bit-identical across thread
//! counts (summation uses exact integer accumulators in replication order) and
//! a calibration search can replay the same randomness for every candidate
//! limit. Under such common random numbers the trajectory of the chart
//! statistic does not depend on the limit at all, so raising the limit never
//! shortens any individual run and the estimated ARL is a nondecreasing step
//! function of the limit — which makes bisection deterministic.

use std::collections::BTreeMap;

use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chart::{ChartDesign, ChartKind};
use crate::dgp::{DgpSpec, DgpState};
use crate::error::Error;
use crate::rng::{substream, StreamDomain};

/// How run lengths are counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunLengthClock {
    /// Index of the alarming statistic among emitted statistics (default).
    #[default]
    StatisticIndex,
    /// Raw observations consumed up to and including the alarming one: the
    /// statistic index plus 2 for pattern charts, plus 3 for transcript
    /// charts.
    OriginalTime,
}

impl std::str::FromStr for RunLengthClock {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "statistic-index" => Ok(RunLengthClock::StatisticIndex),
            "original-time" => Ok(RunLengthClock::OriginalTime),
            other => Err(format!(
                "unknown clock `{other}`; use statistic-index or original-time"
            )),
        }
    }
}

/// One simulated run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunLength {
    /// First-alarm time under the chosen clock, or the horizon when censored.
    pub length: u64,
    /// True when no alarm occurred within the horizon.
    pub censored: bool,
}

/// Simulate a single run: feed the chart a fresh process realization until the
/// first alarm, or until `max_horizon` statistics have been emitted (censoring
/// is data, not an error).
pub fn run_length(
    design: ChartDesign,
    dgp: DgpSpec,
    rng: ChaCha12Rng,
    max_horizon: u64,
    clock: RunLengthClock,
) -> RunLength {
    let mut chart = design.state();
    let mut process = DgpState::init(dgp, rng);
    loop {
        let outcome = chart
            .step(process.next_value())
            .expect("generated observations are finite");
        let done = outcome.alarm || chart.statistic_index() >= max_horizon;
        if done {
            let length = match clock {
                RunLengthClock::StatisticIndex => chart.statistic_index(),
                RunLengthClock::OriginalTime => outcome.original_time,
            };
            return RunLength {
                length,
                censored: !outcome.alarm,
            };
        }
    }
}

/// A full run-length experiment.
#[derive(Clone, Copy, Debug)]
pub struct ExperimentSpec {
    pub design: ChartDesign,
    pub dgp: DgpSpec,
    pub replications: u64,
    /// Censoring bound, counted in emitted statistics.
    pub max_horizon: u64,
    pub seed: u64,
    pub clock: RunLengthClock,
    /// Collect the run-length histogram alongside the moments.
    pub keep_histogram: bool,
}

impl ExperimentSpec {
    /// Default censoring bound: far beyond any tabulated design's ARL.
    pub const DEFAULT_HORIZON: u64 = 1_000_000;

    pub fn new(
        design: ChartDesign,
        dgp: DgpSpec,
        replications: u64,
        seed: u64,
    ) -> Result<ExperimentSpec, Error> {
        if replications == 0 {
            return Err(Error::NoReplications);
        }
        Ok(ExperimentSpec {
            design,
            dgp,
            replications,
            max_horizon: Self::DEFAULT_HORIZON,
            seed,
            clock: RunLengthClock::StatisticIndex,
            keep_histogram: false,
        })
    }

    pub fn with_horizon(mut self, max_horizon: u64) -> Result<ExperimentSpec, Error> {
        if max_horizon < 10 {
            return Err(Error::HorizonTooSmall {
                min: 10,
                got: max_horizon,
            });
        }
        self.max_horizon = max_horizon;
        Ok(self)
    }

    pub fn with_clock(mut self, clock: RunLengthClock) -> ExperimentSpec {
        self.clock = clock;
        self
    }

    pub fn with_histogram(mut self, keep: bool) -> ExperimentSpec {
        self.keep_histogram = keep;
        self
    }
}

/// Monte-Carlo ARL estimate.
#[derive(Clone, Debug, Serialize)]
pub struct RunLengthSummary {
    pub mean: f64,
    pub std_error: f64,
    pub replications: u64,
    /// Runs that hit the horizon; censored runs enter the mean at the horizon
    /// value, so a positive count makes the mean a lower bound.
    pub censored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<BTreeMap<u64, u64>>,
}

impl RunLengthSummary {
    /// True when censoring makes the mean a lower bound on the true ARL.
    pub fn is_lower_bound(&self) -> bool {
        self.censored > 0
    }
}

/// Per-replication run lengths, in replication order.
pub fn replication_run_lengths(spec: &ExperimentSpec) -> Vec<RunLength> {
    (0..spec.replications)
        .into_par_iter()
        .map(|r| {
            run_length(
                spec.design,
                spec.dgp,
                substream(spec.seed, StreamDomain::Replication, r),
                spec.max_horizon,
                spec.clock,
            )
        })
        .collect()
}

fn summarize(runs: &[RunLength], keep_histogram: bool) -> RunLengthSummary {
    let n = runs.len() as u64;
    let mut sum: u128 = 0;
    let mut sum_sq: u128 = 0;
    let mut censored: u64 = 0;
    for run in runs {
        let v = run.length as u128;
        sum += v;
        sum_sq += v * v;
        censored += run.censored as u64;
    }
    let mean = sum as f64 / n as f64;
    let std_error = if n > 1 {
        // exact integer spread: n * sum_sq - sum^2 >= 0
        let spread = n as u128 * sum_sq - sum * sum;
        let variance = spread as f64 / (n as f64 * (n - 1) as f64);
        (variance / n as f64).sqrt()
    } else {
        0.0
    };
    let histogram = keep_histogram.then(|| {
        let mut hist = BTreeMap::new();
        for run in runs {
            *hist.entry(run.length).or_insert(0u64) += 1;
        }
        hist
    });
    RunLengthSummary {
        mean,
        std_error,
        replications: n,
        censored,
        histogram,
    }
}

/// Mean and standard error of the run length across replications.
/// Deterministic for a fixed seed regardless of the parallel schedule.
pub fn estimate_arl(spec: &ExperimentSpec) -> RunLengthSummary {
    summarize(&replication_run_lengths(spec), spec.keep_histogram)
}

/// Tuning for [`calibrate_cl`].
///
/// `replications` is the common-random-numbers budget used for every candidate
/// limit. Search evaluations censor at `search_horizon` (a saturated mean
/// still orders candidates correctly); the returned design is re-evaluated at
/// the full [`ExperimentSpec::DEFAULT_HORIZON`].
#[derive(Clone, Debug)]
pub struct CalibrationSettings {
    pub target: f64,
    pub tolerance: f64,
    pub replications: u64,
    pub seed: u64,
    pub max_iterations: u32,
    pub search_horizon: u64,
    /// Optional starting limit for the bracket search.
    pub initial_cl: Option<f64>,
}

impl CalibrationSettings {
    /// Defaults: target 370, tolerance 1, 100000 replications.
    pub fn new(seed: u64) -> CalibrationSettings {
        CalibrationSettings {
            target: 370.0,
            tolerance: 1.0,
            replications: 100_000,
            seed,
            max_iterations: 80,
            search_horizon: 20_000,
            initial_cl: None,
        }
    }
}

/// Outcome of a control-limit search.
#[derive(Clone, Debug, Serialize)]
pub struct CalibrationResult {
    pub cl: f64,
    /// Estimate at `cl` under the search's common random numbers, full
    /// horizon.
    pub achieved_arl: RunLengthSummary,
    /// Number of ARL evaluations spent (pilot and full scale).
    pub iterations: u32,
    pub target: f64,
    pub tolerance: f64,
    /// True when `|achieved_arl.mean - target| <= tolerance`; otherwise the
    /// best bracketed limit is returned.
    pub converged: bool,
}

fn default_initial_cl(kind: ChartKind) -> f64 {
    match kind {
        ChartKind::DeltaPi => 0.05,
        ChartKind::Tau | ChartKind::Beta => 0.2,
        ChartKind::DeltaTau | ChartKind::DeltaK => 1.0,
        ChartKind::MuK => 0.5,
    }
}

/// Search the control limit whose in-control ARL matches `settings.target`.
///
/// Strategy: geometric bracket expansion from the starting limit, then
/// bisection, first at a small pilot replication count to narrow the bracket
/// cheaply, then at the full budget. All evaluations share the replication
/// substreams of `settings.seed`, so the searched function is a deterministic
/// nondecreasing step function of the limit.
pub fn calibrate_cl(
    kind: ChartKind,
    lambda: f64,
    dgp: DgpSpec,
    settings: &CalibrationSettings,
) -> Result<CalibrationResult, Error> {
    if !(settings.target.is_finite() && settings.target > 1.0) {
        return Err(Error::InvalidTarget(settings.target));
    }
    if !(settings.tolerance.is_finite() && settings.tolerance > 0.0) {
        return Err(Error::InvalidTolerance(settings.tolerance));
    }
    if settings.replications == 0 {
        return Err(Error::NoReplications);
    }
    let start = settings.initial_cl.unwrap_or(default_initial_cl(kind));
    if !(start.is_finite() && start > 0.0) {
        return Err(Error::InvalidInitialLimit(start));
    }
    // validate (kind, lambda) once; every candidate limit below is >= 0
    ChartDesign::new(kind, lambda, start)?;

    let target = settings.target;
    let iterations = std::cell::Cell::new(0u32);
    let eval = |cl: f64, reps: u64, horizon: u64| -> f64 {
        iterations.set(iterations.get() + 1);
        let spec = ExperimentSpec {
            design: ChartDesign { kind, lambda, cl },
            dgp,
            replications: reps,
            max_horizon: horizon,
            seed: settings.seed,
            clock: RunLengthClock::StatisticIndex,
            keep_histogram: false,
        };
        estimate_arl(&spec).mean
    };

    let pilot_reps = settings.replications.min(2_000);
    let horizon = settings.search_horizon.max(10);
    let cap = settings.max_iterations.max(8);

    // bracket the target with the pilot budget
    let mut lo;
    let mut hi;
    let mut cl = start;
    let mut arl = eval(cl, pilot_reps, horizon);
    if arl < target {
        loop {
            lo = cl;
            cl *= 2.0;
            if iterations.get() >= cap || cl > 1e12 {
                hi = cl;
                break;
            }
            arl = eval(cl, pilot_reps, horizon);
            if arl >= target {
                hi = cl;
                break;
            }
        }
    } else {
        loop {
            hi = cl;
            cl *= 0.5;
            if iterations.get() >= cap || cl < 1e-12 {
                lo = cl;
                break;
            }
            arl = eval(cl, pilot_reps, horizon);
            if arl < target {
                lo = cl;
                break;
            }
        }
    }
    // narrow cheaply, then widen a notch to absorb pilot noise
    while hi - lo > 0.02 * hi && iterations.get() < cap {
        let mid = 0.5 * (lo + hi);
        if eval(mid, pilot_reps, horizon) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo *= 0.95;
    hi = (hi * 1.05).min(1e12);

    // full-budget bisection under common random numbers
    let full = settings.replications;
    let mut arl_lo = eval(lo, full, horizon);
    while arl_lo >= target && lo > 1e-12 && iterations.get() < cap {
        lo *= 0.8;
        arl_lo = eval(lo, full, horizon);
    }
    let mut arl_hi = eval(hi, full, horizon);
    while arl_hi < target && hi < 1e12 && iterations.get() < cap {
        hi *= 1.25;
        arl_hi = eval(hi, full, horizon);
    }
    let mut best = if (arl_hi - target).abs() < (arl_lo - target).abs() {
        (hi, arl_hi)
    } else {
        (lo, arl_lo)
    };
    while iterations.get() < cap {
        let mid = 0.5 * (lo + hi);
        let arl_mid = eval(mid, full, horizon);
        if (arl_mid - target).abs() < (best.1 - target).abs() {
            best = (mid, arl_mid);
        }
        if (arl_mid - target).abs() <= settings.tolerance {
            break;
        }
        if arl_mid < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.max(1.0) {
            break;
        }
    }

    // confirm at the full horizon (same substreams)
    let spec = ExperimentSpec {
        design: ChartDesign {
            kind,
            lambda,
            cl: best.0,
        },
        dgp,
        replications: full,
        max_horizon: ExperimentSpec::DEFAULT_HORIZON,
        seed: settings.seed,
        clock: RunLengthClock::StatisticIndex,
        keep_histogram: false,
    };
    let achieved = estimate_arl(&spec);
    let converged = (achieved.mean - target).abs() <= settings.tolerance;
    Ok(CalibrationResult {
        cl: best.0,
        achieved_arl: achieved,
        iterations: iterations.get(),
        target,
        tolerance: settings.tolerance,
        converged,
    })
}
