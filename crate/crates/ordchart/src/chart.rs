//! EWMA control charts over pattern and transcript streams.
//!
//! A chart consumes raw observations one at a time. Once three observations
//! are buffered, every new observation completes a fresh 3-window and hence a
//! fresh pattern; transcript-based charts additionally pair it with the
//! previous pattern. Each new symbol updates an EWMA estimate of the symbol
//! PMF, from which the chart statistic is computed and compared against the
//! control limit.
//!
//! Six statistics are supported. Three act on the pattern PMF (squared
//! distance from uniform, the monotone-trend contrast `p1 + p6 - 1/3`, and the
//! up/down asymmetry `p1 - p6`) and three act on the transcript PMF (two
//! chi-square-style weighted distances from the in-control law, on transcripts
//! and on their Kendall-distance projection, plus the centered mean Kendall
//! distance).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::pattern::{self, Pattern, Window3};

/// In-control pattern distribution: uniform over the six patterns.
pub const PATTERN_IC: [f64; 6] = [1.0 / 6.0; 6];

/// In-control transcript distribution of overlapping windows of an i.i.d.
/// stream: (2, 2, 2, 7, 7, 4) / 24.
pub const TRANSCRIPT_IC: [f64; 6] = [
    2.0 / 24.0,
    2.0 / 24.0,
    2.0 / 24.0,
    7.0 / 24.0,
    7.0 / 24.0,
    4.0 / 24.0,
];

/// In-control Kendall-distance distribution, the projection of
/// [`TRANSCRIPT_IC`]: (1, 2, 7, 2) / 12.
pub const KENDALL_IC: [f64; 4] = [1.0 / 12.0, 2.0 / 12.0, 7.0 / 12.0, 2.0 / 12.0];

/// Mean of [`KENDALL_IC`].
pub const KENDALL_IC_MEAN: f64 = 11.0 / 6.0;

/// The six chart statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartKind {
    /// Squared distance of the pattern PMF from uniform; upper one-sided.
    DeltaPi,
    /// `p1 + p6 - 1/3` on the pattern PMF; symmetric two-sided.
    Tau,
    /// `p1 - p6` on the pattern PMF; symmetric two-sided.
    Beta,
    /// Chi-square-style distance of the transcript PMF from its in-control
    /// law; upper one-sided.
    DeltaTau,
    /// Same distance on the Kendall projection; upper one-sided.
    DeltaK,
    /// Centered mean Kendall distance; symmetric two-sided.
    MuK,
}

impl ChartKind {
    pub const ALL: [ChartKind; 6] = [
        ChartKind::DeltaPi,
        ChartKind::Tau,
        ChartKind::Beta,
        ChartKind::DeltaTau,
        ChartKind::DeltaK,
        ChartKind::MuK,
    ];

    /// Transcript-based kinds feed on consecutive-pattern transcripts; the
    /// others feed on the patterns themselves.
    pub const fn is_transcript_based(self) -> bool {
        matches!(
            self,
            ChartKind::DeltaTau | ChartKind::DeltaK | ChartKind::MuK
        )
    }

    /// Two-sided kinds alarm when |statistic| exceeds the limit; one-sided
    /// kinds when the statistic itself does.
    pub const fn is_two_sided(self) -> bool {
        matches!(self, ChartKind::Tau | ChartKind::Beta | ChartKind::MuK)
    }

    /// Observations needed before the first statistic can be emitted.
    pub const fn warmup(self) -> u64 {
        if self.is_transcript_based() {
            4
        } else {
            3
        }
    }

    /// The PMF the EWMA starts from.
    pub fn initial_pmf(self) -> Pmf6 {
        if self.is_transcript_based() {
            Pmf6::transcript_ic()
        } else {
            Pmf6::uniform()
        }
    }

    /// Evaluate the chart statistic on a PMF estimate. All kinds evaluate to
    /// zero (up to rounding) at their in-control PMF.
    pub fn statistic(self, pmf: &Pmf6) -> f64 {
        let p = pmf.values();
        match self {
            ChartKind::DeltaPi => p.iter().map(|x| (x - 1.0 / 6.0).powi(2)).sum(),
            ChartKind::Tau => p[0] + p[5] - 1.0 / 3.0,
            ChartKind::Beta => p[0] - p[5],
            ChartKind::DeltaTau => p
                .iter()
                .zip(TRANSCRIPT_IC.iter())
                .map(|(x, ic)| (x - ic).powi(2) / ic)
                .sum(),
            ChartKind::DeltaK => {
                let q = pmf.kendall_project();
                q.values()
                    .iter()
                    .zip(KENDALL_IC.iter())
                    .map(|(x, ic)| (x - ic).powi(2) / ic)
                    .sum()
            }
            ChartKind::MuK => pmf.kendall_project().mean() - KENDALL_IC_MEAN,
        }
    }
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ChartKind::DeltaPi => "delta-pi",
            ChartKind::Tau => "tau",
            ChartKind::Beta => "beta",
            ChartKind::DeltaTau => "delta-tau",
            ChartKind::DeltaK => "delta-k",
            ChartKind::MuK => "mu-k",
        };
        f.write_str(name)
    }
}

impl FromStr for ChartKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "delta-pi" => Ok(ChartKind::DeltaPi),
            "tau" => Ok(ChartKind::Tau),
            "beta" => Ok(ChartKind::Beta),
            "delta-tau" => Ok(ChartKind::DeltaTau),
            "delta-k" => Ok(ChartKind::DeltaK),
            "mu-k" => Ok(ChartKind::MuK),
            other => Err(Error::UnknownChartKind(other.to_string())),
        }
    }
}

/// Probability vector over the six patterns (or transcripts).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pmf6([f64; 6]);

impl Pmf6 {
    /// Slack allowed on the sum when validating externally supplied vectors.
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(values: [f64; 6]) -> Result<Pmf6, Error> {
        let ok = values.iter().all(|v| (0.0..=1.0).contains(v))
            && (values.iter().sum::<f64>() - 1.0).abs() <= Self::SUM_TOLERANCE;
        if ok {
            Ok(Pmf6(values))
        } else {
            Err(Error::InvalidPmf)
        }
    }

    /// Uniform law, the in-control pattern distribution.
    pub fn uniform() -> Pmf6 {
        Pmf6(PATTERN_IC)
    }

    /// In-control transcript distribution (2, 2, 2, 7, 7, 4) / 24.
    pub fn transcript_ic() -> Pmf6 {
        Pmf6(TRANSCRIPT_IC)
    }

    /// Point mass on one pattern.
    pub fn one_hot(p: Pattern) -> Pmf6 {
        let mut v = [0.0; 6];
        v[p.pos()] = 1.0;
        Pmf6(v)
    }

    pub fn values(&self) -> [f64; 6] {
        self.0
    }

    /// One EWMA step: `lambda * onehot(observed) + (1 - lambda) * self`.
    /// No renormalization; the convex combination stays on the simplex up to
    /// rounding.
    pub fn ewma_update(&self, observed: Pattern, lambda: f64) -> Pmf6 {
        let keep = 1.0 - lambda;
        let mut v = self.0;
        for x in &mut v {
            *x *= keep;
        }
        v[observed.pos()] += lambda;
        Pmf6(v)
    }

    /// Aggregate transcript cells by Kendall distance class:
    /// `(p1, p2 + p3, p4 + p5, p6)`.
    pub fn kendall_project(&self) -> Pmf4 {
        let p = self.0;
        Pmf4([p[0], p[1] + p[2], p[3] + p[4], p[5]])
    }
}

/// Probability vector over Kendall distances 0..=3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pmf4([f64; 4]);

impl Pmf4 {
    pub fn new(values: [f64; 4]) -> Result<Pmf4, Error> {
        let ok = values.iter().all(|v| (0.0..=1.0).contains(v))
            && (values.iter().sum::<f64>() - 1.0).abs() <= Pmf6::SUM_TOLERANCE;
        if ok {
            Ok(Pmf4(values))
        } else {
            Err(Error::InvalidPmf)
        }
    }

    /// In-control Kendall-distance law (1, 2, 7, 2) / 12.
    pub fn kendall_ic() -> Pmf4 {
        Pmf4(KENDALL_IC)
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    /// Mean distance `sum_i i * q_i`, in [0, 3].
    pub fn mean(&self) -> f64 {
        self.0[1] + 2.0 * self.0[2] + 3.0 * self.0[3]
    }
}

/// A chart kind together with its smoothing parameter and control limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartDesign {
    pub kind: ChartKind,
    pub lambda: f64,
    pub cl: f64,
}

/// Reference designs for the transcript charts, calibrated so the in-control
/// ARL is 370: (kind, lambda, control limit).
const BUILTIN_DESIGNS: [(ChartKind, f64, f64); 9] = [
    (ChartKind::DeltaTau, 0.25, 3.225),
    (ChartKind::DeltaK, 0.25, 3.19),
    (ChartKind::MuK, 0.25, 1.0188),
    (ChartKind::DeltaTau, 0.10, 0.9685),
    (ChartKind::DeltaK, 0.10, 0.8078),
    (ChartKind::MuK, 0.10, 0.5827),
    (ChartKind::DeltaTau, 0.05, 0.4328),
    (ChartKind::DeltaK, 0.05, 0.3229),
    (ChartKind::MuK, 0.05, 0.3785),
];

impl ChartDesign {
    /// Validated design; same rules as [`ChartState::new`].
    pub fn new(kind: ChartKind, lambda: f64, cl: f64) -> Result<ChartDesign, Error> {
        ChartState::new(kind, lambda, cl)?;
        Ok(ChartDesign { kind, lambda, cl })
    }

    /// The built-in design for `(kind, lambda)`, when tabulated. Only the
    /// transcript charts at lambda 0.25, 0.10, 0.05 are; pattern-chart limits
    /// must be supplied or calibrated.
    pub fn builtin(kind: ChartKind, lambda: f64) -> Option<ChartDesign> {
        BUILTIN_DESIGNS
            .iter()
            .find(|(k, l, _)| *k == kind && (l - lambda).abs() < 1e-9)
            .map(|&(kind, lambda, cl)| ChartDesign { kind, lambda, cl })
    }

    /// All nine built-in designs.
    pub fn builtin_all() -> Vec<ChartDesign> {
        BUILTIN_DESIGNS
            .iter()
            .map(|&(kind, lambda, cl)| ChartDesign { kind, lambda, cl })
            .collect()
    }

    /// Fresh chart state for this design.
    pub fn state(&self) -> ChartState {
        ChartState::new(self.kind, self.lambda, self.cl)
            .expect("design was validated at construction")
    }
}

/// Result of feeding one observation to a chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    /// Absent while the observation buffer is still filling.
    pub statistic: Option<f64>,
    /// True iff a statistic was emitted and lies outside the control limits.
    pub alarm: bool,
    /// 1-based index of the observation just consumed.
    pub original_time: u64,
}

/// Online chart state: observation buffer, EWMA PMF, and counters.
///
/// Single-writer value; it can be moved freely between threads between calls.
/// An alarm does not freeze the state — callers decide whether to stop.
#[derive(Clone, Debug)]
pub struct ChartState {
    kind: ChartKind,
    lambda: f64,
    ucl: f64,
    pmf: Pmf6,
    window: [f64; 3],
    filled: u8,
    prev_pattern: Option<Pattern>,
    statistic_index: u64,
    observations_seen: u64,
    tie_count: u64,
}

impl ChartState {
    /// `lambda` must lie strictly in (0, 1). The limit must be nonnegative;
    /// `f64::INFINITY` disables alarms and `0.0` is the degenerate
    /// alarm-at-once configuration used when probing run-length bounds.
    pub fn new(kind: ChartKind, lambda: f64, ucl: f64) -> Result<ChartState, Error> {
        if !(lambda.is_finite() && 0.0 < lambda && lambda < 1.0) {
            return Err(Error::InvalidLambda(lambda));
        }
        if ucl.is_nan() || ucl < 0.0 {
            return Err(Error::InvalidControlLimit(ucl));
        }
        Ok(ChartState {
            kind,
            lambda,
            ucl,
            pmf: kind.initial_pmf(),
            window: [0.0; 3],
            filled: 0,
            prev_pattern: None,
            statistic_index: 0,
            observations_seen: 0,
            tie_count: 0,
        })
    }

    /// Consume one observation; emits a statistic once enough structure exists
    /// (from the third observation for pattern charts, the fourth for
    /// transcript charts).
    pub fn step(&mut self, x: f64) -> Result<StepOutcome, Error> {
        if !x.is_finite() {
            return Err(Error::NonFiniteObservation {
                index: self.observations_seen + 1,
            });
        }
        self.observations_seen += 1;
        if self.filled < 3 {
            self.window[self.filled as usize] = x;
            self.filled += 1;
        } else {
            self.window[0] = self.window[1];
            self.window[1] = self.window[2];
            self.window[2] = x;
        }
        let original_time = self.observations_seen;
        if self.filled < 3 {
            return Ok(StepOutcome {
                statistic: None,
                alarm: false,
                original_time,
            });
        }

        let window = Window3::new(self.window).expect("window values were checked on entry");
        if window.has_tie() {
            self.tie_count += 1;
        }
        let current = window.pattern();
        let observed = if self.kind.is_transcript_based() {
            let prev = self.prev_pattern.replace(current);
            match prev {
                Some(prev) => pattern::transcript(prev, current),
                // first pattern of the stream: no transcript yet
                None => {
                    return Ok(StepOutcome {
                        statistic: None,
                        alarm: false,
                        original_time,
                    })
                }
            }
        } else {
            current
        };

        self.pmf = self.pmf.ewma_update(observed, self.lambda);
        self.statistic_index += 1;
        let statistic = self.kind.statistic(&self.pmf);
        let alarm = if self.kind.is_two_sided() {
            statistic.abs() > self.ucl
        } else {
            statistic > self.ucl
        };
        Ok(StepOutcome {
            statistic: Some(statistic),
            alarm,
            original_time,
        })
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ucl(&self) -> f64 {
        self.ucl
    }

    /// Lower control limit, `-ucl`, for the two-sided kinds.
    pub fn lcl(&self) -> Option<f64> {
        self.kind.is_two_sided().then_some(-self.ucl)
    }

    /// Current EWMA estimate of the symbol PMF.
    pub fn pmf(&self) -> &Pmf6 {
        &self.pmf
    }

    /// Number of statistics emitted so far; increments by exactly one per
    /// emitted statistic, starting at 1 for the first.
    pub fn statistic_index(&self) -> u64 {
        self.statistic_index
    }

    /// Number of raw observations consumed.
    pub fn observations_seen(&self) -> u64 {
        self.observations_seen
    }

    /// Number of formed windows containing at least one exact tie. The tie
    /// rule is always applied; this counter lets callers decide to jitter.
    pub fn tie_count(&self) -> u64 {
        self.tie_count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(index: usize) -> Pattern {
        Pattern::from_index(index).unwrap()
    }

    #[test]
    fn init_pmfs_and_validation() {
        let state = ChartState::new(ChartKind::DeltaTau, 0.25, 3.225).unwrap();
        assert_eq!(state.pmf().values(), TRANSCRIPT_IC);
        let state = ChartState::new(ChartKind::DeltaPi, 0.10, 1.0).unwrap();
        assert_eq!(state.pmf().values(), PATTERN_IC);
        assert!(matches!(
            ChartState::new(ChartKind::MuK, 0.5, -1.0),
            Err(Error::InvalidControlLimit(_))
        ));
        assert!(matches!(
            ChartState::new(ChartKind::MuK, 0.0, 1.0),
            Err(Error::InvalidLambda(_))
        ));
        assert!(matches!(
            ChartState::new(ChartKind::MuK, 1.0, 1.0),
            Err(Error::InvalidLambda(_))
        ));
        assert!(ChartState::new(ChartKind::MuK, 0.5, f64::INFINITY).is_ok());
        assert!(ChartState::new(ChartKind::MuK, 0.5, 0.0).is_ok());
    }

    #[test]
    fn ewma_update_worked_example() {
        let updated = Pmf6::transcript_ic().ewma_update(p(6), 0.25);
        let expected = [0.0625, 0.0625, 0.0625, 0.21875, 0.21875, 0.375];
        for (got, want) in updated.values().iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn ewma_update_fixed_point_and_limit() {
        let fixed = Pmf6::one_hot(p(3)).ewma_update(p(3), 0.4);
        assert_eq!(fixed.values(), Pmf6::one_hot(p(3)).values());

        let nearly_one = Pmf6::uniform().ewma_update(p(2), 1.0 - 1e-9);
        let onehot = Pmf6::one_hot(p(2)).values();
        for (got, want) in nearly_one.values().iter().zip(onehot.iter()) {
            assert!((got - want).abs() < 1e-8);
        }
    }

    #[test]
    fn kendall_projection_examples() {
        let q = Pmf6::transcript_ic().kendall_project();
        for (got, want) in q.values().iter().zip(KENDALL_IC.iter()) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(
            Pmf6::one_hot(p(1)).kendall_project().values(),
            [1.0, 0.0, 0.0, 0.0]
        );
        let q = Pmf6::new([0.0625, 0.0625, 0.0625, 0.21875, 0.21875, 0.375])
            .unwrap()
            .kendall_project();
        assert_eq!(q.values(), [0.0625, 0.125, 0.4375, 0.375]);
    }

    #[test]
    fn statistic_worked_examples() {
        let shifted = Pmf6::new([0.0625, 0.0625, 0.0625, 0.21875, 0.21875, 0.375]).unwrap();
        assert!((ChartKind::DeltaTau.statistic(&shifted) - 0.3125).abs() < 1e-12);
        assert!((ChartKind::MuK.statistic(&shifted) - 7.0 / 24.0).abs() < 1e-12);
        assert_eq!(ChartKind::Tau.statistic(&Pmf6::uniform()), 0.0);
    }

    #[test]
    fn statistics_vanish_at_ic() {
        for kind in ChartKind::ALL {
            let stat = kind.statistic(&kind.initial_pmf());
            assert!(stat.abs() <= 1e-15, "{kind}: {stat}");
        }
    }

    #[test]
    fn buffer_fills_before_first_statistic() {
        for kind in ChartKind::ALL {
            let mut chart = ChartState::new(kind, 0.25, f64::INFINITY).unwrap();
            let silent = kind.warmup() - 1;
            for i in 0..silent {
                let out = chart.step(i as f64 * 0.7 - 1.0).unwrap();
                assert_eq!(out.statistic, None);
                assert!(!out.alarm);
                assert_eq!(out.original_time, i + 1);
            }
            let out = chart.step(10.0).unwrap();
            assert!(out.statistic.is_some());
            assert_eq!(chart.statistic_index(), 1);
            assert_eq!(out.original_time, kind.warmup());
        }
    }

    #[test]
    fn first_transcript_statistic_matches_hand_value() {
        // feed 1,2,3,2.5: windows (1,2,3) and (2,3,2.5) have patterns (1,2,3)
        // and (1,3,2), so the first transcript is (1,3,2) itself
        let mut chart = ChartState::new(ChartKind::DeltaTau, 0.25, 3.225).unwrap();
        for x in [1.0, 2.0, 3.0] {
            assert!(chart.step(x).unwrap().statistic.is_none());
        }
        let out = chart.step(2.5).unwrap();
        let stat = out.statistic.unwrap();
        let expected =
            ChartKind::DeltaTau.statistic(&Pmf6::transcript_ic().ewma_update(p(2), 0.25));
        assert_eq!(stat, expected);
        assert!(!out.alarm);
        assert_eq!(out.original_time, 4);
    }

    #[test]
    fn alarm_rules() {
        // one-sided: statistic must exceed the limit strictly. The stream
        // 1,3,2,2.5 has windows with patterns (1,3,2) and (2,3,1), whose
        // transcript is (3,2,1); the first statistic is then 0.3125 up to
        // rounding, and a limit set to that exact float must not alarm.
        let first = ChartKind::DeltaTau.statistic(&Pmf6::transcript_ic().ewma_update(p(6), 0.25));
        assert!((first - 0.3125).abs() < 1e-12);
        let mut chart = ChartState::new(ChartKind::DeltaTau, 0.25, first).unwrap();
        for x in [1.0, 3.0, 2.0] {
            chart.step(x).unwrap();
        }
        let out = chart.step(2.5).unwrap();
        assert_eq!(out.statistic, Some(first));
        assert!(!out.alarm, "statistic equal to the limit must not alarm");

        // strictly below the limit the same statistic alarms
        let mut chart = ChartState::new(ChartKind::DeltaTau, 0.25, 0.31).unwrap();
        for x in [1.0, 3.0, 2.0] {
            chart.step(x).unwrap();
        }
        assert!(chart.step(2.5).unwrap().alarm);

        // two-sided: |statistic| is compared
        let extreme = ChartKind::MuK.statistic(&Pmf6::one_hot(p(6)));
        assert!((extreme - (3.0 - KENDALL_IC_MEAN)).abs() < 1e-15);
        assert!(extreme > 1.0188);
        let low = ChartKind::MuK.statistic(&Pmf6::one_hot(p(1)));
        assert!((low + KENDALL_IC_MEAN).abs() < 1e-15);
        assert!(low.abs() > 1.0188);
    }

    #[test]
    fn transcript_stream_construction() {
        let w1 = Window3::new([1.0, 3.0, 2.0]).unwrap().pattern();
        let w2 = Window3::new([3.0, 2.0, 2.5]).unwrap().pattern();
        assert_eq!((w1, w2), (p(2), p(4)));
        assert_eq!(pattern::transcript(w1, w2), p(6));
    }

    #[test]
    fn tie_counting() {
        let mut chart = ChartState::new(ChartKind::DeltaPi, 0.25, f64::INFINITY).unwrap();
        for x in [1.0, 1.0, 2.0, 3.0, 4.0] {
            chart.step(x).unwrap();
        }
        // windows: (1,1,2) tied, (1,2,3), (2,3,4)
        assert_eq!(chart.tie_count(), 1);
        assert_eq!(chart.observations_seen(), 5);
    }

    #[test]
    fn non_finite_observation_is_rejected() {
        let mut chart = ChartState::new(ChartKind::Tau, 0.1, 1.0).unwrap();
        chart.step(1.0).unwrap();
        let err = chart.step(f64::NAN).unwrap_err();
        assert!(matches!(err, Error::NonFiniteObservation { index: 2 }));
        // the rejected observation is not counted
        assert_eq!(chart.observations_seen(), 1);
    }

    #[test]
    fn builtin_designs() {
        assert_eq!(
            ChartDesign::builtin(ChartKind::DeltaTau, 0.25).map(|d| d.cl),
            Some(3.225)
        );
        assert_eq!(
            ChartDesign::builtin(ChartKind::MuK, 0.05).map(|d| d.cl),
            Some(0.3785)
        );
        assert_eq!(ChartDesign::builtin(ChartKind::DeltaPi, 0.25), None);
        assert_eq!(ChartDesign::builtin(ChartKind::DeltaTau, 0.3), None);
        assert_eq!(ChartDesign::builtin_all().len(), 9);
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in ChartKind::ALL {
            assert_eq!(kind.to_string().parse::<ChartKind>().unwrap(), kind);
        }
        assert!("mu_k".parse::<ChartKind>().is_err());
    }
}
