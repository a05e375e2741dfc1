//! The operations behind the `ordchart` binary: monitor a series file, run ARL
//! experiments, calibrate control limits, and reproduce the reference ARL
//! grids. Everything here is plain library code so it can be driven from
//! tests and examples as well.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::str::FromStr;

use crate::arl::{
    calibrate_cl, estimate_arl, CalibrationResult, CalibrationSettings, ExperimentSpec,
    RunLengthClock,
};
use crate::chart::{ChartDesign, ChartKind};
use crate::dgp::{Dgp, DgpSpec};
use crate::error::Error;
use crate::series::{
    load_series, monitor_series, write_json_lines, write_trajectory_csv, SummaryRecord,
    TrajectoryRecord,
};

/// Control-limit choice: an explicit value or the built-in designs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClSpec {
    Builtin,
    Value(f64),
}

impl FromStr for ClSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "builtin" {
            Ok(ClSpec::Builtin)
        } else {
            s.parse::<f64>()
                .map(ClSpec::Value)
                .map_err(|_| Error::InvalidClSpec(s.to_string()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}`; use csv or json")),
        }
    }
}

/// Resolve a control-limit choice against the built-in designs.
pub fn resolve_cl(kind: ChartKind, lambda: f64, cl: ClSpec) -> Result<f64, Error> {
    match cl {
        ClSpec::Value(v) => Ok(v),
        ClSpec::Builtin => ChartDesign::builtin(kind, lambda)
            .map(|d| d.cl)
            .ok_or(Error::NoBuiltinLimit { kind, lambda }),
    }
}

/// Tied-window fraction above which a monitor run advises jittering.
pub const TIE_WARNING_FRACTION: f64 = 0.01;

#[derive(Clone, Debug)]
pub struct MonitorConfig {
    pub kind: ChartKind,
    pub lambda: f64,
    pub cl: ClSpec,
    pub jitter: bool,
    pub seed: u64,
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlarmInfo {
    /// First alarm in original sampling time (observation index).
    pub original_time: u64,
    /// The same alarm as a statistic index.
    pub statistic_index: u64,
}

#[derive(Clone, Debug)]
pub struct MonitorReport {
    pub records: Vec<TrajectoryRecord>,
    pub first_alarm: Option<AlarmInfo>,
    pub observations: u64,
    /// Tied windows in the raw input (before jitter).
    pub tie_windows: u64,
    /// Set when the raw tie fraction exceeds [`TIE_WARNING_FRACTION`] and no
    /// jitter was applied.
    pub tie_warning: bool,
    pub header: Option<String>,
    pub design: ChartDesign,
}

/// Run a chart over a series file; writes the trajectory to `config.output`
/// when set.
pub fn run_monitor(config: &MonitorConfig) -> Result<MonitorReport, Error> {
    let cl = resolve_cl(config.kind, config.lambda, config.cl)?;
    let design = ChartDesign::new(config.kind, config.lambda, cl)?;
    let loaded = load_series(&config.input, config.jitter, config.seed)?;
    let (records, chart) = monitor_series(design, &loaded.values)?;
    if let Some(path) = &config.output {
        let file = File::create(path).map_err(|source| Error::File {
            path: path.display().to_string(),
            source,
        })?;
        write_trajectory(BufWriter::new(file), &records, config.format)?;
    }
    let first_alarm = records.iter().find(|r| r.alarm).map(|r| AlarmInfo {
        original_time: r.original_time,
        statistic_index: r.statistic_index,
    });
    let observations = chart.observations_seen();
    let tie_warning =
        !config.jitter && loaded.tie_windows as f64 > TIE_WARNING_FRACTION * observations as f64;
    Ok(MonitorReport {
        records,
        first_alarm,
        observations,
        tie_windows: loaded.tie_windows,
        tie_warning,
        header: loaded.header,
        design,
    })
}

/// Write trajectory records in the requested format.
pub fn write_trajectory<W: std::io::Write>(
    out: W,
    records: &[TrajectoryRecord],
    format: OutputFormat,
) -> Result<(), Error> {
    match format {
        OutputFormat::Csv => write_trajectory_csv(out, records).map_err(Error::Io),
        OutputFormat::Json => write_json_lines(out, records),
    }
}

#[derive(Clone, Debug)]
pub struct SimulateConfig {
    pub kind: ChartKind,
    pub lambda: f64,
    pub cl: f64,
    pub dgp: DgpSpec,
    pub replications: u64,
    pub seed: u64,
    pub max_horizon: u64,
    pub clock: RunLengthClock,
}

/// Estimate the ARL of one design under one process.
pub fn run_simulate(config: &SimulateConfig) -> Result<SummaryRecord, Error> {
    let design = ChartDesign::new(config.kind, config.lambda, config.cl)?;
    let spec = ExperimentSpec::new(design, config.dgp, config.replications, config.seed)?
        .with_horizon(config.max_horizon)?
        .with_clock(config.clock);
    let summary = estimate_arl(&spec);
    Ok(SummaryRecord {
        chart: config.kind,
        lambda: config.lambda,
        cl: config.cl,
        dgp: config.dgp.to_string(),
        reps: summary.replications,
        arl: summary.mean,
        stderr: summary.std_error,
        censored: summary.censored,
        seed: config.seed,
    })
}

#[derive(Clone, Debug)]
pub struct CalibrateConfig {
    pub kind: ChartKind,
    pub lambda: f64,
    pub dgp: DgpSpec,
    pub target: f64,
    pub tolerance: f64,
    pub replications: u64,
    pub seed: u64,
}

/// Search the control limit for a target in-control ARL.
pub fn run_calibrate(config: &CalibrateConfig) -> Result<CalibrationResult, Error> {
    let mut settings = CalibrationSettings::new(config.seed);
    settings.target = config.target;
    settings.tolerance = config.tolerance;
    settings.replications = config.replications;
    calibrate_cl(config.kind, config.lambda, config.dgp, &settings)
}

/// The smoothing values covered by the reference grids.
pub const TABLE_LAMBDAS: [f64; 3] = [0.25, 0.10, 0.05];

/// The transcript charts covered by the reference grids.
pub const TABLE_CHARTS: [ChartKind; 3] = [ChartKind::DeltaTau, ChartKind::DeltaK, ChartKind::MuK];

/// Dependence-parameter grid of a reference table.
pub fn table_grid(table: u8) -> Result<Vec<DgpSpec>, Error> {
    let specs: Vec<DgpSpec> = match table {
        2 => vec![DgpSpec::iid_normal()],
        3 => [0.2, 0.4, 0.6, 0.8, -0.2, -0.4, -0.6, -0.8]
            .iter()
            .map(|&alpha| DgpSpec::new(Dgp::Ar1 { alpha }))
            .collect::<Result<_, _>>()?,
        4 => [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
            .iter()
            .map(|&alpha| DgpSpec::new(Dgp::Tear1 { alpha }))
            .collect::<Result<_, _>>()?,
        5 => [0.2, 0.4, 0.6, 0.8]
            .iter()
            .map(|&alpha| DgpSpec::new(Dgp::Aar1 { alpha }))
            .collect::<Result<_, _>>()?,
        6 => [0.15, 0.2, 0.25, 0.3]
            .iter()
            .map(|&alpha| DgpSpec::new(Dgp::Qar1 { alpha }))
            .collect::<Result<_, _>>()?,
        7 => [0.2, 0.4, 0.6, 0.8]
            .iter()
            .map(|&beta| DgpSpec::new(Dgp::Qma1 { beta }))
            .collect::<Result<_, _>>()?,
        other => return Err(Error::UnknownTable(other)),
    };
    Ok(specs)
}

/// Reproduce a reference ARL grid: table 2 is the in-control designs, tables
/// 3-7 the dependence grids (AR(1), TEAR(1), AAR(1), QAR(1), QMA(1)).
///
/// Rows cover the three transcript charts at their built-in limits for each
/// smoothing value; `baselines` adds further designs (e.g. self-calibrated
/// pattern charts) wherever their lambda matches a grid block.
pub fn run_tables(
    table: u8,
    replications: u64,
    seed: u64,
    baselines: &[ChartDesign],
) -> Result<Vec<SummaryRecord>, Error> {
    let grid = table_grid(table)?;
    let mut records = Vec::new();
    for &lambda in &TABLE_LAMBDAS {
        let mut designs: Vec<ChartDesign> = TABLE_CHARTS
            .iter()
            .map(|&kind| ChartDesign::builtin(kind, lambda).expect("grid designs are tabulated"))
            .collect();
        designs.extend(
            baselines
                .iter()
                .filter(|d| (d.lambda - lambda).abs() < 1e-9)
                .copied(),
        );
        for dgp in &grid {
            for design in &designs {
                let spec = ExperimentSpec::new(*design, *dgp, replications, seed)?;
                let summary = estimate_arl(&spec);
                records.push(SummaryRecord {
                    chart: design.kind,
                    lambda: design.lambda,
                    cl: design.cl,
                    dgp: dgp.to_string(),
                    reps: summary.replications,
                    arl: summary.mean,
                    stderr: summary.std_error,
                    censored: summary.censored,
                    seed,
                });
            }
        }
    }
    Ok(records)
}

/// Parse a `kind:lambda=cl` baseline flag, e.g. `delta-pi:0.10=0.00785`.
pub fn parse_baseline(s: &str) -> Result<ChartDesign, Error> {
    let invalid = || Error::InvalidDgp(format!("expected kind:lambda=cl, got `{s}`"));
    let (kind, rest) = s.split_once(':').ok_or_else(invalid)?;
    let (lambda, cl) = rest.split_once('=').ok_or_else(invalid)?;
    let kind: ChartKind = kind.parse()?;
    let lambda: f64 = lambda.parse().map_err(|_| invalid())?;
    let cl: f64 = cl.parse().map_err(|_| invalid())?;
    ChartDesign::new(kind, lambda, cl)
}
