//! Thin command-line front end over the library.
//!
//! Exit status: 0 = success / no alarm, 2 = monitor saw an alarm, 1 = error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use ordchart::arl::RunLengthClock;
use ordchart::chart::ChartDesign;
use ordchart::cli::{
    parse_baseline, run_calibrate, run_monitor, run_simulate, run_tables, write_trajectory,
    CalibrateConfig, ClSpec, MonitorConfig, OutputFormat, SimulateConfig,
};
use ordchart::series::{write_json_lines, write_summary_csv, SummaryRecord};
use ordchart::{ChartKind, DgpSpec, Error};

#[derive(Parser)]
#[command(
    name = "ordchart",
    version,
    about = "EWMA monitoring of serial dependence via ordinal patterns and transcripts"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a control chart over a series file and report alarms
    Monitor {
        /// Chart kind: delta-pi, tau, beta, delta-tau, delta-k, mu-k
        #[arg(long, value_parser = parse_arg::<ChartKind>)]
        chart: ChartKind,
        /// Smoothing parameter in (0,1)
        #[arg(long)]
        lambda: f64,
        /// Control limit: a number, or `builtin` for the tabulated transcript designs
        #[arg(long, default_value = "builtin", value_parser = parse_arg::<ClSpec>)]
        cl: ClSpec,
        /// Input file, one value per line (a non-numeric first line is skipped)
        #[arg(long)]
        input: PathBuf,
        /// Trajectory destination (defaults to stdout)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Add U(0,1) jitter to every value (for discrete data)
        #[arg(long)]
        jitter: bool,
        #[arg(long, env = "ORDCHART_SEED", default_value_t = 1)]
        seed: u64,
        /// Output format: csv or json
        #[arg(long, default_value = "csv", value_parser = parse_arg::<OutputFormat>)]
        format: OutputFormat,
    },
    /// Estimate the ARL of a chart design under a data-generating process
    Simulate {
        #[arg(long, value_parser = parse_arg::<ChartKind>)]
        chart: ChartKind,
        #[arg(long)]
        lambda: f64,
        /// Control limit: a number, or `builtin`
        #[arg(long, default_value = "builtin", value_parser = parse_arg::<ClSpec>)]
        cl: ClSpec,
        /// Process, e.g. iid-normal, ar1:alpha=0.8, tear1:alpha=0.5, qma1:beta=0.4
        #[arg(long, default_value = "iid-normal", value_parser = parse_arg::<DgpSpec>)]
        dgp: DgpSpec,
        /// Monte-Carlo replications
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, env = "ORDCHART_SEED", default_value_t = 1)]
        seed: u64,
        /// Censoring bound, in emitted statistics
        #[arg(long, default_value_t = 1_000_000)]
        horizon: u64,
        /// Run-length clock: statistic-index or original-time
        #[arg(long, default_value = "statistic-index", value_parser = parse_arg::<RunLengthClock>)]
        clock: RunLengthClock,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "csv", value_parser = parse_arg::<OutputFormat>)]
        format: OutputFormat,
    },
    /// Search the control limit achieving a target in-control ARL
    Calibrate {
        #[arg(long, value_parser = parse_arg::<ChartKind>)]
        chart: ChartKind,
        #[arg(long)]
        lambda: f64,
        /// Process to calibrate against (in-control by default)
        #[arg(long, default_value = "iid-normal", value_parser = parse_arg::<DgpSpec>)]
        dgp: DgpSpec,
        #[arg(long, default_value_t = 370.0)]
        target: f64,
        #[arg(long, default_value_t = 1.0)]
        tolerance: f64,
        /// Replications per candidate limit (common random numbers)
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, env = "ORDCHART_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "csv", value_parser = parse_arg::<OutputFormat>)]
        format: OutputFormat,
    },
    /// Reproduce a reference ARL grid (2 = in-control designs, 3 = AR(1),
    /// 4 = TEAR(1), 5 = AAR(1), 6 = QAR(1), 7 = QMA(1))
    Tables {
        #[arg(long)]
        table: u8,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, env = "ORDCHART_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Extra designs to include, as kind:lambda=cl (repeatable)
        #[arg(long, value_parser = parse_baseline_arg)]
        baseline: Vec<ChartDesign>,
        #[arg(long, default_value = "csv", value_parser = parse_arg::<OutputFormat>)]
        format: OutputFormat,
    },
}

fn parse_arg<T>(s: &str) -> Result<T, String>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| e.to_string())
}

fn parse_baseline_arg(s: &str) -> Result<ChartDesign, String> {
    parse_baseline(s).map_err(|e| e.to_string())
}

fn open_sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|source| Error::File {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn emit_summaries(
    records: &[SummaryRecord],
    output: &Option<PathBuf>,
    format: OutputFormat,
) -> Result<(), Error> {
    let sink = open_sink(output)?;
    match format {
        OutputFormat::Csv => write_summary_csv(sink, records).map_err(Error::Io),
        OutputFormat::Json => write_json_lines(sink, records),
    }
}

fn run(args: Args) -> Result<u8, Error> {
    match args.command {
        Command::Monitor {
            chart,
            lambda,
            cl,
            input,
            output,
            jitter,
            seed,
            format,
        } => {
            let config = MonitorConfig {
                kind: chart,
                lambda,
                cl,
                jitter,
                seed,
                input,
                output: output.clone(),
                format,
            };
            let report = run_monitor(&config)?;
            if output.is_none() {
                write_trajectory(io::stdout().lock(), &report.records, format)?;
            }
            if let Some(header) = &report.header {
                eprintln!("note: skipped header line `{header}`");
            }
            if report.tie_warning {
                eprintln!(
                    "warning: {} of {} windows contain exact ties; consider --jitter",
                    report.tie_windows, report.observations
                );
            }
            match report.first_alarm {
                Some(alarm) => {
                    eprintln!(
                        "alarm at original time t={} (statistic index {})",
                        alarm.original_time, alarm.statistic_index
                    );
                    Ok(2)
                }
                None => {
                    eprintln!(
                        "no alarm in {} observations ({} statistics)",
                        report.observations,
                        report.records.len()
                    );
                    Ok(0)
                }
            }
        }
        Command::Simulate {
            chart,
            lambda,
            cl,
            dgp,
            reps,
            seed,
            horizon,
            clock,
            output,
            format,
        } => {
            let cl = ordchart::cli::resolve_cl(chart, lambda, cl)?;
            let config = SimulateConfig {
                kind: chart,
                lambda,
                cl,
                dgp,
                replications: reps,
                seed,
                max_horizon: horizon,
                clock,
            };
            let record = run_simulate(&config)?;
            emit_summaries(&[record], &output, format)?;
            Ok(0)
        }
        Command::Calibrate {
            chart,
            lambda,
            dgp,
            target,
            tolerance,
            reps,
            seed,
            format,
        } => {
            let config = CalibrateConfig {
                kind: chart,
                lambda,
                dgp,
                target,
                tolerance,
                replications: reps,
                seed,
            };
            let result = run_calibrate(&config)?;
            match format {
                OutputFormat::Json => {
                    let mut out = io::stdout().lock();
                    serde_json::to_writer_pretty(&mut out, &result).map_err(Error::Json)?;
                    writeln!(out)?;
                }
                OutputFormat::Csv => {
                    println!(
                        "cl={} achieved_arl={:.2} std_error={:.3} iterations={} converged={}",
                        result.cl,
                        result.achieved_arl.mean,
                        result.achieved_arl.std_error,
                        result.iterations,
                        result.converged
                    );
                }
            }
            if !result.converged {
                eprintln!(
                    "warning: search stopped {} from the target (tolerance {}); returned the best bracketed limit",
                    (result.achieved_arl.mean - result.target).abs(),
                    result.tolerance
                );
            }
            Ok(0)
        }
        Command::Tables {
            table,
            reps,
            seed,
            output,
            baseline,
            format,
        } => {
            let records = run_tables(table, reps, seed, &baseline)?;
            emit_summaries(&records, &output, format)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
