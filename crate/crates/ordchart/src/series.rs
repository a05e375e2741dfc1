//! Series files, jitter, and the plot-ready record formats.
//!
//! Input files hold one numeric value per line (plain or single-column CSV);
//! a first line that does not parse is treated as a header. Output comes in
//! two shapes, CSV with a fixed header row or JSON lines, with the same fields
//! either way. Floats are printed in Rust's shortest round-trip form, so a
//! fixed run reproduces its output files byte for byte.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::chart::{ChartDesign, ChartKind, ChartState};
use crate::error::Error;
use crate::rng::{self, StreamDomain};

/// A parsed input series.
#[derive(Clone, Debug)]
pub struct LoadedSeries {
    pub values: Vec<f64>,
    /// First line of the file when it did not parse as a number.
    pub header: Option<String>,
    /// Length-3 windows of consecutive raw values containing an exact tie,
    /// counted before any jitter.
    pub tie_windows: u64,
    pub jittered: bool,
}

/// Read a one-column series. With `jitter`, an independent U(0,1) draw from
/// the jitter substream of `seed` is added to every value (breaking the exact
/// ties of discrete data); the result is reproducible for a fixed seed.
pub fn load_series(path: &Path, jitter: bool, seed: u64) -> Result<LoadedSeries, Error> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| Error::File {
        path: shown.clone(),
        source,
    })?;
    let mut values = Vec::new();
    let mut header = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim().trim_end_matches(',').trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ => {
                if values.is_empty() && header.is_none() {
                    header = Some(line.to_string());
                } else {
                    return Err(Error::ParseValue {
                        path: shown,
                        line: idx + 1,
                        text: line.to_string(),
                    });
                }
            }
        }
    }
    if values.is_empty() {
        return Err(Error::EmptySeries { path: shown });
    }
    let tie_windows = count_tie_windows(&values);
    if jitter {
        apply_jitter(&mut values, seed);
    }
    Ok(LoadedSeries {
        values,
        header,
        tie_windows,
        jittered: jitter,
    })
}

/// Add an independent open-interval U(0,1) draw to every value.
pub fn apply_jitter(values: &mut [f64], seed: u64) {
    let mut rng = rng::substream(seed, StreamDomain::Jitter, 0);
    for v in values.iter_mut() {
        *v += rng::open_unit(&mut rng);
    }
}

/// Number of length-3 windows holding at least one exact duplicate.
pub fn count_tie_windows(values: &[f64]) -> u64 {
    values
        .windows(3)
        .filter(|w| w[0] == w[1] || w[1] == w[2] || w[0] == w[2])
        .count() as u64
}

/// One emitted chart statistic in plot-ready form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    /// 1-based index of the observation that produced the statistic.
    pub original_time: u64,
    pub statistic_index: u64,
    pub statistic: f64,
    pub ucl: f64,
    /// Present only for the two-sided kinds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lcl: Option<f64>,
    pub alarm: bool,
}

/// Run a chart over a whole series, collecting one record per emitted
/// statistic and returning the final chart state (for tie and count
/// diagnostics).
pub fn monitor_series(
    design: ChartDesign,
    values: &[f64],
) -> Result<(Vec<TrajectoryRecord>, ChartState), Error> {
    let need = design.kind.warmup() as usize;
    if values.len() < need {
        return Err(Error::SeriesTooShort {
            need,
            got: values.len(),
        });
    }
    let mut chart = design.state();
    let mut records = Vec::with_capacity(values.len() + 1 - need);
    for &x in values {
        let outcome = chart.step(x)?;
        if let Some(statistic) = outcome.statistic {
            records.push(TrajectoryRecord {
                original_time: outcome.original_time,
                statistic_index: chart.statistic_index(),
                statistic,
                ucl: chart.ucl(),
                lcl: chart.lcl(),
                alarm: outcome.alarm,
            });
        }
    }
    Ok((records, chart))
}

/// One ARL experiment in tabular form.
#[derive(Clone, Debug, Serialize)]
pub struct SummaryRecord {
    pub chart: ChartKind,
    pub lambda: f64,
    pub cl: f64,
    /// Canonical process string, e.g. `ar1:alpha=-0.6`.
    pub dgp: String,
    pub reps: u64,
    pub arl: f64,
    pub stderr: f64,
    pub censored: u64,
    pub seed: u64,
}

pub const TRAJECTORY_CSV_HEADER: &str = "original_time,statistic_index,statistic,ucl,lcl,alarm";
pub const SUMMARY_CSV_HEADER: &str = "chart,lambda,cl,dgp,reps,arl,stderr,censored,seed";

pub fn write_trajectory_csv<W: Write>(mut out: W, records: &[TrajectoryRecord]) -> io::Result<()> {
    writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
    for r in records {
        let lcl = r.lcl.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.original_time, r.statistic_index, r.statistic, r.ucl, lcl, r.alarm
        )?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(mut out: W, records: &[SummaryRecord]) -> io::Result<()> {
    writeln!(out, "{SUMMARY_CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.chart, r.lambda, r.cl, r.dgp, r.reps, r.arl, r.stderr, r.censored, r.seed
        )?;
    }
    Ok(())
}

/// One JSON object per line.
pub fn write_json_lines<W: Write, T: Serialize>(mut out: W, records: &[T]) -> Result<(), Error> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    #[test]
    fn plain_file_loads() {
        let file = write_temp("1\n2\n3\n");
        let loaded = load_series(file.path(), false, 0).unwrap();
        assert_eq!(loaded.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(loaded.header, None);
        assert_eq!(loaded.tie_windows, 0);
    }

    #[test]
    fn header_is_skipped() {
        let file = write_temp("yield\n47.0\n62.2\n70.4\n");
        let loaded = load_series(file.path(), false, 0).unwrap();
        assert_eq!(loaded.header.as_deref(), Some("yield"));
        assert_eq!(loaded.values.len(), 3);
    }

    #[test]
    fn parse_error_names_the_line() {
        let file = write_temp("1\nabc\n3\n");
        match load_series(file.path(), false, 0) {
            Err(Error::ParseValue { line, text, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(text, "abc");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_an_error() {
        let file = write_temp("\n\n");
        assert!(matches!(
            load_series(file.path(), false, 0),
            Err(Error::EmptySeries { .. })
        ));
    }

    #[test]
    fn jitter_is_reproducible_and_in_range() {
        let file = write_temp("1\n2\n3\n");
        let a = load_series(file.path(), true, 9).unwrap();
        let b = load_series(file.path(), true, 9).unwrap();
        assert_eq!(a.values, b.values);
        assert!(a.jittered);
        for (v, base) in a.values.iter().zip([1.0, 2.0, 3.0]) {
            assert!(*v > base && *v < base + 1.0);
        }
        let c = load_series(file.path(), true, 10).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn tie_windows_are_counted_on_raw_values() {
        let file = write_temp("5\n5\n6\n7\n7\n7\n");
        let loaded = load_series(file.path(), true, 3).unwrap();
        // windows: (5,5,6) (5,6,7) (6,7,7) (7,7,7) -> 3 tied
        assert_eq!(loaded.tie_windows, 3);
        assert_eq!(count_tie_windows(&loaded.values), 0);
    }

    #[test]
    fn short_series_is_rejected() {
        let design = ChartDesign::new(ChartKind::DeltaTau, 0.25, 3.225).unwrap();
        assert!(matches!(
            monitor_series(design, &[1.0, 2.0, 3.0]),
            Err(Error::SeriesTooShort { need: 4, got: 3 })
        ));
        let design = ChartDesign::new(ChartKind::DeltaPi, 0.25, 1.0).unwrap();
        assert!(matches!(
            monitor_series(design, &[1.0, 2.0]),
            Err(Error::SeriesTooShort { need: 3, got: 2 })
        ));
    }

    #[test]
    fn trajectory_records_and_csv_shape() {
        let design = ChartDesign::new(ChartKind::DeltaTau, 0.25, 3.225).unwrap();
        let (records, chart) = monitor_series(design, &[1.0, 2.0, 3.0, 2.5, 0.5]).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].original_time, 4);
        assert_eq!(records[0].statistic_index, 1);
        assert_eq!(records[1].original_time, 5);
        assert_eq!(chart.observations_seen(), 5);
        assert_eq!(records[0].lcl, None);

        let mut csv = Vec::new();
        write_trajectory_csv(&mut csv, &records).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(TRAJECTORY_CSV_HEADER));
        let first = lines.next().unwrap();
        assert!(first.starts_with("4,1,"));
        // one-sided chart leaves the lcl column empty
        assert_eq!(first.split(',').count(), 6);
        assert_eq!(first.split(',').nth(4), Some(""));
    }

    #[test]
    fn two_sided_records_carry_the_lcl() {
        let design = ChartDesign::new(ChartKind::MuK, 0.1, 1.0188).unwrap();
        let (records, _) = monitor_series(design, &[1.0, 2.0, 3.0, 2.5]).unwrap();
        assert_eq!(records[0].lcl, Some(-1.0188));
    }

    #[test]
    fn json_lines_are_parseable() {
        let design = ChartDesign::new(ChartKind::MuK, 0.1, 1.0188).unwrap();
        let (records, _) = monitor_series(design, &[1.0, 2.0, 3.0, 2.5]).unwrap();
        let mut buf = Vec::new();
        write_json_lines(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for line in text.lines() {
            let value: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(value.get("statistic").is_some());
            assert_eq!(value["lcl"], serde_json::json!(-1.0188));
        }
    }
}
