//! Online monitoring of a negatively autocorrelated stream with the three
//! transcript charts at their built-in designs.
//!
//! Run with: cargo run --release --example online_monitoring

use ordchart::chart::{ChartDesign, ChartKind};
use ordchart::dgp::{generate, DgpSpec};
use ordchart::series::monitor_series;

fn main() {
    // the in-control assumption is i.i.d.; this stream is AR(1) with alpha -0.6
    let spec: DgpSpec = "ar1:alpha=-0.6".parse().unwrap();
    let series = generate(spec, 150, 7).unwrap();

    for kind in [ChartKind::DeltaTau, ChartKind::DeltaK, ChartKind::MuK] {
        // small smoothing parameters detect negative dependence best
        let design = ChartDesign::builtin(kind, 0.05).unwrap();
        let (records, _) = monitor_series(design, &series).unwrap();
        match records.iter().find(|r| r.alarm) {
            Some(alarm) => println!(
                "{kind:>9}: first alarm at original time t={} (statistic {:.4}, limit {})",
                alarm.original_time, alarm.statistic, design.cl
            ),
            None => println!("{kind:>9}: no alarm in {} observations", series.len()),
        }
    }

    // trajectory of the mu-k chart around its alarm
    let design = ChartDesign::builtin(ChartKind::MuK, 0.05).unwrap();
    let (records, _) = monitor_series(design, &series).unwrap();
    let alarm_at = records
        .iter()
        .position(|r| r.alarm)
        .unwrap_or(records.len());
    println!(
        "\nmu-k trajectory near the alarm (lcl {} / ucl {}):",
        -design.cl, design.cl
    );
    for r in records
        .iter()
        .take(alarm_at + 3)
        .skip(alarm_at.saturating_sub(4))
    {
        println!(
            "  t={:>3}  statistic {:+.4}  {}",
            r.original_time,
            r.statistic,
            if r.alarm { "<- alarm" } else { "" }
        );
    }
}
