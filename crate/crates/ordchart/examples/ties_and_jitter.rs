//! Monitoring discrete data: exact ties, the tie counter, and jittering.
//!
//! The charts assume a continuously distributed stream; counts and rounded
//! measurements produce exact ties, which the tie rule resolves towards the
//! earlier position and the tie counter reports. Adding U(0,1) jitter washes
//! the ties out without touching the ordering of distinct values.
//!
//! Run with: cargo run --release --example ties_and_jitter

use ordchart::chart::{ChartDesign, ChartKind};
use ordchart::series::{apply_jitter, count_tie_windows, monitor_series};

fn main() {
    // a small integer-valued (count-like) series
    let raw: Vec<f64> = [3, 4, 4, 2, 3, 3, 5, 4, 4, 3, 2, 2, 4, 5, 5, 3, 4, 4, 2, 3]
        .iter()
        .map(|&v| v as f64)
        .collect();

    let tied = count_tie_windows(&raw);
    println!(
        "raw integer series: {} of {} windows contain exact ties",
        tied,
        raw.len() - 2
    );

    let design = ChartDesign::builtin(ChartKind::DeltaTau, 0.25).unwrap();
    let (_, chart) = monitor_series(design, &raw).unwrap();
    println!(
        "chart-side tie counter after the run: {}",
        chart.tie_count()
    );

    let mut jittered = raw.clone();
    apply_jitter(&mut jittered, 42);
    println!(
        "after jitter (seed 42): {} tied windows",
        count_tie_windows(&jittered)
    );
    println!("  first raw      values: {:?}", &raw[..5]);
    println!(
        "  first jittered values: {:?}",
        jittered[..5]
            .iter()
            .map(|x| (x * 1e3).round() / 1e3)
            .collect::<Vec<_>>()
    );

    // jitter is reproducible: same seed, same series
    let mut again = raw.clone();
    apply_jitter(&mut again, 42);
    assert_eq!(jittered, again);
    println!("jitter with a fixed seed is reproducible");
}
