//! Estimating average run lengths in-control and out-of-control.
//!
//! Run with: cargo run --release --example arl_simulation

use ordchart::arl::{estimate_arl, ExperimentSpec};
use ordchart::chart::{ChartDesign, ChartKind};
use ordchart::dgp::DgpSpec;

fn main() {
    let reps = 20_000;
    let seed = 99;

    // in-control: the built-in designs target ARL 370
    let design = ChartDesign::builtin(ChartKind::DeltaTau, 0.25).unwrap();
    let spec = ExperimentSpec::new(design, DgpSpec::iid_normal(), reps, seed).unwrap();
    let ic = estimate_arl(&spec);
    println!(
        "delta-tau lambda=0.25 cl={}  in-control ARL = {:.1} (se {:.2}, {} censored)",
        design.cl, ic.mean, ic.std_error, ic.censored
    );

    // out-of-control: positive AR(1) dependence shortens the run length
    let design = ChartDesign::builtin(ChartKind::MuK, 0.05).unwrap();
    for alpha in [0.2, 0.4, 0.6, 0.8] {
        let dgp: DgpSpec = format!("ar1:alpha={alpha}").parse().unwrap();
        let spec = ExperimentSpec::new(design, dgp, reps, seed).unwrap();
        let ooc = estimate_arl(&spec);
        println!(
            "mu-k lambda=0.05 cl={}  ARL under ar1:alpha={alpha} = {:.1} (se {:.2})",
            design.cl, ooc.mean, ooc.std_error
        );
    }

    // run-length distribution tail via the optional histogram
    let spec = ExperimentSpec::new(design, "ar1:alpha=0.8".parse().unwrap(), reps, seed)
        .unwrap()
        .with_histogram(true);
    let summary = estimate_arl(&spec);
    let hist = summary.histogram.unwrap();
    let median = {
        let mut seen = 0;
        let half = reps / 2;
        hist.iter()
            .find(|(_, &count)| {
                seen += count;
                seen >= half
            })
            .map(|(&len, _)| len)
            .unwrap()
    };
    println!(
        "run-length median under ar1:alpha=0.8 = {median} (mean {:.1})",
        summary.mean
    );
}
