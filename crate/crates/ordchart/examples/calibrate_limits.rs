//! Calibrating a control limit to a target in-control ARL.
//!
//! The search reuses the same replication substreams for every candidate
//! limit (common random numbers), so the estimated ARL is a deterministic
//! nondecreasing function of the limit and bisection converges cleanly.
//!
//! Run with: cargo run --release --example calibrate_limits

use ordchart::arl::{estimate_arl, CalibrationSettings, ExperimentSpec};
use ordchart::chart::{ChartDesign, ChartKind};
use ordchart::dgp::DgpSpec;

fn main() {
    // desk scale: 20k replications per candidate; the reference designs were
    // fixed with 100k
    let mut settings = CalibrationSettings::new(5);
    settings.replications = 20_000;
    settings.tolerance = 2.0;

    let kind = ChartKind::MuK;
    let lambda = 0.25;
    let result =
        ordchart::arl::calibrate_cl(kind, lambda, DgpSpec::iid_normal(), &settings).unwrap();
    println!(
        "calibrated {kind} at lambda={lambda}: cl = {:.4} (achieved ARL {:.1}, {} evaluations, converged: {})",
        result.cl, result.achieved_arl.mean, result.iterations, result.converged
    );
    let reference = ChartDesign::builtin(kind, lambda).unwrap();
    println!("reference design: cl = {}", reference.cl);

    // independent verification with a fresh seed
    let design = ChartDesign::new(kind, lambda, result.cl).unwrap();
    let spec = ExperimentSpec::new(design, DgpSpec::iid_normal(), 20_000, 1234).unwrap();
    let check = estimate_arl(&spec);
    println!(
        "fresh-seed re-estimate at the calibrated limit: ARL = {:.1} (se {:.2})",
        check.mean, check.std_error
    );

    // pattern charts have no built-in limits; calibrate one the same way
    let mut settings = CalibrationSettings::new(5);
    settings.replications = 20_000;
    settings.tolerance = 2.0;
    let result =
        ordchart::arl::calibrate_cl(ChartKind::Tau, 0.1, DgpSpec::iid_normal(), &settings).unwrap();
    println!(
        "self-calibrated tau chart at lambda=0.1: cl = {:.5} (achieved ARL {:.1})",
        result.cl, result.achieved_arl.mean
    );
}
