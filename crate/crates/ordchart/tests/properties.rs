//! Property-based invariants across the crate.

use proptest::prelude::*;

use ordchart::arl::{replication_run_lengths, ExperimentSpec};
use ordchart::chart::{ChartDesign, ChartKind, Pmf6, KENDALL_IC_MEAN};
use ordchart::dgp::{generate, DgpSpec};
use ordchart::pattern::{is_feasible_transition, transcript, Pattern, Window3};

fn pattern_strategy() -> impl Strategy<Value = Pattern> {
    (1usize..=6).prop_map(|k| Pattern::from_index(k).unwrap())
}

/// Random point on the 6-simplex built from positive weights.
fn pmf_strategy() -> impl Strategy<Value = Pmf6> {
    proptest::array::uniform6(1e-3f64..1.0).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        let mut v = raw;
        for x in &mut v {
            *x /= total;
        }
        Pmf6::new(v).expect("normalized weights form a pmf")
    })
}

proptest! {
    #[test]
    fn composition_is_closed_and_invertible(a in pattern_strategy(), b in pattern_strategy()) {
        let c = a.compose(b);
        prop_assert!((1..=6).contains(&c.index()));
        // solve for b again: a^{-1} ∘ (a ∘ b) = b under "left acts first"
        prop_assert_eq!(a.invert().compose(c), b);
        prop_assert_eq!(transcript(b, a), transcript(a, b).invert());
    }

    #[test]
    fn ewma_keeps_the_simplex(
        pmf in pmf_strategy(),
        updates in proptest::collection::vec((pattern_strategy(), 1e-6f64..1.0), 1..200),
    ) {
        let mut current = pmf;
        for (observed, lambda) in updates {
            current = current.ewma_update(observed, lambda);
            let values = current.values();
            let sum: f64 = values.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(values.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn chi_square_statistics_are_nonnegative(pmf in pmf_strategy()) {
        prop_assert!(ChartKind::DeltaTau.statistic(&pmf) >= 0.0);
        prop_assert!(ChartKind::DeltaK.statistic(&pmf) >= 0.0);
        prop_assert!(ChartKind::DeltaPi.statistic(&pmf) >= 0.0);
    }

    #[test]
    fn mean_distance_statistic_stays_in_range(pmf in pmf_strategy()) {
        let stat = ChartKind::MuK.statistic(&pmf);
        prop_assert!(stat >= -KENDALL_IC_MEAN - 1e-12);
        prop_assert!(stat <= 3.0 - KENDALL_IC_MEAN + 1e-12);
    }

    #[test]
    fn projection_preserves_mass(pmf in pmf_strategy()) {
        let q = pmf.kendall_project();
        let sum: f64 = q.values().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn consecutive_patterns_are_feasible(values in proptest::collection::vec(-1e6f64..1e6, 4..60)) {
        let patterns: Vec<Pattern> = values
            .windows(3)
            .map(|w| Window3::new([w[0], w[1], w[2]]).unwrap().pattern())
            .collect();
        for pair in patterns.windows(2) {
            prop_assert!(is_feasible_transition(pair[0], pair[1]));
        }
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), n in 1usize..100) {
        let spec: DgpSpec = "tear1:alpha=0.3".parse().unwrap();
        let a = generate(spec, n, seed).unwrap();
        let b = generate(spec, n, seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dgp_text_form_round_trips(alpha in -0.99f64..0.99, burn in 0u32..50) {
        let spec = DgpSpec::new(ordchart::Dgp::Ar1 { alpha }).unwrap().with_burn_in(burn);
        let text = spec.to_string();
        let parsed: DgpSpec = text.parse().unwrap();
        prop_assert_eq!(parsed, spec);
    }
}

// Raising the control limit never shortens any replication under common
// random numbers (proptest over limit pairs, moderate budget).
proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn run_lengths_are_monotone_in_the_limit(
        lo in 0.05f64..0.5,
        bump in 0.01f64..1.0,
        seed in any::<u64>(),
    ) {
        let hi = lo + bump;
        let dgp = DgpSpec::iid_normal();
        let spec_lo = ExperimentSpec::new(
            ChartDesign::new(ChartKind::DeltaTau, 0.25, lo).unwrap(), dgp, 60, seed,
        ).unwrap().with_horizon(2_000).unwrap();
        let spec_hi = ExperimentSpec::new(
            ChartDesign::new(ChartKind::DeltaTau, 0.25, hi).unwrap(), dgp, 60, seed,
        ).unwrap().with_horizon(2_000).unwrap();
        for (a, b) in replication_run_lengths(&spec_lo)
            .iter()
            .zip(replication_run_lengths(&spec_hi).iter())
        {
            prop_assert!(a.length <= b.length);
        }
    }
}
