//! Cross-fixture invariants: the transformed bound holds on every
//! shipped mixture for both concept families at their governed sample
//! sizes, and the experiment pipeline's conditional errors agree with
//! the ratio oracle end to end through the learner.

use std::path::{Path, PathBuf};

use predpac::concept::{Concept, ConceptClass, FamilyKind};
use predpac::config::{load_plan, ExperimentPlan, TargetSpec};
use predpac::domain::{FiniteMixture, Pmf};
use predpac::experiment::{run_experiment, Summary};
use predpac::learner::{erm, restrict};
use predpac::process::{
    brute_force_conditional, conditional_expectation, sample_path, ProcessSpec,
};
use predpac::seed::trial_rng;

const MIXTURE_FIXTURES: [&str; 3] = [
    "pac_mixture.json",
    "pac_mixture_halves.json",
    "pac_mixture_bimodal.json",
];

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("..")
        .join("configs")
        .join(name)
}

fn assert_governed_pass(plan: &ExperimentPlan, expected_n: u64, label: &str) {
    let output = run_experiment(plan, None).unwrap();
    let Summary::PredictivePac(summary) = &output.summary else {
        panic!("{label}: expected a predictive_pac summary");
    };
    assert_eq!(
        summary.governed_n, expected_n,
        "{label}: governed n moved"
    );
    let row = summary
        .per_n
        .iter()
        .find(|r| r.governed)
        .unwrap_or_else(|| panic!("{label}: no row at the governed n"));
    assert!(
        row.estimate.cp_upper <= summary.delta,
        "{label}: upper interval {:.4} exceeds delta {}",
        row.estimate.cp_upper,
        summary.delta
    );
    assert!(summary.pass, "{label}: summary verdict is fail");
}

#[test]
fn thresholds_meet_governed_bound_on_every_mixture() {
    for name in MIXTURE_FIXTURES {
        let mut plan = load_plan(&fixture(name)).unwrap();
        plan.trials = 500;
        assert_governed_pass(&plan, 622, name);
    }
}

#[test]
fn intervals_meet_governed_bound_on_every_mixture() {
    for name in MIXTURE_FIXTURES {
        let mut plan = load_plan(&fixture(name)).unwrap();
        plan.class = Some(
            ConceptClass::new(FamilyKind::Intervals, plan.process.grid().clone()).unwrap(),
        );
        plan.target = Some(TargetSpec::Concept(Concept::interval(6.0, 14.0).unwrap()));
        plan.n_grid = vec![1243];
        plan.trials = 300;
        assert_governed_pass(&plan, 1243, &format!("{name} (intervals)"));
    }
}

/// Every conditional error the learning pipeline would report is also
/// what the defining ratio of prefix probabilities gives, hypothesis by
/// hypothesis, on a brute-forceable instance.
#[test]
fn pipeline_conditional_errors_match_ratio_oracle() {
    let grid = predpac::domain::DomainGrid::integer_range(4).unwrap();
    let components = vec![
        Pmf::new(grid.clone(), vec![0.4, 0.3, 0.2, 0.1]).unwrap(),
        Pmf::new(grid.clone(), vec![0.1, 0.2, 0.3, 0.4]).unwrap(),
    ];
    let process = ProcessSpec::finite_de_finetti(
        FiniteMixture::new(components, vec![0.6, 0.4]).unwrap(),
    );
    let class = ConceptClass::new(FamilyKind::Thresholds, grid).unwrap();
    let target = Concept::threshold(3.0);

    let mut worst = 0.0f64;
    for trial in 0..200u64 {
        let mut rng = trial_rng(424_242, trial);
        let path = sample_path(&process, 6, &mut rng);
        for n in [3usize, 6] {
            let prefix = &path.values[..n];
            let sample = restrict(&target, prefix);
            let learned = erm(&class, &sample).unwrap();
            let loss = |x: f64| (learned.indicator(x) - target.indicator(x)).abs();
            let via_posterior = conditional_expectation(&process, prefix, loss).unwrap();
            let via_ratio = brute_force_conditional(&process, prefix, loss).unwrap();
            worst = worst.max((via_posterior - via_ratio).abs());
        }
    }
    assert!(worst <= 1e-12, "worst disagreement {worst:.3e}");
}
