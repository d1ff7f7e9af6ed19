//! Seeded, parallel Monte Carlo experiment runners.
//!
//! Each trial's randomness derives only from (master_seed, trial_index),
//! and every trial samples one path at the largest configured n and
//! reuses its prefixes for the smaller sizes. Results are therefore
//! invariant under worker count and rerun, byte for byte.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{predictive_transform, vidyasagar_bound};
use crate::concept::{risk, Concept, ConceptClass};
use crate::config::{ExperimentKind, ExperimentPlan, TargetSpec};
use crate::error::{Error, Result};
use crate::gc::{sup_deviation_classical, sup_deviation_predictive};
use crate::learner::{erm, restrict};
use crate::process::{
    conditional_expectation, posterior_weights, sample_path, ProcessSpec, RealizedComponent,
};
use crate::report::{
    render_gc_csv, render_pac_csv, render_posterior_csv, GcRow, PacTrialRow, PosteriorRow,
};
use crate::seed::trial_rng;
use crate::stats::{clopper_pearson, median};

pub const CONFIDENCE: f64 = 0.95;

/// Binomial estimate of P{conditional_error > epsilon} with its exact
/// two-sided 95% interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureEstimate {
    pub failures: u64,
    pub trials: u64,
    pub fraction: f64,
    pub cp_lower: f64,
    pub cp_upper: f64,
}

/// Counts strict exceedances conditional_error > epsilon.
pub fn estimate_failure_probability(
    records: &[PacTrialRow],
    epsilon: f64,
) -> Result<FailureEstimate> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let trials = records.len() as u64;
    let failures = records
        .iter()
        .filter(|r| r.conditional_error > epsilon)
        .count() as u64;
    let (cp_lower, cp_upper) = clopper_pearson(failures, trials, CONFIDENCE)?;
    Ok(FailureEstimate {
        failures,
        trials,
        fraction: failures as f64 / trials as f64,
        cp_lower,
        cp_upper,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PacPerN {
    pub n: u64,
    #[serde(flatten)]
    pub estimate: FailureEstimate,
    /// Whether this n equals the bound-governed sample size.
    pub governed: bool,
    /// cp_upper <= delta, judged only at the governed n.
    pub verdict: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PacSummary {
    pub master_seed: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub declared_vc: usize,
    /// The transformed bound s(delta*epsilon, epsilon/2) at the declared VC.
    pub governed_n: u64,
    pub per_n: Vec<PacPerN>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NegativePerN {
    pub n: u64,
    pub trials: u64,
    pub mean_conditional_error: f64,
    pub mean_marginal_risk: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NegativeSummary {
    pub master_seed: u64,
    pub target: String,
    pub per_n: Vec<NegativePerN>,
    pub all_conditional_zero: bool,
    /// Largest spread of mean marginal risk across the configured n.
    pub risk_spread: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GcPerN {
    pub n: u64,
    pub trials: u64,
    pub median_predictive: f64,
    pub median_classical: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GcSummary {
    pub master_seed: u64,
    pub per_n: Vec<GcPerN>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PosteriorPerN {
    pub n: u64,
    pub trials: u64,
    pub correct: u64,
    pub accuracy: f64,
    pub cp_lower: f64,
    pub cp_upper: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PosteriorSummary {
    pub master_seed: u64,
    pub per_n: Vec<PosteriorPerN>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Summary {
    PredictivePac(PacSummary),
    NegativeExample(NegativeSummary),
    GcCurve(GcSummary),
    PosteriorConcentration(PosteriorSummary),
}

impl Summary {
    pub fn pass(&self) -> bool {
        match self {
            Summary::PredictivePac(s) => s.pass,
            Summary::NegativeExample(s) => s.pass,
            Summary::GcCurve(s) => s.pass,
            Summary::PosteriorConcentration(s) => s.pass,
        }
    }
}

/// Records plus summary for one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub kind: ExperimentKind,
    pub csv: String,
    pub summary: Summary,
}

impl ExperimentOutput {
    pub fn pass(&self) -> bool {
        self.summary.pass()
    }

    /// Writes `<base>.csv` and `<base>_summary.json` under `dir`.
    pub fn write_to(&self, dir: &Path, base: &str) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{base}.csv"));
        let summary_path = dir.join(format!("{base}_summary.json"));
        std::fs::write(&csv_path, &self.csv)?;
        let mut json = serde_json::to_string_pretty(&self.summary)?;
        json.push('\n');
        std::fs::write(&summary_path, json)?;
        Ok((csv_path, summary_path))
    }
}

/// Dispatches a validated plan, optionally on a dedicated pool of
/// `workers` threads (default: the global pool).
pub fn run_experiment(plan: &ExperimentPlan, workers: Option<usize>) -> Result<ExperimentOutput> {
    match workers {
        None => run_dispatch(plan),
        Some(w) => {
            if w == 0 {
                return Err(Error::Config("workers must be >= 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
            pool.install(|| run_dispatch(plan))
        }
    }
}

fn run_dispatch(plan: &ExperimentPlan) -> Result<ExperimentOutput> {
    match plan.kind {
        ExperimentKind::PredictivePac => run_predictive_pac(plan),
        ExperimentKind::NegativeExample => run_negative_example(plan),
        ExperimentKind::GcCurve => run_gc_curve(plan),
        ExperimentKind::PosteriorConcentration => run_posterior_concentration(plan),
    }
}

/// One learning trial: sample once at the largest n, then learn and score
/// on each prefix.
fn learning_rows(
    plan: &ExperimentPlan,
    class: &ConceptClass,
    target: &Concept,
    trial: u64,
) -> Result<Vec<PacTrialRow>> {
    let n_max = *plan.n_grid.last().expect("validated nonempty");
    let marginal = plan.process.marginal_pmf();
    let mut rng = trial_rng(plan.master_seed, trial);
    let path = sample_path(&plan.process, n_max, &mut rng);
    let mut rows = Vec::with_capacity(plan.n_grid.len());
    for &n in &plan.n_grid {
        let prefix = &path.values[..n];
        let sample = restrict(target, prefix);
        let learned = erm(class, &sample)?;
        let conditional_error = conditional_expectation(&plan.process, prefix, |x| {
            (learned.indicator(x) - target.indicator(x)).abs()
        })?;
        let marginal_risk = risk(&marginal, &learned, target);
        rows.push(PacTrialRow {
            trial,
            n: n as u64,
            realized: path.realized,
            learned,
            conditional_error,
            marginal_risk,
        });
    }
    Ok(rows)
}

fn collect_learning_rows(
    plan: &ExperimentPlan,
    class: &ConceptClass,
    target: &Concept,
) -> Result<Vec<PacTrialRow>> {
    let nested: Vec<Vec<PacTrialRow>> = (0..plan.trials as u64)
        .into_par_iter()
        .map(|trial| learning_rows(plan, class, target, trial))
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn run_predictive_pac(plan: &ExperimentPlan) -> Result<ExperimentOutput> {
    let class = plan.class.as_ref().expect("validated");
    let target = match plan.target.as_ref().expect("validated") {
        TargetSpec::Concept(c) => c.clone(),
        TargetSpec::WorstCase => unreachable!("rejected during validation"),
    };
    let epsilon = plan.epsilon.expect("validated");
    let delta = plan.delta.expect("validated");

    let rows = collect_learning_rows(plan, class, &target)?;

    let d = class.declared_vc();
    let governed_n =
        predictive_transform(|dl, ep| vidyasagar_bound(d, dl, ep), delta, epsilon)?;
    let mut per_n = Vec::with_capacity(plan.n_grid.len());
    for &n in &plan.n_grid {
        let at_n: Vec<PacTrialRow> = rows.iter().filter(|r| r.n == n as u64).cloned().collect();
        let estimate = estimate_failure_probability(&at_n, epsilon)?;
        let governed = n as u64 == governed_n;
        let verdict = governed.then(|| estimate.cp_upper <= delta);
        per_n.push(PacPerN {
            n: n as u64,
            estimate,
            governed,
            verdict,
        });
    }
    let pass = per_n.iter().all(|r| r.verdict.unwrap_or(true));
    Ok(ExperimentOutput {
        kind: plan.kind,
        csv: render_pac_csv(&rows),
        summary: Summary::PredictivePac(PacSummary {
            master_seed: plan.master_seed,
            epsilon,
            delta,
            declared_vc: d,
            governed_n,
            per_n,
            pass,
        }),
    })
}

/// The class member maximizing the exact expected marginal risk of the
/// hypothesis ERM learns from it, on a diagonal process. A diagonal
/// prefix repeats one atom, so learning from a single copy of the atom
/// is exact for every n; the search is therefore closed-form.
pub fn worst_case_target(process: &ProcessSpec, class: &ConceptClass) -> Result<Concept> {
    let (weights, components) = process
        .finite_components()
        .ok_or_else(|| Error::Config("worst-case search needs finite components".into()))?;
    let marginal = process.marginal_pmf();
    let grid = process.grid();
    let atoms: Vec<f64> = components
        .iter()
        .map(|comp| {
            comp.probs()
                .iter()
                .position(|p| (*p - 1.0).abs() <= 1e-12)
                .map(|i| grid.points()[i])
                .ok_or_else(|| Error::Config("worst-case search needs point-mass components".into()))
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(f64, &Concept)> = None;
    for candidate in class.concepts() {
        let mut expected = 0.0;
        for (w, &x) in weights.iter().zip(&atoms) {
            if *w == 0.0 {
                continue;
            }
            let learned = erm(class, &restrict(candidate, &[x]))?;
            expected += w * risk(&marginal, &learned, candidate);
        }
        // strict improvement keeps the first (lexicographically smallest)
        // maximizer
        if best.is_none() || expected > best.unwrap().0 {
            best = Some((expected, candidate));
        }
    }
    Ok(best.expect("class is nonempty").1.clone())
}

fn run_negative_example(plan: &ExperimentPlan) -> Result<ExperimentOutput> {
    let class = plan.class.as_ref().expect("validated");
    let target = match plan.target.as_ref().expect("validated") {
        TargetSpec::Concept(c) => c.clone(),
        TargetSpec::WorstCase => worst_case_target(&plan.process, class)?,
    };

    let rows = collect_learning_rows(plan, class, &target)?;

    let mut per_n = Vec::with_capacity(plan.n_grid.len());
    for &n in &plan.n_grid {
        let at_n: Vec<&PacTrialRow> = rows.iter().filter(|r| r.n == n as u64).collect();
        let trials = at_n.len() as u64;
        let mean_conditional_error =
            at_n.iter().map(|r| r.conditional_error).sum::<f64>() / trials as f64;
        let mean_marginal_risk = at_n.iter().map(|r| r.marginal_risk).sum::<f64>() / trials as f64;
        per_n.push(NegativePerN {
            n: n as u64,
            trials,
            mean_conditional_error,
            mean_marginal_risk,
        });
    }
    let all_conditional_zero = rows.iter().all(|r| r.conditional_error == 0.0);
    let means: Vec<f64> = per_n.iter().map(|r| r.mean_marginal_risk).collect();
    let risk_spread = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - means.iter().cloned().fold(f64::INFINITY, f64::min);
    let pass = all_conditional_zero && risk_spread <= 0.02;
    Ok(ExperimentOutput {
        kind: plan.kind,
        csv: render_pac_csv(&rows),
        summary: Summary::NegativeExample(NegativeSummary {
            master_seed: plan.master_seed,
            target: target.describe(),
            per_n,
            all_conditional_zero,
            risk_spread,
            pass,
        }),
    })
}

fn run_gc_curve(plan: &ExperimentPlan) -> Result<ExperimentOutput> {
    let n_max = *plan.n_grid.last().expect("validated nonempty");
    let marginal = plan.process.marginal_pmf();
    let nested: Vec<Vec<GcRow>> = (0..plan.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(plan.master_seed, trial);
            let path = sample_path(&plan.process, n_max, &mut rng);
            plan.n_grid
                .iter()
                .map(|&n| {
                    let prefix = &path.values[..n];
                    Ok(GcRow {
                        n: n as u64,
                        trial,
                        dev_predictive: sup_deviation_predictive(&plan.process, prefix)?,
                        dev_classical: sup_deviation_classical(prefix, &marginal)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<GcRow> = nested.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.n, r.trial));

    let mut per_n = Vec::with_capacity(plan.n_grid.len());
    for &n in &plan.n_grid {
        let pred: Vec<f64> = rows
            .iter()
            .filter(|r| r.n == n as u64)
            .map(|r| r.dev_predictive)
            .collect();
        let class: Vec<f64> = rows
            .iter()
            .filter(|r| r.n == n as u64)
            .map(|r| r.dev_classical)
            .collect();
        per_n.push(GcPerN {
            n: n as u64,
            trials: pred.len() as u64,
            median_predictive: median(&pred)?,
            median_classical: median(&class)?,
        });
    }
    Ok(ExperimentOutput {
        kind: plan.kind,
        csv: render_gc_csv(&rows),
        summary: Summary::GcCurve(GcSummary {
            master_seed: plan.master_seed,
            per_n,
            pass: true,
        }),
    })
}

fn run_posterior_concentration(plan: &ExperimentPlan) -> Result<ExperimentOutput> {
    let n_max = *plan.n_grid.last().expect("validated nonempty");
    let nested: Vec<Vec<PosteriorRow>> = (0..plan.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(plan.master_seed, trial);
            let path = sample_path(&plan.process, n_max, &mut rng);
            let realized = match path.realized {
                RealizedComponent::Index(i) => i,
                RealizedComponent::BetaParam(_) => {
                    unreachable!("rejected during validation")
                }
            };
            plan.n_grid
                .iter()
                .map(|&n| {
                    let posterior = posterior_weights(&plan.process, &path.values[..n])?;
                    // ties go to the smallest index
                    let mut argmax = 0;
                    for (i, &w) in posterior.iter().enumerate() {
                        if w > posterior[argmax] {
                            argmax = i;
                        }
                    }
                    Ok(PosteriorRow {
                        trial,
                        n: n as u64,
                        realized,
                        posterior_realized: posterior[realized],
                        argmax_component: argmax,
                        correct: argmax == realized,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<PosteriorRow> = nested.into_iter().flatten().collect();

    let mut per_n = Vec::with_capacity(plan.n_grid.len());
    for &n in &plan.n_grid {
        let at_n: Vec<&PosteriorRow> = rows.iter().filter(|r| r.n == n as u64).collect();
        let trials = at_n.len() as u64;
        let correct = at_n.iter().filter(|r| r.correct).count() as u64;
        let (cp_lower, cp_upper) = clopper_pearson(correct, trials, CONFIDENCE)?;
        per_n.push(PosteriorPerN {
            n: n as u64,
            trials,
            correct,
            accuracy: correct as f64 / trials as f64,
            cp_lower,
            cp_upper,
        });
    }
    Ok(ExperimentOutput {
        kind: plan.kind,
        csv: render_posterior_csv(&rows),
        summary: Summary::PosteriorConcentration(PosteriorSummary {
            master_seed: plan.master_seed,
            per_n,
            pass: true,
        }),
    })
}
