//! JSON experiment configuration: serde DTOs, validation, and the
//! resolved `ExperimentPlan` the runners consume.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::concept::{Concept, ConceptClass, FamilyKind};
use crate::domain::{DomainGrid, FiniteMixture, Pmf};
use crate::error::{Error, Result};
use crate::process::ProcessSpec;

/// Which experiment a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    PredictivePac,
    GcCurve,
    PosteriorConcentration,
    NegativeExample,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::PredictivePac => "predictive_pac",
            ExperimentKind::GcCurve => "gc_curve",
            ExperimentKind::PosteriorConcentration => "posterior_concentration",
            ExperimentKind::NegativeExample => "negative_example",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProcessDto {
    Iid {
        grid: Vec<f64>,
        probs: Vec<f64>,
    },
    FiniteDefinetti {
        grid: Vec<f64>,
        weights: Vec<f64>,
        components: Vec<Vec<f64>>,
    },
    BetaBernoulli {
        a: f64,
        b: f64,
    },
    /// Point masses at each grid point with the given weights.
    Diagonal {
        grid: Vec<f64>,
        weights: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassDto {
    Thresholds,
    Intervals,
    UnionsOfIntervals { k: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerDto {
    pub rule: String,
    pub tie_break: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConceptDto {
    Threshold { t: f64 },
    Interval { a: f64, b: f64 },
    UnionOfIntervals { intervals: Vec<(f64, f64)> },
}

/// Either a literal concept or the string `"worst_case"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TargetDto {
    Keyword(String),
    Concept(ConceptDto),
}

/// Raw parsed config, prior to semantic validation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfigDto {
    pub kind: ExperimentKind,
    pub process: ProcessDto,
    #[serde(default)]
    pub class: Option<ClassDto>,
    #[serde(default)]
    pub learner: Option<LearnerDto>,
    #[serde(default)]
    pub target: Option<TargetDto>,
    pub n_grid: Vec<u64>,
    pub trials: u64,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    pub master_seed: u64,
    #[serde(default)]
    pub output: Option<String>,
}

/// Resolved target for the learning experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpec {
    Concept(Concept),
    WorstCase,
}

/// A fully validated experiment, ready to run.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub kind: ExperimentKind,
    pub process: ProcessSpec,
    pub class: Option<ConceptClass>,
    pub target: Option<TargetSpec>,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub master_seed: u64,
    pub output: Option<String>,
}

impl ExperimentPlan {
    /// The output base name: explicit `output`, else the kind name.
    pub fn output_base(&self) -> &str {
        self.output.as_deref().unwrap_or_else(|| self.kind.name())
    }
}

pub fn parse_config_str(json: &str) -> Result<ExperimentConfigDto> {
    serde_json::from_str(json).map_err(|e| Error::Config(format!("config does not parse: {e}")))
}

pub fn load_plan_from_str(json: &str) -> Result<ExperimentPlan> {
    validate(parse_config_str(json)?)
}

pub fn load_plan(path: &Path) -> Result<ExperimentPlan> {
    let text = std::fs::read_to_string(path)?;
    load_plan_from_str(&text)
}

fn build_grid(points: Vec<f64>) -> Result<Arc<DomainGrid>> {
    Ok(Arc::new(DomainGrid::new(points)?))
}

fn build_process(dto: ProcessDto) -> Result<ProcessSpec> {
    match dto {
        ProcessDto::Iid { grid, probs } => {
            let grid = build_grid(grid)?;
            Ok(ProcessSpec::iid(Pmf::new(grid, probs)?))
        }
        ProcessDto::FiniteDefinetti {
            grid,
            weights,
            components,
        } => {
            let grid = build_grid(grid)?;
            let pmfs = components
                .into_iter()
                .map(|probs| Pmf::new(grid.clone(), probs))
                .collect::<Result<Vec<_>>>()?;
            Ok(ProcessSpec::finite_de_finetti(FiniteMixture::new(
                pmfs, weights,
            )?))
        }
        ProcessDto::BetaBernoulli { a, b } => ProcessSpec::beta_bernoulli(a, b),
        ProcessDto::Diagonal { grid, weights } => {
            ProcessSpec::diagonal_over_points(build_grid(grid)?, weights)
        }
    }
}

fn build_class(dto: ClassDto, grid: Arc<DomainGrid>) -> Result<ConceptClass> {
    let family = match dto {
        ClassDto::Thresholds => FamilyKind::Thresholds,
        ClassDto::Intervals => FamilyKind::Intervals,
        ClassDto::UnionsOfIntervals { k } => FamilyKind::UnionsOfIntervals { k },
    };
    ConceptClass::new(family, grid)
}

fn build_concept(dto: ConceptDto) -> Result<Concept> {
    match dto {
        ConceptDto::Threshold { t } => Ok(Concept::threshold(t)),
        ConceptDto::Interval { a, b } => Concept::interval(a, b),
        ConceptDto::UnionOfIntervals { intervals } => Concept::union_of_intervals(intervals),
    }
}

fn check_unit_open(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) || !x.is_finite() {
        return Err(Error::Config(format!("{name} must lie in (0,1), got {x}")));
    }
    Ok(())
}

/// Semantic validation per experiment kind; returns the runnable plan.
pub fn validate(dto: ExperimentConfigDto) -> Result<ExperimentPlan> {
    if dto.trials == 0 {
        return Err(Error::Config("trials must be >= 1".into()));
    }
    if dto.n_grid.is_empty() {
        return Err(Error::Config("n_grid must be nonempty".into()));
    }
    if dto.n_grid.iter().any(|&n| n == 0) {
        return Err(Error::Config("n_grid entries must be >= 1".into()));
    }
    if dto.n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("n_grid must be strictly increasing".into()));
    }
    if let Some(eps) = dto.epsilon {
        check_unit_open("epsilon", eps)?;
    }
    if let Some(delta) = dto.delta {
        check_unit_open("delta", delta)?;
    }
    if let Some(learner) = &dto.learner {
        if learner.rule != "erm" {
            return Err(Error::Config(format!(
                "unsupported learner rule {:?}; only \"erm\"",
                learner.rule
            )));
        }
        if learner.tie_break != "lex_min" {
            return Err(Error::Config(format!(
                "unsupported tie_break {:?}; only \"lex_min\"",
                learner.tie_break
            )));
        }
    }

    let process = build_process(dto.process)?;
    let class = dto
        .class
        .map(|c| build_class(c, process.grid().clone()))
        .transpose()?;
    let target = dto
        .target
        .map(|t| match t {
            TargetDto::Keyword(word) if word == "worst_case" => Ok(TargetSpec::WorstCase),
            TargetDto::Keyword(word) => Err(Error::Config(format!(
                "unknown target keyword {word:?}; expected \"worst_case\" or a concept object"
            ))),
            TargetDto::Concept(c) => Ok(TargetSpec::Concept(build_concept(c)?)),
        })
        .transpose()?;

    match dto.kind {
        ExperimentKind::PredictivePac => {
            if process.finite_components().is_none() {
                return Err(Error::Config(
                    "predictive_pac needs a finite-support process for the exact error oracle"
                        .into(),
                ));
            }
            let class = class
                .as_ref()
                .ok_or_else(|| Error::Config("predictive_pac needs a class".into()))?;
            if dto.learner.is_none() {
                return Err(Error::Config("predictive_pac needs a learner".into()));
            }
            dto.epsilon
                .ok_or_else(|| Error::Config("predictive_pac needs epsilon".into()))?;
            dto.delta
                .ok_or_else(|| Error::Config("predictive_pac needs delta".into()))?;
            match &target {
                Some(TargetSpec::Concept(f)) => {
                    if !class.concepts().contains(f) {
                        return Err(Error::Config(
                            "target concept is not a member of the class over the process grid"
                                .into(),
                        ));
                    }
                }
                Some(TargetSpec::WorstCase) => {
                    return Err(Error::Config(
                        "predictive_pac needs a literal target concept, not \"worst_case\"".into(),
                    ));
                }
                None => return Err(Error::Config("predictive_pac needs a target".into())),
            }
        }
        ExperimentKind::NegativeExample => {
            if !matches!(process, ProcessSpec::Diagonal(_)) {
                return Err(Error::Config(
                    "negative_example needs a diagonal process".into(),
                ));
            }
            if process.grid().len() < 2 {
                return Err(Error::Config(
                    "negative_example needs at least two distinct atoms".into(),
                ));
            }
            let class = class
                .as_ref()
                .ok_or_else(|| Error::Config("negative_example needs a class".into()))?;
            if class.len() < 2 {
                return Err(Error::Config(
                    "negative_example needs a class with at least two concepts".into(),
                ));
            }
            if dto.learner.is_none() {
                return Err(Error::Config("negative_example needs a learner".into()));
            }
            if target.is_none() {
                return Err(Error::Config(
                    "negative_example needs a target (a concept or \"worst_case\")".into(),
                ));
            }
        }
        ExperimentKind::GcCurve => {
            if class.is_some() || dto.learner.is_some() || target.is_some() {
                return Err(Error::Config(
                    "gc_curve takes no class, learner, or target".into(),
                ));
            }
        }
        ExperimentKind::PosteriorConcentration => {
            if class.is_some() || dto.learner.is_some() || target.is_some() {
                return Err(Error::Config(
                    "posterior_concentration takes no class, learner, or target".into(),
                ));
            }
            let enough = process
                .finite_components()
                .map(|(w, _)| w.len() >= 2)
                .unwrap_or(false);
            if !enough {
                return Err(Error::Config(
                    "posterior_concentration needs a finite mixture with >= 2 components".into(),
                ));
            }
        }
    }

    Ok(ExperimentPlan {
        kind: dto.kind,
        process,
        class,
        target,
        n_grid: dto.n_grid.iter().map(|&n| n as usize).collect(),
        trials: dto.trials as usize,
        epsilon: dto.epsilon,
        delta: dto.delta,
        master_seed: dto.master_seed,
        output: dto.output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pac_json() -> String {
        r#"{
            "kind": "predictive_pac",
            "process": {
                "type": "finite_definetti",
                "grid": [1, 2, 3, 4],
                "weights": [0.5, 0.5],
                "components": [[0.7, 0.1, 0.1, 0.1], [0.1, 0.1, 0.1, 0.7]]
            },
            "class": {"family": "thresholds"},
            "learner": {"rule": "erm", "tie_break": "lex_min"},
            "target": {"kind": "threshold", "t": 3.0},
            "n_grid": [10, 20],
            "trials": 5,
            "epsilon": 0.2,
            "delta": 0.1,
            "master_seed": 7
        }"#
        .to_string()
    }

    #[test]
    fn valid_pac_config_round_trips() {
        let plan = load_plan_from_str(&pac_json()).unwrap();
        assert_eq!(plan.kind, ExperimentKind::PredictivePac);
        assert_eq!(plan.n_grid, vec![10, 20]);
        assert_eq!(plan.trials, 5);
        assert_eq!(plan.epsilon, Some(0.2));
        assert!(matches!(plan.target, Some(TargetSpec::Concept(_))));
        assert_eq!(plan.class.as_ref().unwrap().declared_vc(), 1);
        assert_eq!(plan.output_base(), "predictive_pac");
    }

    #[test]
    fn unknown_fields_rejected() {
        let json = pac_json().replace("\"master_seed\": 7", "\"master_seed\": 7, \"extra\": 1");
        assert!(matches!(load_plan_from_str(&json), Err(Error::Config(_))));
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(matches!(
            load_plan_from_str("{not json"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn n_grid_must_increase() {
        let json = pac_json().replace("[10, 20]", "[20, 10]");
        assert!(matches!(load_plan_from_str(&json), Err(Error::Config(_))));
        let json = pac_json().replace("[10, 20]", "[]");
        assert!(matches!(load_plan_from_str(&json), Err(Error::Config(_))));
    }

    #[test]
    fn pac_requires_target_in_class() {
        let json = pac_json().replace("\"t\": 3.0", "\"t\": 3.5");
        assert!(matches!(load_plan_from_str(&json), Err(Error::Config(_))));
    }

    #[test]
    fn pac_rejects_worst_case_and_beta_bernoulli() {
        let json = pac_json().replace(r#"{"kind": "threshold", "t": 3.0}"#, "\"worst_case\"");
        assert!(matches!(load_plan_from_str(&json), Err(Error::Config(_))));

        let json = r#"{
            "kind": "predictive_pac",
            "process": {"type": "beta_bernoulli", "a": 1.0, "b": 1.0},
            "class": {"family": "thresholds"},
            "learner": {"rule": "erm", "tie_break": "lex_min"},
            "target": {"kind": "threshold", "t": 1.0},
            "n_grid": [10],
            "trials": 5,
            "epsilon": 0.2,
            "delta": 0.1,
            "master_seed": 7
        }"#;
        assert!(matches!(load_plan_from_str(json), Err(Error::Config(_))));
    }

    #[test]
    fn unsupported_learner_rejected() {
        let json = pac_json().replace("\"erm\"", "\"svm\"");
        assert!(matches!(load_plan_from_str(&json), Err(Error::Config(_))));
        let json = pac_json().replace("\"lex_min\"", "\"random\"");
        assert!(matches!(load_plan_from_str(&json), Err(Error::Config(_))));
    }

    #[test]
    fn gc_curve_minimal_config() {
        let json = r#"{
            "kind": "gc_curve",
            "process": {"type": "beta_bernoulli", "a": 1.0, "b": 1.0},
            "n_grid": [10, 100],
            "trials": 50,
            "master_seed": 11
        }"#;
        let plan = load_plan_from_str(json).unwrap();
        assert_eq!(plan.kind, ExperimentKind::GcCurve);
        assert!(plan.class.is_none());
    }

    #[test]
    fn gc_curve_rejects_learning_fields() {
        let json = r#"{
            "kind": "gc_curve",
            "process": {"type": "beta_bernoulli", "a": 1.0, "b": 1.0},
            "class": {"family": "thresholds"},
            "n_grid": [10],
            "trials": 5,
            "master_seed": 11
        }"#;
        assert!(matches!(load_plan_from_str(json), Err(Error::Config(_))));
    }

    #[test]
    fn posterior_concentration_needs_two_components() {
        let json = r#"{
            "kind": "posterior_concentration",
            "process": {"type": "iid", "grid": [0, 1], "probs": [0.5, 0.5]},
            "n_grid": [10],
            "trials": 5,
            "master_seed": 11
        }"#;
        assert!(matches!(load_plan_from_str(json), Err(Error::Config(_))));
    }

    #[test]
    fn negative_example_worst_case_accepted() {
        let json = r#"{
            "kind": "negative_example",
            "process": {
                "type": "diagonal",
                "grid": [1, 2, 3, 4],
                "weights": [0.25, 0.25, 0.25, 0.25]
            },
            "class": {"family": "thresholds"},
            "learner": {"rule": "erm", "tie_break": "lex_min"},
            "target": "worst_case",
            "n_grid": [10, 100],
            "trials": 20,
            "master_seed": 3,
            "output": "negdemo"
        }"#;
        let plan = load_plan_from_str(json).unwrap();
        assert!(matches!(plan.target, Some(TargetSpec::WorstCase)));
        assert_eq!(plan.output_base(), "negdemo");
    }

    #[test]
    fn negative_example_requires_diagonal() {
        let json = pac_json().replace("predictive_pac", "negative_example");
        assert!(matches!(load_plan_from_str(&json), Err(Error::Config(_))));
    }

    #[test]
    fn epsilon_out_of_range_rejected() {
        let json = pac_json().replace("\"epsilon\": 0.2", "\"epsilon\": 1.2");
        assert!(matches!(load_plan_from_str(&json), Err(Error::Config(_))));
    }
}
