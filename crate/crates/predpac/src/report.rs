//! Deterministic plot-ready CSV rendering for experiment records.
//!
//! All real numbers print with 15 significant digits in scientific
//! notation so reruns are byte-diffable.

use crate::concept::Concept;
use crate::process::RealizedComponent;

/// Fixed float rendering: 15 significant digits, scientific notation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.14e}")
}

fn fmt_component(c: &RealizedComponent) -> String {
    match c {
        RealizedComponent::Index(i) => i.to_string(),
        RealizedComponent::BetaParam(p) => fmt_real(*p),
    }
}

/// One learning trial at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct PacTrialRow {
    pub trial: u64,
    pub n: u64,
    pub realized: RealizedComponent,
    pub learned: Concept,
    pub conditional_error: f64,
    pub marginal_risk: f64,
}

/// One deviation measurement at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct GcRow {
    pub n: u64,
    pub trial: u64,
    pub dev_predictive: f64,
    pub dev_classical: f64,
}

/// One posterior snapshot at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorRow {
    pub trial: u64,
    pub n: u64,
    pub realized: usize,
    pub posterior_realized: f64,
    pub argmax_component: usize,
    pub correct: bool,
}

pub fn render_pac_csv(rows: &[PacTrialRow]) -> String {
    let mut out =
        String::from("trial,n,realized_component,learned,conditional_error,marginal_risk\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.trial,
            r.n,
            fmt_component(&r.realized),
            r.learned.describe(),
            fmt_real(r.conditional_error),
            fmt_real(r.marginal_risk),
        ));
    }
    out
}

pub fn render_gc_csv(rows: &[GcRow]) -> String {
    let mut out = String::from("n,trial,dev_predictive,dev_classical\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            r.trial,
            fmt_real(r.dev_predictive),
            fmt_real(r.dev_classical),
        ));
    }
    out
}

pub fn render_posterior_csv(rows: &[PosteriorRow]) -> String {
    let mut out =
        String::from("trial,n,realized_component,posterior_realized,argmax_component,correct\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.trial,
            r.n,
            r.realized,
            fmt_real(r.posterior_realized),
            r.argmax_component,
            u8::from(r.correct),
        ));
    }
    out
}

/// Rows of the `bounds` table: (d, delta, epsilon, n_pac, n_predictive).
pub fn render_bounds_csv(rows: &[(usize, f64, f64, u64, u64)]) -> String {
    let mut out = String::from("d,delta,epsilon,n_pac,n_predictive\n");
    for (d, delta, epsilon, n_pac, n_predictive) in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            d,
            fmt_real(*delta),
            fmt_real(*epsilon),
            n_pac,
            n_predictive,
        ));
    }
    out
}
