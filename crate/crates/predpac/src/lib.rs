//! A simulation-and-verification laboratory for learning from
//! exchangeable data.
//!
//! The crate models exchangeable processes as de Finetti mixtures on
//! finite grids, conditions on observed prefixes with exact Bayes
//! posteriors, learns by empirical risk minimization over threshold and
//! interval classes, and measures both the classical risk and the
//! conditional (predictive) error of the next observation. Around that
//! core sit closed-form sample-complexity bounds with their predictive
//! transform, brute-force VC dimension checks, predictive and classical
//! Glivenko-Cantelli deviation statistics, and a seeded, parallel,
//! byte-reproducible Monte Carlo experiment harness.
//!
//! Modules:
//! - [`domain`]: finite grids, pmfs, and mixtures.
//! - [`process`]: exchangeable process specs, path sampling, posteriors,
//!   predictive laws, and the brute-force conditioning oracle.
//! - [`concept`]: threshold/interval concepts, risks, shattering.
//! - [`learner`]: ERM with a lexicographic tie-break.
//! - [`bounds`]: sample-complexity formulas and inversion.
//! - [`gc`]: empirical CDFs and sup-deviation statistics.
//! - [`stats`]: Clopper-Pearson intervals and medians.
//! - [`experiment`]: the Monte Carlo runners.
//! - [`config`]/[`report`]: JSON configs in, deterministic CSV out.

pub mod bounds;
pub mod concept;
pub mod config;
pub mod domain;
pub mod error;
pub mod experiment;
pub mod gc;
pub mod learner;
pub mod process;
pub mod report;
pub mod seed;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
