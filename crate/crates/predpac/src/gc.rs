//! Empirical CDFs and the predictive/classical sup-deviation statistics.
//!
//! Both the empirical CDF and any grid pmf's CDF are step functions
//! jumping only at grid atoms, so the supremum over all real t is
//! attained at an atom and the atom scan is exact.

use crate::domain::Pmf;
use crate::error::{Error, Result};
use crate::process::{predictive_pmf, ProcessSpec};

/// Fraction of observed values <= t.
pub fn empirical_cdf(values: &[f64], t: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let count = values.iter().filter(|&&x| x <= t).count();
    Ok(count as f64 / values.len() as f64)
}

/// sup_t |F_n(t) - P(X_{n+1} <= t | X_1..X_n)|, the predictive deviation
/// of the observed prefix under its own process.
pub fn sup_deviation_predictive(process: &ProcessSpec, values: &[f64]) -> Result<f64> {
    let predictive = predictive_pmf(process, values)?;
    sup_deviation_against(values, &predictive)
}

/// sup_t |F_n(t) - F(t)| against a fixed reference law (typically the
/// process marginal).
pub fn sup_deviation_classical(values: &[f64], reference: &Pmf) -> Result<f64> {
    sup_deviation_against(values, reference)
}

fn sup_deviation_against(values: &[f64], law: &Pmf) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sup = 0.0f64;
    for &t in law.grid().points() {
        let dev = (empirical_cdf(values, t)? - law.cdf(t)).abs();
        sup = sup.max(dev);
    }
    Ok(sup)
}

/// Aligned deviation statistics across sample sizes, either for one
/// trial or aggregated (e.g. medians) across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationCurve {
    pub n_values: Vec<u64>,
    pub predictive_dev: Vec<f64>,
    pub classical_dev: Vec<f64>,
    pub aggregated: bool,
}

impl DeviationCurve {
    pub fn new(
        n_values: Vec<u64>,
        predictive_dev: Vec<f64>,
        classical_dev: Vec<f64>,
        aggregated: bool,
    ) -> Result<Self> {
        if n_values.len() != predictive_dev.len() || n_values.len() != classical_dev.len() {
            return Err(Error::Domain("deviation curve columns misaligned".into()));
        }
        if n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "deviation curve sample sizes must increase".into(),
            ));
        }
        if predictive_dev
            .iter()
            .chain(&classical_dev)
            .any(|d| !(0.0..=1.0).contains(d))
        {
            return Err(Error::Domain("deviations must lie in [0,1]".into()));
        }
        Ok(Self {
            n_values,
            predictive_dev,
            classical_dev,
            aggregated,
        })
    }
}
