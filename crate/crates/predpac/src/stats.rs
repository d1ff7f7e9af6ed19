//! Small statistical helpers for the experiment summaries: exact binomial
//! confidence intervals and medians.

use crate::error::{Error, Result};
use crate::special::beta_reg_inv;

/// Two-sided Clopper-Pearson interval for a binomial proportion, via Beta
/// quantiles: lower = BetaInv(alpha/2; k, n-k+1), upper =
/// BetaInv(1-alpha/2; k+1, n-k), with the conventional 0 and 1 endpoints
/// at k = 0 and k = n.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::Domain("clopper_pearson needs trials >= 1".into()));
    }
    if successes > trials {
        return Err(Error::Domain(format!(
            "successes {successes} exceed trials {trials}"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "confidence must lie in (0,1), got {confidence}"
        )));
    }
    let alpha = 1.0 - confidence;
    let k = successes as f64;
    let n = trials as f64;
    let lower = if successes == 0 {
        0.0
    } else {
        beta_reg_inv(k, n - k + 1.0, alpha / 2.0)
    };
    let upper = if successes == trials {
        1.0
    } else {
        beta_reg_inv(k + 1.0, n - k, 1.0 - alpha / 2.0)
    };
    Ok((lower, upper))
}

/// Median with the even-length convention of averaging the two middle
/// order statistics.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    Ok(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    })
}
