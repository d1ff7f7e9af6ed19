//! Closed-form sample-complexity formulas, the predictive transform
//! s(delta*epsilon, epsilon/2), and numeric inversion.
//!
//! `lg` is log base 2 throughout; bounds return ceilings as positive
//! integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const INVERT_TOLERANCE: f64 = 1e-9;

/// Which closed-form sample-complexity formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFormula {
    Vidyasagar78,
    CorollaryPredictive,
}

impl BoundFormula {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "vidyasagar78" => Ok(BoundFormula::Vidyasagar78),
            "corollary_predictive" => Ok(BoundFormula::CorollaryPredictive),
            other => Err(Error::Config(format!(
                "unknown bound formula {other:?}; expected \"vidyasagar78\" or \"corollary_predictive\""
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundFormula::Vidyasagar78 => "vidyasagar78",
            BoundFormula::CorollaryPredictive => "corollary_predictive",
        }
    }
}

/// A formula together with the VC dimension it is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub d: usize,
    pub formula: BoundFormula,
}

impl BoundSpec {
    pub fn new(d: usize, formula: BoundFormula) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("VC dimension d must be >= 1".into()));
        }
        Ok(Self { d, formula })
    }

    pub fn evaluate(&self, delta: f64, epsilon: f64) -> Result<u64> {
        match self.formula {
            BoundFormula::Vidyasagar78 => vidyasagar_bound(self.d, delta, epsilon),
            BoundFormula::CorollaryPredictive => corollary_bound(self.d, delta, epsilon),
        }
    }

    /// The formula evaluated at the transformed point (delta*epsilon,
    /// epsilon/2).
    pub fn evaluate_predictive(&self, delta: f64, epsilon: f64) -> Result<u64> {
        predictive_transform(|dl, ep| self.evaluate(dl, ep), delta, epsilon)
    }
}

fn lg(x: f64) -> f64 {
    x.log2()
}

fn check_unit_open(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("{name} must lie in (0,1), got {x}")));
    }
    Ok(())
}

fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::Domain("VC dimension d must be >= 1".into()));
    }
    Ok(())
}

/// max{(8d/eps) lg(8e/eps), (4/eps) lg(2/delta)}, rounded up.
pub fn vidyasagar_bound(d: usize, delta: f64, epsilon: f64) -> Result<u64> {
    check_d(d)?;
    check_unit_open("delta", delta)?;
    check_unit_open("epsilon", epsilon)?;
    let d = d as f64;
    let growth = (8.0 * d / epsilon) * lg(8.0 * std::f64::consts::E / epsilon);
    let confidence = (4.0 / epsilon) * lg(2.0 / delta);
    Ok(growth.max(confidence).ceil() as u64)
}

/// max{(16d/eps) lg(16e/eps), (8/eps) lg(2/delta) + (8/eps) lg(1/eps)},
/// rounded up. Equals `vidyasagar_bound(d, delta*epsilon, epsilon/2)`.
pub fn corollary_bound(d: usize, delta: f64, epsilon: f64) -> Result<u64> {
    check_d(d)?;
    check_unit_open("delta", delta)?;
    check_unit_open("epsilon", epsilon)?;
    let d = d as f64;
    let growth = (16.0 * d / epsilon) * lg(16.0 * std::f64::consts::E / epsilon);
    let confidence = (8.0 / epsilon) * lg(2.0 / delta) + (8.0 / epsilon) * lg(1.0 / epsilon);
    Ok(growth.max(confidence).ceil() as u64)
}

/// Evaluates a base bound at the shifted point (delta*epsilon, epsilon/2).
pub fn predictive_transform<F>(base: F, delta: f64, epsilon: f64) -> Result<u64>
where
    F: Fn(f64, f64) -> Result<u64>,
{
    check_unit_open("delta*epsilon", delta * epsilon)?;
    check_unit_open("epsilon/2", epsilon / 2.0)?;
    base(delta * epsilon, epsilon / 2.0)
}

/// Infimum epsilon in (0,1) with `spec.evaluate(delta, epsilon) <= n`,
/// located by bisection to absolute tolerance 1e-9.
pub fn invert_bound(spec: &BoundSpec, delta: f64, n: u64) -> Result<f64> {
    check_unit_open("delta", delta)?;
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let mut hi = 1.0 - 1e-9;
    if spec.evaluate(delta, hi)? > n {
        return Err(Error::Unreachable(n));
    }
    // the bound is nonincreasing in epsilon, and exceeds any finite n as
    // epsilon -> 0, so [lo, hi] always brackets the crossing
    let mut lo = 0.0;
    while hi - lo > INVERT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if spec.evaluate(delta, mid)? <= n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
