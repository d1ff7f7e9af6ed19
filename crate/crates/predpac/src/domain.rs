//! Finite discrete surrogate for the instance space: grids, probability
//! mass functions, and finite mixtures.
//!
//! Everything downstream (process oracles, risks, deviation statistics)
//! is an exact finite sum over these objects, which is what makes the
//! conditional-error measurements in the experiments exact rather than
//! Monte Carlo estimates.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Constructor inputs whose probabilities are further than this from
/// summing to one are rejected instead of being silently fixed up.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A strictly increasing finite set of real points; the support of every
/// distribution in a model.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainGrid {
    points: Vec<f64>,
}

impl DomainGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("grid must be nonempty".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("grid points must be finite".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "grid points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    /// Evenly indexed grid 1, 2, ..., n.
    pub fn integer_range(n: usize) -> Result<Arc<Self>> {
        Self::new((1..=n).map(|i| i as f64).collect()).map(Arc::new)
    }

    /// The two-point grid {0, 1}.
    pub fn binary() -> Arc<Self> {
        Arc::new(Self {
            points: vec![0.0, 1.0],
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Index of an exact grid point, if present.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        self.points
            .binary_search_by(|p| p.partial_cmp(&x).unwrap())
            .ok()
    }
}

/// A probability mass function over a [`DomainGrid`]: one non-random
/// single-observation law.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    grid: Arc<DomainGrid>,
    probs: Vec<f64>,
    renormalized: bool,
}

impl Pmf {
    /// Validates and stores a mass function. Probabilities must be
    /// nonnegative and sum to one within [`SUM_TOLERANCE`]; a residual
    /// below that tolerance is removed by a single recorded
    /// renormalization (see [`Pmf::renormalized`]).
    pub fn new(grid: Arc<DomainGrid>, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != grid.len() {
            return Err(Error::Domain(format!(
                "pmf has {} probabilities for a {}-point grid",
                probs.len(),
                grid.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Domain(
                "pmf probabilities must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Domain(format!(
                "pmf probabilities sum to {sum}, not 1 (tolerance {SUM_TOLERANCE})"
            )));
        }
        let renormalized = sum != 1.0;
        let probs = if renormalized {
            probs.iter().map(|p| p / sum).collect()
        } else {
            probs
        };
        Ok(Self {
            grid,
            probs,
            renormalized,
        })
    }

    pub fn uniform(grid: Arc<DomainGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            probs: vec![1.0 / n as f64; n],
            renormalized: false,
        }
    }

    /// All mass on the grid point at `index`.
    pub fn point_mass(grid: Arc<DomainGrid>, index: usize) -> Result<Self> {
        if index >= grid.len() {
            return Err(Error::Domain(format!(
                "point-mass index {index} outside {}-point grid",
                grid.len()
            )));
        }
        let mut probs = vec![0.0; grid.len()];
        probs[index] = 1.0;
        Ok(Self {
            grid,
            probs,
            renormalized: false,
        })
    }

    /// Bernoulli(p) on the grid {0, 1}: probability `p` of observing 1.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("bernoulli parameter {p} outside [0,1]")));
        }
        Ok(Self {
            grid: DomainGrid::binary(),
            probs: vec![1.0 - p, p],
            renormalized: false,
        })
    }

    pub fn grid(&self) -> &Arc<DomainGrid> {
        &self.grid
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    /// Probability of an exact grid point; zero off the grid.
    pub fn prob_of(&self, x: f64) -> f64 {
        self.grid.index_of(x).map_or(0.0, |i| self.probs[i])
    }

    /// Whether construction removed a sub-tolerance normalization residual.
    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    /// E_theta(g) as an exact finite sum.
    pub fn expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.grid
            .points()
            .iter()
            .zip(&self.probs)
            .map(|(&x, &p)| p * g(x))
            .sum()
    }

    /// F(t) = P(X <= t); a right-continuous step function.
    pub fn cdf(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (&x, &p) in self.grid.points().iter().zip(&self.probs) {
            if x <= t {
                acc += p;
            } else {
                break;
            }
        }
        acc.min(1.0)
    }

    /// One draw by inversion over the cumulative weights in ascending grid
    /// order, consuming exactly one uniform variate.
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.random();
        self.sample_with_uniform(u)
    }

    /// Deterministic inverse-CDF step shared by `sample`: returns the first
    /// grid point whose cumulative probability exceeds `u`.
    pub fn sample_with_uniform(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for (&x, &p) in self.grid.points().iter().zip(&self.probs) {
            acc += p;
            if u < acc {
                return x;
            }
        }
        // u landed in the rounding slack above the final cumulative weight
        self.grid.max()
    }

    /// Total variation distance to another pmf on the same grid.
    pub fn total_variation(&self, other: &Pmf) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Domain(
                "total variation needs a common grid".into(),
            ));
        }
        Ok(0.5
            * self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }
}

/// A finitely supported directing measure: weighted components on a shared
/// grid. Houses the mixing distribution of a mixture-of-i.i.d. process.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMixture {
    components: Vec<Pmf>,
    weights: Vec<f64>,
    renormalized: bool,
}

impl FiniteMixture {
    /// Weights follow the same sum-to-one policy as [`Pmf::new`]; all
    /// components must share one grid (compared by value).
    pub fn new(components: Vec<Pmf>, weights: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("mixture needs at least one component".into()));
        }
        if components.len() != weights.len() {
            return Err(Error::Domain(format!(
                "mixture has {} components but {} weights",
                components.len(),
                weights.len()
            )));
        }
        let grid = components[0].grid().clone();
        if components.iter().any(|c| *c.grid() != grid) {
            return Err(Error::Domain(
                "mixture components must share one grid".into(),
            ));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Domain(
                "mixture weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Domain(format!(
                "mixture weights sum to {sum}, not 1 (tolerance {SUM_TOLERANCE})"
            )));
        }
        let renormalized = sum != 1.0;
        let weights = if renormalized {
            weights.iter().map(|w| w / sum).collect()
        } else {
            weights
        };
        Ok(Self {
            components,
            weights,
            renormalized,
        })
    }

    pub fn components(&self) -> &[Pmf] {
        &self.components
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn grid(&self) -> &Arc<DomainGrid> {
        self.components[0].grid()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    /// The mixture-averaged single-observation law sum_i w_i theta_i.
    pub fn marginal(&self) -> Pmf {
        let grid = self.grid().clone();
        let mut probs = vec![0.0; grid.len()];
        for (w, comp) in self.weights.iter().zip(&self.components) {
            for (slot, p) in probs.iter_mut().zip(comp.probs()) {
                *slot += w * p;
            }
        }
        Pmf {
            grid,
            probs,
            renormalized: false,
        }
    }
}
