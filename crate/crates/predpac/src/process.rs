//! Exchangeable process generators and their exact conditional oracles.
//!
//! A process is a mixture of i.i.d. laws: a directing measure is drawn
//! once (a mixture component, or a Beta variate), then observations are
//! i.i.d. from the realized component. Conditioning on an observed prefix
//! is implemented as an exact Bayes posterior over the components, which
//! gives the predictive law of the next observation and with it exact
//! conditional expectations; `brute_force_conditional` recomputes the same
//! quantity from joint prefix probabilities alone and serves as the
//! independent oracle.

use std::sync::Arc;

use rand::Rng;

use crate::domain::{DomainGrid, FiniteMixture, Pmf};
use crate::error::{Error, Result};
use crate::special::beta_reg_inv;

/// Direct likelihood products are exact and cheap for short prefixes; past
/// this length posteriors switch to log-space accumulation with max-log
/// normalization (plain products of grid probabilities underflow near
/// n = 700 in double precision).
const LOG_SPACE_THRESHOLD: usize = 50;

/// Size limits for the first-principles conditional oracle.
const BRUTE_FORCE_MAX_GRID: usize = 6;
const BRUTE_FORCE_MAX_PREFIX: usize = 6;

/// An exchangeable data process.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessSpec {
    /// I.i.d. draws from one fixed law; the degenerate one-component mixture.
    Iid(Pmf),
    /// De Finetti mixture with finitely many components.
    FiniteDeFinetti(FiniteMixture),
    /// Beta(a, b) directing measure over Bernoulli laws on the grid {0, 1}.
    BetaBernoulli { a: f64, b: f64, grid: Arc<DomainGrid> },
    /// Identical copies of a single draw: a mixture of point masses, so
    /// every sample path is constant.
    Diagonal(FiniteMixture),
}

impl ProcessSpec {
    pub fn iid(pmf: Pmf) -> Self {
        ProcessSpec::Iid(pmf)
    }

    pub fn finite_de_finetti(mixture: FiniteMixture) -> Self {
        ProcessSpec::FiniteDeFinetti(mixture)
    }

    pub fn beta_bernoulli(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!(
                "beta-bernoulli parameters must be positive, got a={a} b={b}"
            )));
        }
        Ok(ProcessSpec::BetaBernoulli {
            a,
            b,
            grid: DomainGrid::binary(),
        })
    }

    /// Requires every mixture component to be a point mass.
    pub fn diagonal(atoms: FiniteMixture) -> Result<Self> {
        for (i, comp) in atoms.components().iter().enumerate() {
            let ones = comp.probs().iter().filter(|p| (**p - 1.0).abs() <= 1e-12).count();
            let zeros = comp.probs().iter().filter(|p| p.abs() <= 1e-12).count();
            if ones != 1 || zeros != comp.probs().len() - 1 {
                return Err(Error::Domain(format!(
                    "diagonal component {i} is not a point mass"
                )));
            }
        }
        Ok(ProcessSpec::Diagonal(atoms))
    }

    /// Point-mass components at each grid point, with the given weights.
    pub fn diagonal_over_points(grid: Arc<DomainGrid>, weights: Vec<f64>) -> Result<Self> {
        let components = (0..grid.len())
            .map(|i| Pmf::point_mass(grid.clone(), i))
            .collect::<Result<Vec<_>>>()?;
        Self::diagonal(FiniteMixture::new(components, weights)?)
    }

    pub fn grid(&self) -> &Arc<DomainGrid> {
        match self {
            ProcessSpec::Iid(pmf) => pmf.grid(),
            ProcessSpec::FiniteDeFinetti(m) | ProcessSpec::Diagonal(m) => m.grid(),
            ProcessSpec::BetaBernoulli { grid, .. } => grid,
        }
    }

    /// Weighted component view for the finite-support variants; `None` for
    /// Beta-Bernoulli, whose directing measure has a density.
    pub fn finite_components(&self) -> Option<(Vec<f64>, Vec<&Pmf>)> {
        match self {
            ProcessSpec::Iid(pmf) => Some((vec![1.0], vec![pmf])),
            ProcessSpec::FiniteDeFinetti(m) | ProcessSpec::Diagonal(m) => {
                Some((m.weights().to_vec(), m.components().iter().collect()))
            }
            ProcessSpec::BetaBernoulli { .. } => None,
        }
    }

    /// The unconditional single-observation law.
    pub fn marginal_pmf(&self) -> Pmf {
        match self {
            ProcessSpec::Iid(pmf) => pmf.clone(),
            ProcessSpec::FiniteDeFinetti(m) | ProcessSpec::Diagonal(m) => m.marginal(),
            ProcessSpec::BetaBernoulli { a, b, .. } => {
                Pmf::bernoulli(a / (a + b)).expect("a/(a+b) is in (0,1)")
            }
        }
    }
}

/// Which directing measure a sampled path realized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealizedComponent {
    /// Index into the mixture components.
    Index(usize),
    /// The Beta draw for a Beta-Bernoulli process.
    BetaParam(f64),
}

/// An observed initial segment of a sample path, with the realized
/// component recorded for oracle use.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPrefix {
    pub values: Vec<f64>,
    pub realized: RealizedComponent,
}

impl PathPrefix {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Draws the directing measure, then `n` i.i.d. observations from it.
///
/// Variate order is fixed: one uniform for the component draw (none for
/// i.i.d. processes, whose directing measure is degenerate), then one
/// uniform per observation, each inverted through the component's CDF in
/// ascending grid order.
pub fn sample_path(process: &ProcessSpec, n: usize, rng: &mut impl Rng) -> PathPrefix {
    match process {
        ProcessSpec::Iid(pmf) => {
            let values = (0..n).map(|_| pmf.sample(rng)).collect();
            PathPrefix {
                values,
                realized: RealizedComponent::Index(0),
            }
        }
        ProcessSpec::FiniteDeFinetti(m) | ProcessSpec::Diagonal(m) => {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut idx = m.len() - 1;
            for (i, w) in m.weights().iter().enumerate() {
                acc += w;
                if u < acc {
                    idx = i;
                    break;
                }
            }
            let theta = &m.components()[idx];
            let values = (0..n).map(|_| theta.sample(rng)).collect();
            PathPrefix {
                values,
                realized: RealizedComponent::Index(idx),
            }
        }
        ProcessSpec::BetaBernoulli { a, b, grid } => {
            let u: f64 = rng.random();
            let p = beta_reg_inv(*a, *b, u);
            let theta = Pmf::new(grid.clone(), vec![1.0 - p, p]).expect("valid bernoulli pmf");
            let values = (0..n).map(|_| theta.sample(rng)).collect();
            PathPrefix {
                values,
                realized: RealizedComponent::BetaParam(p),
            }
        }
    }
}

/// Exact joint probability of observing `values` as the first draws:
/// sum_i w_i prod_j theta_i(x_j).
///
/// Only defined for finite-support processes; Beta-Bernoulli conditioning
/// goes through its closed-form predictive law instead.
pub fn prefix_probability(process: &ProcessSpec, values: &[f64]) -> Result<f64> {
    let (weights, components) = process.finite_components().ok_or_else(|| {
        Error::UnsupportedProcess(
            "prefix probabilities need finite support; use the Beta-Bernoulli predictive form"
                .into(),
        )
    })?;
    let grid = process.grid();
    let indices = values_to_indices(grid, values)?;
    let mut total = 0.0;
    for (w, comp) in weights.iter().zip(&components) {
        let mut like = 1.0;
        for &i in &indices {
            like *= comp.prob(i);
        }
        total += w * like;
    }
    Ok(total)
}

/// Bayes posterior over mixture components given an observed prefix:
/// w'_i proportional to w_i prod_j theta_i(x_j).
pub fn posterior_weights(process: &ProcessSpec, values: &[f64]) -> Result<Vec<f64>> {
    let (weights, components) = process.finite_components().ok_or_else(|| {
        Error::UnsupportedProcess("posterior weights need finite support".into())
    })?;
    let grid = process.grid();
    let indices = values_to_indices(grid, values)?;

    if indices.len() <= LOG_SPACE_THRESHOLD {
        let mut unnorm = Vec::with_capacity(weights.len());
        for (w, comp) in weights.iter().zip(&components) {
            let mut like = 1.0;
            for &i in &indices {
                like *= comp.prob(i);
            }
            unnorm.push(w * like);
        }
        let total: f64 = unnorm.iter().sum();
        if total <= 0.0 {
            return Err(Error::ImpossiblePrefix);
        }
        Ok(unnorm.into_iter().map(|x| x / total).collect())
    } else {
        let mut log_unnorm = Vec::with_capacity(weights.len());
        for (w, comp) in weights.iter().zip(&components) {
            let mut ll = w.ln();
            for &i in &indices {
                ll += comp.prob(i).ln();
            }
            log_unnorm.push(ll);
        }
        let max_ll = log_unnorm.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max_ll == f64::NEG_INFINITY {
            return Err(Error::ImpossiblePrefix);
        }
        let unnorm: Vec<f64> = log_unnorm.iter().map(|ll| (ll - max_ll).exp()).collect();
        let total: f64 = unnorm.iter().sum();
        Ok(unnorm.into_iter().map(|x| x / total).collect())
    }
}

/// The law of the next observation given the prefix.
///
/// Finite mixtures: the posterior-weighted component average. Beta(a,b)
/// with s ones among n observations: P(next = 1) = (a+s)/(a+b+n), the
/// Polya urn form.
pub fn predictive_pmf(process: &ProcessSpec, values: &[f64]) -> Result<Pmf> {
    match process {
        ProcessSpec::BetaBernoulli { a, b, grid } => {
            let indices = values_to_indices(grid, values)?;
            let n = indices.len() as f64;
            let s = indices.iter().filter(|&&i| i == 1).count() as f64;
            let p_one = (a + s) / (a + b + n);
            Pmf::new(grid.clone(), vec![1.0 - p_one, p_one])
        }
        _ => {
            let posterior = posterior_weights(process, values)?;
            let (_, components) = process
                .finite_components()
                .expect("finite variants have components");
            let grid = process.grid().clone();
            let mut probs = vec![0.0; grid.len()];
            for (w, comp) in posterior.iter().zip(&components) {
                for (slot, p) in probs.iter_mut().zip(comp.probs()) {
                    *slot += w * p;
                }
            }
            Pmf::new(grid, probs)
        }
    }
}

/// E(g(X_{n+1}) | X_1..X_n = values), exactly, through the predictive law.
pub fn conditional_expectation(
    process: &ProcessSpec,
    values: &[f64],
    g: impl Fn(f64) -> f64,
) -> Result<f64> {
    Ok(predictive_pmf(process, values)?.expectation(g))
}

/// The same conditional expectation from first principles:
/// sum_x g(x) P(prefix + x) / P(prefix), with no posterior shortcut.
/// Guarded to small instances; this is the oracle the posterior route is
/// checked against.
pub fn brute_force_conditional(
    process: &ProcessSpec,
    values: &[f64],
    g: impl Fn(f64) -> f64,
) -> Result<f64> {
    let grid = process.grid().clone();
    if grid.len() > BRUTE_FORCE_MAX_GRID {
        return Err(Error::SizeGuard(format!(
            "brute-force conditional limited to grids of {BRUTE_FORCE_MAX_GRID} points, got {}",
            grid.len()
        )));
    }
    if values.len() > BRUTE_FORCE_MAX_PREFIX {
        return Err(Error::SizeGuard(format!(
            "brute-force conditional limited to prefixes of {BRUTE_FORCE_MAX_PREFIX} values, got {}",
            values.len()
        )));
    }
    let denom = prefix_probability(process, values)?;
    if denom <= 0.0 {
        return Err(Error::ImpossiblePrefix);
    }
    let mut extended: Vec<f64> = values.to_vec();
    extended.push(0.0);
    let mut acc = 0.0;
    for &x in grid.points() {
        *extended.last_mut().unwrap() = x;
        acc += g(x) * prefix_probability(process, &extended)?;
    }
    Ok(acc / denom)
}

fn values_to_indices(grid: &DomainGrid, values: &[f64]) -> Result<Vec<usize>> {
    values
        .iter()
        .map(|&x| {
            grid.index_of(x)
                .ok_or_else(|| Error::Domain(format!("prefix value {x} is not a grid point")))
        })
        .collect()
}
