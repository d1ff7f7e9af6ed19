//! Empirical risk minimization over a finite candidate class with a
//! deterministic lexicographic tie-break.

use crate::concept::{empirical_risk, Concept, ConceptClass};
use crate::error::{Error, Result};

/// Points with their binary labels, in sample order.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub points: Vec<f64>,
    pub labels: Vec<bool>,
}

impl LabeledSample {
    pub fn new(points: Vec<f64>, labels: Vec<bool>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::Domain(format!(
                "sample has {} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        Ok(Self { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Labels a point sequence with a target concept.
pub fn restrict(target: &Concept, points: &[f64]) -> LabeledSample {
    LabeledSample {
        labels: points.iter().map(|&x| target.evaluate(x)).collect(),
        points: points.to_vec(),
    }
}

/// The first candidate (in the class's lexicographic parameter order)
/// achieving minimal empirical risk. Because candidates are pre-sorted,
/// keeping the first strict improvement realizes the lex-min tie-break.
pub fn erm(class: &ConceptClass, sample: &LabeledSample) -> Result<Concept> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut best: Option<(f64, &Concept)> = None;
    for candidate in class.concepts() {
        let r = empirical_risk(sample, candidate)?;
        match best {
            Some((rb, _)) if rb <= r => {}
            _ => best = Some((r, candidate)),
        }
        if let Some((0.0, _)) = best {
            // cannot improve on zero; first zero-risk candidate wins
            break;
        }
    }
    best.map(|(_, c)| c.clone())
        .ok_or_else(|| Error::Domain("class has no candidates".into()))
}

/// Whether the hypothesis reproduces every label in the sample.
pub fn is_consistent(h: &Concept, sample: &LabeledSample) -> bool {
    sample
        .points
        .iter()
        .zip(&sample.labels)
        .all(|(&x, &y)| h.evaluate(x) == y)
}

/// The accuracy a sample of size n buys at confidence 1/2: the smallest
/// epsilon with `bound(0.5, epsilon) <= n`.
pub fn epsilon_n(bound: &crate::bounds::BoundSpec, n: u64) -> Result<f64> {
    crate::bounds::invert_bound(bound, 0.5, n)
}
