//! Binary concepts on the grid, parametrized families with declared VC
//! dimension, risk functionals, and brute-force shattering checks.

use std::sync::Arc;

use itertools::Itertools;

use crate::domain::{DomainGrid, Pmf};
use crate::error::{Error, Result};
use crate::learner::LabeledSample;

const SHATTER_MAX_POINTS: usize = 20;
const VC_BRUTE_FORCE_MAX_CAP: usize = 6;

/// A single binary hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub enum Concept {
    /// x maps to 1 iff x >= t (right-closed by convention).
    Threshold { t: f64 },
    /// x maps to 1 iff a <= x <= b.
    Interval { a: f64, b: f64 },
    /// Union of disjoint, strictly ordered closed intervals.
    UnionOfIntervals { intervals: Vec<(f64, f64)> },
}

impl Concept {
    pub fn threshold(t: f64) -> Self {
        Concept::Threshold { t }
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if a > b {
            return Err(Error::Domain(format!("interval needs a <= b, got [{a}, {b}]")));
        }
        Ok(Concept::Interval { a, b })
    }

    pub fn union_of_intervals(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Domain("union needs at least one interval".into()));
        }
        for &(a, b) in &intervals {
            if a > b {
                return Err(Error::Domain(format!("interval needs a <= b, got [{a}, {b}]")));
            }
        }
        if intervals.windows(2).any(|w| w[0].1 >= w[1].0) {
            return Err(Error::Domain(
                "union intervals must be disjoint and ordered".into(),
            ));
        }
        Ok(Concept::UnionOfIntervals { intervals })
    }

    /// The indicator value at a point.
    pub fn evaluate(&self, x: f64) -> bool {
        match self {
            Concept::Threshold { t } => x >= *t,
            Concept::Interval { a, b } => *a <= x && x <= *b,
            Concept::UnionOfIntervals { intervals } => {
                intervals.iter().any(|&(a, b)| a <= x && x <= b)
            }
        }
    }

    pub fn indicator(&self, x: f64) -> f64 {
        if self.evaluate(x) {
            1.0
        } else {
            0.0
        }
    }

    /// Flattened parameter vector; the lexicographic order on these keys is
    /// the tie-break order everywhere.
    pub fn param_key(&self) -> Vec<f64> {
        match self {
            Concept::Threshold { t } => vec![*t],
            Concept::Interval { a, b } => vec![*a, *b],
            Concept::UnionOfIntervals { intervals } => {
                intervals.iter().flat_map(|&(a, b)| [a, b]).collect()
            }
        }
    }

    /// Compact parameter rendering for records: `threshold:3`,
    /// `interval:2:4`, `union:1:2:5:6`.
    pub fn describe(&self) -> String {
        let name = match self {
            Concept::Threshold { .. } => "threshold",
            Concept::Interval { .. } => "interval",
            Concept::UnionOfIntervals { .. } => "union",
        };
        let params = self
            .param_key()
            .iter()
            .map(|p| format!("{p}"))
            .collect::<Vec<_>>()
            .join(":");
        format!("{name}:{params}")
    }
}

/// Which parametrized family a class enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Thresholds,
    Intervals,
    UnionsOfIntervals { k: usize },
}

impl FamilyKind {
    pub fn declared_vc(&self) -> usize {
        match self {
            FamilyKind::Thresholds => 1,
            FamilyKind::Intervals => 2,
            FamilyKind::UnionsOfIntervals { k } => 2 * k,
        }
    }
}

/// A finite parametrized concept class over a grid: the candidate set an
/// ERM learner searches, with its declared VC dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptClass {
    family: FamilyKind,
    grid: Arc<DomainGrid>,
    declared_vc: usize,
    concepts: Vec<Concept>,
}

impl ConceptClass {
    pub fn new(family: FamilyKind, grid: Arc<DomainGrid>) -> Result<Self> {
        if let FamilyKind::UnionsOfIntervals { k } = family {
            if k == 0 {
                return Err(Error::Domain("unions need k >= 1".into()));
            }
            if k > 4 {
                return Err(Error::SizeGuard(format!(
                    "unions-of-intervals class limited to k <= 4, got {k}"
                )));
            }
        }
        let concepts = build_family(family, grid.points());
        Ok(Self {
            family,
            declared_vc: family.declared_vc(),
            grid,
            concepts,
        })
    }

    pub fn family(&self) -> FamilyKind {
        self.family
    }

    pub fn grid(&self) -> &Arc<DomainGrid> {
        &self.grid
    }

    pub fn declared_vc(&self) -> usize {
        self.declared_vc
    }

    /// Candidate concepts in ascending lexicographic parameter order.
    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }
}

/// Builds the candidate family induced by a point set, sorted by parameter
/// key. Thresholds get one sentinel below the minimum (the all-ones
/// hypothesis) and one above the maximum (all-zeros).
fn build_family(family: FamilyKind, points: &[f64]) -> Vec<Concept> {
    let mut concepts = match family {
        FamilyKind::Thresholds => {
            let mut ts = Vec::with_capacity(points.len() + 2);
            ts.push(points[0] - 1.0);
            ts.extend_from_slice(points);
            ts.push(points[points.len() - 1] + 1.0);
            ts.into_iter().map(Concept::threshold).collect::<Vec<_>>()
        }
        FamilyKind::Intervals => {
            let mut out = Vec::new();
            for (i, &a) in points.iter().enumerate() {
                for &b in &points[i..] {
                    out.push(Concept::Interval { a, b });
                }
            }
            out
        }
        FamilyKind::UnionsOfIntervals { k } => {
            let mut out = Vec::new();
            let mut current: Vec<(f64, f64)> = Vec::new();
            enumerate_unions(points, 0, k, &mut current, &mut out);
            out
        }
    };
    concepts.sort_by(|x, y| {
        let kx = x.param_key();
        let ky = y.param_key();
        kx.iter()
            .zip(&ky)
            .map(|(a, b)| a.partial_cmp(b).unwrap())
            .find(|o| o.is_ne())
            .unwrap_or_else(|| kx.len().cmp(&ky.len()))
    });
    concepts
}

/// Recursively emits every union of 1..=k disjoint ordered intervals with
/// endpoints drawn from `points[from..]`.
fn enumerate_unions(
    points: &[f64],
    from: usize,
    k: usize,
    current: &mut Vec<(f64, f64)>,
    out: &mut Vec<Concept>,
) {
    if !current.is_empty() {
        out.push(Concept::UnionOfIntervals {
            intervals: current.clone(),
        });
    }
    if current.len() == k {
        return;
    }
    for i in from..points.len() {
        for j in i..points.len() {
            current.push((points[i], points[j]));
            enumerate_unions(points, j + 1, k, current, out);
            current.pop();
        }
    }
}

/// Exact disagreement mass E_theta |h - f|.
pub fn risk(theta: &Pmf, h: &Concept, f: &Concept) -> f64 {
    theta.expectation(|x| (h.indicator(x) - f.indicator(x)).abs())
}

/// Average disagreement of a hypothesis with a labeled sample.
pub fn empirical_risk(sample: &LabeledSample, h: &Concept) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mismatches = sample
        .points
        .iter()
        .zip(&sample.labels)
        .filter(|(&x, &y)| h.evaluate(x) != y)
        .count();
    Ok(mismatches as f64 / sample.len() as f64)
}

/// Whether the class realizes all 2^|points| labelings of `points`.
///
/// The search family is re-enumerated over the class grid augmented with
/// the midpoints of consecutive query points, so separating parameters
/// that fall between query points are available; for step-function
/// families on a finite grid this makes the check exact.
pub fn shatter_check(class: &ConceptClass, points: &[f64]) -> Result<bool> {
    if points.len() > SHATTER_MAX_POINTS {
        return Err(Error::SizeGuard(format!(
            "shatter check limited to {SHATTER_MAX_POINTS} points, got {}",
            points.len()
        )));
    }
    if points.is_empty() {
        return Ok(true);
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        // duplicated points cannot take two labels at once
        return Ok(false);
    }

    let mut augmented: Vec<f64> = class.grid().points().to_vec();
    augmented.extend(sorted.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    augmented.sort_by(|a, b| a.partial_cmp(b).unwrap());
    augmented.dedup();

    let want = 1u32 << sorted.len();
    let mut seen = vec![false; want as usize];
    let mut count = 0u32;
    let covered = visit_family_masks(class.family(), &augmented, &sorted, &mut |mask| {
        if !seen[mask as usize] {
            seen[mask as usize] = true;
            count += 1;
        }
        count == want
    });
    Ok(covered)
}

/// Streams the label mask each family member induces on `query` (bit b set
/// iff query[b] is labeled 1), without materializing concepts. Stops and
/// returns true as soon as the visitor does.
fn visit_family_masks(
    family: FamilyKind,
    params: &[f64],
    query: &[f64],
    visit: &mut impl FnMut(u32) -> bool,
) -> bool {
    let interval_mask = |a: f64, b: f64| -> u32 {
        let mut mask = 0u32;
        for (bit, &x) in query.iter().enumerate() {
            if a <= x && x <= b {
                mask |= 1 << bit;
            }
        }
        mask
    };
    match family {
        FamilyKind::Thresholds => {
            let threshold_mask = |t: f64| -> u32 {
                let mut mask = 0u32;
                for (bit, &x) in query.iter().enumerate() {
                    if x >= t {
                        mask |= 1 << bit;
                    }
                }
                mask
            };
            if visit(threshold_mask(params[0] - 1.0)) {
                return true;
            }
            for &t in params {
                if visit(threshold_mask(t)) {
                    return true;
                }
            }
            visit(threshold_mask(params[params.len() - 1] + 1.0))
        }
        FamilyKind::Intervals => {
            for (i, &a) in params.iter().enumerate() {
                for &b in &params[i..] {
                    if visit(interval_mask(a, b)) {
                        return true;
                    }
                }
            }
            false
        }
        FamilyKind::UnionsOfIntervals { k } => {
            // depth-first over disjoint ordered interval tuples, carrying
            // the accumulated mask
            fn recurse(
                params: &[f64],
                from: usize,
                depth_left: usize,
                mask: u32,
                interval_mask: &impl Fn(f64, f64) -> u32,
                visit: &mut impl FnMut(u32) -> bool,
            ) -> bool {
                if depth_left == 0 {
                    return false;
                }
                for i in from..params.len() {
                    for j in i..params.len() {
                        let next = mask | interval_mask(params[i], params[j]);
                        if visit(next)
                            || recurse(params, j + 1, depth_left - 1, next, interval_mask, visit)
                        {
                            return true;
                        }
                    }
                }
                false
            }
            recurse(params, 0, k, 0, &interval_mask, visit)
        }
    }
}

/// The largest m <= cap such that some m-subset of the probe grid is
/// shattered, by exhaustive subset search.
pub fn vc_dimension_bruteforce(
    class: &ConceptClass,
    probe_grid: &DomainGrid,
    cap: usize,
) -> Result<usize> {
    if cap > VC_BRUTE_FORCE_MAX_CAP {
        return Err(Error::SizeGuard(format!(
            "brute-force VC capped at {VC_BRUTE_FORCE_MAX_CAP}, got {cap}"
        )));
    }
    let points = probe_grid.points();
    let cap = cap.min(points.len());
    let mut best = 0usize;
    for m in 1..=cap {
        let mut shattered = false;
        for subset in points.iter().copied().combinations(m) {
            if shatter_check(class, &subset)? {
                shattered = true;
                break;
            }
        }
        if shattered {
            best = m;
        } else {
            break;
        }
    }
    Ok(best)
}
