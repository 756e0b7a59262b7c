use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derived_stream, shuffle, unit};

/// Number of plain Latin designs compared by [`improved_lhs`].
pub const LHS_CANDIDATES: usize = 50;

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Domain(format!(
                "bounds need matching non-empty lower/upper, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Domain(format!("non-finite bound in dimension {j}")));
            }
            if lo >= hi {
                return Err(Error::Domain(format!(
                    "dimension {j}: lower bound {lo} is not below upper bound {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(d: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; d], vec![upper; d])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// Clamps `x` into the box; returns whether any coordinate moved.
    pub fn clamp(&self, x: &mut [f64]) -> bool {
        let mut moved = false;
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            let c = v.clamp(*lo, *hi);
            if c != *v {
                moved = true;
                *v = c;
            }
        }
        moved
    }
}

/// Sample points with their objective values.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub bounds: Bounds,
}

impl Design {
    pub fn new(points: Vec<Vec<f64>>, values: Vec<f64>, bounds: Bounds) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Domain(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !bounds.contains(p)) {
            return Err(Error::Domain(format!("design point {i} lies outside the bounds")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("objective value {i} is not finite")));
        }
        Ok(Self {
            points,
            values,
            bounds,
        })
    }

    pub fn evaluate<F: Fn(&[f64]) -> f64>(points: Vec<Vec<f64>>, bounds: Bounds, f: F) -> Result<Self> {
        let values = points.iter().map(|p| f(p)).collect();
        Self::new(points, values, bounds)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.bounds.dimension()
    }

    /// Copy with every coordinate multiplied by `c` (bounds scaled alike).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let scale = |v: &[f64]| v.iter().map(|x| x * c).collect::<Vec<_>>();
        Design::new(
            self.points.iter().map(|p| scale(p)).collect(),
            self.values.clone(),
            Bounds::new(scale(&self.bounds.lower), scale(&self.bounds.upper))?,
        )
    }
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

fn plain_lhs(n: usize, bounds: &Bounds, seed: u64, candidate: u64) -> Vec<Vec<f64>> {
    let d = bounds.dimension();
    let mut rng = derived_stream(seed, &[candidate]);
    let mut points = vec![vec![0.0; d]; n];
    let mut strata: Vec<usize> = (0..n).collect();
    for j in 0..d {
        shuffle(&mut rng, &mut strata);
        let (lo, hi) = (bounds.lower[j], bounds.upper[j]);
        let width = hi - lo;
        for (p, &s) in points.iter_mut().zip(&strata) {
            let v = lo + (s as f64 + unit(&mut rng)) / n as f64 * width;
            p[j] = v.min(hi);
        }
    }
    points
}

/// Smallest pairwise squared distance, or `None` as soon as it drops below
/// `floor` (the candidate cannot win any more).
fn min_sq_distance_above(points: &[Vec<f64>], floor: f64) -> Option<f64> {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = sq_dist(&points[i], &points[j]);
            if d < best {
                best = d;
                if best < floor {
                    return None;
                }
            }
        }
    }
    Some(best)
}

/// Maximin Latin hypercube: among [`LHS_CANDIDATES`] seeded Latin designs,
/// the one whose closest pair of points is farthest apart (ties go to the
/// earlier candidate).
pub fn improved_lhs(n: usize, bounds: &Bounds, seed: u64) -> Result<Vec<Vec<f64>>> {
    improved_lhs_with(n, bounds, seed, LHS_CANDIDATES)
}

pub fn improved_lhs_with(
    n: usize,
    bounds: &Bounds,
    seed: u64,
    candidates: usize,
) -> Result<Vec<Vec<f64>>> {
    if n == 0 || candidates == 0 {
        return Err(Error::Domain("LHS needs n >= 1 and at least one candidate".into()));
    }
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    for g in 0..candidates as u64 {
        let pts = plain_lhs(n, bounds, seed, g);
        let floor = best.as_ref().map_or(f64::NEG_INFINITY, |b| b.0);
        if let Some(score) = min_sq_distance_above(&pts, floor) {
            if best.as_ref().is_none_or(|b| score > b.0) {
                best = Some((score, pts));
            }
        }
    }
    Ok(best.expect("first candidate is always kept").1)
}
