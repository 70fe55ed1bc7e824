use std::collections::VecDeque;

use rayon::prelude::*;

use super::groups_from_labels;
use crate::algorithm::Algorithm;
use crate::clustering::Clustering;
use crate::distributions::Dataset;
use crate::error::{Error, Result};
use crate::similarity::{ComparisonCounter, SimilarityMeasure};

pub const DEFAULT_RADIUS: f64 = 0.1;
pub const DEFAULT_MIN_PTS: usize = 50;

const MAX_PIVOTS: usize = 8;
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbscanConfig {
    /// Radius in raw dissimilarity units (JS divergence or Hellinger distance).
    pub eps: f64,
    /// Neighbourhood size, the point itself included, that makes a core point.
    pub min_pts: usize,
}

impl Default for DbscanConfig {
    fn default() -> Self {
        Self {
            eps: DEFAULT_RADIUS,
            min_pts: DEFAULT_MIN_PTS,
        }
    }
}

impl DbscanConfig {
    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::invalid(format!("eps must be > 0, got {}", self.eps)));
        }
        if self.min_pts < 1 {
            return Err(Error::invalid("min_pts must be at least 1"));
        }
        Ok(())
    }
}

/// Density clustering over JS divergence or Hellinger distance.
///
/// Neighbourhoods are exact. Pairs are screened with a pivot table under a
/// true metric (Hellinger itself, or the square root of JS): if some pivot
/// proves by the triangle inequality that two points are farther apart than
/// the radius, the pair is never evaluated. Every evaluation that does
/// happen, pivot table included, is counted. Noise points come out as
/// singleton groups; groups are ordered by their smallest member.
pub fn dbscan(
    dataset: &Dataset,
    config: &DbscanConfig,
    measure: SimilarityMeasure,
    counter: &ComparisonCounter,
) -> Result<Clustering> {
    dataset.require_non_empty()?;
    config.validate()?;
    let points: Vec<&[f64]> = dataset.iter().map(|d| d.weights()).collect();
    let n = points.len();

    let metric = |a: &[f64], b: &[f64]| {
        let d = measure.dissimilarity_unchecked(a, b);
        match measure {
            SimilarityMeasure::Js => d.sqrt(),
            SimilarityMeasure::He => d,
        }
    };
    let radius = match measure {
        SimilarityMeasure::Js => config.eps.sqrt(),
        SimilarityMeasure::He => config.eps,
    };

    // Farthest-first pivots starting from the first point.
    let pivot_count = MAX_PIVOTS.min(n);
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(pivot_count);
    let mut gap = vec![f64::INFINITY; n];
    let mut pivot = 0;
    for _ in 0..pivot_count {
        let row: Vec<f64> = points.par_iter().map(|p| metric(p, points[pivot])).collect();
        for (g, &d) in gap.iter_mut().zip(&row) {
            *g = g.min(d);
        }
        table.push(row);
        pivot = (0..n)
            .max_by(|&a, &b| gap[a].total_cmp(&gap[b]).then(b.cmp(&a)))
            .expect("non-empty");
    }
    let mut evaluations = (pivot_count * n) as u64;

    let rows: Vec<(Vec<usize>, u64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut close = Vec::new();
            let mut evaluated = 0u64;
            for j in i + 1..n {
                let pruned = table
                    .iter()
                    .any(|row| (row[i] - row[j]).abs() > radius + BOUND_SLACK);
                if pruned {
                    continue;
                }
                evaluated += 1;
                if measure.dissimilarity_unchecked(points[i], points[j]) <= config.eps {
                    close.push(j);
                }
            }
            (close, evaluated)
        })
        .collect();

    let mut neighbours: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for (i, (close, evaluated)) in rows.into_iter().enumerate() {
        evaluations += evaluated;
        for j in close {
            neighbours[i].push(j);
            neighbours[j].push(i);
        }
    }
    for list in &mut neighbours {
        list.sort_unstable();
    }
    counter.add(evaluations);

    let labels = expand(&neighbours, config.min_pts);
    Clustering::new(
        Algorithm::Dbscan(*config),
        groups_from_labels(&labels),
        n,
        evaluations,
        0,
    )
}

/// Classic expansion in index order over precomputed neighbourhoods. Noise
/// points receive fresh labels so that each forms its own group.
pub(crate) fn expand(neighbours: &[Vec<usize>], min_pts: usize) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    const NOISE: usize = usize::MAX - 1;
    let n = neighbours.len();
    let mut labels = vec![UNSEEN; n];
    let mut next_label = 0;

    for start in 0..n {
        if labels[start] != UNSEEN {
            continue;
        }
        if neighbours[start].len() < min_pts {
            labels[start] = NOISE;
            continue;
        }
        let cluster = next_label;
        next_label += 1;
        labels[start] = cluster;
        let mut queue: VecDeque<usize> = neighbours[start].iter().copied().collect();
        while let Some(q) = queue.pop_front() {
            if labels[q] == NOISE {
                labels[q] = cluster;
            }
            if labels[q] != UNSEEN {
                continue;
            }
            labels[q] = cluster;
            if neighbours[q].len() >= min_pts {
                queue.extend(neighbours[q].iter().copied());
            }
        }
    }

    for label in &mut labels {
        if *label == NOISE {
            *label = next_label;
            next_label += 1;
        }
    }
    labels
}
