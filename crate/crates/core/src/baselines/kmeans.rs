use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::groups_from_labels;
use crate::algorithm::Algorithm;
use crate::clustering::Clustering;
use crate::distributions::Dataset;
use crate::error::{Error, Result};
use crate::similarity::ComparisonCounter;

pub const DEFAULT_MAX_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Stop once no centroid moves farther than this (Euclidean).
    pub convergence_tol: f64,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            seed,
            convergence_tol: 0.0,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k < 1 || self.k > n {
            return Err(Error::invalid(format!("k = {} outside [1, {n}]", self.k)));
        }
        if self.max_iterations < 1 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if !(self.convergence_tol >= 0.0) {
            return Err(Error::invalid(format!(
                "convergence_tol must be >= 0, got {}",
                self.convergence_tol
            )));
        }
        Ok(())
    }
}

/// A K-Means run plus its per-iteration diagnostics.
#[derive(Debug, Clone)]
pub struct KMeansTrace {
    pub clustering: Clustering,
    /// Assignment passes performed.
    pub iterations: usize,
    /// Sum of squared distances to the assigned centroid after each pass.
    pub objective: Vec<f64>,
}

pub fn kmeans(
    dataset: &Dataset,
    config: &KMeansConfig,
    counter: &ComparisonCounter,
) -> Result<Clustering> {
    kmeans_traced(dataset, config, counter).map(|t| t.clustering)
}

/// k-means++ seeding followed by Lloyd iterations. Each point-to-centroid
/// distance in an assignment pass counts as one comparison; seeding
/// distances are not counted.
pub fn kmeans_traced(
    dataset: &Dataset,
    config: &KMeansConfig,
    counter: &ComparisonCounter,
) -> Result<KMeansTrace> {
    let dim = dataset.require_non_empty()?;
    let n = dataset.len();
    config.validate(n)?;
    let points: Vec<&[f64]> = dataset.iter().map(|d| d.weights()).collect();
    let k = config.k;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut centroids = seed_plus_plus(&points, k, &mut rng);
    let mut labels = vec![0usize; n];
    let mut objective = Vec::new();
    let mut iterations = 0;

    while iterations < config.max_iterations {
        iterations += 1;
        let nearest: Vec<(usize, f64)> = points
            .par_iter()
            .map(|p| nearest_centroid(p, &centroids))
            .collect();
        counter.add((k * n) as u64);
        objective.push(nearest.iter().map(|&(_, d)| d).sum());
        for (label, (c, _)) in labels.iter_mut().zip(&nearest) {
            *label = *c;
        }

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&labels) {
            counts[c] += 1;
            for (s, &x) in sums[c].iter_mut().zip(p.iter()) {
                *s += x;
            }
        }
        let mut shift: f64 = 0.0;
        for ((centroid, sum), &count) in centroids.iter_mut().zip(sums).zip(&counts) {
            // Empty clusters keep their previous centroid.
            if count == 0 {
                continue;
            }
            let updated: Vec<f64> = sum.iter().map(|s| s / count as f64).collect();
            shift = shift.max(squared_euclidean(centroid, &updated).sqrt());
            *centroid = updated;
        }
        if shift <= config.convergence_tol {
            break;
        }
    }

    let clustering = Clustering::new(
        Algorithm::KMeans(*config),
        groups_from_labels(&labels),
        n,
        (k * n * iterations) as u64,
        0,
    )?;
    Ok(KMeansTrace {
        clustering,
        iterations,
        objective,
    })
}

fn seed_plus_plus(points: &[&[f64]], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let first = rng.random_range(0..n);
    let mut chosen = vec![false; n];
    chosen[first] = true;
    let mut centroids = vec![points[first].to_vec()];
    let mut best: Vec<f64> = points
        .iter()
        .map(|p| squared_euclidean(p, points[first]))
        .collect();

    while centroids.len() < k {
        let total: f64 = best.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &d) in best.iter().enumerate() {
                if d > 0.0 {
                    pick = Some(i);
                    if target < d {
                        break;
                    }
                    target -= d;
                }
            }
            pick.expect("positive total has a positive entry")
        } else {
            // Every point coincides with a chosen centroid.
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[next] = true;
        centroids.push(points[next].to_vec());
        for (b, p) in best.iter_mut().zip(points) {
            *b = b.min(squared_euclidean(p, points[next]));
        }
    }
    centroids
}

/// Index and squared distance of the closest centroid, lowest index on ties.
fn nearest_centroid(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = squared_euclidean(p, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
