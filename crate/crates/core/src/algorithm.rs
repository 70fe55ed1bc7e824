use std::fmt;

use crate::baselines::{dbscan, kmeans, random_partition, DbscanConfig, KMeansConfig};
use crate::clustering::{assign_clusters, Clustering, KeyAlgorithm};
use crate::distributions::Dataset;
use crate::error::Result;
use crate::similarity::{ComparisonCounter, SimilarityMeasure};

/// Any clustering algorithm together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Key(KeyAlgorithm),
    KMeans(KMeansConfig),
    Dbscan(DbscanConfig),
    Random { groups: usize, seed: u64 },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Key(KeyAlgorithm::Tdc { .. }) => "tdc",
            Algorithm::Key(KeyAlgorithm::Rdc { .. }) => "rdc",
            Algorithm::Key(KeyAlgorithm::Crdc { .. }) => "crdc",
            Algorithm::KMeans(_) => "kmeans",
            Algorithm::Dbscan(_) => "dbscan",
            Algorithm::Random { .. } => "random",
        }
    }

    /// Parameters as `key=value` pairs joined by `;`.
    pub fn params(&self) -> String {
        match self {
            Algorithm::Key(KeyAlgorithm::Tdc { epsilon }) => format!("eps={epsilon:e}"),
            Algorithm::Key(KeyAlgorithm::Rdc { top }) => format!("top={top}"),
            Algorithm::Key(KeyAlgorithm::Crdc { cum_weight }) => format!("w={cum_weight}"),
            Algorithm::KMeans(c) => format!(
                "k={};max_iter={};seed={};tol={}",
                c.k, c.max_iterations, c.seed, c.convergence_tol
            ),
            Algorithm::Dbscan(c) => format!("eps={};min_pts={}", c.eps, c.min_pts),
            Algorithm::Random { groups, seed } => format!("m={groups};seed={seed}"),
        }
    }

    /// Clusters `dataset`, adding every pairwise evaluation to `counter`.
    /// `measure` only affects DBSCAN.
    pub fn run(
        &self,
        dataset: &Dataset,
        measure: SimilarityMeasure,
        counter: &ComparisonCounter,
    ) -> Result<Clustering> {
        match *self {
            Algorithm::Key(alg) => assign_clusters(dataset, alg),
            Algorithm::KMeans(config) => kmeans(dataset, &config, counter),
            Algorithm::Dbscan(config) => dbscan(dataset, &config, measure, counter),
            Algorithm::Random { groups, seed } => random_partition(dataset, groups, seed),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.params())
    }
}
