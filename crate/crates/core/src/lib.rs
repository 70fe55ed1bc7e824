//! Linear-time clustering of topic distributions.
//!
//! Documents modelled as probability vectors over `K` topics are bucketed by
//! a key derived from each vector alone (trend, ranking or cumulative
//! ranking), so similarity only has to be computed inside each bucket. The
//! crate also carries K-Means, DBSCAN and random-partition baselines, the
//! Jensen-Shannon and Hellinger measures, and an evaluation harness that
//! scores a clustering against an exhaustive gold standard.
//!
//! ```
//! use dirclus::{assign_clusters, sample_dataset, DatasetSpec, KeyAlgorithm};
//!
//! let data = sample_dataset(&DatasetSpec::anchored(200, 12, 0.5, 3, 200.0, 1)).unwrap();
//! let clustering = assign_clusters(&data, KeyAlgorithm::crdc()).unwrap();
//! assert_eq!(clustering.assignment_comparisons(), 0);
//! assert!(clustering.cluster_count() >= 3);
//! ```

pub mod algorithm;
pub mod baselines;
pub mod clustering;
pub mod distributions;
pub mod error;
pub mod evaluation;
pub mod similarity;

pub use algorithm::Algorithm;
pub use baselines::{dbscan, kmeans, random_partition, DbscanConfig, KMeansConfig};
pub use clustering::{
    assign_clusters, crdc_key, rdc_key, tdc_key, ClusterKey, Clustering, Group, GroupLabel,
    KeyAlgorithm,
};
pub use distributions::{
    load_dataset, sample_dataset, save_dataset, suggest_hyperparams, Dataset, DatasetSpec,
    HyperParams, TopicDistribution,
};
pub use error::{Error, Result};
pub use evaluation::{
    build_gold, cost, effectiveness, efficiency, estimate_threshold, evaluate, precision_recall,
    EvaluationReport, GoldStandard, SimilarityHistogram, ThresholdChoice,
};
pub use similarity::{
    hellinger, js_divergence, sim_he, sim_js, similarity, ComparisonCounter, SimilarityMeasure,
};
