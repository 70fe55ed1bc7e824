//! Gold standards, threshold estimation and the cost/quality metrics.
//!
//! A [`GoldStandard`] records which of the `n·n` ordered document pairs
//! reach a similarity threshold. Against it, a clustering is scored by the
//! comparisons it needed (`cost`) and by how well its intra-cluster pairs
//! match the similar pairs (`precision`, `recall`, `effectiveness`).
//! `efficiency` trades the two off.

mod gold;
mod metrics;
mod threshold;

pub use gold::{build_gold, build_gold_serial, GoldStandard, ThresholdChoice};
pub use metrics::{
    cost, cost_from_counts, effectiveness, efficiency, evaluate, precision_recall, score,
    EvaluationReport,
};
pub use threshold::{estimate_threshold, SimilarityHistogram, DEFAULT_DEGREE, SAMPLE_STEP};
