use crate::algorithm::Algorithm;
use crate::clustering::Clustering;
use crate::distributions::Dataset;
use crate::error::{Error, Result};
use crate::similarity::{ComparisonCounter, SimilarityMeasure};

use super::gold::GoldStandard;

/// `(req_sim − min_sim) / (total_sim − min_sim)`, left unclamped, so it
/// goes negative when fewer than `min_sim` similarities were computed.
pub fn cost(req_sim: u64, gold: &GoldStandard) -> Result<f64> {
    cost_from_counts(req_sim, gold.min_sim(), gold.total_sim())
}

pub fn cost_from_counts(req_sim: u64, min_sim: u64, total_sim: u64) -> Result<f64> {
    if total_sim == min_sim {
        return Err(Error::UndefinedMetric(format!(
            "cost needs total_sim > min_sim, both are {total_sim}"
        )));
    }
    Ok((req_sim as f64 - min_sim as f64) / (total_sim as f64 - min_sim as f64))
}

pub fn effectiveness(precision: f64, recall: f64) -> f64 {
    (precision * precision + recall * recall) / 2.0
}

pub fn efficiency(effectiveness: f64, cost: f64) -> f64 {
    effectiveness - cost
}

/// Computes the similarity of every intra-cluster ordered pair, one counted
/// evaluation each, and scores the pairs at or above the gold threshold
/// against the gold's similar pairs.
///
/// Precision is `TP / Σ|g|²` (0 when nothing is predicted) and recall is
/// `TP / min_sim`.
pub fn precision_recall(
    clustering: &Clustering,
    dataset: &Dataset,
    gold: &GoldStandard,
    counter: &ComparisonCounter,
) -> Result<(f64, f64)> {
    gold.check_dataset(dataset)?;
    if clustering.n_docs() != dataset.len() {
        return Err(Error::invalid(format!(
            "clustering covers {} documents, dataset has {}",
            clustering.n_docs(),
            dataset.len()
        )));
    }
    let measure = gold.measure();
    let docs = dataset.docs();
    let mut predicted = 0u64;
    let mut true_positives = 0u64;
    for (a, b) in clustering.intra_cluster_pairs() {
        predicted += 1;
        let sim = measure.similarity_unchecked(docs[a].weights(), docs[b].weights());
        if sim >= gold.threshold() {
            debug_assert!(gold.is_similar(a, b));
            true_positives += 1;
        }
    }
    counter.add(predicted);

    let precision = if predicted == 0 {
        0.0
    } else {
        true_positives as f64 / predicted as f64
    };
    if gold.min_sim() == 0 {
        return Err(Error::UndefinedMetric("recall with no similar pairs".into()));
    }
    Ok((precision, true_positives as f64 / gold.min_sim() as f64))
}

/// One row of an experiment report.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub algorithm: String,
    pub params: String,
    pub size: usize,
    pub measure: SimilarityMeasure,
    pub clusters: usize,
    pub req_sim: u64,
    pub cost: f64,
    pub precision: f64,
    pub recall: f64,
    pub effectiveness: f64,
    pub efficiency: f64,
}

impl EvaluationReport {
    pub const COLUMNS: [&'static str; 11] = [
        "algo",
        "params",
        "size",
        "measure",
        "clusters",
        "req_sim",
        "cost",
        "precision",
        "recall",
        "effectiveness",
        "efficiency",
    ];

    /// Field values in [`EvaluationReport::COLUMNS`] order; floats use the
    /// shortest representation that parses back to the same value.
    pub fn fields(&self) -> [String; 11] {
        [
            self.algorithm.clone(),
            self.params.clone(),
            self.size.to_string(),
            self.measure.to_string(),
            self.clusters.to_string(),
            self.req_sim.to_string(),
            self.cost.to_string(),
            self.precision.to_string(),
            self.recall.to_string(),
            self.effectiveness.to_string(),
            self.efficiency.to_string(),
        ]
    }
}

/// Runs `algorithm` and scores it. `req_sim` is the clustering-phase
/// comparisons plus one per intra-cluster ordered pair.
pub fn evaluate(
    dataset: &Dataset,
    algorithm: &Algorithm,
    measure: SimilarityMeasure,
    gold: &GoldStandard,
) -> Result<EvaluationReport> {
    if gold.measure() != measure {
        return Err(Error::invalid(format!(
            "gold standard was built with {}, evaluation asks for {measure}",
            gold.measure()
        )));
    }
    gold.check_dataset(dataset)?;
    let counter = ComparisonCounter::new();
    let clustering = algorithm.run(dataset, measure, &counter)?;
    score(&clustering, dataset, gold, &counter)
}

/// Scores an existing clustering; `counter` must already hold its
/// clustering-phase comparisons.
pub fn score(
    clustering: &Clustering,
    dataset: &Dataset,
    gold: &GoldStandard,
    counter: &ComparisonCounter,
) -> Result<EvaluationReport> {
    let (precision, recall) = precision_recall(clustering, dataset, gold, counter)?;
    let req_sim = counter.get();
    let cost = cost(req_sim, gold)?;
    let effectiveness = effectiveness(precision, recall);
    Ok(EvaluationReport {
        algorithm: clustering.algorithm().name().to_owned(),
        params: clustering.algorithm().params(),
        size: dataset.len(),
        measure: gold.measure(),
        clusters: clustering.cluster_count(),
        req_sim,
        cost,
        precision,
        recall,
        effectiveness,
        efficiency: efficiency(effectiveness, cost),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::KeyAlgorithm;
    use crate::distributions::{sample_dataset, DatasetSpec, TopicDistribution};
    use crate::evaluation::gold::{build_gold, ThresholdChoice};

    #[test]
    fn cost_fixtures() {
        assert_eq!(cost_from_counts(100, 100, 1000).unwrap(), 0.0);
        assert_eq!(cost_from_counts(1000, 100, 1000).unwrap(), 1.0);
        let c = cost_from_counts(500_000, 100_000, 1_000_000).unwrap();
        assert!((c - 4.0 / 9.0).abs() < 1e-15);
        assert!(cost_from_counts(10, 100, 1000).unwrap() < 0.0);
        assert!(matches!(
            cost_from_counts(5, 9, 9),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn effectiveness_and_efficiency_fixtures() {
        assert_eq!(effectiveness(1.0, 1.0), 1.0);
        assert_eq!(effectiveness(0.0, 0.0), 0.0);
        assert!((effectiveness(0.93, 0.92) - 0.85565).abs() < 1e-12);
        assert_eq!(efficiency(1.0, 0.0), 1.0);
        assert_eq!(efficiency(0.0, 1.0), -1.0);
        assert!((efficiency(0.85565, 0.2) - 0.65565).abs() < 1e-12);
    }

    fn sample(n: usize) -> Dataset {
        sample_dataset(&DatasetSpec::anchored(n, 6, 0.5, 3, 30.0, 4)).unwrap()
    }

    #[test]
    fn one_big_group_has_full_recall() {
        let ds = sample(30);
        let gold = build_gold(&ds, SimilarityMeasure::Js, ThresholdChoice::Fixed(0.6)).unwrap();
        let counter = ComparisonCounter::new();
        let all = crate::baselines::random_partition(&ds, 1, 0).unwrap();
        let (p, r) = precision_recall(&all, &ds, &gold, &counter).unwrap();
        assert_eq!(r, 1.0);
        assert_eq!(p, gold.min_sim() as f64 / 900.0);
        assert_eq!(counter.get(), 900);
    }

    #[test]
    fn singletons_recall_n_over_min_sim() {
        let ds = sample(30);
        let gold = build_gold(&ds, SimilarityMeasure::He, ThresholdChoice::Fixed(0.6)).unwrap();
        let singles = crate::baselines::random_partition(&ds, 30, 0).unwrap();
        let (p, r) = precision_recall(&singles, &ds, &gold, &ComparisonCounter::new()).unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(r, 30.0 / gold.min_sim() as f64);
    }

    #[test]
    fn shared_prefix_costs_nine() {
        let ds = Dataset::new(
            [[0.7, 0.25, 0.05], [0.8, 0.15, 0.05], [0.75, 0.2, 0.05]]
                .iter()
                .enumerate()
                .map(|(i, w)| TopicDistribution::new(format!("d{i}"), w.to_vec()).unwrap())
                .collect(),
        )
        .unwrap();
        let gold = build_gold(&ds, SimilarityMeasure::Js, ThresholdChoice::Fixed(0.999)).unwrap();
        let r = evaluate(&ds, &Algorithm::Key(KeyAlgorithm::crdc()), SimilarityMeasure::Js, &gold)
            .unwrap();
        assert_eq!((r.clusters, r.req_sim), (1, 9));
    }

    #[test]
    fn all_singletons_need_n_comparisons() {
        let ds = sample(25);
        let gold = build_gold(&ds, SimilarityMeasure::Js, ThresholdChoice::Fixed(0.5)).unwrap();
        let alg = Algorithm::Random { groups: 25, seed: 1 };
        let r = evaluate(&ds, &alg, SimilarityMeasure::Js, &gold).unwrap();
        assert_eq!(r.req_sim, 25);
    }

    #[test]
    fn mismatches_rejected() {
        let ds = sample(20);
        let gold = build_gold(&ds, SimilarityMeasure::Js, ThresholdChoice::Fixed(0.5)).unwrap();
        let alg = Algorithm::Key(KeyAlgorithm::rdc());
        assert!(evaluate(&ds, &alg, SimilarityMeasure::He, &gold).is_err());
        assert!(evaluate(&ds.prefix(10).unwrap(), &alg, SimilarityMeasure::Js, &gold).is_err());
    }

    #[test]
    fn deterministic_reports() {
        let ds = sample(60);
        let gold = build_gold(&ds, SimilarityMeasure::He, ThresholdChoice::Fixed(0.7)).unwrap();
        let alg = Algorithm::KMeans(crate::baselines::KMeansConfig::new(3, 5));
        assert_eq!(
            evaluate(&ds, &alg, SimilarityMeasure::He, &gold).unwrap(),
            evaluate(&ds, &alg, SimilarityMeasure::He, &gold).unwrap()
        );
    }
}
