//! Topic distributions, datasets of them, and synthetic Dirichlet corpora.
//!
//! A [`TopicDistribution`] is a document id plus a probability vector over
//! `K` topics. A [`Dataset`] is an ordered collection of distributions that
//! all share the same `K`. Synthetic datasets come from [`sample_dataset`]:
//! a symmetric Dirichlet for the low-similarity regime, or an anchored
//! mixture of modes that emulates a topically cohesive corpus.

mod io;
mod sampling;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{load_dataset, save_dataset};
pub use sampling::{sample_dataset, DatasetSpec};

/// Maximum allowed deviation of a weight vector's sum from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Fixed topic-word prior recorded alongside the suggested hyperparameters.
pub const DEFAULT_BETA: f64 = 0.01;

/// A document's mixture over `K` topics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicDistribution {
    id: String,
    weights: Vec<f64>,
}

/// First invariant a weight vector breaks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    TooFewTopics { found: usize },
    NonFinite { index: usize },
    NegativeWeight { index: usize, value: f64 },
    NotNormalized { sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::TooFewTopics { found } => {
                write!(f, "need at least 2 topics, found {found}")
            }
            Violation::NonFinite { index } => write!(f, "weight {index} is not finite"),
            Violation::NegativeWeight { index, value } => {
                write!(f, "weight {index} is negative ({value})")
            }
            Violation::NotNormalized { sum } => write!(f, "weights sum to {sum}, not 1"),
        }
    }
}

/// Checks a raw weight vector against the distribution invariants and
/// reports the first violation found.
pub fn check_weights(weights: &[f64]) -> std::result::Result<(), Violation> {
    if weights.len() < 2 {
        return Err(Violation::TooFewTopics {
            found: weights.len(),
        });
    }
    for (index, &w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(Violation::NonFinite { index });
        }
        if w < 0.0 {
            return Err(Violation::NegativeWeight { index, value: w });
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Violation::NotNormalized { sum });
    }
    Ok(())
}

impl TopicDistribution {
    /// Builds a validated distribution.
    pub fn new(id: impl Into<String>, weights: Vec<f64>) -> Result<Self> {
        let dist = Self::new_unchecked(id, weights);
        dist.validate()
            .map_err(|v| Error::invalid(format!("document {:?}: {v}", dist.id)))?;
        Ok(dist)
    }

    /// Builds a distribution without checking its invariants. Use
    /// [`TopicDistribution::validate`] before handing it to the algorithms.
    pub fn new_unchecked(id: impl Into<String>, weights: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            weights,
        }
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        check_weights(&self.weights)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

/// An ordered collection of distributions sharing one dimension.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    docs: Vec<TopicDistribution>,
}

impl Dataset {
    pub fn new(docs: Vec<TopicDistribution>) -> Result<Self> {
        if let Some(first) = docs.first() {
            let dim = first.dim();
            if let Some(bad) = docs.iter().find(|d| d.dim() != dim) {
                return Err(Error::invalid(format!(
                    "document {:?} has {} topics, dataset has {dim}",
                    bad.id(),
                    bad.dim()
                )));
            }
        }
        Ok(Self { docs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Topic count, or `None` for an empty dataset.
    pub fn dim(&self) -> Option<usize> {
        self.docs.first().map(TopicDistribution::dim)
    }

    pub fn docs(&self) -> &[TopicDistribution] {
        &self.docs
    }

    pub fn get(&self, index: usize) -> Option<&TopicDistribution> {
        self.docs.get(index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TopicDistribution> {
        self.docs.iter()
    }

    /// The first `n` documents.
    pub fn prefix(&self, n: usize) -> Result<Dataset> {
        if n > self.len() {
            return Err(Error::invalid(format!(
                "prefix of {n} documents requested from a dataset of {}",
                self.len()
            )));
        }
        Ok(Dataset {
            docs: self.docs[..n].to_vec(),
        })
    }

    /// Rejects empty datasets; every algorithm needs at least one document.
    pub(crate) fn require_non_empty(&self) -> Result<usize> {
        self.dim()
            .ok_or_else(|| Error::invalid("dataset is empty"))
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a TopicDistribution;
    type IntoIter = std::slice::Iter<'a, TopicDistribution>;

    fn into_iter(self) -> Self::IntoIter {
        self.docs.iter()
    }
}

/// Topic-model hyperparameters suggested for a corpus size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
}

/// `k = floor(2·sqrt(n/2))`, `alpha = 50/k`, `beta = 0.01`.
pub fn suggest_hyperparams(n: usize) -> Result<HyperParams> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "hyperparameters need at least 2 documents, got {n}"
        )));
    }
    let k = (2.0 * (n as f64 / 2.0).sqrt()).floor() as usize;
    Ok(HyperParams {
        k,
        alpha: 50.0 / k as f64,
        beta: DEFAULT_BETA,
    })
}
