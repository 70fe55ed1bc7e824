//! Single-pass cluster assignment from a document's own topic weights.
//!
//! Each algorithm maps a weight vector to a [`ClusterKey`] without looking at
//! any other document, so assigning `n` documents costs `n` key derivations
//! and zero pairwise comparisons:
//!
//! * trends (TDC): one digit per consecutive topic pair, `1` upward, `2`
//!   downward, `0` sustained within `epsilon`;
//! * ranking (RDC): the 1-based indices of the `top` heaviest topics;
//! * cumulative ranking (CRDC): the shortest heaviest-first prefix of topics
//!   whose weights add up to at least `cum_weight`.
//!
//! Ranking ties are broken by ascending topic index.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::algorithm::Algorithm;
use crate::distributions::Dataset;
use crate::error::{Error, Result};

/// Default tolerance under which two consecutive weights count as sustained.
pub const DEFAULT_TREND_EPSILON: f64 = 1e-9;
pub const DEFAULT_TOP_TOPICS: usize = 1;
pub const DEFAULT_CUMULATIVE_WEIGHT: f64 = 0.9;

/// Bucket label derived from one document's weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClusterKey(String);

impl ClusterKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ClusterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn tdc_key(weights: &[f64], epsilon: f64) -> Result<ClusterKey> {
    if weights.len() < 2 {
        return Err(Error::invalid("trend keys need at least 2 topics"));
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!("trend epsilon must be >= 0, got {epsilon}")));
    }
    let key = weights
        .windows(2)
        .map(|pair| {
            let (cur, next) = (pair[0], pair[1]);
            if cur < next - epsilon {
                '1'
            } else if cur > next + epsilon {
                '2'
            } else {
                '0'
            }
        })
        .collect();
    Ok(ClusterKey(key))
}

pub fn rdc_key(weights: &[f64], top: usize) -> Result<ClusterKey> {
    if top < 1 || top > weights.len() {
        return Err(Error::invalid(format!(
            "top-topic count {top} outside [1, {}]",
            weights.len()
        )));
    }
    Ok(join_ranks(&rank_topics(weights)[..top]))
}

pub fn crdc_key(weights: &[f64], cum_weight: f64) -> Result<ClusterKey> {
    if !(cum_weight > 0.0 && cum_weight <= 1.0) {
        return Err(Error::invalid(format!(
            "cumulative weight threshold {cum_weight} outside (0, 1]"
        )));
    }
    if weights.is_empty() {
        return Err(Error::invalid("cumulative keys need at least 1 topic"));
    }
    let ranked = rank_topics(weights);
    let mut total = 0.0;
    // Rounding can leave the full sum a hair under 1; then every topic is used.
    let mut len = ranked.len();
    for (i, &topic) in ranked.iter().enumerate() {
        total += weights[topic];
        if total >= cum_weight {
            len = i + 1;
            break;
        }
    }
    Ok(join_ranks(&ranked[..len]))
}

/// Topic indices (0-based) by descending weight, ties by ascending index.
fn rank_topics(weights: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    order
}

fn join_ranks(topics: &[usize]) -> ClusterKey {
    let parts: Vec<String> = topics.iter().map(|t| (t + 1).to_string()).collect();
    ClusterKey(parts.join("|"))
}

/// The three key-based algorithms and their parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KeyAlgorithm {
    Tdc { epsilon: f64 },
    Rdc { top: usize },
    Crdc { cum_weight: f64 },
}

impl KeyAlgorithm {
    pub fn tdc() -> Self {
        KeyAlgorithm::Tdc {
            epsilon: DEFAULT_TREND_EPSILON,
        }
    }

    pub fn rdc() -> Self {
        KeyAlgorithm::Rdc {
            top: DEFAULT_TOP_TOPICS,
        }
    }

    pub fn crdc() -> Self {
        KeyAlgorithm::Crdc {
            cum_weight: DEFAULT_CUMULATIVE_WEIGHT,
        }
    }

    pub fn key(&self, weights: &[f64]) -> Result<ClusterKey> {
        match *self {
            KeyAlgorithm::Tdc { epsilon } => tdc_key(weights, epsilon),
            KeyAlgorithm::Rdc { top } => rdc_key(weights, top),
            KeyAlgorithm::Crdc { cum_weight } => crdc_key(weights, cum_weight),
        }
    }
}

/// Label of one group in a [`Clustering`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupLabel {
    Key(ClusterKey),
    Id(usize),
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Key(k) => k.fmt(f),
            GroupLabel::Id(id) => id.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub label: GroupLabel,
    /// Dataset positions of the members, ascending.
    pub members: Vec<usize>,
}

/// A partition of a dataset's documents (by position) into labelled groups.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    algorithm: Algorithm,
    groups: Vec<Group>,
    n_docs: usize,
    assignment_comparisons: u64,
    key_computations: u64,
}

impl Clustering {
    /// Builds a clustering and checks that the groups partition `0..n_docs`.
    pub(crate) fn new(
        algorithm: Algorithm,
        mut groups: Vec<Group>,
        n_docs: usize,
        assignment_comparisons: u64,
        key_computations: u64,
    ) -> Result<Self> {
        let mut seen = vec![false; n_docs];
        for group in &mut groups {
            if group.members.is_empty() {
                return Err(Error::invalid(format!("group {} is empty", group.label)));
            }
            group.members.sort_unstable();
            for &m in &group.members {
                match seen.get_mut(m) {
                    Some(slot) if !*slot => *slot = true,
                    Some(_) => {
                        return Err(Error::invalid(format!("document {m} is in two groups")))
                    }
                    None => return Err(Error::invalid(format!("document {m} out of range"))),
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("document {missing} is unassigned")));
        }
        Ok(Self {
            algorithm,
            groups,
            n_docs,
            assignment_comparisons,
            key_computations,
        })
    }

    pub fn algorithm(&self) -> &Algorithm {
        &self.algorithm
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn cluster_count(&self) -> usize {
        self.groups.len()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    /// Pairwise evaluations spent while forming the groups.
    pub fn assignment_comparisons(&self) -> u64 {
        self.assignment_comparisons
    }

    /// Per-document key derivations (key-based algorithms only).
    pub fn key_computations(&self) -> u64 {
        self.key_computations
    }

    /// Group index of every document, by dataset position.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n_docs];
        for (g, group) in self.groups.iter().enumerate() {
            for &m in &group.members {
                labels[m] = g;
            }
        }
        labels
    }

    /// Every ordered pair inside each group, self-pairs included.
    pub fn intra_cluster_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.groups.iter().flat_map(|g| {
            g.members
                .iter()
                .flat_map(move |&a| g.members.iter().map(move |&b| (a, b)))
        })
    }

    /// `Σ |g|²`, the length of [`Clustering::intra_cluster_pairs`].
    pub fn intra_pair_count(&self) -> u64 {
        self.groups
            .iter()
            .map(|g| (g.members.len() as u64).pow(2))
            .sum()
    }
}

/// Groups every document by its key. Groups come out sorted by key.
pub fn assign_clusters(dataset: &Dataset, algorithm: KeyAlgorithm) -> Result<Clustering> {
    dataset.require_non_empty()?;
    let keys: Vec<ClusterKey> = dataset
        .docs()
        .par_iter()
        .map(|doc| algorithm.key(doc.weights()))
        .collect::<Result<_>>()?;

    let mut buckets: BTreeMap<ClusterKey, Vec<usize>> = BTreeMap::new();
    for (pos, key) in keys.into_iter().enumerate() {
        buckets.entry(key).or_default().push(pos);
    }
    let groups = buckets
        .into_iter()
        .map(|(key, members)| Group {
            label: GroupLabel::Key(key),
            members,
        })
        .collect();
    Clustering::new(
        Algorithm::Key(algorithm),
        groups,
        dataset.len(),
        0,
        dataset.len() as u64,
    )
}
