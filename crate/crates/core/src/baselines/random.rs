use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algorithm::Algorithm;
use crate::clustering::{Clustering, Group, GroupLabel};
use crate::distributions::Dataset;
use crate::error::{Error, Result};

/// Shuffles the documents with `seed` and deals them round-robin into
/// `groups` buckets whose sizes differ by at most one. No comparisons.
pub fn random_partition(dataset: &Dataset, groups: usize, seed: u64) -> Result<Clustering> {
    let n = dataset.len();
    if groups < 1 || groups > n {
        return Err(Error::invalid(format!(
            "group count {groups} outside [1, {n}]"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut buckets: Vec<Group> = (0..groups)
        .map(|g| Group {
            label: GroupLabel::Id(g),
            members: Vec::with_capacity(n / groups + 1),
        })
        .collect();
    for (turn, doc) in order.into_iter().enumerate() {
        buckets[turn % groups].members.push(doc);
    }
    Clustering::new(Algorithm::Random { groups, seed }, buckets, n, 0, 0)
}
