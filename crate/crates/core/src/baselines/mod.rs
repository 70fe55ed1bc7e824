//! Reference clusterers the key-based algorithms are measured against.

mod dbscan;
mod kmeans;
mod random;

pub use dbscan::{dbscan, DbscanConfig, DEFAULT_MIN_PTS, DEFAULT_RADIUS};
pub use kmeans::{kmeans, kmeans_traced, KMeansConfig, KMeansTrace, DEFAULT_MAX_ITERATIONS};
pub use random::random_partition;

use crate::clustering::{Group, GroupLabel};

/// Turns per-document labels into groups ordered by their smallest member.
pub(crate) fn groups_from_labels(labels: &[usize]) -> Vec<Group> {
    let mut slot_of_label = std::collections::HashMap::new();
    let mut groups: Vec<Group> = Vec::new();
    for (doc, &label) in labels.iter().enumerate() {
        let slot = *slot_of_label.entry(label).or_insert_with(|| {
            groups.push(Group {
                label: GroupLabel::Id(groups.len()),
                members: Vec::new(),
            });
            groups.len() - 1
        });
        groups[slot].members.push(doc);
    }
    groups
}
