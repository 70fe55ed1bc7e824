//! Reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use dirclus::{sample_dataset, Clustering, Dataset, DatasetSpec, SimilarityMeasure, TopicDistribution};

/// Textbook DBSCAN: full O(n²) neighbourhoods, expansion in index order,
/// noise as singletons.
pub fn naive_dbscan(ds: &Dataset, eps: f64, min_pts: usize, measure: SimilarityMeasure) -> Vec<Vec<usize>> {
    let w: Vec<&[f64]> = ds.iter().map(|d| d.weights()).collect();
    let n = w.len();
    let region = |i: usize| -> Vec<usize> {
        (0..n)
            .filter(|&j| measure.dissimilarity(w[i], w[j]).unwrap() <= eps)
            .collect()
    };
    let mut cluster_of: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut clusters = 0;
    for p in 0..n {
        if visited[p] {
            continue;
        }
        visited[p] = true;
        let seeds = region(p);
        if seeds.len() < min_pts {
            continue;
        }
        let c = clusters;
        clusters += 1;
        cluster_of[p] = Some(c);
        let mut queue: VecDeque<usize> = seeds.into();
        while let Some(q) = queue.pop_front() {
            if !visited[q] {
                visited[q] = true;
                let more = region(q);
                if more.len() >= min_pts {
                    queue.extend(more);
                }
            }
            if cluster_of[q].is_none() {
                cluster_of[q] = Some(c);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); clusters];
    let mut noise = Vec::new();
    for (i, c) in cluster_of.iter().enumerate() {
        match c {
            Some(c) => groups[*c].push(i),
            None => noise.push(vec![i]),
        }
    }
    groups.extend(noise);
    groups.sort();
    groups
}

pub fn sorted_groups(c: &Clustering) -> Vec<Vec<usize>> {
    let mut g: Vec<Vec<usize>> = c.groups().iter().map(|g| g.members.clone()).collect();
    g.sort();
    g
}

pub fn top_topic(w: &[f64]) -> usize {
    (0..w.len()).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap()
}

/// `per_mode` documents from each of `modes` anchored modes, in mode order.
pub fn planted(per_mode: usize, k: usize, modes: usize, concentration: f64, seed: u64) -> Dataset {
    let pool = sample_dataset(&DatasetSpec::anchored(
        per_mode * modes * 4,
        k,
        0.5,
        modes,
        concentration,
        seed,
    ))
    .unwrap();
    let tops: BTreeSet<usize> = pool.iter().map(|d| top_topic(d.weights())).collect();
    let mut docs: Vec<TopicDistribution> = Vec::new();
    for top in tops {
        docs.extend(
            pool.iter()
                .filter(|d| top_topic(d.weights()) == top)
                .take(per_mode)
                .cloned(),
        );
    }
    assert_eq!(docs.len(), per_mode * modes);
    Dataset::new(docs).unwrap()
}

