//! Jensen-Shannon and Hellinger comparisons between topic distributions.
//!
//! The JS form used here is the un-halved sum
//! `Σ pᵢ·ln(2pᵢ/(pᵢ+qᵢ)) + Σ qᵢ·ln(2qᵢ/(qᵢ+pᵢ))`, which is twice the textbook
//! divergence and ranges over `[0, 2·ln 2]`. It becomes a similarity through
//! `10^(−JS)`. Hellinger distance becomes a similarity through `1 − He`.
//! Zero weights follow the `0·log 0 = 0` convention; no smoothing is applied.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base of the logarithm in [`js_divergence`]. Any fixed base only rescales
/// the divergence; thresholds are estimated from the data.
pub const JS_LOG_BASE: f64 = std::f64::consts::E;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimilarityMeasure {
    /// Jensen-Shannon, similarity `10^(−JS)`.
    Js,
    /// Hellinger, similarity `1 − He`.
    He,
}

impl SimilarityMeasure {
    pub const ALL: [SimilarityMeasure; 2] = [SimilarityMeasure::Js, SimilarityMeasure::He];

    pub fn as_str(self) -> &'static str {
        match self {
            SimilarityMeasure::Js => "js",
            SimilarityMeasure::He => "he",
        }
    }

    /// Similarity in `[0, 1]` between two equally sized weight vectors.
    pub fn similarity(self, p: &[f64], q: &[f64]) -> Result<f64> {
        check_dims(p, q)?;
        Ok(self.similarity_unchecked(p, q))
    }

    /// Raw dissimilarity: JS divergence or Hellinger distance.
    pub fn dissimilarity(self, p: &[f64], q: &[f64]) -> Result<f64> {
        check_dims(p, q)?;
        Ok(self.dissimilarity_unchecked(p, q))
    }

    pub(crate) fn similarity_unchecked(self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            SimilarityMeasure::Js => 10f64.powf(-js_kernel(p, q)),
            SimilarityMeasure::He => 1.0 - hellinger_kernel(p, q),
        }
    }

    pub(crate) fn dissimilarity_unchecked(self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            SimilarityMeasure::Js => js_kernel(p, q),
            SimilarityMeasure::He => hellinger_kernel(p, q),
        }
    }
}

impl fmt::Display for SimilarityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimilarityMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "js" => Ok(SimilarityMeasure::Js),
            "he" => Ok(SimilarityMeasure::He),
            other => Err(Error::invalid(format!(
                "unknown similarity measure {other:?} (expected js or he)"
            ))),
        }
    }
}

/// Tally of pairwise similarity evaluations. Safe to share across threads.
#[derive(Debug, Default)]
pub struct ComparisonCounter {
    count: AtomicU64,
}

impl ComparisonCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    pub fn increment(&self) {
        self.add(1);
    }

    pub fn add(&self, n: u64) {
        self.count.fetch_add(n, Ordering::Relaxed);
    }
}

fn check_dims(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(())
}

pub fn js_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    check_dims(p, q)?;
    Ok(js_kernel(p, q))
}

pub fn sim_js(p: &[f64], q: &[f64]) -> Result<f64> {
    SimilarityMeasure::Js.similarity(p, q)
}

pub fn hellinger(p: &[f64], q: &[f64]) -> Result<f64> {
    check_dims(p, q)?;
    Ok(hellinger_kernel(p, q))
}

pub fn sim_he(p: &[f64], q: &[f64]) -> Result<f64> {
    SimilarityMeasure::He.similarity(p, q)
}

/// Dispatches to the chosen measure and records one comparison.
pub fn similarity(
    measure: SimilarityMeasure,
    p: &[f64],
    q: &[f64],
    counter: &ComparisonCounter,
) -> Result<f64> {
    let sim = measure.similarity(p, q)?;
    counter.increment();
    Ok(sim)
}

// The two sums are accumulated separately and added last, so swapping the
// arguments yields the identical float.
pub(crate) fn js_kernel(p: &[f64], q: &[f64]) -> f64 {
    let mut from_p = 0.0;
    let mut from_q = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let m = a + b;
        if a > 0.0 {
            from_p += a * (2.0 * a / m).ln();
        }
        if b > 0.0 {
            from_q += b * (2.0 * b / m).ln();
        }
    }
    (from_p + from_q).max(0.0)
}

pub(crate) fn hellinger_kernel(p: &[f64], q: &[f64]) -> f64 {
    let sq: f64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum();
    (sq.sqrt() / std::f64::consts::SQRT_2).min(1.0)
}
