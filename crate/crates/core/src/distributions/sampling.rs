use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use super::{Dataset, TopicDistribution};
use crate::error::{Error, Result};

/// Parameters of a synthetic Dirichlet corpus.
///
/// With `modes == 1` every document is an independent draw from a symmetric
/// Dirichlet(`alpha`). With `modes > 1` each mode is anchored on its own
/// topic; a document picks a mode uniformly and is drawn from
/// Dirichlet(`alpha`·1 + `mode_concentration`·e_anchor), so documents of one
/// mode concentrate on the same topic while every other weight stays
/// strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetSpec {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub modes: usize,
    /// Extra pseudo-count mass placed on a mode's anchor topic.
    pub mode_concentration: f64,
    pub seed: u64,
}

impl DatasetSpec {
    /// A single-mode symmetric Dirichlet corpus.
    pub fn symmetric(n: usize, k: usize, alpha: f64, seed: u64) -> Self {
        Self {
            n,
            k,
            alpha,
            modes: 1,
            mode_concentration: 0.0,
            seed,
        }
    }

    /// A corpus of `modes` anchored groups.
    pub fn anchored(
        n: usize,
        k: usize,
        alpha: f64,
        modes: usize,
        mode_concentration: f64,
        seed: u64,
    ) -> Self {
        Self {
            n,
            k,
            alpha,
            modes,
            mode_concentration,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if self.k < 2 {
            return Err(Error::invalid(format!("k must be at least 2, got {}", self.k)));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::invalid(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if self.modes < 1 {
            return Err(Error::invalid("modes must be at least 1"));
        }
        if self.modes > 1 {
            if self.modes > self.k {
                return Err(Error::invalid(format!(
                    "{} modes need as many distinct anchor topics, k = {}",
                    self.modes, self.k
                )));
            }
            if !(self.mode_concentration.is_finite() && self.mode_concentration > 0.0) {
                return Err(Error::invalid(format!(
                    "mode_concentration must be > 0, got {}",
                    self.mode_concentration
                )));
            }
        }
        Ok(())
    }
}

/// Draws `spec.n` documents of dimension `spec.k`. The same spec always
/// yields the same dataset.
pub fn sample_dataset(spec: &DatasetSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let anchors: Vec<usize> = if spec.modes > 1 {
        let mut topics: Vec<usize> = (0..spec.k).collect();
        topics.shuffle(&mut rng);
        topics.truncate(spec.modes);
        topics
    } else {
        Vec::new()
    };

    let width = spec.n.saturating_sub(1).to_string().len().max(4);
    let mut shape = vec![spec.alpha; spec.k];
    let mut docs = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        shape.fill(spec.alpha);
        if !anchors.is_empty() {
            let mode = rng.random_range(0..anchors.len());
            shape[anchors[mode]] += spec.mode_concentration;
        }
        let weights = dirichlet(&shape, &mut rng)?;
        docs.push(TopicDistribution::new_unchecked(
            format!("doc{i:0width$}"),
            weights,
        ));
    }
    Dataset::new(docs)
}

/// Dirichlet draw via normalized Gamma variates, computed in log space so
/// that very small shapes cannot underflow every component to zero.
fn dirichlet<R: Rng + ?Sized>(shape: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    let mut logs = Vec::with_capacity(shape.len());
    for &a in shape {
        logs.push(log_gamma_variate(a, rng)?);
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut weights: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(weights)
}

/// `ln X` for `X ~ Gamma(a, 1)`. For `a < 1` uses `X = Y·U^(1/a)` with
/// `Y ~ Gamma(a + 1, 1)`.
fn log_gamma_variate<R: Rng + ?Sized>(a: f64, rng: &mut R) -> Result<f64> {
    let boosted = a < 1.0;
    let gamma = Gamma::new(if boosted { a + 1.0 } else { a }, 1.0)
        .map_err(|e| Error::invalid(format!("gamma shape {a}: {e}")))?;
    let mut log_x = gamma.sample(rng).ln();
    if boosted {
        // 1 - [0, 1) lies in (0, 1], so the log is finite.
        let u: f64 = 1.0 - rng.random::<f64>();
        log_x += u.ln() / a;
    }
    Ok(log_x)
}
