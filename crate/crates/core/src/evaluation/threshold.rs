use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Degree of the least-squares polynomial fitted to the histogram.
pub const DEFAULT_DEGREE: usize = 6;
/// Spacing of the points at which the fitted curve is sampled.
pub const SAMPLE_STEP: f64 = 0.001;

const BIN_COUNT: usize = 101;
const BIN_WIDTH: f64 = 0.01;

/// Frequencies of similarity values bucketed by their first two decimals.
/// Bin `b` holds similarities in `[b/100, (b+1)/100)`; bin 100 holds 1.0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityHistogram {
    counts: [u64; BIN_COUNT],
}

impl Default for SimilarityHistogram {
    fn default() -> Self {
        Self {
            counts: [0; BIN_COUNT],
        }
    }
}

impl SimilarityHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a histogram from explicit `(bin, count)` entries.
    pub fn from_counts(entries: impl IntoIterator<Item = (usize, u64)>) -> Result<Self> {
        let mut hist = Self::new();
        for (bin, count) in entries {
            if bin >= BIN_COUNT {
                return Err(Error::invalid(format!("bin {bin} outside [0, 100]")));
            }
            hist.counts[bin] += count;
        }
        Ok(hist)
    }

    /// Bin index of a similarity in `[0, 1]`. A 1e-9 nudge keeps values such
    /// as 0.29, whose product with 100 rounds just below 29, in their
    /// printed bin.
    pub fn bin_of(sim: f64) -> usize {
        ((sim * 100.0 + 1e-9).floor().max(0.0) as usize).min(BIN_COUNT - 1)
    }

    pub fn label_of(bin: usize) -> f64 {
        bin as f64 / 100.0
    }

    pub fn add(&mut self, sim: f64) {
        self.counts[Self::bin_of(sim)] += 1;
    }

    pub fn merge(&mut self, other: &SimilarityHistogram) {
        for (a, b) in self.counts.iter_mut().zip(other.counts.iter()) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, bin: usize) -> u64 {
        self.counts.get(bin).copied().unwrap_or(0)
    }

    /// Non-empty bins as `(bin, count)`, ascending.
    pub fn non_empty(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(b, &c)| (b, c))
    }

    /// Every frequency multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        let mut out = self.clone();
        for c in &mut out.counts {
            *c *= factor;
        }
        out
    }
}

impl fmt::Display for SimilarityHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (bin, count) in self.non_empty() {
            writeln!(f, "{:.2}\t{count}", Self::label_of(bin))?;
        }
        Ok(())
    }
}

/// Picks the similarity separating the dissimilar bulk from similar pairs.
///
/// Frequencies over the dense run of bins from the lowest to the highest
/// non-empty bin (gaps count as zero) are fitted at bin centres with a
/// least-squares polynomial of `degree`. The curve is sampled every
/// [`SAMPLE_STEP`] and the deepest local minimum between its two highest
/// peaks (range ends count as peaks) is returned. Without such a valley the
/// answer falls back to the least frequent bin strictly between the two
/// most frequent bins.
///
/// Frequencies are normalized before fitting, so multiplying all counts by
/// a constant does not change the result.
pub fn estimate_threshold(hist: &SimilarityHistogram, degree: usize) -> Result<f64> {
    let occupied = hist.non_empty().count();
    if occupied < degree + 1 {
        return Err(Error::EstimationFailed(format!(
            "{occupied} non-empty bins cannot support a degree-{degree} fit; pass an explicit threshold"
        )));
    }
    let first = hist.non_empty().next().map(|(b, _)| b).expect("occupied");
    let last = hist.non_empty().last().map(|(b, _)| b).expect("occupied");
    let total = hist.total() as f64;
    let centres: Vec<f64> = (first..=last).map(centre).collect();
    let freqs: Vec<f64> = (first..=last).map(|b| hist.count(b) as f64 / total).collect();

    let curve = fit_polynomial(&centres, &freqs, degree)?;
    let lo = centres[0];
    let hi = centres[centres.len() - 1];
    let samples = ((hi - lo) / SAMPLE_STEP).round() as usize + 1;
    let xs: Vec<f64> = (0..samples).map(|s| lo + s as f64 * SAMPLE_STEP).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| curve.eval(x)).collect();

    let last_sample = ys.len() - 1;
    let mut peaks: Vec<usize> = (0..ys.len())
        .filter(|&s| {
            (s == 0 || ys[s] > ys[s - 1]) && (s == last_sample || ys[s] >= ys[s + 1])
        })
        .collect();
    peaks.sort_by(|&a, &b| ys[b].total_cmp(&ys[a]).then(a.cmp(&b)));
    if let [p, q, ..] = peaks[..] {
        let (left, right) = (p.min(q), p.max(q));
        let valley = (left + 1..right)
            .filter(|&s| ys[s] < ys[s - 1] && ys[s] <= ys[s + 1])
            .min_by(|&a, &b| ys[a].total_cmp(&ys[b]).then(a.cmp(&b)));
        if let Some(s) = valley {
            return Ok(round_to_step(xs[s]));
        }
    }

    let mut by_freq: Vec<usize> = (first..=last).collect();
    by_freq.sort_by(|&a, &b| hist.count(b).cmp(&hist.count(a)).then(a.cmp(&b)));
    let (a, b) = (by_freq[0].min(by_freq[1]), by_freq[0].max(by_freq[1]));
    (a + 1..b)
        .min_by(|&x, &y| hist.count(x).cmp(&hist.count(y)).then(x.cmp(&y)))
        .map(centre)
        .ok_or_else(|| {
            Error::EstimationFailed(
                "fitted curve has no valley and the two fullest bins are adjacent; pass an explicit threshold"
                    .into(),
            )
        })
}

fn centre(bin: usize) -> f64 {
    SimilarityHistogram::label_of(bin) + BIN_WIDTH / 2.0
}

/// Dividing by the step count keeps results such as 0.172 exact in print.
fn round_to_step(x: f64) -> f64 {
    let per_unit = (1.0 / SAMPLE_STEP).round();
    (x * per_unit).round() / per_unit
}

/// Polynomial in a variable rescaled to `[-1, 1]` over the fitted range.
#[derive(Debug, Clone)]
pub(crate) struct Polynomial {
    coeffs: Vec<f64>,
    mid: f64,
    half_width: f64,
}

impl Polynomial {
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let t = (x - self.mid) / self.half_width;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

/// Least-squares fit through SVD of the Vandermonde matrix.
pub(crate) fn fit_polynomial(xs: &[f64], ys: &[f64], degree: usize) -> Result<Polynomial> {
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    let mid = (lo + hi) / 2.0;
    let half_width = (hi - lo) / 2.0;
    if !(half_width > 0.0) {
        return Err(Error::EstimationFailed("histogram spans a single bin".into()));
    }
    let design = DMatrix::from_fn(xs.len(), degree + 1, |r, c| {
        ((xs[r] - mid) / half_width).powi(c as i32)
    });
    let rhs = DVector::from_column_slice(ys);
    let coeffs = design
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::EstimationFailed(format!("least-squares solve failed: {e}")))?;
    Ok(Polynomial {
        coeffs: coeffs.iter().copied().collect(),
        mid,
        half_width,
    })
}
