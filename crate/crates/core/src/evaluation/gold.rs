use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use super::threshold::{estimate_threshold, SimilarityHistogram, DEFAULT_DEGREE};
use crate::distributions::Dataset;
use crate::error::{Error, Result};
use crate::similarity::SimilarityMeasure;

/// A fixed similarity threshold or one estimated from the histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdChoice {
    Fixed(f64),
    Auto,
}

impl FromStr for ThresholdChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(ThresholdChoice::Auto);
        }
        let value: f64 = s
            .parse()
            .map_err(|_| Error::invalid(format!("threshold {s:?} is neither a number nor auto")))?;
        check_threshold(value)?;
        Ok(ThresholdChoice::Fixed(value))
    }
}

impl fmt::Display for ThresholdChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdChoice::Fixed(t) => write!(f, "{t}"),
            ThresholdChoice::Auto => f.write_str("auto"),
        }
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::invalid(format!("threshold {t} outside [0, 1]")));
    }
    Ok(())
}

/// Exhaustive record of which ordered document pairs are similar.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldStandard {
    measure: SimilarityMeasure,
    threshold: f64,
    n: usize,
    words_per_row: usize,
    similar: Vec<u64>,
    min_sim: u64,
    histogram: Option<SimilarityHistogram>,
}

/// All `n·n` ordered-pair similarities, spread over threads by row blocks.
pub fn build_gold(
    dataset: &Dataset,
    measure: SimilarityMeasure,
    threshold: ThresholdChoice,
) -> Result<GoldStandard> {
    build(dataset, measure, threshold, true)
}

/// Single-threaded twin of [`build_gold`]; the result is identical.
pub fn build_gold_serial(
    dataset: &Dataset,
    measure: SimilarityMeasure,
    threshold: ThresholdChoice,
) -> Result<GoldStandard> {
    build(dataset, measure, threshold, false)
}

fn build(
    dataset: &Dataset,
    measure: SimilarityMeasure,
    threshold: ThresholdChoice,
    parallel: bool,
) -> Result<GoldStandard> {
    dataset.require_non_empty()?;
    if let ThresholdChoice::Fixed(t) = threshold {
        check_threshold(t)?;
    }
    let points: Vec<&[f64]> = dataset.iter().map(|d| d.weights()).collect();
    let n = points.len();

    let fill_row = |(i, row): (usize, &mut [f64])| -> SimilarityHistogram {
        let mut hist = SimilarityHistogram::new();
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = measure.similarity_unchecked(points[i], points[j]);
            hist.add(*slot);
        }
        hist
    };
    let mut sims = vec![0.0; n * n];
    let row_hists: Vec<SimilarityHistogram> = if parallel {
        sims.par_chunks_mut(n).enumerate().map(fill_row).collect()
    } else {
        sims.chunks_mut(n).enumerate().map(fill_row).collect()
    };
    let mut histogram = SimilarityHistogram::new();
    for h in &row_hists {
        histogram.merge(h);
    }

    let threshold = match threshold {
        ThresholdChoice::Fixed(t) => t,
        ThresholdChoice::Auto => estimate_threshold(&histogram, DEFAULT_DEGREE)?,
    };

    let words_per_row = n.div_ceil(64);
    let mut similar = vec![0u64; n * words_per_row];
    let mark_row = |(row_bits, row_sims): (&mut [u64], &[f64])| -> u64 {
        let mut hits = 0;
        for (j, &s) in row_sims.iter().enumerate() {
            if s >= threshold {
                row_bits[j / 64] |= 1 << (j % 64);
                hits += 1;
            }
        }
        hits
    };
    let min_sim: u64 = if parallel {
        similar
            .par_chunks_mut(words_per_row)
            .zip(sims.par_chunks(n))
            .map(mark_row)
            .sum()
    } else {
        similar
            .chunks_mut(words_per_row)
            .zip(sims.chunks(n))
            .map(mark_row)
            .sum()
    };

    Ok(GoldStandard {
        measure,
        threshold,
        n,
        words_per_row,
        similar,
        min_sim,
        histogram: Some(histogram),
    })
}

impl GoldStandard {
    pub fn measure(&self) -> SimilarityMeasure {
        self.measure
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Every ordered pair, self-pairs included: `n·n`.
    pub fn total_sim(&self) -> u64 {
        (self.n as u64).pow(2)
    }

    /// Number of similar ordered pairs.
    pub fn min_sim(&self) -> u64 {
        self.min_sim
    }

    /// Histogram of all pair similarities; absent for a gold standard read
    /// back from disk.
    pub fn histogram(&self) -> Option<&SimilarityHistogram> {
        self.histogram.as_ref()
    }

    pub fn is_similar(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n && j < self.n, "pair ({i}, {j}) outside n = {}", self.n);
        self.similar[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    /// Similar ordered pairs by dataset position, row-major.
    pub fn similar_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n)
                .filter(move |&j| self.is_similar(i, j))
                .map(move |j| (i, j))
        })
    }

    /// Writes a header followed by one tab-separated id pair per similar
    /// ordered pair, in dataset order.
    pub fn save(&self, path: impl AsRef<Path>, dataset: &Dataset) -> Result<()> {
        let path = path.as_ref();
        self.check_dataset(dataset)?;
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
            writeln!(out, "# measure={}", self.measure)?;
            writeln!(out, "# threshold={}", self.threshold)?;
            writeln!(out, "# n={}", self.n)?;
            writeln!(out, "# total_sim={}", self.total_sim())?;
            writeln!(out, "# min_sim={}", self.min_sim)?;
            for (i, j) in self.similar_pairs() {
                writeln!(out, "{}\t{}", dataset.docs()[i].id(), dataset.docs()[j].id())?;
            }
            out.flush()
        };
        write(&mut out).map_err(|e| Error::io(path, e))
    }

    /// Reads a gold standard written by [`GoldStandard::save`] for `dataset`.
    pub fn load(path: impl AsRef<Path>, dataset: &Dataset) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let malformed = |line: usize, message: String| Error::MalformedRecord {
            path: path.to_path_buf(),
            line,
            message,
        };

        let mut header: HashMap<String, String> = HashMap::new();
        let mut pairs: Vec<(usize, String, String)> = Vec::new();
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::io(path, e))?;
            if let Some(entry) = line.strip_prefix('#') {
                let (key, value) = entry
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| malformed(line_no, format!("bad header {line:?}")))?;
                header.insert(key.to_owned(), value.to_owned());
            } else if !line.trim().is_empty() {
                let (a, b) = line
                    .split_once('\t')
                    .ok_or_else(|| malformed(line_no, "expected two tab-separated ids".into()))?;
                pairs.push((line_no, a.to_owned(), b.to_owned()));
            }
        }
        let field = |key: &str| {
            header
                .get(key)
                .ok_or_else(|| malformed(1, format!("missing header field {key}")))
        };
        let measure: SimilarityMeasure = field("measure")?.parse()?;
        let threshold: f64 = field("threshold")?
            .parse()
            .map_err(|e| malformed(2, format!("threshold: {e}")))?;
        let n: usize = field("n")?
            .parse()
            .map_err(|e| malformed(3, format!("n: {e}")))?;
        let min_sim: u64 = field("min_sim")?
            .parse()
            .map_err(|e| malformed(5, format!("min_sim: {e}")))?;
        if n != dataset.len() {
            return Err(Error::invalid(format!(
                "gold standard covers {n} documents, dataset has {}",
                dataset.len()
            )));
        }

        let position: HashMap<&str, usize> = dataset
            .iter()
            .enumerate()
            .map(|(i, d)| (d.id(), i))
            .collect();
        if position.len() != n {
            return Err(Error::invalid("dataset ids are not unique"));
        }
        let words_per_row = n.div_ceil(64);
        let mut gold = GoldStandard {
            measure,
            threshold,
            n,
            words_per_row,
            similar: vec![0; n * words_per_row],
            min_sim: 0,
            histogram: None,
        };
        for (line_no, a, b) in pairs {
            let lookup = |id: &str| {
                position
                    .get(id)
                    .copied()
                    .ok_or_else(|| malformed(line_no, format!("unknown document id {id:?}")))
            };
            let (i, j) = (lookup(&a)?, lookup(&b)?);
            let word = &mut gold.similar[i * words_per_row + j / 64];
            if *word >> (j % 64) & 1 == 0 {
                *word |= 1 << (j % 64);
                gold.min_sim += 1;
            }
        }
        if gold.min_sim != min_sim {
            return Err(malformed(
                5,
                format!("header says {min_sim} similar pairs, found {}", gold.min_sim),
            ));
        }
        Ok(gold)
    }

    pub(crate) fn check_dataset(&self, dataset: &Dataset) -> Result<()> {
        if dataset.len() != self.n {
            return Err(Error::invalid(format!(
                "gold standard covers {} documents, dataset has {}",
                self.n,
                dataset.len()
            )));
        }
        Ok(())
    }
}
