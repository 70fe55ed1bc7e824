use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirclus::baselines::{DEFAULT_MAX_ITERATIONS, DEFAULT_MIN_PTS, DEFAULT_RADIUS};
use dirclus::clustering::{DEFAULT_CUMULATIVE_WEIGHT, DEFAULT_TOP_TOPICS, DEFAULT_TREND_EPSILON};
use dirclus::{
    suggest_hyperparams, Algorithm, DatasetSpec, DbscanConfig, KMeansConfig, KeyAlgorithm,
    SimilarityMeasure, ThresholdChoice,
};

use crate::error::{CliError, CliResult};
use crate::settings::Settings;

pub const DEFAULT_SEED: u64 = 7;
pub const DRM2_TOPICS: usize = 4;
pub const DRM2_ALPHA: f64 = 0.3;
pub const COHESIVE_MODES: usize = 10;
pub const COHESIVE_CONCENTRATION: f64 = 1000.0;

#[derive(Debug, Parser)]
#[command(name = "dirclus", version, about = "Linear-time clustering of topic distributions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Random seed for generation and seeded algorithms [default: 7]
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Directory for default output paths [default: .]
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    /// Similarity measure: js or he
    #[arg(long, global = true)]
    pub measure: Option<SimilarityMeasure>,

    /// Gold-standard threshold in [0, 1], or `auto` [default: auto]
    #[arg(long, global = true)]
    pub threshold: Option<ThresholdChoice>,

    /// File of key=value lines filling any option not given as a flag
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a synthetic corpus and write it as JSONL
    Generate(GenerateArgs),
    /// Compute all pairwise similarities and write the similar pairs
    Gold(GoldArgs),
    /// Cluster a dataset and write one label per document
    Cluster(ClusterArgs),
    /// Cluster a dataset and score it against a gold standard
    Evaluate(EvaluateArgs),
    /// Evaluate algorithms over growing prefixes of one dataset
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub spec: SpecArgs,

    /// Output file [default: <out-dir>/dataset.jsonl]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Symmetric Dirichlet with the suggested k and alpha
    Drm,
    /// Four topics, alpha 0.3
    Drm2,
    /// Ten anchored modes (at most k) over the suggested k
    Cohesive,
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Preset as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Default, Args)]
pub struct SpecArgs {
    /// Number of documents
    #[arg(long)]
    pub n: Option<usize>,

    /// Number of topics [default: floor(2*sqrt(n/2))]
    #[arg(long)]
    pub k: Option<usize>,

    /// Dirichlet concentration [default: 50/k]
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Number of anchored modes [default: 1]
    #[arg(long)]
    pub modes: Option<usize>,

    /// Extra mass on each mode's anchor topic
    #[arg(long)]
    pub concentration: Option<f64>,

    /// Starting point for the other spec options
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

impl SpecArgs {
    pub fn resolve(&self, settings: &Settings, seed: u64) -> CliResult<DatasetSpec> {
        let n: usize = settings
            .pick(self.n, "n")?
            .ok_or_else(|| CliError::usage("the number of documents (--n) is required"))?;
        if n == 0 {
            return Err(CliError::usage("--n must be at least 1"));
        }
        let preset = settings.pick(self.preset, "preset")?;
        let suggested_k = || -> CliResult<usize> { Ok(suggest_hyperparams(n)?.k) };
        let k = match settings.pick(self.k, "k")? {
            Some(k) => k,
            None if preset == Some(Preset::Drm2) => DRM2_TOPICS,
            None => suggested_k()?,
        };
        if k == 0 {
            return Err(CliError::usage("--k must be at least 1"));
        }
        let alpha = match settings.pick(self.alpha, "alpha")? {
            Some(a) => a,
            None if preset == Some(Preset::Drm2) => DRM2_ALPHA,
            None => 50.0 / k as f64,
        };
        let default_modes = if preset == Some(Preset::Cohesive) {
            COHESIVE_MODES.min(k)
        } else {
            1
        };
        let modes = settings.pick(self.modes, "modes")?.unwrap_or(default_modes);
        let concentration = settings
            .pick(self.concentration, "concentration")?
            .unwrap_or(COHESIVE_CONCENTRATION);
        let spec = if modes > 1 {
            DatasetSpec::anchored(n, k, alpha, modes, concentration, seed)
        } else {
            DatasetSpec::symmetric(n, k, alpha, seed)
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct GoldArgs {
    /// Dataset in JSONL form
    pub dataset: PathBuf,

    /// Output file [default: <out-dir>/gold_<measure>.tsv]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum AlgoName {
    Tdc,
    Rdc,
    Crdc,
    Kmeans,
    Dbscan,
    Random,
}

impl AlgoName {
    pub const ALL: [AlgoName; 6] = [
        AlgoName::Tdc,
        AlgoName::Rdc,
        AlgoName::Crdc,
        AlgoName::Kmeans,
        AlgoName::Dbscan,
        AlgoName::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgoName::Tdc => "tdc",
            AlgoName::Rdc => "rdc",
            AlgoName::Crdc => "crdc",
            AlgoName::Kmeans => "kmeans",
            AlgoName::Dbscan => "dbscan",
            AlgoName::Random => "random",
        }
    }
}

impl std::str::FromStr for AlgoName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <AlgoName as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Default, Clone, Args)]
pub struct AlgoParams {
    /// TDC tolerance below which consecutive weights count as equal
    #[arg(long)]
    pub trend_eps: Option<f64>,

    /// RDC: number of top-ranked topics in the key [default: 1]
    #[arg(long)]
    pub top: Option<usize>,

    /// CRDC: cumulative weight the key must reach [default: 0.9]
    #[arg(long)]
    pub cum_weight: Option<f64>,

    /// K-Means: number of clusters [default: floor(2*sqrt(n/2))]
    #[arg(long)]
    pub k: Option<usize>,

    /// K-Means: iteration cap [default: 50]
    #[arg(long)]
    pub max_iter: Option<usize>,

    /// K-Means: stop once no centroid moves more than this [default: 0]
    #[arg(long)]
    pub tol: Option<f64>,

    /// DBSCAN: neighbourhood radius [default: 0.1]
    #[arg(long)]
    pub eps: Option<f64>,

    /// DBSCAN: minimum neighbourhood size of a core point [default: 50]
    #[arg(long)]
    pub min_pts: Option<usize>,

    /// Random: number of groups [default: floor(2*sqrt(n/2))]
    #[arg(long)]
    pub m: Option<usize>,
}

impl AlgoParams {
    /// Fills unset parameters from `settings`.
    pub fn merged(&self, settings: &Settings) -> CliResult<AlgoParams> {
        Ok(AlgoParams {
            trend_eps: settings.pick(self.trend_eps, "trend_eps")?,
            top: settings.pick(self.top, "top")?,
            cum_weight: settings.pick(self.cum_weight, "cum_weight")?,
            k: settings.pick(self.k, "k")?,
            max_iter: settings.pick(self.max_iter, "max_iter")?,
            tol: settings.pick(self.tol, "tol")?,
            eps: settings.pick(self.eps, "eps")?,
            min_pts: settings.pick(self.min_pts, "min_pts")?,
            m: settings.pick(self.m, "m")?,
        })
    }

    /// The configured algorithm for a dataset of `n` documents.
    pub fn build(&self, name: AlgoName, n: usize, seed: u64) -> Algorithm {
        let default_groups = || suggest_hyperparams(n).map(|h| h.k).unwrap_or(1);
        match name {
            AlgoName::Tdc => Algorithm::Key(KeyAlgorithm::Tdc {
                epsilon: self.trend_eps.unwrap_or(DEFAULT_TREND_EPSILON),
            }),
            AlgoName::Rdc => Algorithm::Key(KeyAlgorithm::Rdc {
                top: self.top.unwrap_or(DEFAULT_TOP_TOPICS),
            }),
            AlgoName::Crdc => Algorithm::Key(KeyAlgorithm::Crdc {
                cum_weight: self.cum_weight.unwrap_or(DEFAULT_CUMULATIVE_WEIGHT),
            }),
            AlgoName::Kmeans => {
                let mut config = KMeansConfig::new(self.k.unwrap_or_else(default_groups), seed);
                config.max_iterations = self.max_iter.unwrap_or(DEFAULT_MAX_ITERATIONS);
                if let Some(tol) = self.tol {
                    config.convergence_tol = tol;
                }
                Algorithm::KMeans(config)
            }
            AlgoName::Dbscan => Algorithm::Dbscan(DbscanConfig {
                eps: self.eps.unwrap_or(DEFAULT_RADIUS),
                min_pts: self.min_pts.unwrap_or(DEFAULT_MIN_PTS),
            }),
            AlgoName::Random => Algorithm::Random {
                groups: self.m.unwrap_or_else(default_groups),
                seed,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Dataset in JSONL form
    pub dataset: PathBuf,

    #[arg(long, value_enum)]
    pub algo: Option<AlgoName>,

    #[command(flatten)]
    pub params: AlgoParams,

    /// Output file [default: <out-dir>/clusters_<algo>.csv]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Dataset in JSONL form
    pub dataset: PathBuf,

    /// Gold standard written by `gold`; built on the fly when absent
    #[arg(long)]
    pub gold: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub algo: Option<AlgoName>,

    #[command(flatten)]
    pub params: AlgoParams,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Dataset in JSONL form; omit to generate one from --spec
    pub dataset: Option<PathBuf>,

    /// key=value dataset spec (n, k, alpha, modes, concentration, preset)
    #[arg(long, conflicts_with = "dataset")]
    pub spec: Option<PathBuf>,

    /// Prefix sizes, ascending [default: 200,300,...,1000]
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,

    /// Algorithms to run [default: all]
    #[arg(long, value_enum, value_delimiter = ',')]
    pub algos: Vec<AlgoName>,

    #[command(flatten)]
    pub params: AlgoParams,

    /// Also write every gold standard under <out-dir>/gold/
    #[arg(long)]
    pub save_gold: bool,
}

/// Global options after merging the config file.
#[derive(Debug)]
pub struct Resolved {
    pub settings: Settings,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub measure: Option<SimilarityMeasure>,
    pub threshold: ThresholdChoice,
}

impl Resolved {
    pub fn new(global: &GlobalArgs) -> CliResult<Self> {
        let settings = match &global.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        Ok(Resolved {
            seed: settings.pick(global.seed, "seed")?.unwrap_or(DEFAULT_SEED),
            out_dir: settings
                .pick(global.out_dir.clone(), "out_dir")?
                .unwrap_or_else(|| PathBuf::from(".")),
            measure: settings.pick(global.measure, "measure")?,
            threshold: settings
                .pick(global.threshold, "threshold")?
                .unwrap_or(ThresholdChoice::Auto),
            settings,
        })
    }

    pub fn measure_or_default(&self) -> SimilarityMeasure {
        self.measure.unwrap_or(SimilarityMeasure::Js)
    }

    pub fn algo(&self, flag: Option<AlgoName>) -> CliResult<AlgoName> {
        self.settings
            .pick(flag, "algo")?
            .ok_or_else(|| CliError::usage("an algorithm (--algo) is required"))
    }

    pub fn out_path(&self, flag: Option<PathBuf>, default_name: &str) -> PathBuf {
        flag.unwrap_or_else(|| self.out_dir.join(default_name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_fill_spec_defaults() {
        let none = Settings::default();
        let drm = SpecArgs { n: Some(1000), ..Default::default() }.resolve(&none, 1).unwrap();
        assert_eq!((drm.k, drm.modes), (44, 1));
        assert!((drm.alpha - 50.0 / 44.0).abs() < 1e-15);

        let drm2 = SpecArgs { n: Some(1000), preset: Some(Preset::Drm2), ..Default::default() }
            .resolve(&none, 1)
            .unwrap();
        assert_eq!((drm2.k, drm2.alpha), (DRM2_TOPICS, DRM2_ALPHA));

        let cohesive = SpecArgs {
            n: Some(1000),
            preset: Some(Preset::Cohesive),
            alpha: Some(0.5),
            ..Default::default()
        }
        .resolve(&none, 1)
        .unwrap();
        assert_eq!((cohesive.k, cohesive.modes, cohesive.alpha), (44, 10, 0.5));
        assert_eq!(cohesive.mode_concentration, COHESIVE_CONCENTRATION);
    }

    #[test]
    fn spec_values_come_from_settings_when_flags_are_absent() {
        let s = Settings::parse("n=50\nk=4\nalpha=2\nk-ignored=1", None).unwrap();
        let spec = SpecArgs { k: Some(6), ..Default::default() }.resolve(&s, 3).unwrap();
        assert_eq!((spec.n, spec.k, spec.alpha, spec.seed), (50, 6, 2.0, 3));
    }

    #[test]
    fn zero_documents_is_a_usage_error() {
        let err = SpecArgs { n: Some(0), ..Default::default() }
            .resolve(&Settings::default(), 1)
            .unwrap_err();
        assert_eq!(err.exit_code(), crate::error::EXIT_INVALID_ARGUMENT);
    }

    #[test]
    fn algorithm_defaults_scale_with_size() {
        let p = AlgoParams::default();
        assert_eq!(p.build(AlgoName::Kmeans, 1000, 3).to_string(), "kmeans(k=44;max_iter=50;seed=3;tol=0)");
        assert_eq!(p.build(AlgoName::Random, 200, 3).to_string(), "random(m=20;seed=3)");
        assert_eq!(p.build(AlgoName::Crdc, 200, 3).to_string(), "crdc(w=0.9)");
        let tuned = AlgoParams { top: Some(2), eps: Some(0.2), ..Default::default() };
        assert_eq!(tuned.build(AlgoName::Rdc, 10, 0).to_string(), "rdc(top=2)");
        assert_eq!(tuned.build(AlgoName::Dbscan, 10, 0).to_string(), "dbscan(eps=0.2;min_pts=50)");
    }
}
