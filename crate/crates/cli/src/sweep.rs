use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dirclus::{
    build_gold, sample_dataset, save_dataset, Dataset, EvaluationReport, SimilarityMeasure,
};
use log::info;

use crate::args::{AlgoName, AlgoParams, Resolved, SpecArgs, SweepArgs};
use crate::commands::{ensure_parent, log_gold, read_dataset};
use crate::error::{CliError, CliResult};
use crate::settings::Settings;

pub const REPORT_FILE: &str = "report.csv";
pub const EXTRA_COLUMNS: [&str; 3] = ["threshold", "min_sim", "total_sim"];
pub const PLOT_METRICS: [&str; 5] = ["cost", "precision", "recall", "effectiveness", "efficiency"];

pub fn default_sizes() -> Vec<usize> {
    (200..=1000).step_by(100).collect()
}

/// Everything a sweep needs, validated.
#[derive(Debug)]
pub struct ExperimentPlan {
    pub dataset: Dataset,
    pub sizes: Vec<usize>,
    pub measures: Vec<SimilarityMeasure>,
    pub algorithms: Vec<AlgoName>,
    pub params: AlgoParams,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub save_gold: bool,
}

impl ExperimentPlan {
    fn validate(&self) -> CliResult<()> {
        if self.sizes.is_empty() || self.measures.is_empty() || self.algorithms.is_empty() {
            return Err(CliError::usage(
                "a sweep needs at least one size, one measure and one algorithm",
            ));
        }
        if self.sizes[0] == 0 || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::usage(format!(
                "sizes must be positive and strictly ascending, got {:?}",
                self.sizes
            )));
        }
        let largest = *self.sizes.last().unwrap();
        if largest > self.dataset.len() {
            return Err(CliError::usage(format!(
                "size {largest} exceeds the {} documents available",
                self.dataset.len()
            )));
        }
        let mut seen = self.algorithms.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.algorithms.len() {
            return Err(CliError::usage("each algorithm may be listed once"));
        }
        Ok(())
    }
}

pub fn run(args: SweepArgs, ctx: &Resolved) -> CliResult<()> {
    let sizes = if args.sizes.is_empty() {
        match ctx.settings.get::<String>("sizes")? {
            Some(list) => parse_list(&list, "sizes")?,
            None => default_sizes(),
        }
    } else {
        args.sizes
    };
    let algorithms = if args.algos.is_empty() {
        match ctx.settings.get::<String>("algos")? {
            Some(list) => parse_list(&list, "algos")?,
            None => AlgoName::ALL.to_vec(),
        }
    } else {
        args.algos
    };
    let dataset = match (&args.dataset, &args.spec) {
        (Some(path), _) => read_dataset(path)?,
        (None, Some(spec_path)) => {
            let spec_settings = Settings::load(spec_path)?;
            let spec = SpecArgs::default().resolve(&spec_settings, ctx.seed)?;
            let dataset = sample_dataset(&spec)?;
            let copy = ctx.out_dir.join("dataset.jsonl");
            ensure_parent(&copy)?;
            save_dataset(&copy, &dataset)?;
            info!("generated {} documents into {}", dataset.len(), copy.display());
            dataset
        }
        (None, None) => {
            return Err(CliError::usage("pass a dataset file or --spec <file>"));
        }
    };
    let plan = ExperimentPlan {
        dataset,
        sizes,
        measures: match ctx.measure {
            Some(m) => vec![m],
            None => SimilarityMeasure::ALL.to_vec(),
        },
        algorithms,
        params: args.params.merged(&ctx.settings)?,
        out_dir: ctx.out_dir.clone(),
        seed: ctx.seed,
        save_gold: args.save_gold,
    };
    let rows = execute(&plan, ctx)?;
    println!(
        "{} rows -> {}",
        rows.len(),
        plan.out_dir.join(REPORT_FILE).display()
    );
    Ok(())
}

fn parse_list<T>(list: &str, key: &str) -> CliResult<Vec<T>>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    list.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|e| CliError::usage(format!("{key}: bad entry {item:?}: {e}")))
        })
        .collect()
}

/// One report row: the evaluation plus the gold figures it was scored on.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub report: EvaluationReport,
    pub threshold: f64,
    pub min_sim: u64,
    pub total_sim: u64,
}

impl SweepRow {
    fn record(&self) -> Vec<String> {
        let mut out = self.report.fields().to_vec();
        out.push(self.threshold.to_string());
        out.push(self.min_sim.to_string());
        out.push(self.total_sim.to_string());
        out
    }

    fn metric(&self, name: &str) -> f64 {
        match name {
            "cost" => self.report.cost,
            "precision" => self.report.precision,
            "recall" => self.report.recall,
            "effectiveness" => self.report.effectiveness,
            "efficiency" => self.report.efficiency,
            other => unreachable!("unknown metric {other}"),
        }
    }
}

/// Runs the plan. The report is rewritten after every size and measure, so
/// an aborted sweep leaves its finished rows under a `partial` marker.
pub fn execute(plan: &ExperimentPlan, ctx: &Resolved) -> CliResult<Vec<SweepRow>> {
    plan.validate()?;
    std::fs::create_dir_all(&plan.out_dir).map_err(|e| CliError::io(&plan.out_dir, e))?;
    let report_path = plan.out_dir.join(REPORT_FILE);
    let mut rows: Vec<SweepRow> = Vec::new();
    write_report(&report_path, false, &rows)?;

    for &size in &plan.sizes {
        let prefix = plan.dataset.prefix(size)?;
        for &measure in &plan.measures {
            let started = Instant::now();
            let outcome = sweep_cell(plan, ctx, &prefix, measure, &mut rows);
            write_report(&report_path, false, &rows)?;
            outcome?;
            info!("size {size} {measure} done in {:.2?}", started.elapsed());
        }
    }
    write_report(&report_path, true, &rows)?;
    write_plots(plan, &rows)?;
    Ok(rows)
}

fn sweep_cell(
    plan: &ExperimentPlan,
    ctx: &Resolved,
    prefix: &Dataset,
    measure: SimilarityMeasure,
    rows: &mut Vec<SweepRow>,
) -> CliResult<()> {
    let gold = build_gold(prefix, measure, ctx.threshold)?;
    log_gold(&gold);
    if plan.save_gold {
        let path = plan
            .out_dir
            .join("gold")
            .join(format!("gold_{measure}_{}.tsv", prefix.len()));
        ensure_parent(&path)?;
        gold.save(&path, prefix)?;
    }
    for &name in &plan.algorithms {
        let algorithm = plan.params.build(name, prefix.len(), plan.seed);
        let report = dirclus::evaluate(prefix, &algorithm, measure, &gold)?;
        info!(
            "{algorithm} n={} {measure}: effectiveness {:.3} efficiency {:.3}",
            prefix.len(),
            report.effectiveness,
            report.efficiency
        );
        rows.push(SweepRow {
            report,
            threshold: gold.threshold(),
            min_sim: gold.min_sim(),
            total_sim: gold.total_sim(),
        });
    }
    Ok(())
}

fn write_report(path: &Path, complete: bool, rows: &[SweepRow]) -> CliResult<()> {
    let status = if complete { "complete" } else { "partial" };
    let mut text = format!("# status={status}\n").into_bytes();
    {
        let mut writer = csv::Writer::from_writer(&mut text);
        let header: Vec<&str> = EvaluationReport::COLUMNS
            .iter()
            .chain(EXTRA_COLUMNS.iter())
            .copied()
            .collect();
        writer.write_record(&header).map_err(|e| CliError::csv(path, e))?;
        for row in rows {
            writer
                .write_record(row.record())
                .map_err(|e| CliError::csv(path, e))?;
        }
        writer.flush().map_err(|e| CliError::io(path, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// One file per metric and measure: a `size` column, then one column per
/// algorithm.
fn write_plots(plan: &ExperimentPlan, rows: &[SweepRow]) -> CliResult<()> {
    for &measure in &plan.measures {
        let mut by_size: BTreeMap<usize, BTreeMap<&str, &SweepRow>> = BTreeMap::new();
        for row in rows.iter().filter(|r| r.report.measure == measure) {
            by_size
                .entry(row.report.size)
                .or_default()
                .insert(row.report.algorithm.as_str(), row);
        }
        for metric in PLOT_METRICS {
            let path = plan.out_dir.join(format!("plot_{metric}_{measure}.csv"));
            let mut writer = csv::Writer::from_path(&path).map_err(|e| CliError::csv(&path, e))?;
            let mut header = vec!["size"];
            header.extend(plan.algorithms.iter().map(|a| a.as_str()));
            writer.write_record(&header).map_err(|e| CliError::csv(&path, e))?;
            for (size, cells) in &by_size {
                let mut record = vec![size.to_string()];
                record.extend(plan.algorithms.iter().map(|a| {
                    cells
                        .get(a.as_str())
                        .map(|r| r.metric(metric).to_string())
                        .unwrap_or_default()
                }));
                writer.write_record(&record).map_err(|e| CliError::csv(&path, e))?;
            }
            writer.flush().map_err(|e| CliError::io(&path, e))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sizes_cover_two_to_ten_hundred() {
        assert_eq!(default_sizes(), vec![200, 300, 400, 500, 600, 700, 800, 900, 1000]);
    }

    #[test]
    fn lists_parse_or_fail_as_usage() {
        assert_eq!(parse_list::<usize>("1, 2,3", "sizes").unwrap(), vec![1, 2, 3]);
        assert_eq!(
            parse_list::<AlgoName>("crdc,KMeans", "algos").unwrap(),
            vec![AlgoName::Crdc, AlgoName::Kmeans]
        );
        assert!(matches!(parse_list::<usize>("1,x", "sizes"), Err(CliError::Usage(_))));
    }
}
