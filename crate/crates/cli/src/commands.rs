use std::io::Write;
use std::path::Path;
use std::time::Instant;

use dirclus::{
    build_gold, load_dataset, sample_dataset, save_dataset, ComparisonCounter, Dataset,
    EvaluationReport, GoldStandard,
};
use log::info;

use crate::args::{ClusterArgs, EvaluateArgs, GenerateArgs, GoldArgs, Resolved};
use crate::error::{CliError, CliResult};

pub fn ensure_parent(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
        }
        _ => Ok(()),
    }
}

pub fn read_dataset(path: &Path) -> CliResult<Dataset> {
    let dataset = load_dataset(path)?;
    info!("loaded {} documents from {}", dataset.len(), path.display());
    Ok(dataset)
}

pub fn log_gold(gold: &GoldStandard) {
    if let Some(hist) = gold.histogram() {
        info!("similarity histogram (bin, ordered pairs):\n{}", hist.to_string().trim_end());
    }
    info!(
        "{} threshold {}: min_sim {} of total_sim {}",
        gold.measure(),
        gold.threshold(),
        gold.min_sim(),
        gold.total_sim()
    );
}

pub fn generate(args: GenerateArgs, ctx: &Resolved) -> CliResult<()> {
    let spec = args.spec.resolve(&ctx.settings, ctx.seed)?;
    let out = ctx.out_path(args.out, "dataset.jsonl");
    let dataset = sample_dataset(&spec)?;
    ensure_parent(&out)?;
    save_dataset(&out, &dataset)?;
    println!(
        "n={} k={} alpha={} modes={} seed={} -> {}",
        spec.n,
        spec.k,
        spec.alpha,
        spec.modes,
        spec.seed,
        out.display()
    );
    Ok(())
}

pub fn gold(args: GoldArgs, ctx: &Resolved) -> CliResult<()> {
    let dataset = read_dataset(&args.dataset)?;
    let measure = ctx.measure_or_default();
    let started = Instant::now();
    let gold = build_gold(&dataset, measure, ctx.threshold)?;
    info!("gold standard built in {:.2?}", started.elapsed());
    log_gold(&gold);
    let out = ctx.out_path(args.out, &format!("gold_{measure}.tsv"));
    ensure_parent(&out)?;
    gold.save(&out, &dataset)?;
    println!(
        "measure={} threshold={} min_sim={} total_sim={} -> {}",
        measure,
        gold.threshold(),
        gold.min_sim(),
        gold.total_sim(),
        out.display()
    );
    Ok(())
}

pub fn cluster(args: ClusterArgs, ctx: &Resolved) -> CliResult<()> {
    let dataset = read_dataset(&args.dataset)?;
    let name = ctx.algo(args.algo)?;
    let algorithm = args
        .params
        .merged(&ctx.settings)?
        .build(name, dataset.len(), ctx.seed);
    let counter = ComparisonCounter::new();
    let clustering = algorithm.run(&dataset, ctx.measure_or_default(), &counter)?;

    let out = ctx.out_path(args.out, &format!("clusters_{}.csv", name.as_str()));
    ensure_parent(&out)?;
    let mut writer = csv::Writer::from_path(&out).map_err(|e| CliError::csv(&out, e))?;
    let labels = clustering.labels();
    let rows = std::iter::once(["id".to_owned(), "cluster".to_owned()]).chain(
        dataset
            .iter()
            .zip(&labels)
            .map(|(doc, label)| [doc.id().to_owned(), label.to_string()]),
    );
    for row in rows {
        writer.write_record(&row).map_err(|e| CliError::csv(&out, e))?;
    }
    writer.flush().map_err(|e| CliError::io(&out, e))?;
    println!(
        "{algorithm}: {} clusters, {} comparisons -> {}",
        clustering.cluster_count(),
        counter.get(),
        out.display()
    );
    Ok(())
}

pub fn evaluate(args: EvaluateArgs, ctx: &Resolved) -> CliResult<()> {
    let dataset = read_dataset(&args.dataset)?;
    let gold = match &args.gold {
        Some(path) => {
            let gold = GoldStandard::load(path, &dataset)?;
            if let Some(m) = ctx.measure.filter(|&m| m != gold.measure()) {
                return Err(CliError::usage(format!(
                    "--measure {m} conflicts with the {} gold standard in {}",
                    gold.measure(),
                    path.display()
                )));
            }
            gold
        }
        None => build_gold(&dataset, ctx.measure_or_default(), ctx.threshold)?,
    };
    log_gold(&gold);
    let name = ctx.algo(args.algo)?;
    let algorithm = args
        .params
        .merged(&ctx.settings)?
        .build(name, dataset.len(), ctx.seed);
    let report = dirclus::evaluate(&dataset, &algorithm, gold.measure(), &gold)?;

    let stdout = std::io::stdout();
    let mut writer = csv::Writer::from_writer(stdout.lock());
    let write = |w: &mut csv::Writer<_>| -> csv::Result<()> {
        w.write_record(EvaluationReport::COLUMNS)?;
        w.write_record(report.fields())?;
        w.flush()?;
        Ok(())
    };
    write(&mut writer).map_err(|e| CliError::csv("<stdout>", e))?;
    std::io::stdout()
        .flush()
        .map_err(|e| CliError::io("<stdout>", e))
}
