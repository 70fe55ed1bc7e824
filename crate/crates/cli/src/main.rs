//! Command-line front-end: dataset generation, gold standards, clustering,
//! evaluation and size sweeps.

mod args;
mod commands;
mod error;
mod settings;
mod sweep;

use clap::Parser;
use log::error;

use args::{Cli, Command, Resolved};
use error::{CliError, CliResult, EXIT_INVALID_ARGUMENT};

fn run(cli: Cli) -> CliResult<()> {
    let ctx = Resolved::new(&cli.global)?;
    match cli.command {
        Command::Generate(a) => commands::generate(a, &ctx),
        Command::Gold(a) => commands::gold(a, &ctx),
        Command::Cluster(a) => commands::cluster(a, &ctx),
        Command::Evaluate(a) => commands::evaluate(a, &ctx),
        Command::Sweep(a) => sweep::run(a, &ctx),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_ARGUMENT } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        error!("{e}");
        if let CliError::Core(dirclus::Error::EstimationFailed(_)) = e {
            error!("rerun with an explicit --threshold <value in [0, 1]>");
        }
        std::process::exit(e.exit_code());
    }
}
