use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use ntoffoli::config::{Experiment, ExperimentConfig, OutputFormat};
use ntoffoli::experiments::{run_experiment, Outcome};

/// Run a gate, code or circuit experiment and write CSV (or JSON).
#[derive(Debug, Parser)]
#[command(name = "sim", version)]
struct Cli {
    /// sweep-drive | sweep-n | qec3 | steane | synth | table1-check | norm-error
    experiment: Experiment,
    /// TOML config; every key is optional.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(e) = cfg.experiment {
        if e != cli.experiment {
            log::warn!("config names experiment '{e}', running '{}'", cli.experiment);
        }
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = cli.out {
        cfg.out = Some(o);
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global()?;
    }

    let report = run_experiment(cli.experiment, &cfg)?;
    let text = match cfg.format {
        OutputFormat::Csv => report.table.to_csv(),
        OutputFormat::Json => report.table.to_json(),
    };
    match &cfg.out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(match report.outcome {
        Outcome::Complete => ExitCode::SUCCESS,
        Outcome::Infeasible(msg) => {
            eprintln!("sim: {msg}");
            ExitCode::from(2)
        }
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sim: {e}");
            ExitCode::FAILURE
        }
    }
}
