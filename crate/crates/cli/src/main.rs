use std::path::PathBuf;
use std::process::ExitCode;

use beurling_cli::{load_config, run, CliError, Command, ExperimentConfig};
use clap::Parser;

/// Build Beurling prime systems with prescribed zeros and check them.
#[derive(Parser, Debug)]
#[command(name = "beurling", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment config (`key = value` lines, `[section]` headers).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(args: &Args) -> Result<u8, CliError> {
    let mut cfg = match &args.config {
        Some(p) => load_config(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))?;
    }
    let out = args.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    let outcome = run(args.command, &cfg, &out)?;
    println!("{}: {}", args.command.name(), outcome.summary);
    if !outcome.passed {
        eprintln!("{}: check failed", args.command.name());
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    env_logger::init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
