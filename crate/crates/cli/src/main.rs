use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fracsource::{execute, CliError, Mode, RunConfig, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "fracsource", version, about = "Subdiffusion inverse-source solver")]
struct Cli {
    /// Run mode.
    #[arg(value_enum)]
    mode: Mode,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: the configuration's `output_dir`, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the mode solves.
    #[arg(long)]
    workers: Option<usize>,
    /// Seed for randomised checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

const LOG_VAR: &str = "FRACSOURCE_LOG";

fn init_logging() -> Result<(), CliError> {
    let level = match std::env::var(LOG_VAR) {
        Ok(v) if matches!(v.as_str(), "error" | "info" | "debug") => v,
        Ok(v) => {
            return Err(CliError::Usage(format!(
                "{LOG_VAR} must be one of error, info, debug; got '{v}'"
            )))
        }
        Err(_) => "error".to_string(),
    };
    env_logger::Builder::new()
        .parse_filters(&level)
        .format_timestamp(None)
        .init();
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_logging()?;
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?;
    }
    let cfg = RunConfig::load(&cli.config)?;
    let out = cli
        .out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let opts = RunOptions {
        seed: cli.seed,
        workers: cli.workers,
    };
    let (report, result) = execute(cli.mode, &cfg, &out, opts);
    if out.is_dir() {
        report.write(&out)?;
    }
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracsource: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
