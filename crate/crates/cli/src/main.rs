mod commands;
mod config;

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Weyl-sequence residuals, hypothesis checks and eigenvalue trends for
/// warped-product manifolds.
#[derive(Parser, Debug)]
#[command(name = "weylspec", version)]
struct Cli {
    #[arg(value_enum)]
    command: config::Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: the config's `out`, else `weylspec-out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG line charts.
    #[arg(long)]
    plots: bool,
    /// Worker threads (default: all cores).
    #[arg(long, env = "WEYLSPEC_THREADS")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(commands::Status::Pass) => ExitCode::SUCCESS,
        Ok(commands::Status::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<commands::Status, String> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| format!("cannot read {}: {e}", cli.config.display()))?;
    let cfg = config::parse_config(&text)?;
    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("weylspec-out"));
    let mut out = commands::Output::new(&dir, cli.plots)?;
    let status = commands::run(cli.command, &cfg, &mut out);
    for p in &out.written {
        println!("wrote {}", p.display());
    }
    status
}
