use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use prolim_cli::{emit_report, run_suite, Format, RunOptions, Suite, SuiteConfig, EXIT_CONFIG};

const DEFAULT_CONFIG: &str = include_str!("../../../configs/default.json");

/// Run verification suites over towers of group rings and write a report.
#[derive(Parser, Debug)]
#[command(name = "prolim", version)]
struct Args {
    /// JSON suite configuration (defaults to the built-in default suite).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite to run; repeatable, replaces the suites in the config.
    #[arg(long = "suite")]
    suites: Vec<Suite>,
    /// Report destination (defaults to the config's output, then stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or text.
    #[arg(long, default_value = "json")]
    format: Format,
    /// Largest allowed group order.
    #[arg(long, env = "PROLIM_MAX_ORDER", default_value_t = 128)]
    max_group_order: u64,
    /// Process towers in parallel.
    #[arg(long)]
    parallel: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("prolim: {msg}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}

fn run(args: &Args) -> Result<i32, String> {
    let text = match &args.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => DEFAULT_CONFIG.to_string(),
    };
    let mut config = SuiteConfig::from_json(&text).map_err(|e| e.to_string())?;
    if !args.suites.is_empty() {
        config.suites = args.suites.clone();
    }
    let opts = RunOptions {
        max_order: args.max_group_order,
        parallel: args.parallel,
    };
    let report = run_suite(&config, opts).map_err(|e| e.to_string())?;
    let bytes = emit_report(&report, args.format);
    let out = args.out.clone().or_else(|| config.output.as_ref().map(PathBuf::from));
    match out {
        Some(p) => std::fs::write(&p, bytes).map_err(|e| format!("{}: {e}", p.display()))?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())?;
        }
    }
    Ok(report.exit_code())
}
