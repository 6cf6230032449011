//! Command-line front end: reads a `key = value` config, applies flag
//! overrides, and writes CSV artifacts (series, pivot dumps, or experiment
//! reports). Exit codes: 0 success, 1 config error, 2 capacity error.

use blockboot_cli::config::parse_config;
use blockboot_cli::run::{run, RunOptions};
use clap::Parser;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "blockboot",
    about = "Nonoverlapping block bootstrap for dependent time series",
    version
)]
struct Args {
    /// Path to the run configuration file.
    #[arg(long)]
    config: PathBuf,

    /// Override the master seed from the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the output path from the config.
    #[arg(long)]
    out: Option<String>,

    /// Bound the rayon worker count; never affects results.
    #[arg(long)]
    threads: Option<usize>,

    /// Drop the timestamp line and zero wall-time columns, making repeated
    /// runs byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

fn main() -> ExitCode {
    // Argument errors are config errors under the exit-code contract.
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    if let Some(threads) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not configure {threads} worker threads: {e}");
            return ExitCode::from(1);
        }
    }

    let text = match fs::read_to_string(&args.config) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };

    let mut cfg = match parse_config(&text) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = args.out {
        cfg.out = Some(out);
    }

    let opts = RunOptions {
        no_timestamp: args.no_timestamp,
    };
    match run(&cfg, &opts) {
        Ok(path) => {
            println!("wrote {path}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
