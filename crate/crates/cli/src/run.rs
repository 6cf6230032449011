//! Execution of a validated run configuration: build the artifact in memory,
//! then write it with the config echo so every output can re-run itself.

use crate::config::{Command, ConfigError, RunConfig};
use blockboot_core::experiments::{consistency_experiment, ExperimentConfig};
use blockboot_core::rng::derive_seed;
use blockboot_core::{
    boot_mean_pivot, boot_ustat_pivot, partition, schedule_block_length, Error as CoreError,
    Kernel, Statistic,
};
use std::fmt;
use std::fs;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Core(CoreError),
    Io(std::io::Error),
}

impl CliError {
    /// Exit-code contract: 0 success, 1 config error, 2 capacity error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::CapacityExceeded(_)) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Drop the timestamp metadata line and zero wall-time columns, so that
    /// identical configurations produce byte-identical files.
    pub no_timestamp: bool,
}

fn header(cfg: &RunConfig, opts: &RunOptions, buf: &mut Vec<u8>) -> std::io::Result<()> {
    for line in cfg.canonical_lines() {
        writeln!(buf, "# config: {line}")?;
    }
    if !opts.no_timestamp {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(buf, "# timestamp = {now}")?;
    }
    Ok(())
}

/// Run the configured command and write its artifact to `cfg.out`.
/// Returns the path written.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<String, CliError> {
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| ConfigError {
            line: None,
            message: "no output path: set `out` in the config or pass --out".into(),
        })?;
    let mut buf = Vec::new();
    header(cfg, opts, &mut buf)?;

    match cfg.command {
        Command::Generate => {
            let n = cfg.n.expect("validated");
            let series = cfg.generator.generate(n, cfg.seed)?;
            series.write_csv(&mut buf)?;
            println!("generated {} observations from {}", n, cfg.generator);
        }
        Command::Bootstrap => {
            let n = cfg.n.expect("validated");
            // Separate sub-seeds: the series stream must not collide with
            // replicate stream 0.
            let series = cfg.generator.generate(n, derive_seed(cfg.seed, 0))?;
            let p = cfg
                .block_len
                .unwrap_or_else(|| schedule_block_length(n, &cfg.schedule));
            let part = partition(n, p)?;
            let draw_seed = derive_seed(cfg.seed, 1);
            let statistic = cfg.statistic.expect("validated").to_statistic();
            let boot = match &statistic {
                Statistic::Mean => boot_mean_pivot(&series, &part, cfg.replicates, draw_seed)?,
                Statistic::UStatistic(kernel) => {
                    boot_ustat_pivot(&series, &part, kernel, cfg.replicates, draw_seed)?
                }
            };
            boot.write_csv(&mut buf)?;
            println!(
                "bootstrap {}: n={} p={} k={} B={} E*={} Var*={}",
                boot.meta.statistic,
                boot.meta.n,
                boot.meta.p,
                boot.meta.k,
                boot.meta.replicates,
                boot.exact_expectation,
                boot.exact_variance
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "none".into()),
            );
        }
        Command::Experiment => {
            let statistic = cfg.statistic.expect("validated").to_statistic();
            let experiment = ExperimentConfig {
                spec: cfg.generator.clone(),
                statistic,
                n_grid: cfg.n_grid.clone(),
                schedule: cfg.schedule,
                replicates: cfg.replicates,
                sampling_paths: cfg.sampling_paths,
                data_paths: cfg.data_paths,
                seed: cfg.seed,
            };
            let report = consistency_experiment(&experiment)?;
            report.write_csv(&mut buf, !opts.no_timestamp)?;
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            for row in &report.rows {
                println!(
                    "n={} p={} k={}: ks_median={:.4} ks_mean={:.4} boot_var_mean={:.4} target={:.4}",
                    row.n, row.p, row.k, row.ks_median, row.ks_mean, row.boot_var_mean,
                    row.target_sigma2
                );
            }
        }
    }

    fs::write(&out, &buf)?;
    Ok(out)
}

/// Kernel lookup for builtin statistic names; exposed for completeness.
#[allow(dead_code)]
pub fn builtin_kernel(name: &str) -> Option<Kernel> {
    Kernel::by_name(name)
}
