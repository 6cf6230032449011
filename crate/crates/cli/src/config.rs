//! Plain-text run configuration: `key = value` lines under `[section]`
//! headers, with `#` comments. Parsing validates everything up front —
//! unknown keys, duplicates, malformed values, and generator invariants all
//! fail with the offending line number.

use blockboot_core::experiments::Statistic;
use blockboot_core::process::{DEFAULT_BURN_IN, DEFAULT_TAIL_BITS};
use blockboot_core::{GeneratorSpec, Kernel, ScheduleParams};
use std::collections::BTreeMap;
use std::fmt;

/// Default master seed when the config does not set one.
pub const DEFAULT_SEED: u64 = 0x5EED;
/// Default bootstrap replicate count (B).
pub const DEFAULT_REPLICATES: usize = 2000;
/// Default sampling-distribution path count (M).
pub const DEFAULT_SAMPLING_PATHS: usize = 2000;
/// Default data paths per sample size (R).
pub const DEFAULT_DATA_PATHS: usize = 50;

/// Configuration parse/validation error, carrying line numbers where known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config line {line}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Generate,
    Bootstrap,
    Experiment,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Bootstrap => "bootstrap",
            Command::Experiment => "experiment",
        }
    }
}

/// Statistic selector; the CLI exposes builtin kernels only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatisticId {
    Mean,
    Gini,
    VarianceHalf,
    Product,
}

impl StatisticId {
    pub fn as_str(&self) -> &'static str {
        match self {
            StatisticId::Mean => "mean",
            StatisticId::Gini => "gini",
            StatisticId::VarianceHalf => "variance_half",
            StatisticId::Product => "product",
        }
    }

    pub fn to_statistic(self) -> Statistic {
        match self {
            StatisticId::Mean => Statistic::Mean,
            StatisticId::Gini => Statistic::UStatistic(Kernel::gini()),
            StatisticId::VarianceHalf => Statistic::UStatistic(Kernel::variance_half()),
            StatisticId::Product => Statistic::UStatistic(Kernel::product()),
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "mean" => Some(StatisticId::Mean),
            "gini" => Some(StatisticId::Gini),
            "variance_half" => Some(StatisticId::VarianceHalf),
            "product" => Some(StatisticId::Product),
            _ => None,
        }
    }
}

/// A fully validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub generator: GeneratorSpec,
    /// Series length for `generate` / `bootstrap`.
    pub n: Option<usize>,
    pub statistic: Option<StatisticId>,
    /// Explicit block length for `bootstrap`; otherwise the schedule is used.
    pub block_len: Option<usize>,
    pub schedule: ScheduleParams,
    pub replicates: usize,
    pub sampling_paths: usize,
    pub data_paths: usize,
    pub n_grid: Vec<usize>,
    pub seed: u64,
    pub out: Option<String>,
}

impl RunConfig {
    /// Canonical `key = value` lines that re-parse to this configuration
    /// (defaults filled in); embedded in every output as `# config:` echoes.
    pub fn canonical_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("command = {}", self.command.as_str()),
            format!("seed = {}", self.seed),
        ];
        if let Some(out) = &self.out {
            lines.push(format!("out = {out}"));
        }
        lines.push("[generator]".into());
        match &self.generator {
            GeneratorSpec::IidGaussian => lines.push("family = iid_gaussian".into()),
            GeneratorSpec::Ar1 { phi, burn_in } => {
                lines.push("family = ar1".into());
                lines.push(format!("phi = {phi}"));
                lines.push(format!("burn_in = {burn_in}"));
            }
            GeneratorSpec::DoublingMap { tail_bits } => {
                lines.push("family = doubling_map".into());
                lines.push(format!("tail_bits = {tail_bits}"));
            }
            GeneratorSpec::Garch11 {
                alpha0,
                alpha1,
                alpha2,
                burn_in,
            } => {
                lines.push("family = garch11".into());
                lines.push(format!("alpha0 = {alpha0}"));
                lines.push(format!("alpha1 = {alpha1}"));
                lines.push(format!("alpha2 = {alpha2}"));
                lines.push(format!("burn_in = {burn_in}"));
            }
            GeneratorSpec::Volterra2 { coeffs } => {
                lines.push("family = volterra2".into());
                let triples: Vec<String> = coeffs
                    .iter()
                    .map(|(u1, u2, g)| format!("{u1}:{u2}:{g}"))
                    .collect();
                lines.push(format!("coeffs = {}", triples.join(";")));
            }
        }
        if let Some(n) = self.n {
            lines.push(format!("n = {n}"));
        }
        if self.command != Command::Generate {
            lines.push("[bootstrap]".into());
            if let Some(stat) = self.statistic {
                lines.push(format!("statistic = {}", stat.as_str()));
            }
            lines.push(format!("B = {}", self.replicates));
            if let Some(p) = self.block_len {
                lines.push(format!("p = {p}"));
            }
            lines.push(format!("eps = {}", self.schedule.eps));
            lines.push(format!("c = {}", self.schedule.c));
            lines.push(format!("p_min = {}", self.schedule.p_min));
        }
        if self.command == Command::Experiment {
            lines.push("[experiment]".into());
            let grid: Vec<String> = self.n_grid.iter().map(|n| n.to_string()).collect();
            lines.push(format!("n_grid = {}", grid.join(",")));
            lines.push(format!("M = {}", self.sampling_paths));
            lines.push(format!("R = {}", self.data_paths));
        }
        lines
    }
}

const SECTIONS: [&str; 3] = ["generator", "bootstrap", "experiment"];

fn allowed_keys(section: &str) -> &'static [&'static str] {
    match section {
        "" => &["command", "seed", "out"],
        "generator" => &[
            "family", "n", "phi", "burn_in", "tail_bits", "alpha0", "alpha1", "alpha2", "coeffs",
        ],
        "bootstrap" => &["statistic", "B", "p", "eps", "c", "p_min"],
        "experiment" => &["n_grid", "M", "R"],
        _ => &[],
    }
}

struct Entry {
    line: usize,
    value: String,
}

struct RawConfig {
    entries: BTreeMap<(String, String), Entry>,
}

impl RawConfig {
    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn require(&self, section: &str, key: &str) -> Result<&Entry, ConfigError> {
        self.get(section, key).ok_or_else(|| {
            let place = if section.is_empty() {
                "top level".to_string()
            } else {
                format!("section [{section}]")
            };
            ConfigError::global(format!("missing required key `{key}` in {place}"))
        })
    }

    fn parse_value<T: std::str::FromStr>(
        &self,
        section: &str,
        key: &str,
        what: &str,
    ) -> Result<Option<T>, ConfigError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(entry) => entry.value.parse::<T>().map(Some).map_err(|_| {
                ConfigError::at(
                    entry.line,
                    format!("key `{key}`: expected {what}, got `{}`", entry.value),
                )
            }),
        }
    }
}

fn tokenize(text: &str) -> Result<RawConfig, ConfigError> {
    let mut entries: BTreeMap<(String, String), Entry> = BTreeMap::new();
    let mut section = String::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(line_no, "unterminated section header"))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::at(
                    line_no,
                    format!("unknown section `[{name}]`"),
                ));
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::at(line_no, format!("expected `key = value`, got `{line}`"))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !allowed_keys(&section).contains(&key.as_str()) {
            let place = if section.is_empty() {
                "the top level".to_string()
            } else {
                format!("section [{section}]")
            };
            return Err(ConfigError::at(
                line_no,
                format!("unknown key `{key}` in {place}"),
            ));
        }
        if let Some(prev) = entries.get(&(section.clone(), key.clone())) {
            return Err(ConfigError::at(
                line_no,
                format!("duplicate key `{key}`; first set on line {}", prev.line),
            ));
        }
        entries.insert(
            (section.clone(), key.clone()),
            Entry {
                line: line_no,
                value,
            },
        );
    }
    Ok(RawConfig { entries })
}

fn parse_volterra_coeffs(entry: &Entry) -> Result<Vec<(usize, usize, f64)>, ConfigError> {
    let text = entry.value.trim();
    if text.is_empty() {
        return Ok(vec![]);
    }
    text.split(';')
        .map(|triple| {
            let parts: Vec<&str> = triple.trim().split(':').collect();
            if parts.len() != 3 {
                return Err(ConfigError::at(
                    entry.line,
                    format!("coefficient `{triple}` must be `u1:u2:g`"),
                ));
            }
            let u1 = parts[0].trim().parse::<usize>().map_err(|_| {
                ConfigError::at(entry.line, format!("bad lag `{}` in coeffs", parts[0]))
            })?;
            let u2 = parts[1].trim().parse::<usize>().map_err(|_| {
                ConfigError::at(entry.line, format!("bad lag `{}` in coeffs", parts[1]))
            })?;
            let g = parts[2].trim().parse::<f64>().map_err(|_| {
                ConfigError::at(entry.line, format!("bad coefficient `{}` in coeffs", parts[2]))
            })?;
            Ok((u1, u2, g))
        })
        .collect()
}

fn build_generator(raw: &RawConfig) -> Result<GeneratorSpec, ConfigError> {
    let family = raw.require("generator", "family")?;
    let family_line = family.line;
    let reject = |key: &str| -> Result<(), ConfigError> {
        if let Some(entry) = raw.get("generator", key) {
            return Err(ConfigError::at(
                entry.line,
                format!("key `{key}` is not a parameter of family `{}`", family.value),
            ));
        }
        Ok(())
    };
    let spec = match family.value.as_str() {
        "iid_gaussian" => {
            for key in ["phi", "burn_in", "tail_bits", "alpha0", "alpha1", "alpha2", "coeffs"] {
                reject(key)?;
            }
            GeneratorSpec::IidGaussian
        }
        "ar1" => {
            for key in ["tail_bits", "alpha0", "alpha1", "alpha2", "coeffs"] {
                reject(key)?;
            }
            let phi = raw
                .parse_value::<f64>("generator", "phi", "a real number")?
                .ok_or_else(|| ConfigError::global("family ar1 requires key `phi`"))?;
            let burn_in = raw
                .parse_value::<usize>("generator", "burn_in", "a nonnegative integer")?
                .unwrap_or(DEFAULT_BURN_IN);
            GeneratorSpec::Ar1 { phi, burn_in }
        }
        "doubling_map" => {
            for key in ["phi", "burn_in", "alpha0", "alpha1", "alpha2", "coeffs"] {
                reject(key)?;
            }
            let tail_bits = raw
                .parse_value::<u32>("generator", "tail_bits", "an integer in 1..=64")?
                .unwrap_or(DEFAULT_TAIL_BITS);
            GeneratorSpec::DoublingMap { tail_bits }
        }
        "garch11" => {
            for key in ["phi", "tail_bits", "coeffs"] {
                reject(key)?;
            }
            let get = |key: &str| -> Result<f64, ConfigError> {
                raw.parse_value::<f64>("generator", key, "a real number")?
                    .ok_or_else(|| {
                        ConfigError::global(format!("family garch11 requires key `{key}`"))
                    })
            };
            GeneratorSpec::Garch11 {
                alpha0: get("alpha0")?,
                alpha1: get("alpha1")?,
                alpha2: get("alpha2")?,
                burn_in: raw
                    .parse_value::<usize>("generator", "burn_in", "a nonnegative integer")?
                    .unwrap_or(DEFAULT_BURN_IN),
            }
        }
        "volterra2" => {
            for key in ["phi", "burn_in", "tail_bits", "alpha0", "alpha1", "alpha2"] {
                reject(key)?;
            }
            let coeffs = raw.require("generator", "coeffs")?;
            GeneratorSpec::Volterra2 {
                coeffs: parse_volterra_coeffs(coeffs)?,
            }
        }
        other => {
            return Err(ConfigError::at(
                family_line,
                format!("unknown generator family `{other}`"),
            ))
        }
    };
    spec.validate()
        .map_err(|e| ConfigError::at(family_line, e.to_string()))?;
    Ok(spec)
}

/// Parse and fully validate a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw = tokenize(text)?;

    let command_entry = raw.require("", "command")?;
    let command = match command_entry.value.as_str() {
        "generate" => Command::Generate,
        "bootstrap" => Command::Bootstrap,
        "experiment" => Command::Experiment,
        other => {
            return Err(ConfigError::at(
                command_entry.line,
                format!("unknown command `{other}` (expected generate, bootstrap, or experiment)"),
            ))
        }
    };

    let seed = raw
        .parse_value::<u64>("", "seed", "an unsigned 64-bit integer")?
        .unwrap_or(DEFAULT_SEED);
    let out = raw.get("", "out").map(|e| e.value.clone());
    let generator = build_generator(&raw)?;

    let n = raw.parse_value::<usize>("generator", "n", "a positive integer")?;
    if let Some(entry) = raw.get("generator", "n") {
        if n == Some(0) {
            return Err(ConfigError::at(entry.line, "n must be positive"));
        }
    }
    if matches!(command, Command::Generate | Command::Bootstrap) && n.is_none() {
        return Err(ConfigError::global(format!(
            "command {} requires key `n` in [generator]",
            command.as_str()
        )));
    }

    let statistic = match raw.get("bootstrap", "statistic") {
        None => None,
        Some(entry) => Some(StatisticId::parse(&entry.value).ok_or_else(|| {
            ConfigError::at(
                entry.line,
                format!(
                    "unknown statistic `{}` (expected mean, gini, variance_half, or product)",
                    entry.value
                ),
            )
        })?),
    };
    if matches!(command, Command::Bootstrap | Command::Experiment) && statistic.is_none() {
        return Err(ConfigError::global(format!(
            "command {} requires key `statistic` in [bootstrap]",
            command.as_str()
        )));
    }

    let replicates = raw
        .parse_value::<usize>("bootstrap", "B", "a positive integer")?
        .unwrap_or(DEFAULT_REPLICATES);
    let block_len = raw.parse_value::<usize>("bootstrap", "p", "a positive integer")?;
    for (key, value) in [("B", Some(replicates)), ("p", block_len)] {
        if value == Some(0) {
            let line = raw.get("bootstrap", key).map(|e| e.line).unwrap_or(0);
            return Err(ConfigError::at(line, format!("{key} must be positive")));
        }
    }

    let defaults = ScheduleParams::default();
    let eps = raw
        .parse_value::<f64>("bootstrap", "eps", "a real in (0, 1)")?
        .unwrap_or(defaults.eps);
    let c = raw
        .parse_value::<f64>("bootstrap", "c", "a positive real")?
        .unwrap_or(defaults.c);
    let p_min = raw
        .parse_value::<usize>("bootstrap", "p_min", "an integer >= 2")?
        .unwrap_or(defaults.p_min);
    let schedule = ScheduleParams::new(eps, c, p_min).map_err(|e| {
        let line = ["eps", "c", "p_min"]
            .iter()
            .find_map(|k| raw.get("bootstrap", k).map(|entry| entry.line));
        match line {
            Some(l) => ConfigError::at(l, e.to_string()),
            None => ConfigError::global(e.to_string()),
        }
    })?;

    let sampling_paths = raw
        .parse_value::<usize>("experiment", "M", "a positive integer")?
        .unwrap_or(DEFAULT_SAMPLING_PATHS);
    let data_paths = raw
        .parse_value::<usize>("experiment", "R", "a positive integer")?
        .unwrap_or(DEFAULT_DATA_PATHS);
    for key in ["M", "R"] {
        if let Some(entry) = raw.get("experiment", key) {
            if entry.value.trim() == "0" {
                return Err(ConfigError::at(entry.line, format!("{key} must be positive")));
            }
        }
    }

    let n_grid = match raw.get("experiment", "n_grid") {
        None => vec![],
        Some(entry) => {
            let grid: Result<Vec<usize>, ConfigError> = entry
                .value
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<usize>().map_err(|_| {
                        ConfigError::at(
                            entry.line,
                            format!("bad n_grid entry `{}`", tok.trim()),
                        )
                    })
                })
                .collect();
            let grid = grid?;
            if grid.is_empty() || grid.contains(&0) {
                return Err(ConfigError::at(entry.line, "n_grid entries must be positive"));
            }
            if !grid.windows(2).all(|w| w[0] < w[1]) {
                return Err(ConfigError::at(
                    entry.line,
                    "n_grid must be strictly increasing",
                ));
            }
            grid
        }
    };
    if command == Command::Experiment && n_grid.is_empty() {
        return Err(ConfigError::global(
            "command experiment requires key `n_grid` in [experiment]",
        ));
    }

    Ok(RunConfig {
        command,
        generator,
        n,
        statistic,
        block_len,
        schedule,
        replicates,
        sampling_paths,
        data_paths,
        n_grid,
        seed,
        out,
    })
}
