//! Monte Carlo machinery that turns bootstrap consistency statements into
//! measurable experiments: sampling distributions, sup-distances between the
//! bootstrap pivot law and the sampling law, exact bootstrap variances, and
//! trend reports over a grid of sample sizes.

use crate::bootstrap::{
    boot_mean_pivot, boot_ustat_pivot, schedule_block_length, BlockPartition, ScheduleParams,
};
use crate::ecdf::{ks_distance, EmpiricalCdf};
use crate::error::{Error, Result};
use crate::kernels::{degenerate_u_statistic, hoeffding_decompose, u_statistic, Kernel, KernelId};
use crate::oracle::{long_run_sigma2_analytic, volterra_marginal_variance};
use crate::process::GeneratorSpec;
use crate::rng::derive_seed;
use crate::util::{mean, median, sample_variance};
use rayon::prelude::*;
use std::io;
use std::time::Instant;

/// Length of the single calibration path used to center statistics with no
/// closed-form target value.
pub const CALIBRATION_LEN: usize = 1_000_000;

/// Soft budget on `(kp)^2 * B * R` per experiment row; rows above it still
/// run but are flagged in the report warnings.
pub const REPLICATE_WORK_BUDGET: f64 = 2e13;

const CALIBRATION_TAG: u64 = u64::MAX;
const SAMPLING_STREAMS_TAG: u64 = 1;
const DATA_STREAMS_TAG: u64 = 2;

/// The statistic whose bootstrap distribution an experiment studies.
#[derive(Clone, Debug)]
pub enum Statistic {
    /// Sample mean.
    Mean,
    /// Bivariate U-statistic with the given kernel.
    UStatistic(Kernel),
}

impl Statistic {
    pub fn id(&self) -> String {
        match self {
            Statistic::Mean => "mean".into(),
            Statistic::UStatistic(kernel) => kernel.id().to_string(),
        }
    }

    fn min_n(&self) -> usize {
        match self {
            Statistic::Mean => 1,
            Statistic::UStatistic(_) => 2,
        }
    }

    fn evaluate(&self, values: &crate::process::TimeSeries) -> Result<f64> {
        match self {
            Statistic::Mean => Ok(mean(values.values())),
            Statistic::UStatistic(kernel) => u_statistic(values, kernel),
        }
    }
}

/// Analytic centering value (`mu` for the mean, `theta` for a U-statistic)
/// where the generator family admits one; `None` means a calibration path
/// is needed.
pub fn analytic_center(spec: &GeneratorSpec, statistic: &Statistic) -> Option<f64> {
    match statistic {
        Statistic::Mean => Some(match spec {
            GeneratorSpec::DoublingMap { .. } => 0.5,
            _ => 0.0,
        }),
        Statistic::UStatistic(kernel) => {
            let marginal_variance = match spec {
                GeneratorSpec::IidGaussian => Some(1.0),
                GeneratorSpec::Ar1 { phi, .. } => Some(1.0 / (1.0 - phi * phi)),
                GeneratorSpec::DoublingMap { .. } => Some(1.0 / 12.0),
                GeneratorSpec::Garch11 {
                    alpha0,
                    alpha1,
                    alpha2,
                    ..
                } => Some(alpha0 / (1.0 - alpha1 - alpha2)),
                GeneratorSpec::Volterra2 { coeffs } => Some(volterra_marginal_variance(coeffs)),
            };
            match kernel.id() {
                // E|X - Y| for independent copies: Gaussian marginals give
                // 2 sigma / sqrt(pi); the uniform doubling marginal gives 1/3.
                KernelId::Gini => match spec {
                    GeneratorSpec::IidGaussian => Some(2.0 / std::f64::consts::PI.sqrt()),
                    GeneratorSpec::Ar1 { phi, .. } => {
                        Some(2.0 * (1.0 / (1.0 - phi * phi) / std::f64::consts::PI).sqrt())
                    }
                    GeneratorSpec::DoublingMap { .. } => Some(1.0 / 3.0),
                    _ => None,
                },
                // E (X - Y)^2 / 2 = Var X for any marginal.
                KernelId::VarianceHalf => marginal_variance,
                // E X Y = (E X)^2 for independent copies.
                KernelId::Product => match spec {
                    GeneratorSpec::DoublingMap { .. } => Some(0.25),
                    _ => Some(0.0),
                },
                KernelId::Custom(_) => None,
            }
        }
    }
}

/// An empirical sampling distribution of the centered, scaled statistic.
#[derive(Clone, Debug)]
pub struct SamplingDistribution {
    pub ecdf: EmpiricalCdf,
    /// Centering value used for `sqrt(n) (T_n - center)`.
    pub center: f64,
    /// Whether the center came from a calibration path rather than a closed
    /// form (flagged in experiment reports).
    pub calibrated: bool,
}

/// Approximate the sampling law of `sqrt(n) (T_n - center)` from `m`
/// independent paths. Small `m` is accepted but a few hundred paths are
/// needed before sup-distances mean much.
pub fn sampling_distribution(
    spec: &GeneratorSpec,
    statistic: &Statistic,
    n: usize,
    m: usize,
    seed: u64,
) -> Result<SamplingDistribution> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one path".into()));
    }
    if n < statistic.min_n() {
        return Err(Error::InsufficientSample {
            min: statistic.min_n(),
            got: n,
        });
    }
    spec.validate()?;
    let (center, calibrated) = resolve_center(spec, statistic, seed)?;
    let scale = (n as f64).sqrt();
    let realizations: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let series = spec
                .generate(n, derive_seed(seed, j as u64))
                .expect("spec validated");
            let t = statistic.evaluate(&series).expect("n checked");
            scale * (t - center)
        })
        .collect();
    Ok(SamplingDistribution {
        ecdf: EmpiricalCdf::new(realizations)?,
        center,
        calibrated,
    })
}

fn resolve_center(
    spec: &GeneratorSpec,
    statistic: &Statistic,
    seed: u64,
) -> Result<(f64, bool)> {
    if let Some(c) = analytic_center(spec, statistic) {
        return Ok((c, false));
    }
    let series = spec.generate(CALIBRATION_LEN, derive_seed(seed, CALIBRATION_TAG))?;
    Ok((statistic.evaluate(&series)?, true))
}

/// Configuration of a consistency experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub spec: GeneratorSpec,
    pub statistic: Statistic,
    /// Strictly increasing sample sizes.
    pub n_grid: Vec<usize>,
    pub schedule: ScheduleParams,
    /// Bootstrap replicates per data path (B).
    pub replicates: usize,
    /// Paths for the sampling distribution (M).
    pub sampling_paths: usize,
    /// Independent data paths per sample size (R).
    pub data_paths: usize,
    pub seed: u64,
}

/// One row of an experiment report (one sample size).
#[derive(Clone, Debug)]
pub struct ExperimentRow {
    pub process: String,
    pub statistic: String,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub replicates: usize,
    pub sampling_paths: usize,
    /// Median over data paths of the sup-distance between the bootstrap
    /// pivot CDF and the sampling CDF; this is the `ks_distance` CSV column.
    pub ks_median: f64,
    /// Mean over data paths of the same distances (reported alongside).
    pub ks_mean: f64,
    /// Mean over data paths of the exact closed-form `Var*` of the scaled
    /// statistic (never a Monte Carlo variance of pivots).
    pub boot_var_mean: f64,
    pub target_sigma2: f64,
    pub wall_time_s: f64,
}

/// Report of a consistency experiment over a grid of sample sizes.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub master_seed: u64,
    /// Data paths per sample size (R).
    pub data_paths: usize,
    /// The sampling distribution was centered from a calibration path.
    pub calibrated_center: bool,
    pub warnings: Vec<String>,
}

impl ExperimentReport {
    /// CSV with `#` metadata lines and the fixed column order
    /// `process,statistic,n,p,k,B,M,ks_distance,boot_var_mean,target_sigma2,wall_time`.
    /// With `include_timing` off, wall times are written as 0 so identical
    /// configurations produce byte-identical files.
    pub fn write_csv<W: io::Write>(&self, w: &mut W, include_timing: bool) -> io::Result<()> {
        writeln!(w, "# blockboot experiment report")?;
        writeln!(w, "# version = {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(w, "# seed = {}", self.master_seed)?;
        writeln!(w, "# paths_per_n = {}", self.data_paths)?;
        writeln!(
            w,
            "# centering = {}",
            if self.calibrated_center {
                "calibrated"
            } else {
                "analytic"
            }
        )?;
        for warning in &self.warnings {
            writeln!(w, "# warning = {warning}")?;
        }
        writeln!(
            w,
            "process,statistic,n,p,k,B,M,ks_distance,boot_var_mean,target_sigma2,wall_time"
        )?;
        for r in &self.rows {
            let wall = if include_timing { r.wall_time_s } else { 0.0 };
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.process,
                r.statistic,
                r.n,
                r.p,
                r.k,
                r.replicates,
                r.sampling_paths,
                r.ks_median,
                r.boot_var_mean,
                r.target_sigma2,
                wall
            )?;
        }
        Ok(())
    }
}

/// Run a consistency experiment: for each `n`, compare the bootstrap pivot
/// distribution against the sampling distribution of the statistic on `R`
/// independent data paths and aggregate distances and exact variances.
///
/// Every RNG stream is keyed by `(seed, path index, replicate index)` and
/// reused across the grid (common random numbers): path `j` at a larger `n`
/// extends the same innovation stream, so rows differ by sample size alone
/// and trend comparisons are not blurred by independent re-draws. Results
/// are identical under any thread count, and each row is a function of
/// `(seed, n)` only, so reports are stable under extending the grid.
pub fn consistency_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.spec.validate()?;
    if cfg.n_grid.is_empty() {
        return Err(Error::InvalidArgument("empty n_grid".into()));
    }
    if !cfg.n_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "n_grid must be strictly increasing".into(),
        ));
    }
    if cfg.replicates == 0 || cfg.sampling_paths == 0 || cfg.data_paths == 0 {
        return Err(Error::InvalidArgument(
            "replicate and path counts must be positive".into(),
        ));
    }
    let process_id = cfg.spec.to_string();
    let statistic_id = cfg.statistic.id();
    let mut rows = Vec::with_capacity(cfg.n_grid.len());
    let mut warnings = Vec::new();
    let mut calibrated = false;
    let sampling_seed = derive_seed(cfg.seed, SAMPLING_STREAMS_TAG);
    let path_base = derive_seed(cfg.seed, DATA_STREAMS_TAG);

    for &n in &cfg.n_grid {
        let start = Instant::now();
        let p = schedule_block_length(n, &cfg.schedule);
        let part = BlockPartition::new(n, p)?;
        let work = (part.kp() as f64).powi(2) * cfg.replicates as f64 * cfg.data_paths as f64;
        if work > REPLICATE_WORK_BUDGET {
            warnings.push(format!(
                "n = {n}: replicate work {work:.2e} exceeds budget {REPLICATE_WORK_BUDGET:.1e}"
            ));
        }

        let sampling = sampling_distribution(
            &cfg.spec,
            &cfg.statistic,
            n,
            cfg.sampling_paths,
            sampling_seed,
        )?;
        calibrated |= sampling.calibrated;
        let per_path: Vec<(f64, f64)> = (0..cfg.data_paths)
            .into_par_iter()
            .map(|r| {
                let series_seed = derive_seed(path_base, 2 * r as u64);
                let draw_seed = derive_seed(path_base, 2 * r as u64 + 1);
                let series = cfg.spec.generate(n, series_seed).expect("spec validated");
                let boot = match &cfg.statistic {
                    Statistic::Mean => {
                        boot_mean_pivot(&series, &part, cfg.replicates, draw_seed)
                    }
                    Statistic::UStatistic(kernel) => {
                        boot_ustat_pivot(&series, &part, kernel, cfg.replicates, draw_seed)
                    }
                }
                .expect("partition validated");
                let pivot_cdf =
                    EmpiricalCdf::new(boot.pivot_values).expect("replicates >= 1");
                let ks = ks_distance(&pivot_cdf, &sampling.ecdf);
                (ks, boot.exact_variance.expect("exact centering"))
            })
            .collect();

        let distances: Vec<f64> = per_path.iter().map(|&(ks, _)| ks).collect();
        let variances: Vec<f64> = per_path.iter().map(|&(_, v)| v).collect();
        let target_sigma2 = match &cfg.statistic {
            // All builtin families have a closed-form long-run variance.
            Statistic::Mean => long_run_sigma2_analytic(&cfg.spec).unwrap_or(f64::NAN),
            // No closed form for U-statistics: use the Monte Carlo variance
            // of the sampling realizations.
            Statistic::UStatistic(_) => {
                if sampling.ecdf.len() >= 2 {
                    sample_variance(sampling.ecdf.samples())
                } else {
                    f64::NAN
                }
            }
        };

        rows.push(ExperimentRow {
            process: process_id.clone(),
            statistic: statistic_id.clone(),
            n,
            p,
            k: part.k(),
            replicates: cfg.replicates,
            sampling_paths: cfg.sampling_paths,
            ks_median: median(&distances),
            ks_mean: mean(&distances),
            boot_var_mean: mean(&variances),
            target_sigma2,
            wall_time_s: start.elapsed().as_secs_f64(),
        });
    }

    Ok(ExperimentReport {
        rows,
        master_seed: cfg.seed,
        data_paths: cfg.data_paths,
        calibrated_center: calibrated,
        warnings,
    })
}

/// One sample size of a degenerate-part trend report.
#[derive(Clone, Copy, Debug)]
pub struct DegenerateTrendRow {
    pub n: usize,
    /// Monte Carlo estimate of `Var(sqrt(n) U_n(h2_hat))` over `m` paths.
    pub variance: f64,
}

/// Estimate `Var(sqrt(n) U_n(h2_hat))` for each `n` in the grid, where
/// `h2_hat` is re-estimated on every path. Under the conditions that make the
/// bootstrap work this vanishes as `n` grows.
pub fn degenerate_part_trend(
    spec: &GeneratorSpec,
    kernel: &Kernel,
    n_grid: &[usize],
    m: usize,
    seed: u64,
) -> Result<Vec<DegenerateTrendRow>> {
    spec.validate()?;
    if n_grid.is_empty() {
        return Err(Error::InvalidArgument("empty n_grid".into()));
    }
    if !n_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "n_grid must be strictly increasing".into(),
        ));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(
            "variance estimate needs at least 2 paths".into(),
        ));
    }
    n_grid
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::InsufficientSample { min: 2, got: n });
            }
            let base = derive_seed(seed, n as u64);
            let values: Vec<f64> = (0..m)
                .into_par_iter()
                .map(|j| {
                    let series = spec
                        .generate(n, derive_seed(base, j as u64))
                        .expect("spec validated");
                    let parts = hoeffding_decompose(&series, kernel).expect("n >= 2");
                    (n as f64).sqrt() * degenerate_u_statistic(&parts)
                })
                .collect();
            Ok(DegenerateTrendRow {
                n,
                variance: sample_variance(&values),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecdf::{ks_distance_to_cdf, std_normal_cdf};
    use crate::process::DEFAULT_BURN_IN;

    #[test]
    fn iid_mean_sampling_distribution_is_standard_normal() {
        // sqrt(n) Xbar of standard normals is exactly N(0, 1) for any n, so
        // the sup-distance obeys the usual 1.36 / sqrt(M) envelope.
        let m = 2000;
        let s = sampling_distribution(&GeneratorSpec::IidGaussian, &Statistic::Mean, 64, m, 3)
            .unwrap();
        assert!(!s.calibrated);
        let d = ks_distance_to_cdf(&s.ecdf, std_normal_cdf);
        assert!(d <= 1.36 / (m as f64).sqrt() + 0.01, "distance {d}");
    }

    #[test]
    fn zero_volterra_gives_point_mass_sampling_distribution() {
        let spec = GeneratorSpec::Volterra2 { coeffs: vec![] };
        let s = sampling_distribution(&spec, &Statistic::Mean, 32, 200, 5).unwrap();
        assert!(s.ecdf.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn doubling_map_sampling_variance_near_quarter() {
        let spec = GeneratorSpec::DoublingMap { tail_bits: 64 };
        let s = sampling_distribution(&spec, &Statistic::Mean, 1 << 13, 2000, 7).unwrap();
        let v = sample_variance(s.ecdf.samples());
        assert!((v - 0.25).abs() < 0.25 * 0.15, "variance {v}");
    }

    #[test]
    fn calibration_path_is_flagged_and_close() {
        // GARCH has no closed-form Gini theta; the calibration path value
        // should still sit near the i.i.d.-Gaussian one for unit variance.
        let spec = GeneratorSpec::Garch11 {
            alpha0: 0.1,
            alpha1: 0.1,
            alpha2: 0.8,
            burn_in: DEFAULT_BURN_IN,
        };
        let s = sampling_distribution(
            &spec,
            &Statistic::UStatistic(Kernel::gini()),
            128,
            150,
            11,
        )
        .unwrap();
        assert!(s.calibrated);
        assert!((s.center - 2.0 / std::f64::consts::PI.sqrt()).abs() < 0.2);
    }

    #[test]
    fn single_row_experiment_keeps_invariants() {
        let cfg = ExperimentConfig {
            spec: GeneratorSpec::IidGaussian,
            statistic: Statistic::Mean,
            n_grid: vec![32],
            schedule: ScheduleParams::default(),
            replicates: 64,
            sampling_paths: 128,
            data_paths: 8,
            seed: 13,
        };
        let report = consistency_experiment(&cfg).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert!((0.0..=1.0).contains(&row.ks_median));
        assert!((0.0..=1.0).contains(&row.ks_mean));
        assert!(row.boot_var_mean >= 0.0);
        assert_eq!(row.target_sigma2, 1.0);
        assert_eq!(row.k, row.n / row.p);
    }

    #[test]
    fn experiment_is_deterministic_and_grid_prefix_stable() {
        let base = ExperimentConfig {
            spec: GeneratorSpec::Ar1 {
                phi: 0.5,
                burn_in: 100,
            },
            statistic: Statistic::Mean,
            n_grid: vec![32, 64],
            schedule: ScheduleParams::default(),
            replicates: 50,
            sampling_paths: 100,
            data_paths: 6,
            seed: 21,
        };
        let a = consistency_experiment(&base).unwrap();
        let b = consistency_experiment(&base).unwrap();
        let mut longer = base.clone();
        longer.n_grid = vec![32, 64, 128];
        let c = consistency_experiment(&longer).unwrap();
        for i in 0..2 {
            assert_eq!(a.rows[i].ks_median, b.rows[i].ks_median);
            assert_eq!(a.rows[i].ks_median, c.rows[i].ks_median);
            assert_eq!(a.rows[i].boot_var_mean, c.rows[i].boot_var_mean);
        }
    }

    #[test]
    fn experiment_rejects_bad_grids() {
        let mut cfg = ExperimentConfig {
            spec: GeneratorSpec::IidGaussian,
            statistic: Statistic::Mean,
            n_grid: vec![],
            schedule: ScheduleParams::default(),
            replicates: 10,
            sampling_paths: 10,
            data_paths: 2,
            seed: 1,
        };
        assert!(consistency_experiment(&cfg).is_err());
        cfg.n_grid = vec![64, 64];
        assert!(consistency_experiment(&cfg).is_err());
        cfg.n_grid = vec![64];
        cfg.replicates = 0;
        assert!(consistency_experiment(&cfg).is_err());
    }

    #[test]
    fn degenerate_trend_of_linear_kernel_is_null() {
        let kernel = Kernel::custom("sum", |x, y| x + y);
        let rows = degenerate_part_trend(
            &GeneratorSpec::IidGaussian,
            &kernel,
            &[64, 256],
            40,
            17,
        )
        .unwrap();
        for row in rows {
            assert!(row.variance <= 1e-3, "n = {}: {}", row.n, row.variance);
        }
    }

    #[test]
    fn degenerate_trend_decreases_for_variance_half() {
        let rows = degenerate_part_trend(
            &GeneratorSpec::IidGaussian,
            &Kernel::variance_half(),
            &[128, 2048],
            150,
            19,
        )
        .unwrap();
        assert!(
            rows[1].variance < rows[0].variance,
            "trend failed: {} -> {}",
            rows[0].variance,
            rows[1].variance
        );
    }

    #[test]
    fn report_csv_shape_and_timing_switch() {
        let cfg = ExperimentConfig {
            spec: GeneratorSpec::IidGaussian,
            statistic: Statistic::UStatistic(Kernel::gini()),
            n_grid: vec![16, 32],
            schedule: ScheduleParams::default(),
            replicates: 20,
            sampling_paths: 50,
            data_paths: 3,
            seed: 23,
        };
        let report = consistency_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text
            .lines()
            .find(|l| !l.starts_with('#'))
            .unwrap();
        assert_eq!(
            header,
            "process,statistic,n,p,k,B,M,ks_distance,boot_var_mean,target_sigma2,wall_time"
        );
        let rows: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("process"))
            .collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.ends_with(",0")));
    }
}
