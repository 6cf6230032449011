//! Nonoverlapping block bootstrap for dependent time series.
//!
//! This crate simulates a family of stationary example processes (an i.i.d.
//! baseline, AR(1), the dyadic doubling map, GARCH(1,1), and finite
//! second-order Volterra series), evaluates bivariate U-statistics and their
//! empirical Hoeffding decomposition, and implements the nonoverlapping block
//! bootstrap for the sample mean and for U-statistics: block partitioning, a
//! dyadic block-length schedule, resampling, exact conditional moments, and
//! replicate pivots.
//!
//! Two supporting layers make the numerics testable:
//!
//! * [`oracle`] computes exact small-instance bootstrap laws by convolution
//!   and brute-force enumeration, used to validate the closed forms in
//!   [`bootstrap`].
//! * [`experiments`] runs Monte Carlo convergence experiments: empirical
//!   CDFs, sup-distances between bootstrap and sampling distributions, and
//!   trend reports over a grid of sample sizes.
//!
//! All randomness flows through counter-based ChaCha streams keyed by
//! `(seed, stream)` pairs (see [`rng`]), so every result is reproducible and
//! independent of thread count.

pub mod bootstrap;
pub mod ecdf;
pub mod error;
pub mod experiments;
pub mod kernels;
pub mod oracle;
pub mod process;
pub mod rng;

mod util;

pub use bootstrap::{
    boot_mean_exact_moments, boot_mean_pivot, boot_ustat_exact_expectation, boot_ustat_pivot,
    boot_ustat_pivot_mc, partition, resample, resample_with_draws, schedule_block_length,
    BlockPartition, BootstrapDistribution, BootstrapMeta, Centering, ScheduleParams,
};
pub use ecdf::{ks_distance, ks_distance_to_cdf, EmpiricalCdf};
pub use error::{Error, Result};
pub use experiments::{
    consistency_experiment, degenerate_part_trend, sampling_distribution, DegenerateTrendRow,
    ExperimentConfig, ExperimentReport, ExperimentRow, SamplingDistribution, Statistic,
};
pub use kernels::{
    degenerate_u_statistic, hoeffding_decompose, p_lipschitz_probe, u_statistic, HoeffdingParts,
    Kernel, KernelId, LipschitzProbe,
};
pub use oracle::{
    exact_mean_law, exact_ustat_law, long_run_sigma2_analytic, long_run_variance_mc, DiscreteLaw,
    LongRunVariance,
};
pub use process::{
    ar1_from_innovations, doubling_map_from_bits, garch11_from_innovations, gen_ar1,
    gen_doubling_map, gen_garch11, gen_iid_gaussian, gen_volterra2, volterra2_from_innovations,
    DecayClass, GeneratorSpec, SeriesSource, TimeSeries,
};
