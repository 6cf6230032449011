//! Nonoverlapping block bootstrap: partitioning, dyadic block-length
//! schedule, resampling, and exact conditional moments and pivots for the
//! sample mean and for bivariate U-statistics.
//!
//! The pseudo-sample concatenates `k` blocks of length `p` drawn i.i.d.
//! uniformly from the `k = floor(n / p)` consecutive blocks of the data;
//! observations past `k * p` are dropped. All statistics condition on the
//! observed series, so expectations and variances under the resampling law
//! have closed forms:
//!
//! * mean: `E* = mean(X_1..X_kp)` and
//!   `Var*(sqrt(kp) Xbar*) = (1/kp) sum_i (S_i - p Xbar)^2` over block sums `S_i`;
//! * U-statistic: the pair sum over a resample splits into within-slot and
//!   cross-slot block contributions, giving `E*[U*]` and `Var*(sqrt(kp) U*)`
//!   in O(k^2) after an O(n^2) table of block-pair kernel sums.
//!
//! Replicate `r` always reads RNG stream `r` of the supplied seed, so pivot
//! sets are reproducible, prefix-stable in the replicate count, and identical
//! under any thread count.

use crate::error::{Error, Result};
use crate::kernels::{u_statistic_slice, Kernel};
use crate::process::TimeSeries;
use crate::rng::stream_rng;
use crate::util::mean;
use rand::Rng;
use rayon::prelude::*;
use std::fmt;
use std::io;
use std::ops::Range;

/// Parameters of the dyadic block-length schedule `p(n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleParams {
    /// Growth exponent, in (0, 1).
    pub eps: f64,
    /// Multiplier, positive.
    pub c: f64,
    /// Lower bound on the block length, at least 2.
    pub p_min: usize,
}

impl ScheduleParams {
    pub fn new(eps: f64, c: f64, p_min: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "schedule eps must lie in (0, 1), got {eps}"
            )));
        }
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "schedule c must be positive, got {c}"
            )));
        }
        if p_min < 2 {
            return Err(Error::InvalidArgument(format!(
                "schedule p_min must be at least 2, got {p_min}"
            )));
        }
        Ok(ScheduleParams { eps, c, p_min })
    }
}

impl Default for ScheduleParams {
    /// `p(n) ~ n^(1/3)`: eps = 1/3, c = 1, p_min = 2.
    fn default() -> Self {
        ScheduleParams {
            eps: 1.0 / 3.0,
            c: 1.0,
            p_min: 2,
        }
    }
}

/// Block length for sample size `n`: with `l` the unique integer such that
/// `2^l < n <= 2^(l+1)`, returns `max(p_min, floor(c * (2^l)^eps))`. The
/// result is constant across each dyadic range by construction.
pub fn schedule_block_length(n: usize, params: &ScheduleParams) -> usize {
    let l = if n <= 2 { 0 } else { (n - 1).ilog2() };
    let base = 2f64.powi(l as i32);
    let raw = params.c * base.powf(params.eps);
    // powf can land a hair below an exact integer (64^(1/3) = 3.999...);
    // nudge before flooring.
    let p = (raw + 1e-9).floor() as usize;
    p.max(params.p_min)
}

/// The index blocks `B_i = {(i-1)p .. ip}` (0-based, half-open) of a series
/// of length `n`, with `k = floor(n / p)` blocks and the tail dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    n: usize,
    p: usize,
    k: usize,
}

impl BlockPartition {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if p == 0 || p > n {
            return Err(Error::InvalidPartition(format!(
                "block length p = {p} must satisfy 1 <= p <= n = {n}"
            )));
        }
        Ok(BlockPartition { n, p, k: n / p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Block length.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Length of the bootstrap pseudo-sample, `k * p`.
    pub fn kp(&self) -> usize {
        self.k * self.p
    }

    /// Index range of block `i`, `i < k`.
    pub fn block(&self, i: usize) -> Range<usize> {
        debug_assert!(i < self.k);
        i * self.p..(i + 1) * self.p
    }

    /// All block index ranges, in order.
    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.k).map(|i| self.block(i))
    }

    fn check_series(&self, series: &TimeSeries) -> Result<()> {
        if series.len() != self.n {
            return Err(Error::InvalidPartition(format!(
                "partition built for n = {} but series has length {}",
                self.n,
                series.len()
            )));
        }
        Ok(())
    }
}

/// Convenience constructor mirroring [`BlockPartition::new`].
pub fn partition(n: usize, p: usize) -> Result<BlockPartition> {
    BlockPartition::new(n, p)
}

fn block_sums(x: &[f64], part: &BlockPartition) -> Vec<f64> {
    part.blocks().map(|r| x[r].iter().sum()).collect()
}

/// How the pivot of a bootstrap distribution was centered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Centering {
    /// At the exact conditional expectation under the resampling law.
    Exact,
    /// At a Monte Carlo estimate (flagged fallback for large samples).
    MonteCarlo,
}

impl fmt::Display for Centering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Centering::Exact => write!(f, "exact"),
            Centering::MonteCarlo => write!(f, "monte_carlo"),
        }
    }
}

/// Provenance of a set of bootstrap replicates.
#[derive(Clone, Debug)]
pub struct BootstrapMeta {
    pub statistic: String,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub replicates: usize,
    pub seed: u64,
    pub centering: Centering,
}

/// Replicate values of a centered, scaled bootstrap statistic together with
/// its exact conditional moments.
#[derive(Clone, Debug)]
pub struct BootstrapDistribution {
    /// One pivot value per replicate, in replicate order.
    pub pivot_values: Vec<f64>,
    /// `E*` of the plain statistic.
    pub exact_expectation: f64,
    /// `Var*` of the scaled statistic, when a closed form is available.
    pub exact_variance: Option<f64>,
    pub meta: BootstrapMeta,
}

impl BootstrapDistribution {
    /// CSV dump: `#` metadata lines, a `replicate,pivot` header, then one
    /// row per replicate.
    pub fn write_csv<W: io::Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "# statistic = {}", self.meta.statistic)?;
        writeln!(w, "# n = {}", self.meta.n)?;
        writeln!(w, "# p = {}", self.meta.p)?;
        writeln!(w, "# k = {}", self.meta.k)?;
        writeln!(w, "# B = {}", self.meta.replicates)?;
        writeln!(w, "# seed = {}", self.meta.seed)?;
        writeln!(w, "# exact_expectation = {}", self.exact_expectation)?;
        match self.exact_variance {
            Some(v) => writeln!(w, "# exact_variance = {v}")?,
            None => writeln!(w, "# exact_variance = none")?,
        }
        writeln!(w, "# centering = {}", self.meta.centering)?;
        writeln!(w, "replicate,pivot")?;
        for (i, v) in self.pivot_values.iter().enumerate() {
            writeln!(w, "{},{}", i + 1, v)?;
        }
        Ok(())
    }
}

/// Resample: concatenate `k` blocks drawn i.i.d. uniformly, deterministic
/// in `draw_seed`.
pub fn resample(series: &TimeSeries, part: &BlockPartition, draw_seed: u64) -> Result<Vec<f64>> {
    part.check_series(series)?;
    let mut rng = stream_rng(draw_seed, 0);
    let draws: Vec<usize> = (0..part.k()).map(|_| rng.gen_range(0..part.k())).collect();
    resample_with_draws(series, part, &draws)
}

/// Resample from explicit block draws (test hook).
pub fn resample_with_draws(
    series: &TimeSeries,
    part: &BlockPartition,
    draws: &[usize],
) -> Result<Vec<f64>> {
    part.check_series(series)?;
    if draws.len() != part.k() {
        return Err(Error::InvalidPartition(format!(
            "need {} block draws, got {}",
            part.k(),
            draws.len()
        )));
    }
    if let Some(&bad) = draws.iter().find(|&&d| d >= part.k()) {
        return Err(Error::InvalidPartition(format!(
            "block draw {bad} out of range 0..{}",
            part.k()
        )));
    }
    let x = series.values();
    let mut out = Vec::with_capacity(part.kp());
    for &d in draws {
        out.extend_from_slice(&x[part.block(d)]);
    }
    Ok(out)
}

/// Exact conditional moments of the bootstrap mean:
/// `E* Xbar* = mean(X_1..X_kp)` and
/// `Var*(sqrt(kp) Xbar*) = (1/kp) sum_i (S_i - p Xbar)^2`.
pub fn boot_mean_exact_moments(
    series: &TimeSeries,
    part: &BlockPartition,
) -> Result<(f64, f64)> {
    part.check_series(series)?;
    let kp = part.kp();
    let x = &series.values()[..kp];
    let e_star = mean(x);
    let sums = block_sums(series.values(), part);
    let p = part.p() as f64;
    let var_scaled = sums
        .iter()
        .map(|s| {
            let d = s - p * e_star;
            d * d
        })
        .sum::<f64>()
        / kp as f64;
    Ok((e_star, var_scaled))
}

/// `B` replicates of the mean pivot `sqrt(kp) (Xbar* - Xbar_kp)` plus the
/// exact conditional moments.
pub fn boot_mean_pivot(
    series: &TimeSeries,
    part: &BlockPartition,
    replicates: usize,
    seed: u64,
) -> Result<BootstrapDistribution> {
    if replicates == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    let (e_star, var_scaled) = boot_mean_exact_moments(series, part)?;
    let sums = block_sums(series.values(), part);
    let k = part.k();
    let kp = part.kp() as f64;
    let scale = kp.sqrt();
    let pivot_values: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            let mut total = 0.0;
            for _ in 0..k {
                total += sums[rng.gen_range(0..k)];
            }
            scale * (total / kp - e_star)
        })
        .collect();
    Ok(BootstrapDistribution {
        pivot_values,
        exact_expectation: e_star,
        exact_variance: Some(var_scaled),
        meta: BootstrapMeta {
            statistic: "mean".into(),
            n: part.n(),
            p: part.p(),
            k,
            replicates,
            seed,
            centering: Centering::Exact,
        },
    })
}

/// Upper bound on block-pair table entries (`k^2`); 2 GiB of f64 sums.
pub const MAX_TABLE_ENTRIES: usize = 1 << 28;

/// Kernel sums over block pairs. `cross[a * k + b]` holds the full p x p sum
/// `sum_{r,s} h(x_{a,r}, x_{b,s})` (diagonal included, so it also covers two
/// resampled copies of the same block); `within[a]` the position-ordered sum
/// `sum_{r<s} h(x_{a,r}, x_{a,s})`. Built once in O(n^2); every replicate and
/// both exact moments then cost O(k^2).
struct BlockKernelTable {
    k: usize,
    kp: usize,
    cross: Vec<f64>,
    within: Vec<f64>,
}

impl BlockKernelTable {
    fn new(series: &TimeSeries, part: &BlockPartition, kernel: &Kernel) -> Result<Self> {
        part.check_series(series)?;
        let kp = part.kp();
        if kp < 2 {
            return Err(Error::InsufficientSample { min: 2, got: kp });
        }
        let x = series.values();
        let k = part.k();
        let p = part.p();
        if k.saturating_mul(k) > MAX_TABLE_ENTRIES {
            return Err(Error::CapacityExceeded(format!(
                "block-pair table needs k^2 = {} entries (k = {k}), budget {MAX_TABLE_ENTRIES}; \
                 use a longer block length or the Monte Carlo-centered pivot",
                k.saturating_mul(k)
            )));
        }
        // Upper-triangle rows in parallel, then mirrored into the flat table.
        let rows: Vec<Vec<f64>> = (0..k)
            .into_par_iter()
            .map(|a| {
                let xa = &x[part.block(a)];
                (a..k)
                    .map(|b| {
                        let xb = &x[part.block(b)];
                        let mut s = 0.0;
                        for &u in xa {
                            for &v in xb {
                                s += kernel.eval(u, v);
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let mut cross = vec![0.0; k * k];
        for (a, row) in rows.iter().enumerate() {
            for (off, &s) in row.iter().enumerate() {
                let b = a + off;
                cross[a * k + b] = s;
                cross[b * k + a] = s;
            }
        }
        let within: Vec<f64> = (0..k)
            .into_par_iter()
            .map(|a| {
                let xa = &x[part.block(a)];
                let mut s = 0.0;
                for r in 0..p {
                    for v in &xa[r + 1..] {
                        s += kernel.eval(xa[r], *v);
                    }
                }
                s
            })
            .collect();
        Ok(BlockKernelTable {
            k,
            kp,
            cross,
            within,
        })
    }

    fn u_scale(&self) -> f64 {
        2.0 / (self.kp as f64 * (self.kp as f64 - 1.0))
    }

    /// Pair sum of the resample given by `draws`, i.e.
    /// `sum_{i<j<=kp} h(X*_i, X*_j)`.
    fn pair_sum(&self, draws: &[usize]) -> f64 {
        let k = self.k;
        let mut t = 0.0;
        for &b in draws {
            t += self.within[b];
        }
        for i in 0..draws.len() {
            let row = &self.cross[draws[i] * k..(draws[i] + 1) * k];
            for &b in &draws[i + 1..] {
                t += row[b];
            }
        }
        t
    }

    fn u_of_draws(&self, draws: &[usize]) -> f64 {
        self.u_scale() * self.pair_sum(draws)
    }

    /// Exact `E*[U*]`: same-slot position pairs average the within-block sum
    /// over one uniform block; cross-slot pairs average the block-pair sum
    /// over two independent uniform blocks.
    fn expectation(&self) -> f64 {
        let k = self.k as f64;
        let within_total: f64 = self.within.iter().sum();
        let cross_total: f64 = self.cross.iter().sum();
        let slot_pairs = k * (k - 1.0) / 2.0;
        self.u_scale() * (within_total + slot_pairs / (k * k) * cross_total)
    }

    /// Exact `Var*(sqrt(kp) U*)`.
    ///
    /// The resample pair sum is `T = sum_i D(b_i) + sum_{i<j} W(b_i, b_j)`
    /// in the i.i.d. uniform block draws, a linear part plus a (possibly
    /// non-degenerate) pair part, so its variance reduces to first and second
    /// moments of the within/cross tables.
    fn variance_scaled(&self) -> f64 {
        let k = self.k as f64;
        let kp = self.kp as f64;
        let d_bar = mean(&self.within);
        let d_sq = self.within.iter().map(|d| d * d).sum::<f64>() / k;
        let sig_g2 = d_sq - d_bar * d_bar;

        let w_bar = self.cross.iter().sum::<f64>() / (k * k);
        let w_sq = self.cross.iter().map(|w| w * w).sum::<f64>() / (k * k);
        let var_w = w_sq - w_bar * w_bar;

        let rows: Vec<f64> = (0..self.k)
            .map(|a| self.cross[a * self.k..(a + 1) * self.k].iter().sum::<f64>() / k)
            .collect();
        let row_sq = rows.iter().map(|r| r * r).sum::<f64>() / k;
        let cov_w = row_sq - w_bar * w_bar;

        let gw = self
            .within
            .iter()
            .zip(&rows)
            .map(|(d, r)| d * r)
            .sum::<f64>()
            / k;
        let cov_gw = gw - d_bar * w_bar;

        let pairs = k * (k - 1.0) / 2.0;
        let var_t = k * sig_g2
            + pairs * (var_w + 2.0 * (k - 2.0) * cov_w)
            + 2.0 * k * (k - 1.0) * cov_gw;
        // Clamp: pure rounding can leave a tiny negative on degenerate input.
        (4.0 * var_t / (kp * (kp - 1.0) * (kp - 1.0))).max(0.0)
    }
}

/// Exact conditional expectation `E*[U*]` of the bootstrapped U-statistic,
/// via the within-slot / cross-slot block decomposition in O(n^2).
pub fn boot_ustat_exact_expectation(
    series: &TimeSeries,
    part: &BlockPartition,
    kernel: &Kernel,
) -> Result<f64> {
    Ok(BlockKernelTable::new(series, part, kernel)?.expectation())
}

/// `B` replicates of the U-statistic pivot `sqrt(kp) (U* - E*[U*])` with the
/// exact centering, plus the exact conditional variance of the scaled
/// statistic.
pub fn boot_ustat_pivot(
    series: &TimeSeries,
    part: &BlockPartition,
    kernel: &Kernel,
    replicates: usize,
    seed: u64,
) -> Result<BootstrapDistribution> {
    if replicates == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    let table = BlockKernelTable::new(series, part, kernel)?;
    let e_star = table.expectation();
    let var_scaled = table.variance_scaled();
    let k = part.k();
    let scale = (part.kp() as f64).sqrt();
    let pivot_values: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            let draws: Vec<usize> = (0..k).map(|_| rng.gen_range(0..k)).collect();
            scale * (table.u_of_draws(&draws) - e_star)
        })
        .collect();
    Ok(BootstrapDistribution {
        pivot_values,
        exact_expectation: e_star,
        exact_variance: Some(var_scaled),
        meta: BootstrapMeta {
            statistic: kernel.id().to_string(),
            n: part.n(),
            p: part.p(),
            k,
            replicates,
            seed,
            centering: Centering::Exact,
        },
    })
}

/// U-statistic pivot with Monte Carlo centering: replicates are centered at
/// their own mean instead of the exact `E*[U*]`, skipping the O(n^2) table.
/// Flagged via `meta.centering`; intended for samples too large for the
/// exact route (roughly n > 20000). Uses the same replicate streams as
/// [`boot_ustat_pivot`].
pub fn boot_ustat_pivot_mc(
    series: &TimeSeries,
    part: &BlockPartition,
    kernel: &Kernel,
    replicates: usize,
    seed: u64,
) -> Result<BootstrapDistribution> {
    if replicates == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    part.check_series(series)?;
    if part.kp() < 2 {
        return Err(Error::InsufficientSample {
            min: 2,
            got: part.kp(),
        });
    }
    let k = part.k();
    let scale = (part.kp() as f64).sqrt();
    let u_values: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            let draws: Vec<usize> = (0..k).map(|_| rng.gen_range(0..k)).collect();
            let sample = resample_with_draws(series, part, &draws).expect("draws validated");
            u_statistic_slice(&sample, kernel).expect("kp >= 2")
        })
        .collect();
    let center = mean(&u_values);
    let pivot_values = u_values.iter().map(|u| scale * (u - center)).collect();
    Ok(BootstrapDistribution {
        pivot_values,
        exact_expectation: center,
        exact_variance: None,
        meta: BootstrapMeta {
            statistic: kernel.id().to_string(),
            n: part.n(),
            p: part.p(),
            k,
            replicates,
            seed,
            centering: Centering::MonteCarlo,
        },
    })
}
