//! Brute-force, exactly correct small-instance bootstrap laws, used as test
//! oracles against the closed forms in [`crate::bootstrap`].
//!
//! The mean law convolves the uniform block-sum law `k` times; the
//! U-statistic law enumerates all `k^k` equally likely block assignments and
//! evaluates each resample by a direct pairwise sum, deliberately sharing no
//! code with the table-based fast paths it is meant to check.

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::process::GeneratorSpec;
use crate::rng::derive_seed;
use crate::util::{mean, sample_variance};
use crate::{BlockPartition, TimeSeries};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io;

/// Values closer than this collapse into one support point when enumerated
/// sums are merged; floating-point block sums can differ in the last bit.
pub const MERGE_TOL: f64 = 1e-12;

/// Largest block count for the convolution-based mean law.
pub const MAX_CONVOLUTION_BLOCKS: usize = 12;

/// Largest number of block assignments (`k^k`) enumerated for the exact
/// U-statistic law.
pub const MAX_ENUMERATION: u64 = 1_000_000;

/// A finite discrete probability law with sorted support.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteLaw {
    support: Vec<(f64, f64)>, // (value, probability), values ascending
}

impl DiscreteLaw {
    /// Build from weighted points: sorts, merges values within
    /// [`MERGE_TOL`], and validates positivity and normalization.
    pub fn from_weighted(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty discrete law".into()));
        }
        points.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut support: Vec<(f64, f64)> = Vec::with_capacity(points.len());
        for (v, p) in points {
            match support.last_mut() {
                Some((last_v, last_p)) if (v - *last_v).abs() <= MERGE_TOL => *last_p += p,
                _ => support.push((v, p)),
            }
        }
        let law = DiscreteLaw { support };
        law.validate()?;
        Ok(law)
    }

    fn validate(&self) -> Result<()> {
        let mut total = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for &(v, p) in &self.support {
            if p.is_nan() || p <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "discrete law probability {p} at {v} is not positive"
                )));
            }
            if v <= prev {
                return Err(Error::InvalidArgument("discrete law support not sorted".into()));
            }
            prev = v;
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "discrete law probabilities sum to {total}"
            )));
        }
        Ok(())
    }

    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().map(|&(v, p)| v * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.support
            .iter()
            .map(|&(v, p)| p * (v - m) * (v - m))
            .sum()
    }

    /// Affine map `value -> scale * value + shift` with `scale > 0`,
    /// preserving sort order.
    fn affine(&self, scale: f64, shift: f64) -> Self {
        debug_assert!(scale > 0.0);
        DiscreteLaw {
            support: self
                .support
                .iter()
                .map(|&(v, p)| (scale * v + shift, p))
                .collect(),
        }
    }

    /// Debug CSV dump: `value,prob` rows.
    pub fn write_csv<W: io::Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "value,prob")?;
        for &(v, p) in &self.support {
            writeln!(w, "{v},{p}")?;
        }
        Ok(())
    }
}

/// Exact law of the mean pivot `sqrt(kp) (Xbar* - Xbar_kp)` by `k`-fold
/// convolution of the uniform block-sum law. Feasible for `k <= 12`.
pub fn exact_mean_law(series: &TimeSeries, part: &BlockPartition) -> Result<DiscreteLaw> {
    if series.len() != part.n() {
        return Err(Error::InvalidPartition(format!(
            "partition built for n = {} but series has length {}",
            part.n(),
            series.len()
        )));
    }
    let k = part.k();
    if k > MAX_CONVOLUTION_BLOCKS {
        return Err(Error::CapacityExceeded(format!(
            "mean law convolution supports k <= {MAX_CONVOLUTION_BLOCKS}, got k = {k}"
        )));
    }
    let x = series.values();
    let kp = part.kp() as f64;
    let xbar = mean(&x[..part.kp()]);
    let block_law = DiscreteLaw::from_weighted(
        part.blocks()
            .map(|r| (x[r].iter().sum::<f64>(), 1.0 / k as f64))
            .collect(),
    )?;
    let mut total = DiscreteLaw {
        support: vec![(0.0, 1.0)],
    };
    for _ in 0..k {
        let mut next = Vec::with_capacity(total.support.len() * block_law.support.len());
        for &(v, p) in &total.support {
            for &(bv, bp) in &block_law.support {
                next.push((v + bv, p * bp));
            }
        }
        total = DiscreteLaw::from_weighted(next)?;
    }
    // Pivot transform: sum -> sqrt(kp) (sum / kp - xbar).
    let scale = 1.0 / kp.sqrt();
    Ok(total.affine(scale, -kp.sqrt() * xbar))
}

/// Exact law of the U-statistic pivot `sqrt(kp) (U* - E*[U*])`, enumerating
/// all `k^k` block assignments; returns the law together with `E*[U*]`
/// (the pre-centering weighted mean).
pub fn exact_ustat_law(
    series: &TimeSeries,
    part: &BlockPartition,
    kernel: &Kernel,
) -> Result<(DiscreteLaw, f64)> {
    if series.len() != part.n() {
        return Err(Error::InvalidPartition(format!(
            "partition built for n = {} but series has length {}",
            part.n(),
            series.len()
        )));
    }
    let k = part.k();
    let kp = part.kp();
    if kp < 2 {
        return Err(Error::InsufficientSample { min: 2, got: kp });
    }
    let assignments = (k as u128).checked_pow(k as u32).ok_or_else(|| {
        Error::CapacityExceeded(format!("k^k overflows for k = {k}"))
    })?;
    if assignments > MAX_ENUMERATION as u128 {
        return Err(Error::CapacityExceeded(format!(
            "U-statistic law enumerates k^k = {assignments} assignments, budget {MAX_ENUMERATION}"
        )));
    }
    let x = series.values();
    let prob = 1.0 / assignments as f64;
    let pair_norm = 2.0 / (kp as f64 * (kp as f64 - 1.0));
    let points: Vec<(f64, f64)> = (0..assignments as u64)
        .into_par_iter()
        .map(|code| {
            // Decode the assignment in base k and materialize the resample.
            let mut c = code;
            let mut sample = Vec::with_capacity(kp);
            for _ in 0..k {
                let block = (c % k as u64) as usize;
                c /= k as u64;
                sample.extend_from_slice(&x[part.block(block)]);
            }
            let mut s = 0.0;
            for i in 0..kp {
                for j in i + 1..kp {
                    s += kernel.eval(sample[i], sample[j]);
                }
            }
            (pair_norm * s, prob)
        })
        .collect();
    let u_law = DiscreteLaw::from_weighted(points)?;
    let e_star = u_law.mean();
    let scale = (kp as f64).sqrt();
    let centered = u_law.affine(scale, -scale * e_star);
    Ok((centered, e_star))
}

/// Monte Carlo estimate of the long-run variance.
#[derive(Clone, Copy, Debug)]
pub struct LongRunVariance {
    pub estimate: f64,
    pub std_error: f64,
}

/// Estimate `sigma^2 = lim Var(sqrt(n) Xbar_n)` as the sample variance of
/// `sqrt(n) Xbar` across `m` independent paths of length `n`. The reported
/// standard error uses the Gaussian-limit spread of a sample variance,
/// `sigma^2 sqrt(2 / (m - 1))`.
pub fn long_run_variance_mc(
    spec: &GeneratorSpec,
    n: usize,
    m: usize,
    seed: u64,
) -> Result<LongRunVariance> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "long-run variance needs at least 2 paths, got {m}"
        )));
    }
    spec.validate()?;
    let scaled: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let series = spec
                .generate(n, derive_seed(seed, j as u64))
                .expect("spec validated");
            (n as f64).sqrt() * mean(series.values())
        })
        .collect();
    let estimate = sample_variance(&scaled);
    Ok(LongRunVariance {
        estimate,
        std_error: estimate * (2.0 / (m as f64 - 1.0)).sqrt(),
    })
}

/// Closed-form long-run variance `Var X_1 + 2 sum_k Cov(X_1, X_{1+k})` for
/// the generator families where the autocovariances telescope:
///
/// * i.i.d. standard normal: 1;
/// * AR(1): `1 / (1 - phi)^2`;
/// * doubling map: covariances `2^-k / 12` sum to `1/4` (infinite-expansion
///   value; truncation corrections are below any tolerance used here);
/// * GARCH(1,1): martingale differences are uncorrelated, so the marginal
///   variance `alpha0 / (1 - alpha1 - alpha2)`;
/// * finite Volterra: autocovariances by matching shifted lag pairs.
pub fn long_run_sigma2_analytic(spec: &GeneratorSpec) -> Option<f64> {
    match spec {
        GeneratorSpec::IidGaussian => Some(1.0),
        GeneratorSpec::Ar1 { phi, .. } => Some(1.0 / ((1.0 - phi) * (1.0 - phi))),
        GeneratorSpec::DoublingMap { .. } => Some(0.25),
        GeneratorSpec::Garch11 {
            alpha0,
            alpha1,
            alpha2,
            ..
        } => Some(alpha0 / (1.0 - alpha1 - alpha2)),
        GeneratorSpec::Volterra2 { coeffs } => Some(volterra_long_run_variance(coeffs)),
    }
}

/// Accumulate Volterra coefficients onto canonical unordered lag pairs.
pub(crate) fn volterra_pair_coeffs(coeffs: &[(usize, usize, f64)]) -> BTreeMap<(usize, usize), f64> {
    let mut map = BTreeMap::new();
    for &(u1, u2, g) in coeffs {
        let key = (u1.min(u2), u1.max(u2));
        *map.entry(key).or_insert(0.0) += g;
    }
    map
}

/// Marginal variance of the finite Volterra series: `E X^2 = sum_p G_p^2`
/// over canonical pairs (products of distinct normals are orthonormal).
pub(crate) fn volterra_marginal_variance(coeffs: &[(usize, usize, f64)]) -> f64 {
    volterra_pair_coeffs(coeffs).values().map(|g| g * g).sum()
}

fn volterra_long_run_variance(coeffs: &[(usize, usize, f64)]) -> f64 {
    let pairs = volterra_pair_coeffs(coeffs);
    let max_lag = pairs.keys().map(|&(_, b)| b).max().unwrap_or(0);
    // gamma_k = sum_p G_p G_{p + (k,k)}; zero beyond the maximal lag.
    let mut sigma2 = 0.0;
    for k in 0..=max_lag {
        let gamma: f64 = pairs
            .iter()
            .map(|(&(a, b), &g)| g * pairs.get(&(a + k, b + k)).copied().unwrap_or(0.0))
            .sum();
        sigma2 += if k == 0 { gamma } else { 2.0 * gamma };
    }
    sigma2
}
