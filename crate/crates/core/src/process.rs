//! Seeded simulation of the dependent example processes and an i.i.d. baseline.
//!
//! All generators are pure functions of `(spec, seed)`: the same pair always
//! produces the same series, and generation is safe to run concurrently.
//! Innovations are drawn step by step from a single stream, so two runs that
//! differ only in `burn_in` see the same innovation at the same recursion
//! step; the `*_from_innovations` / `*_from_bits` constructors expose that
//! stream for tests.

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt;
use std::io;

/// Default warm-up length for the recursive generators (AR(1), GARCH).
pub const DEFAULT_BURN_IN: usize = 1000;

/// Default truncation depth of the doubling-map bit expansion. 64 bits takes
/// the marginal law to (beyond) f64 precision.
pub const DEFAULT_TAIL_BITS: u32 = 64;

/// Documented decay class of the dependence coefficients of a family.
///
/// This is metadata only: mixing and approximation coefficients are not
/// estimable from data, so generators merely record the theoretical class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayClass {
    /// Coefficients decay at a geometric rate (or vanish beyond a finite lag).
    Geometric,
    /// Coefficients decay polynomially.
    Polynomial,
    /// No dependence to decay (i.i.d.).
    None,
}

/// A process family together with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    /// Independent standard normal draws.
    IidGaussian,
    /// `X_t = phi * X_{t-1} + e_t` with standard normal innovations.
    Ar1 { phi: f64, burn_in: usize },
    /// Truncated binary expansion driven by fair coin flips, so that
    /// `X_{i+1} = 2 X_i mod 1` holds along the path up to the truncation.
    DoublingMap { tail_bits: u32 },
    /// `X_t = sigma_t Z_t`, `sigma_t^2 = alpha0 + alpha1 X_{t-1}^2 + alpha2 sigma_{t-1}^2`.
    Garch11 {
        alpha0: f64,
        alpha1: f64,
        alpha2: f64,
        burn_in: usize,
    },
    /// Finite second-order Volterra series
    /// `X_t = sum g(u1,u2) Z_{t-u1} Z_{t-u2}` with `u1 != u2` everywhere.
    Volterra2 { coeffs: Vec<(usize, usize, f64)> },
}

impl GeneratorSpec {
    /// Check the family-specific parameter invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::IidGaussian => Ok(()),
            GeneratorSpec::Ar1 { phi, .. } => {
                if !phi.is_finite() || phi.abs() >= 1.0 {
                    Err(Error::NonstationaryParameter(format!(
                        "ar1 requires |phi| < 1, got phi = {phi}"
                    )))
                } else {
                    Ok(())
                }
            }
            GeneratorSpec::DoublingMap { tail_bits } => {
                if *tail_bits == 0 || *tail_bits > 64 {
                    Err(Error::InvalidArgument(format!(
                        "doubling_map requires 1 <= tail_bits <= 64, got {tail_bits}"
                    )))
                } else {
                    Ok(())
                }
            }
            GeneratorSpec::Garch11 {
                alpha0,
                alpha1,
                alpha2,
                ..
            } => {
                if !(alpha0.is_finite() && alpha1.is_finite() && alpha2.is_finite()) {
                    return Err(Error::NonstationaryParameter(
                        "garch11 parameters must be finite".into(),
                    ));
                }
                if *alpha0 <= 0.0 {
                    return Err(Error::NonstationaryParameter(format!(
                        "garch11 requires alpha0 > 0, got {alpha0}"
                    )));
                }
                if *alpha1 < 0.0 || *alpha2 < 0.0 {
                    return Err(Error::NonstationaryParameter(
                        "garch11 requires alpha1 >= 0 and alpha2 >= 0".into(),
                    ));
                }
                if alpha1 + alpha2 >= 1.0 {
                    return Err(Error::NonstationaryParameter(format!(
                        "garch11 requires alpha1 + alpha2 < 1, got {}",
                        alpha1 + alpha2
                    )));
                }
                Ok(())
            }
            GeneratorSpec::Volterra2 { coeffs } => {
                for &(u1, u2, g) in coeffs {
                    if u1 == u2 {
                        return Err(Error::InvalidCoefficient(format!(
                            "volterra2 coefficient at lags ({u1},{u2}) sits on the diagonal"
                        )));
                    }
                    if !g.is_finite() {
                        return Err(Error::InvalidCoefficient(format!(
                            "volterra2 coefficient at lags ({u1},{u2}) is not finite"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Theoretical decay class of the family's dependence coefficients.
    ///
    /// The finite Volterra truncation has coefficients that vanish beyond the
    /// maximal lag, which we file under `Geometric`.
    pub fn decay_class(&self) -> DecayClass {
        match self {
            GeneratorSpec::IidGaussian => DecayClass::None,
            GeneratorSpec::Ar1 { .. }
            | GeneratorSpec::DoublingMap { .. }
            | GeneratorSpec::Garch11 { .. }
            | GeneratorSpec::Volterra2 { .. } => DecayClass::Geometric,
        }
    }

    /// Generate a length-`n` path under this spec.
    pub fn generate(&self, n: usize, seed: u64) -> Result<TimeSeries> {
        match self {
            GeneratorSpec::IidGaussian => gen_iid_gaussian(n, seed),
            GeneratorSpec::Ar1 { phi, burn_in } => gen_ar1(*phi, n, seed, *burn_in),
            GeneratorSpec::DoublingMap { tail_bits } => gen_doubling_map(n, seed, *tail_bits),
            GeneratorSpec::Garch11 {
                alpha0,
                alpha1,
                alpha2,
                burn_in,
            } => gen_garch11(*alpha0, *alpha1, *alpha2, n, seed, *burn_in),
            GeneratorSpec::Volterra2 { coeffs } => gen_volterra2(coeffs, n, seed),
        }
    }
}

// Display strings avoid commas so they can sit inside CSV fields.
impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::IidGaussian => write!(f, "iid_gaussian"),
            GeneratorSpec::Ar1 { phi, burn_in } => {
                write!(f, "ar1(phi={phi};burn_in={burn_in})")
            }
            GeneratorSpec::DoublingMap { tail_bits } => {
                write!(f, "doubling_map(tail_bits={tail_bits})")
            }
            GeneratorSpec::Garch11 {
                alpha0,
                alpha1,
                alpha2,
                burn_in,
            } => write!(
                f,
                "garch11(alpha0={alpha0};alpha1={alpha1};alpha2={alpha2};burn_in={burn_in})"
            ),
            GeneratorSpec::Volterra2 { coeffs } => {
                write!(f, "volterra2(")?;
                for (i, (u1, u2, g)) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{u1}:{u2}:{g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Where a series came from.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesSource {
    Generated(GeneratorSpec),
    External,
}

impl fmt::Display for SeriesSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesSource::Generated(spec) => write!(f, "{spec}"),
            SeriesSource::External => write!(f, "external"),
        }
    }
}

/// An observed or simulated real-valued path with generator provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    source: SeriesSource,
    seed: u64,
}

impl TimeSeries {
    /// Wrap externally supplied values. All values must be finite and the
    /// series nonempty.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidLength { min: 1, got: 0 });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "series contains a non-finite value: {bad}"
            )));
        }
        Ok(TimeSeries {
            values,
            source: SeriesSource::External,
            seed: 0,
        })
    }

    fn generated(values: Vec<f64>, spec: GeneratorSpec, seed: u64) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        TimeSeries {
            values,
            source: SeriesSource::Generated(spec),
            seed,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source(&self) -> &SeriesSource {
        &self.source
    }

    /// Seed the series was generated from; 0 for external or hook-built data.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Single-column CSV: a one-line `#` header naming the generator and
    /// seed, a `value` column header, then one value per row.
    pub fn write_csv<W: io::Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "# series generator={} seed={} n={}", self.source, self.seed, self.len())?;
        writeln!(w, "value")?;
        for v in &self.values {
            writeln!(w, "{v}")?;
        }
        Ok(())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidLength { min: 1, got: 0 })
    } else {
        Ok(())
    }
}

fn draw_normals(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// `n` independent standard normal draws.
pub fn gen_iid_gaussian(n: usize, seed: u64) -> Result<TimeSeries> {
    check_n(n)?;
    Ok(TimeSeries::generated(
        draw_normals(n, seed),
        GeneratorSpec::IidGaussian,
        seed,
    ))
}

/// AR(1) path with standard normal innovations; the first `burn_in` values
/// of the recursion are discarded.
pub fn gen_ar1(phi: f64, n: usize, seed: u64, burn_in: usize) -> Result<TimeSeries> {
    check_n(n)?;
    let spec = GeneratorSpec::Ar1 { phi, burn_in };
    spec.validate()?;
    let innovations = draw_normals(n + burn_in, seed);
    let mut series = ar1_from_innovations(phi, burn_in, &innovations)?;
    series.source = SeriesSource::Generated(spec);
    series.seed = seed;
    Ok(series)
}

/// AR(1) driven by an explicit innovation stream (test hook). The recursion
/// starts at 0 and runs over the whole stream; the first `burn_in` outputs
/// are dropped, so the output length is `innovations.len() - burn_in`.
pub fn ar1_from_innovations(phi: f64, burn_in: usize, innovations: &[f64]) -> Result<TimeSeries> {
    GeneratorSpec::Ar1 { phi, burn_in }.validate()?;
    if innovations.len() <= burn_in {
        return Err(Error::InvalidLength {
            min: burn_in + 1,
            got: innovations.len(),
        });
    }
    let mut out = Vec::with_capacity(innovations.len() - burn_in);
    let mut x = 0.0;
    for (t, e) in innovations.iter().enumerate() {
        x = phi * x + e;
        if t >= burn_in {
            out.push(x);
        }
    }
    Ok(TimeSeries::generated(
        out,
        GeneratorSpec::Ar1 { phi, burn_in },
        0,
    ))
}

/// Doubling-map path: `X_i` is the number with binary digits
/// `Z_i Z_{i+1} .. Z_{i+tail_bits-1}` for i.i.d. fair bits `Z`, so that
/// `X_{i+1} = 2 X_i mod 1` up to the truncation error `2^-tail_bits`.
///
/// For `tail_bits <= 52` each `X_i` is exactly representable and the dyadic
/// identity holds to the stated bound in f64; beyond 52 bits the marginal
/// stays accurate to machine precision but rounding of the low-order bits
/// dominates the identity.
pub fn gen_doubling_map(n: usize, seed: u64, tail_bits: u32) -> Result<TimeSeries> {
    check_n(n)?;
    let spec = GeneratorSpec::DoublingMap { tail_bits };
    spec.validate()?;
    let bits = draw_bits(n + tail_bits as usize - 1, seed);
    let mut series = doubling_map_from_bits(&bits, tail_bits)?;
    series.source = SeriesSource::Generated(spec);
    series.seed = seed;
    Ok(series)
}

/// Doubling-map path from an explicit bit stream (test hook). Produces
/// `bits.len() + 1 - tail_bits` values.
pub fn doubling_map_from_bits(bits: &[u8], tail_bits: u32) -> Result<TimeSeries> {
    GeneratorSpec::DoublingMap { tail_bits }.validate()?;
    let t = tail_bits as usize;
    if bits.len() < t {
        return Err(Error::InvalidLength {
            min: t,
            got: bits.len(),
        });
    }
    if let Some(bad) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::InvalidArgument(format!(
            "doubling_map bits must be 0 or 1, got {bad}"
        )));
    }
    let n = bits.len() + 1 - t;
    let scale = 2.0_f64.powi(-(tail_bits as i32));
    let mask = if tail_bits == 64 {
        u64::MAX
    } else {
        (1u64 << tail_bits) - 1
    };
    // Sliding bit window: the leading bit of `window` is Z_i.
    let mut window: u64 = 0;
    for &b in &bits[..t] {
        window = (window << 1) | b as u64;
    }
    let mut out = Vec::with_capacity(n);
    out.push(window as f64 * scale);
    for &b in &bits[t..] {
        window = ((window << 1) & mask) | b as u64;
        out.push(window as f64 * scale);
    }
    Ok(TimeSeries::generated(
        out,
        GeneratorSpec::DoublingMap { tail_bits },
        0,
    ))
}

fn draw_bits(count: usize, seed: u64) -> Vec<u8> {
    let mut rng = stream_rng(seed, 0);
    let mut bits = Vec::with_capacity(count);
    let mut word = 0u64;
    let mut avail = 0u32;
    for _ in 0..count {
        if avail == 0 {
            word = rng.gen();
            avail = 64;
        }
        bits.push((word & 1) as u8);
        word >>= 1;
        avail -= 1;
    }
    bits
}

/// GARCH(1,1) path with standard normal innovations. The variance recursion
/// is seeded at the unconditional variance `alpha0 / (1 - alpha1 - alpha2)`
/// and the first `burn_in` values are discarded.
pub fn gen_garch11(
    alpha0: f64,
    alpha1: f64,
    alpha2: f64,
    n: usize,
    seed: u64,
    burn_in: usize,
) -> Result<TimeSeries> {
    check_n(n)?;
    let spec = GeneratorSpec::Garch11 {
        alpha0,
        alpha1,
        alpha2,
        burn_in,
    };
    spec.validate()?;
    let innovations = draw_normals(n + burn_in, seed);
    let mut series = garch11_from_innovations(alpha0, alpha1, alpha2, burn_in, &innovations)?;
    series.source = SeriesSource::Generated(spec);
    series.seed = seed;
    Ok(series)
}

/// GARCH(1,1) driven by an explicit innovation stream (test hook).
pub fn garch11_from_innovations(
    alpha0: f64,
    alpha1: f64,
    alpha2: f64,
    burn_in: usize,
    innovations: &[f64],
) -> Result<TimeSeries> {
    let spec = GeneratorSpec::Garch11 {
        alpha0,
        alpha1,
        alpha2,
        burn_in,
    };
    spec.validate()?;
    if innovations.len() <= burn_in {
        return Err(Error::InvalidLength {
            min: burn_in + 1,
            got: innovations.len(),
        });
    }
    let mut out = Vec::with_capacity(innovations.len() - burn_in);
    let mut sig2 = alpha0 / (1.0 - alpha1 - alpha2);
    for (t, z) in innovations.iter().enumerate() {
        let x = sig2.sqrt() * z;
        if t >= burn_in {
            out.push(x);
        }
        sig2 = alpha0 + alpha1 * x * x + alpha2 * sig2;
    }
    Ok(TimeSeries::generated(out, spec, 0))
}

/// Finite second-order Volterra series from i.i.d. standard normal
/// innovations, with enough pre-samples that `X_1` is fully determined.
pub fn gen_volterra2(coeffs: &[(usize, usize, f64)], n: usize, seed: u64) -> Result<TimeSeries> {
    check_n(n)?;
    let spec = GeneratorSpec::Volterra2 {
        coeffs: coeffs.to_vec(),
    };
    spec.validate()?;
    let max_lag = coeffs
        .iter()
        .map(|&(u1, u2, _)| u1.max(u2))
        .max()
        .unwrap_or(0);
    let innovations = draw_normals(n + max_lag, seed);
    let mut series = volterra2_from_innovations(coeffs, &innovations)?;
    series.source = SeriesSource::Generated(spec);
    series.seed = seed;
    Ok(series)
}

/// Volterra series from an explicit innovation stream (test hook). The first
/// `max_lag` entries are pre-samples; the output has
/// `innovations.len() - max_lag` values.
pub fn volterra2_from_innovations(
    coeffs: &[(usize, usize, f64)],
    innovations: &[f64],
) -> Result<TimeSeries> {
    let spec = GeneratorSpec::Volterra2 {
        coeffs: coeffs.to_vec(),
    };
    spec.validate()?;
    let max_lag = coeffs
        .iter()
        .map(|&(u1, u2, _)| u1.max(u2))
        .max()
        .unwrap_or(0);
    if innovations.len() <= max_lag {
        return Err(Error::InvalidLength {
            min: max_lag + 1,
            got: innovations.len(),
        });
    }
    let n = innovations.len() - max_lag;
    let out = (0..n)
        .map(|t| {
            coeffs
                .iter()
                .map(|&(u1, u2, g)| g * innovations[t + max_lag - u1] * innovations[t + max_lag - u2])
                .sum()
        })
        .collect();
    Ok(TimeSeries::generated(out, spec, 0))
}
