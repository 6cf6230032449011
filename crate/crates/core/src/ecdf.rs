//! Empirical distribution functions and the exact sup-distance between them.

use crate::error::{Error, Result};

/// An empirical CDF: right-continuous, nondecreasing step function built
/// from a finite sample.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    samples: Vec<f64>, // sorted ascending
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyCdf);
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "empirical cdf samples must be finite".into(),
            ));
        }
        samples.sort_unstable_by(f64::total_cmp);
        Ok(EmpiricalCdf { samples })
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        let count = self.samples.partition_point(|&v| v <= x);
        count as f64 / self.samples.len() as f64
    }

    /// The sorted sample.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Exact sup-distance between two empirical CDFs.
///
/// Both functions are piecewise constant with jumps only at sample points,
/// so the supremum is attained at a jump; a single merge over both jump sets
/// computes it exactly.
pub fn ks_distance(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    let xs = a.samples();
    let ys = b.samples();
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut ia = 0;
    let mut ib = 0;
    let mut max = 0.0_f64;
    while ia < xs.len() || ib < ys.len() {
        let v = match (xs.get(ia), ys.get(ib)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while ia < xs.len() && xs[ia] <= v {
            ia += 1;
        }
        while ib < ys.len() && ys[ib] <= v {
            ib += 1;
        }
        let d = (ia as f64 / na - ib as f64 / nb).abs();
        if d > max {
            max = d;
        }
    }
    max
}

/// Sup-distance between an empirical CDF and a reference CDF `cdf`.
///
/// For each sorted sample point both the left and right limits of the step
/// function are compared against the reference.
pub fn ks_distance_to_cdf<F: Fn(f64) -> f64>(a: &EmpiricalCdf, cdf: F) -> f64 {
    let xs = a.samples();
    let n = xs.len() as f64;
    let mut max = 0.0_f64;
    let mut below = 0usize;
    let mut i = 0;
    while i < xs.len() {
        let v = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == v {
            j += 1;
        }
        let f = cdf(v);
        let lo = (f - below as f64 / n).abs();
        let hi = (j as f64 / n - f).abs();
        max = max.max(lo).max(hi);
        below = j;
        i = j;
    }
    max
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-(x * x) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal CDF via a rational approximation of erf
/// (Abramowitz & Stegun 7.1.26, absolute error < 1.5e-7).
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

fn erf(x: f64) -> f64 {
    const A1: f64 = 0.254829592;
    const A2: f64 = -0.284496736;
    const A3: f64 = 1.421413741;
    const A4: f64 = -1.453152027;
    const A5: f64 = 1.061405429;
    const P: f64 = 0.3275911;
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + P * x);
    let y = 1.0 - ((((A5 * t + A4) * t + A3) * t + A2) * t + A1) * t * (-x * x).exp();
    sign * y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sample_is_rejected() {
        assert!(matches!(EmpiricalCdf::new(vec![]), Err(Error::EmptyCdf)));
    }

    #[test]
    fn eval_is_right_continuous_stepper() {
        let f = EmpiricalCdf::new(vec![1.0, 2.0, 2.0, 5.0]).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(1.0), 0.25);
        assert_eq!(f.eval(1.5), 0.25);
        assert_eq!(f.eval(2.0), 0.75);
        assert_eq!(f.eval(5.0), 1.0);
        assert_eq!(f.eval(100.0), 1.0);
    }

    #[test]
    fn identical_samples_have_zero_distance() {
        let a = EmpiricalCdf::new(vec![3.0, 1.0, 2.0]).unwrap();
        let b = EmpiricalCdf::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(ks_distance(&a, &b), 0.0);
    }

    #[test]
    fn point_masses_at_distinct_values_are_distance_one() {
        let a = EmpiricalCdf::new(vec![0.0]).unwrap();
        let b = EmpiricalCdf::new(vec![1.0]).unwrap();
        assert_eq!(ks_distance(&a, &b), 1.0);
    }

    #[test]
    fn interleaved_pairs_give_one_half() {
        let a = EmpiricalCdf::new(vec![1.0, 3.0]).unwrap();
        let b = EmpiricalCdf::new(vec![2.0, 4.0]).unwrap();
        assert_eq!(ks_distance(&a, &b), 0.5);
    }

    #[test]
    fn distance_is_symmetric() {
        let a = EmpiricalCdf::new(vec![0.1, 0.7, 2.3]).unwrap();
        let b = EmpiricalCdf::new(vec![-1.0, 0.7, 0.9, 3.0]).unwrap();
        assert_eq!(ks_distance(&a, &b), ks_distance(&b, &a));
    }

    #[test]
    fn one_sample_distance_against_own_cdf_is_small() {
        // Uniform grid vs the uniform CDF: max deviation is 1/(2n) at the
        // midpoints, 1/n at the step corners.
        let n = 100;
        let samples: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        let f = EmpiricalCdf::new(samples).unwrap();
        let d = ks_distance_to_cdf(&f, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.01).abs() < 1e-12, "d = {d}");
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert!((std_normal_cdf(0.0) - 0.5).abs() < 1e-7);
        assert!((std_normal_cdf(1.959963985) - 0.975).abs() < 1e-6);
        assert!((std_normal_cdf(-1.0) - 0.15865525).abs() < 1e-6);
    }
}
