//! Small numeric helpers shared across modules.

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (denominator n - 1), two-pass.
pub(crate) fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    assert!(n >= 2, "sample variance needs at least two values");
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
}

/// Median of the values; even-length inputs average the two middle entries.
pub(crate) fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let n = v.len();
    assert!(n > 0, "median of empty slice");
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
