//! Property tests for the metric, CDF, kernel, and resampling invariants.

use blockboot_core::{
    boot_mean_exact_moments, boot_mean_pivot, doubling_map_from_bits, exact_mean_law,
    hoeffding_decompose, ks_distance, partition, resample, schedule_block_length, u_statistic,
    EmpiricalCdf, Kernel, ScheduleParams, TimeSeries,
};
use proptest::prelude::*;

fn finite_vec(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, len)
}

fn cdf(values: Vec<f64>) -> EmpiricalCdf {
    EmpiricalCdf::new(values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ks_is_a_metric_on_sample_multisets(
        a in finite_vec(1..30),
        b in finite_vec(1..30),
        c in finite_vec(1..30),
    ) {
        let (fa, fb, fc) = (cdf(a.clone()), cdf(b.clone()), cdf(c));
        let dab = ks_distance(&fa, &fb);
        let dba = ks_distance(&fb, &fa);
        prop_assert!((0.0..=1.0).contains(&dab));
        prop_assert_eq!(dab, dba);
        prop_assert_eq!(ks_distance(&fa, &fa), 0.0);
        // Triangle inequality, with headroom for the two float subtractions.
        let dac = ks_distance(&fa, &fc);
        let dcb = ks_distance(&fc, &fb);
        prop_assert!(dab <= dac + dcb + 1e-12);
    }

    #[test]
    fn ks_zero_iff_same_sorted_sample(mut a in finite_vec(1..30), bump in 0.5f64..2.0) {
        let fa = cdf(a.clone());
        let mut shuffled = a.clone();
        shuffled.reverse();
        prop_assert_eq!(ks_distance(&fa, &cdf(shuffled)), 0.0);
        // Moving the largest sample point strictly up makes the multisets,
        // and hence the CDFs, differ.
        let last = a.len() - 1;
        a.sort_unstable_by(f64::total_cmp);
        a[last] += bump;
        prop_assert!(ks_distance(&fa, &cdf(a)) > 0.0);
    }

    #[test]
    fn ecdf_is_monotone_with_full_range(values in finite_vec(1..40), x in -200.0f64..200.0, dx in 0.0f64..50.0) {
        let f = cdf(values);
        prop_assert!(f.eval(x) <= f.eval(x + dx) + 1e-15);
        prop_assert_eq!(f.eval(-1e9), 0.0);
        prop_assert_eq!(f.eval(1e9), 1.0);
    }

    #[test]
    fn u_statistic_ignores_observation_order(values in finite_vec(2..40), rot in 0usize..40) {
        let rot = rot % values.len();
        let mut rotated = values.clone();
        rotated.rotate_left(rot);
        let a = TimeSeries::from_values(values).unwrap();
        let b = TimeSeries::from_values(rotated).unwrap();
        for kernel in [Kernel::gini(), Kernel::variance_half(), Kernel::product()] {
            let ua = u_statistic(&a, &kernel).unwrap();
            let ub = u_statistic(&b, &kernel).unwrap();
            prop_assert!((ua - ub).abs() <= 1e-9 * (1.0 + ua.abs()));
        }
    }

    #[test]
    fn hoeffding_reconstruction_and_centering(values in finite_vec(2..30)) {
        let ts = TimeSeries::from_values(values.clone()).unwrap();
        let kernel = Kernel::gini();
        let parts = hoeffding_decompose(&ts, &kernel).unwrap();
        let n = values.len();
        let scale = 1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            let rebuilt = parts.theta_hat() + parts.h1_values()[i] + parts.h1_values()[0]
                + parts.h2(i, 0);
            prop_assert!((rebuilt - kernel.eval(values[i], values[0])).abs() <= 1e-10 * scale);
            let row: f64 = (0..n).map(|j| parts.h2(i, j)).sum::<f64>() / n as f64;
            prop_assert!(row.abs() <= 1e-10 * scale);
        }
        let h1_mean = parts.h1_values().iter().sum::<f64>() / n as f64;
        prop_assert!(h1_mean.abs() <= 1e-10 * scale);
    }

    #[test]
    fn resamples_are_block_concatenations(values in finite_vec(4..40), p in 1usize..6, draw_seed in 0u64..1000) {
        prop_assume!(p <= values.len());
        let ts = TimeSeries::from_values(values).unwrap();
        let part = partition(ts.len(), p).unwrap();
        let out = resample(&ts, &part, draw_seed).unwrap();
        prop_assert_eq!(out.len(), part.kp());
        for chunk in out.chunks(p) {
            prop_assert!(part.blocks().any(|r| &ts.values()[r] == chunk));
        }
    }

    #[test]
    fn mean_law_variance_always_matches_closed_form(values in finite_vec(4..25), p in 1usize..5) {
        prop_assume!(p <= values.len() && values.len() / p <= 8);
        let ts = TimeSeries::from_values(values).unwrap();
        let part = partition(ts.len(), p).unwrap();
        let law = exact_mean_law(&ts, &part).unwrap();
        // Law invariants after merging.
        let total: f64 = law.support().iter().map(|&(_, pr)| pr).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(law.support().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(law.support().iter().all(|&(_, pr)| pr > 0.0));
        let (_, var) = boot_mean_exact_moments(&ts, &part).unwrap();
        let scale = 1.0 + var.abs();
        prop_assert!((law.variance() - var).abs() <= 1e-9 * scale);
    }

    #[test]
    fn doubling_map_identity_in_the_exact_regime(
        bits in prop::collection::vec(0u8..2, 60..200),
        tail_bits in 1u32..53,
    ) {
        prop_assume!(bits.len() >= tail_bits as usize);
        let ts = doubling_map_from_bits(&bits, tail_bits).unwrap();
        let bound = 2.0f64.powi(1 - tail_bits as i32);
        let x = ts.values();
        for i in 0..x.len() - 1 {
            let fwd = (2.0_f64 * x[i]).fract();
            prop_assert!((fwd - x[i + 1]).abs() <= bound);
        }
    }

    #[test]
    fn mean_pivot_scale_equivariance(values in finite_vec(6..30), p in 1usize..4, a in 0.25f64..4.0) {
        prop_assume!(p <= values.len());
        let ts = TimeSeries::from_values(values.clone()).unwrap();
        let scaled = TimeSeries::from_values(values.iter().map(|v| a * v).collect()).unwrap();
        let part = partition(ts.len(), p).unwrap();
        let base = boot_mean_pivot(&ts, &part, 32, 11).unwrap();
        let got = boot_mean_pivot(&scaled, &part, 32, 11).unwrap();
        let tol = 1e-9 * (1.0 + a);
        for (x, y) in base.pivot_values.iter().zip(&got.pivot_values) {
            prop_assert!((a * x - y).abs() <= tol * (1.0 + x.abs()));
        }
    }

    #[test]
    fn schedule_stays_within_envelope(n in 2usize..100_000, eps_m in 1usize..3, c in 0.5f64..4.0) {
        let eps = 1.0 / (eps_m as f64 + 1.0);
        let params = ScheduleParams::new(eps, c, 2).unwrap();
        let p = schedule_block_length(n, &params);
        prop_assert!(p >= 2);
        prop_assert!(p as f64 <= c * (n as f64).powf(eps) + 2.0 + 1e-6);
    }
}
