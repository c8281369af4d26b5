//! Algebraic invariants of the estimators and determinism of the generators.

use driftlab::experiments::{run_sweep, Fixture};
use driftlab::simulator::truncated_variance;
use driftlab::{
    build_path, draw_standard_normals, estimate_joint, estimate_mu, estimate_sigma2, estimate_x0,
    window_bounds, Estimator, GaussianStream, MarginalSample, PairedSample, RunningEstimate, Seed,
    SeriesConfig, TimePoint, WienerParams,
};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn sample_strategy() -> impl Strategy<Value = (f64, Vec<f64>)> {
    (0.05f64..5.0, prop::collection::vec(-50.0f64..50.0, 1..60))
}

fn estimators() -> [Estimator; 3] {
    [
        Estimator::Sigma2 { x0: 3.0, mu: -1.0 },
        Estimator::Mu { x0: 3.0 },
        Estimator::X0 { mu: -1.0 },
    ]
}

proptest! {
    #[test]
    fn permutation_invariance((t, values) in sample_strategy(), seed in any::<u64>()) {
        let t = TimePoint::new(t).unwrap();
        let mut shuffled = values.clone();
        // deterministic Fisher-Yates driven by the normal stream
        let mut s = GaussianStream::new(Seed(seed), 0);
        for i in (1..shuffled.len()).rev() {
            let u = driftlab::NormalSource::next_normal(&mut s).abs().fract();
            let j = ((u * (i + 1) as f64) as usize).min(i);
            shuffled.swap(i, j);
        }
        let a = MarginalSample::new(t, values).unwrap();
        let b = MarginalSample::new(t, shuffled).unwrap();
        for est in estimators() {
            prop_assert!(close(est.estimate(&a).unwrap(), est.estimate(&b).unwrap(), 1e-12));
        }
    }

    #[test]
    fn sigma2_scales_quadratically((t, values) in sample_strategy(), c in -4.0f64..4.0) {
        let (x0, mu) = (3.0, -1.0);
        let center = x0 + t * mu;
        let tp = TimePoint::new(t).unwrap();
        let scaled: Vec<f64> = values.iter().map(|z| center + c * (z - center)).collect();
        let base = estimate_sigma2(&MarginalSample::new(tp, values).unwrap(), x0, mu).unwrap();
        let out = estimate_sigma2(&MarginalSample::new(tp, scaled).unwrap(), x0, mu).unwrap();
        prop_assert!(close(out, c * c * base, 1e-9), "{out} vs {}", c * c * base);
    }

    #[test]
    fn shift_covariance((t, values) in sample_strategy(), delta in -20.0f64..20.0) {
        let tp = TimePoint::new(t).unwrap();
        let shifted: Vec<f64> = values.iter().map(|z| z + delta).collect();
        let a = MarginalSample::new(tp, values).unwrap();
        let b = MarginalSample::new(tp, shifted).unwrap();
        let mu_shift = estimate_mu(&b, 3.0).unwrap() - estimate_mu(&a, 3.0).unwrap();
        prop_assert!(close(mu_shift, delta / t, 1e-9));
        let x0_shift = estimate_x0(&b, -1.0).unwrap() - estimate_x0(&a, -1.0).unwrap();
        prop_assert!(close(x0_shift, delta, 1e-9));
    }

    #[test]
    fn noiseless_recovery(
        x0 in -10.0f64..10.0,
        mu in -5.0f64..5.0,
        t in 0.05f64..5.0,
        n in 1usize..200,
    ) {
        let tp = TimePoint::new(t).unwrap();
        let params = WienerParams::new(x0, mu, 0.0).unwrap();
        let s = driftlab::sample_marginal(&params, tp, n, &mut GaussianStream::new(Seed(1), 0))
            .unwrap();
        let eps = 1e-12;
        prop_assert!(estimate_sigma2(&s, x0, mu).unwrap().abs() <= eps);
        prop_assert!(close(estimate_mu(&s, x0).unwrap(), mu, 1e-11));
        prop_assert!(close(estimate_x0(&s, mu).unwrap(), x0, eps));
    }

    #[test]
    fn prefix_property((t, values) in sample_strategy()) {
        let s = MarginalSample::new(TimePoint::new(t).unwrap(), values).unwrap();
        for est in estimators() {
            let run = est.running(&s).unwrap();
            for n in 1..=s.len() {
                let batch = est.estimate(&s.prefix(n).unwrap()).unwrap();
                prop_assert_eq!(run.at(n).unwrap().to_bits(), batch.to_bits());
            }
        }
    }

    #[test]
    fn joint_marginal_identity(
        t1 in 0.05f64..3.0,
        gap in 0.05f64..3.0,
        pairs in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 1..60),
    ) {
        let t2 = t1 + gap;
        let n = pairs.len() as f64;
        let m1 = pairs.iter().map(|p| p.0).sum::<f64>() / n;
        let m2 = pairs.iter().map(|p| p.1).sum::<f64>() / n;
        let p = PairedSample::new(TimePoint::new(t1).unwrap(), TimePoint::new(t2).unwrap(), pairs)
            .unwrap();
        let e = estimate_joint(&p);
        // absolute scale of the summands bounds the achievable accuracy
        let scale = 50.0 * (1.0 + t2 / gap);
        prop_assert!((e.x0_hat + e.mu_hat * t1 - m1).abs() <= 1e-12 * scale);
        prop_assert!((e.x0_hat + e.mu_hat * t2 - m2).abs() <= 1e-12 * scale);
    }

    #[test]
    fn window_nesting(values in prop::collection::vec(-10.0f64..10.0, 2..80), a in 0usize..80, b in 0usize..80) {
        let run = RunningEstimate::from_values(values.clone()).unwrap();
        let (lo, hi) = (a.min(b) % values.len(), a.max(b) % values.len());
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let wide = window_bounds(&run, lo).unwrap();
        let narrow = window_bounds(&run, hi).unwrap();
        prop_assert!(wide.lower <= wide.upper);
        prop_assert!(narrow.lower >= wide.lower);
        prop_assert!(narrow.upper <= wide.upper);
    }

    #[test]
    fn normal_streams_are_prefix_stable(seed in any::<u64>(), index in any::<u64>(), n in 1usize..50, extra in 0usize..50) {
        let short = draw_standard_normals(Seed(seed), index, n).unwrap();
        let long = draw_standard_normals(Seed(seed), index, n + extra).unwrap();
        prop_assert_eq!(&short[..], &long[..n]);
    }

    #[test]
    fn paths_are_deterministic(seed in any::<u64>(), index in 0u64..1000, terms in 1usize..64) {
        let p = WienerParams::new(3.0, -1.0, 2.0).unwrap();
        let cfg = SeriesConfig::new(terms).unwrap();
        let a = build_path(&p, &cfg, 0.05, &mut GaussianStream::new(Seed(seed), index)).unwrap();
        let b = build_path(&p, &cfg, 0.05, &mut GaussianStream::new(Seed(seed), index)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.values[0], 3.0);
    }

    #[test]
    fn truncated_variance_monotone(t in 0.001f64..0.999, n in 1usize..400) {
        let v = truncated_variance(&SeriesConfig::new(n).unwrap(), t);
        let w = truncated_variance(&SeriesConfig::new(n + 1).unwrap(), t);
        prop_assert!(w >= v);
        prop_assert!(w <= t * (1.0 + 1e-12));
    }
}

#[test]
fn sweep_rows_equal_running_values() {
    let f = Fixture::embedded();
    let s = f.sample().unwrap();
    for est in estimators() {
        let run = est.running(&s).unwrap();
        let sweep = run_sweep(est, &s, 0.0, &[1, 7, 33, 100]).unwrap();
        for row in sweep.rows {
            assert_eq!(row.estimate.to_bits(), run.at(row.n).unwrap().to_bits());
        }
    }
}
