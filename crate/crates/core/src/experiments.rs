//! Numeric experiments: the published 100-trajectory sample and its estimate
//! tables, sweeps over sample prefixes, the plug-in pipeline for `sigma^2`,
//! and Monte Carlo RMSE curves.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{estimate_joint, estimate_sigma2, running_joint, Estimator};
use crate::model::{MarginalSample, PairedSample, TimePoint, WienerParams};
use crate::rng::{GaussianStream, Seed};
use crate::simulator::{sample_marginal, sample_paired, sample_series_marginal, SeriesConfig};

/// Golden-table tolerance; covers the 4-decimal rounding of the sample.
pub const FIXTURE_TOLERANCE: f64 = 2e-3;

/// Parameters the published sample was generated with.
pub const FIXTURE_X0: f64 = 3.0;
pub const FIXTURE_MU: f64 = -1.0;
pub const FIXTURE_SIGMA: f64 = 2.0;
pub const FIXTURE_T: f64 = 0.5;

/// `z_k`, k = 1..100, values at t = 0.5 of 100 series trajectories with
/// x0 = 3, mu = -1, sigma = 2.
#[rustfmt::skip]
pub const TABLE41: [f64; 100] = [
    // k = 1..20
    4.0991, 1.6842, 2.9422, 4.5744, 2.0157, 2.8821, 4.6284, 1.654, 0.9561, -0.5407,
    1.98941, 4.3462, 3.455, 3.2235, 2.1299, 1.7554, 3.9263, 2.4328, 2.9972, 2.59,
    // k = 21..40
    2.7068, 2.243, 3.5946, 4.6402, 2.2703, 2.681, 2.9075, 3.3659, 4.5149, -1.3528,
    3.4294, 4.0825, 2.3837, 3.3037, 4.7552, 2.1509, 4.3749, 2.6403, 1.4087, 4.178,
    // k = 41..60
    4.3571, 3.2793, 3.2422, 2.7395, 0.682, 3.4298, 2.6592, 3.2093, 0.1074, 1.5462,
    1.0896, 2.1108, 2.9175, 2.9352, 3.5531, 2.2376, 1.6557, 2.0076, 0.8997, 0.1873,
    // k = 61..80
    3.5272, 2.8292, 1.8519, -0.5223, 0.7602, 4.3529, 1.1265, 1.3525, 3.7889, 3.2284,
    1.1392, 2.8833, 2.3093, 1.4444, -0.23, 1.1718, 1.3588, 1.5024, 2.2622, 3.3423,
    // k = 81..100
    7.0549, 2.5627, 1.5592, 3.8465, 0.8471, 2.8475, 0.5144, 2.3558, 2.4793, 2.0639,
    1.166, 3.2738, 0.4878, 2.9504, 2.4767, 3.6022, 1.6005, 3.5125, 2.2026, 3.3646,
];

/// Published `sigma^2` estimates on the first n = 5, 10, ..., 100 values.
#[rustfmt::skip]
pub const TABLE42_SIGMA2: [f64; 20] = [
    3.182349256, 4.995431962, 4.029170383, 3.30673624, 3.120603594,
    3.924002323, 3.884200678, 3.781846824, 3.715840465, 3.665346353,
    3.463530492, 3.472692797, 3.628477887, 3.621538801, 3.662829637,
    3.554594699, 3.96153126, 3.836441056, 3.774116249, 3.663112062,
];

/// Published `mu` estimates on the first n = 5, 10, ..., 100 values.
#[rustfmt::skip]
pub const TABLE43_MU: [f64; 20] = [
    0.12624, -1.0209, -0.6614, -0.62588, -0.464312,
    -0.57916, -0.327594286, -0.299005, -0.296888889, -0.429124,
    -0.47716, -0.704466667, -0.851932308, -0.82396, -0.967797333,
    -1.0413725, -0.959635294, -1.011635556, -1.056187368, -1.01773,
];

/// Sample plus expected estimate columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub table41: Vec<f64>,
    pub expected_sigma2: Vec<f64>,
    pub expected_mu: Vec<f64>,
}

impl Fixture {
    pub fn embedded() -> Self {
        Self {
            table41: TABLE41.to_vec(),
            expected_sigma2: TABLE42_SIGMA2.to_vec(),
            expected_mu: TABLE43_MU.to_vec(),
        }
    }

    pub fn params() -> WienerParams {
        WienerParams::new(FIXTURE_X0, FIXTURE_MU, FIXTURE_SIGMA).expect("fixture parameters")
    }

    pub fn sample(&self) -> Result<MarginalSample> {
        MarginalSample::new(TimePoint::new(FIXTURE_T)?, self.table41.clone())
    }
}

/// `5, 10, ..., 100`.
pub fn default_n_list() -> Vec<usize> {
    (1..=20).map(|i| 5 * i).collect()
}

/// `count` series trajectories observed at `t`; trajectory `k` uses substream `k`.
pub fn generate_table41(
    params: &WienerParams,
    t: TimePoint,
    count: usize,
    config: &SeriesConfig,
    seed: Seed,
) -> Result<MarginalSample> {
    sample_series_marginal(params, config, t, count, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub estimate: f64,
    pub true_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

/// One row per `n`: the estimate on the first `n` observations.
pub fn run_sweep(
    estimator: Estimator,
    sample: &MarginalSample,
    true_value: f64,
    n_list: &[usize],
) -> Result<SweepResult> {
    if n_list.is_empty() {
        return Err(Error::invalid("n list must be nonempty"));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("n list must be strictly increasing"));
    }
    if n_list[0] == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let last = n_list[n_list.len() - 1];
    if last > sample.len() {
        return Err(Error::invalid(format!(
            "n = {last} exceeds the sample size {}",
            sample.len()
        )));
    }
    let run = estimator.running(sample)?;
    let rows = n_list
        .iter()
        .map(|&n| SweepRow {
            n,
            estimate: run.at(n).expect("n checked against sample size"),
            true_value,
        })
        .collect();
    Ok(SweepResult { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureTable {
    Sigma2,
    Mu,
}

impl FixtureTable {
    pub fn label(self) -> &'static str {
        match self {
            FixtureTable::Sigma2 => "sigma2",
            FixtureTable::Mu => "mu",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureRow {
    pub table: FixtureTable,
    pub n: usize,
    pub computed: f64,
    pub expected: f64,
    pub delta: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureReport {
    pub tolerance: f64,
    pub rows: Vec<FixtureRow>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn max_delta(&self) -> f64 {
        self.rows.iter().map(|r| r.delta).fold(0.0, f64::max)
    }
}

/// Recomputes both estimate tables from the fixture sample and compares
/// each row against the published value.
pub fn check_fixture(fixture: &Fixture, tolerance: f64) -> Result<FixtureReport> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::invalid(format!(
            "tolerance must be >= 0, got {tolerance}"
        )));
    }
    let sample = fixture.sample()?;
    let n_list = default_n_list();
    let columns = [
        (
            FixtureTable::Sigma2,
            Estimator::Sigma2 {
                x0: FIXTURE_X0,
                mu: FIXTURE_MU,
            },
            &fixture.expected_sigma2,
            FIXTURE_SIGMA * FIXTURE_SIGMA,
        ),
        (
            FixtureTable::Mu,
            Estimator::Mu { x0: FIXTURE_X0 },
            &fixture.expected_mu,
            FIXTURE_MU,
        ),
    ];
    let mut rows = Vec::with_capacity(2 * n_list.len());
    for (table, estimator, expected, truth) in columns {
        if expected.len() != n_list.len() {
            return Err(Error::invalid(format!(
                "{} column has {} rows, expected {}",
                table.label(),
                expected.len(),
                n_list.len()
            )));
        }
        let sweep = run_sweep(estimator, &sample, truth, &n_list)?;
        for (row, &want) in sweep.rows.iter().zip(expected.iter()) {
            let delta = (row.estimate - want).abs();
            rows.push(FixtureRow {
                table,
                n: row.n,
                computed: row.estimate,
                expected: want,
                delta,
                pass: delta <= tolerance,
            });
        }
    }
    Ok(FixtureReport { tolerance, rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PluginEstimate {
    pub x0_hat: f64,
    pub mu_hat: f64,
    pub sigma2_hat: f64,
}

/// `(x0, mu)` from the paired sample, then `sigma^2` on `extra` with those
/// plugged in as known values.
pub fn plugin_pipeline(paired: &PairedSample, extra: &MarginalSample) -> Result<PluginEstimate> {
    let joint = estimate_joint(paired);
    let sigma2_hat = estimate_sigma2(extra, joint.x0_hat, joint.mu_hat)?;
    Ok(PluginEstimate {
        x0_hat: joint.x0_hat,
        mu_hat: joint.mu_hat,
        sigma2_hat,
    })
}

/// Quantity tracked by a consistency curve, with its observation design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveTarget {
    Sigma2 { t: TimePoint },
    Mu { t: TimePoint },
    X0 { t: TimePoint },
    JointX0 { t1: TimePoint, t2: TimePoint },
    JointMu { t1: TimePoint, t2: TimePoint },
}

impl CurveTarget {
    pub fn true_value(&self, params: &WienerParams) -> f64 {
        match self {
            CurveTarget::Sigma2 { .. } => params.sigma2(),
            CurveTarget::Mu { .. } | CurveTarget::JointMu { .. } => params.mu(),
            CurveTarget::X0 { .. } | CurveTarget::JointX0 { .. } => params.x0(),
        }
    }

    /// Running estimate over `n_max` fresh observations from `stream`.
    fn running(
        &self,
        params: &WienerParams,
        n_max: usize,
        stream: &mut GaussianStream,
    ) -> Result<Vec<f64>> {
        let marginal = |t: TimePoint, est: Estimator, stream: &mut GaussianStream| {
            let sample = sample_marginal(params, t, n_max, stream)?;
            Ok(est.running(&sample)?.values().to_vec())
        };
        match *self {
            CurveTarget::Sigma2 { t } => marginal(
                t,
                Estimator::Sigma2 {
                    x0: params.x0(),
                    mu: params.mu(),
                },
                stream,
            ),
            CurveTarget::Mu { t } => marginal(t, Estimator::Mu { x0: params.x0() }, stream),
            CurveTarget::X0 { t } => marginal(t, Estimator::X0 { mu: params.mu() }, stream),
            CurveTarget::JointX0 { t1, t2 } => {
                let paired = sample_paired(params, t1, t2, n_max, stream)?;
                Ok(running_joint(&paired).0.values().to_vec())
            }
            CurveTarget::JointMu { t1, t2 } => {
                let paired = sample_paired(params, t1, t2, n_max, stream)?;
                Ok(running_joint(&paired).1.values().to_vec())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmseRow {
    pub n: usize,
    pub rmse: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// Powers of ten from 10 up to `n_max`, plus `n_max` itself.
pub fn log_spaced_ns(n_max: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = std::iter::successors(Some(10usize), |n| n.checked_mul(10))
        .take_while(|&n| n <= n_max)
        .collect();
    if ns.last() != Some(&n_max) {
        ns.push(n_max);
    }
    ns
}

/// RMSE of the estimator against the true parameter over `replications`
/// independent runs, at each `n` in [`log_spaced_ns`].
///
/// Replication `r` draws from substream `r`; each run observes `n_max`
/// values and the smaller `n` reuse its prefixes. Squared errors are reduced
/// in replication order, so both execution modes give identical output.
pub fn consistency_curve(
    target: CurveTarget,
    params: &WienerParams,
    n_max: usize,
    replications: usize,
    seed: Seed,
    execution: Execution,
) -> Result<Vec<RmseRow>> {
    if replications == 0 {
        return Err(Error::invalid("replications must be >= 1"));
    }
    if n_max < 10 {
        return Err(Error::invalid(format!("n_max must be >= 10, got {n_max}")));
    }
    let ns = log_spaced_ns(n_max);
    let truth = target.true_value(params);
    let one = |r: u64| -> Result<Vec<f64>> {
        let run = target.running(params, n_max, &mut GaussianStream::new(seed, r))?;
        Ok(ns
            .iter()
            .map(|&n| {
                let e = run[n - 1] - truth;
                e * e
            })
            .collect())
    };
    let squared: Vec<Vec<f64>> = match execution {
        Execution::Parallel => (0..replications as u64)
            .into_par_iter()
            .map(one)
            .collect::<Result<_>>()?,
        Execution::Sequential => (0..replications as u64).map(one).collect::<Result<_>>()?,
    };
    Ok(ns
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let total: f64 = squared.iter().map(|row| row[i]).sum();
            RmseRow {
                n,
                rmse: (total / replications as f64).sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::path_value_at;

    fn tp(t: f64) -> TimePoint {
        TimePoint::new(t).unwrap()
    }

    #[test]
    fn fixture_shape() {
        let f = Fixture::embedded();
        assert_eq!(f.table41.len(), 100);
        assert_eq!(f.expected_sigma2.len(), 20);
        assert_eq!(f.expected_mu.len(), 20);
        assert_eq!(f.table41[10], 1.98941);
        assert_eq!(f.table41[20], 2.7068);
        assert_eq!(f.table41[99], 3.3646);
    }

    #[test]
    fn fixture_passes() {
        let report = check_fixture(&Fixture::embedded(), FIXTURE_TOLERANCE).unwrap();
        assert_eq!(report.rows.len(), 40);
        assert!(report.passed(), "max delta {}", report.max_delta());
    }

    #[test]
    fn perturbed_fixture_fails() {
        let mut f = Fixture::embedded();
        f.table41[3] += 1.0;
        assert!(!check_fixture(&f, FIXTURE_TOLERANCE).unwrap().passed());
    }

    #[test]
    fn zero_tolerance_fails() {
        let report = check_fixture(&Fixture::embedded(), 0.0).unwrap();
        assert!(!report.passed());
        assert!(report.failures() > 0);
        assert!(check_fixture(&Fixture::embedded(), f64::NAN).is_err());
    }

    #[test]
    fn sweep_validation_and_constant_column() {
        let s = MarginalSample::new(tp(0.5), vec![1.0; 10]).unwrap();
        let est = Estimator::Mu { x0: 0.0 };
        let sweep = run_sweep(est, &s, 0.0, &[2, 5, 10]).unwrap();
        assert!(sweep.rows.iter().all(|r| r.estimate == 2.0));
        assert!(run_sweep(est, &s, 0.0, &[5, 11]).is_err());
        assert!(run_sweep(est, &s, 0.0, &[5, 5]).is_err());
        assert!(run_sweep(est, &s, 0.0, &[0, 5]).is_err());
        assert!(run_sweep(est, &s, 0.0, &[]).is_err());
    }

    #[test]
    fn table41_generation() {
        let cfg = SeriesConfig::new(200).unwrap();
        let line = WienerParams::new(3.0, -1.0, 0.0).unwrap();
        let s = generate_table41(&line, tp(0.5), 100, &cfg, Seed(1)).unwrap();
        assert_eq!(s.values(), &[2.5; 100][..]);

        let p = Fixture::params();
        let one = generate_table41(&p, tp(0.5), 1, &cfg, Seed(9)).unwrap();
        let direct = path_value_at(&p, &cfg, tp(0.5), &mut GaussianStream::new(Seed(9), 0));
        assert_eq!(one.values()[0], direct.unwrap());
    }

    #[test]
    fn noiseless_pipeline() {
        let p = PairedSample::new(tp(0.5), tp(1.0), vec![(2.5, 2.0); 3]).unwrap();
        let extra = MarginalSample::new(tp(0.5), vec![2.5; 4]).unwrap();
        let e = plugin_pipeline(&p, &extra).unwrap();
        assert_eq!((e.x0_hat, e.mu_hat, e.sigma2_hat), (3.0, -1.0, 0.0));
    }

    #[test]
    fn log_spacing() {
        assert_eq!(log_spaced_ns(10_000), vec![10, 100, 1000, 10_000]);
        assert_eq!(log_spaced_ns(500), vec![10, 100, 500]);
        assert_eq!(log_spaced_ns(10), vec![10]);
    }

    #[test]
    fn degenerate_curve_is_zero() {
        let p = WienerParams::new(3.0, -1.0, 0.0).unwrap();
        for target in [
            CurveTarget::Sigma2 { t: tp(0.5) },
            CurveTarget::Mu { t: tp(0.5) },
            CurveTarget::X0 { t: tp(0.5) },
            CurveTarget::JointMu {
                t1: tp(0.5),
                t2: tp(1.0),
            },
        ] {
            let rows = consistency_curve(target, &p, 100, 5, Seed(0), Execution::Sequential);
            assert!(rows.unwrap().iter().all(|r| r.rmse == 0.0));
        }
    }

    #[test]
    fn curve_validation() {
        let p = Fixture::params();
        let t = CurveTarget::Mu { t: tp(0.5) };
        assert!(consistency_curve(t, &p, 100, 0, Seed(0), Execution::Parallel).is_err());
        assert!(consistency_curve(t, &p, 9, 10, Seed(0), Execution::Parallel).is_err());
    }
}
