//! Point estimators for `x0`, `mu` and `sigma^2`, their running (prefix)
//! sequences, and tail-window bounds standing in for `liminf`/`limsup`.
//!
//! Each estimator takes the nuisance parameters it assumes known as explicit
//! arguments. Batch and running forms share one accumulation path, so
//! `running(..)[j]` is bit-identical to the batch estimate on the first
//! `j + 1` observations.

use crate::error::{ensure_finite, Error, Result};
use crate::model::{MarginalSample, PairedSample};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Which parameter to estimate, with the parameters assumed known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    /// `sum (z_k - x0 - t*mu)^2 / (n t)`
    Sigma2 { x0: f64, mu: f64 },
    /// `sum (z_k - x0) / (n t)`
    Mu { x0: f64 },
    /// `sum (z_k - t*mu) / n`
    X0 { mu: f64 },
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Sigma2 { .. } => "sigma2",
            Estimator::Mu { .. } => "mu",
            Estimator::X0 { .. } => "x0",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Estimator::Sigma2 { x0, mu } => {
                ensure_finite("x0", x0)?;
                ensure_finite("mu", mu)
            }
            Estimator::Mu { x0 } => ensure_finite("x0", x0),
            Estimator::X0 { mu } => ensure_finite("mu", mu),
        }
    }

    /// Per-observation summand at observation time `t`.
    fn term(&self, t: f64) -> impl Fn(f64) -> f64 {
        let (center, square) = match *self {
            Estimator::Sigma2 { x0, mu } => (x0 + t * mu, true),
            Estimator::Mu { x0 } => (x0, false),
            Estimator::X0 { mu } => (t * mu, false),
        };
        move |z| {
            let d = z - center;
            if square {
                d * d
            } else {
                d
            }
        }
    }

    fn finish(&self, sum: f64, n: usize, t: f64) -> f64 {
        match self {
            Estimator::Sigma2 { .. } | Estimator::Mu { .. } => sum / (n as f64 * t),
            Estimator::X0 { .. } => sum / n as f64,
        }
    }

    pub fn estimate(&self, sample: &MarginalSample) -> Result<f64> {
        self.validate()?;
        let t = sample.t().get();
        let term = self.term(t);
        let mut acc = CompensatedSum::default();
        for &z in sample.values() {
            acc.add(term(z));
        }
        Ok(self.finish(acc.value(), sample.len(), t))
    }

    /// Estimates after each prefix `z_1..z_j`, in one pass.
    pub fn running(&self, sample: &MarginalSample) -> Result<RunningEstimate> {
        self.validate()?;
        let t = sample.t().get();
        let term = self.term(t);
        let mut acc = CompensatedSum::default();
        let values = sample
            .values()
            .iter()
            .enumerate()
            .map(|(j, &z)| {
                acc.add(term(z));
                self.finish(acc.value(), j + 1, t)
            })
            .collect();
        Ok(RunningEstimate { values })
    }
}

/// Estimate of `sigma^2` with `x0` and `mu` known.
pub fn estimate_sigma2(sample: &MarginalSample, x0: f64, mu: f64) -> Result<f64> {
    Estimator::Sigma2 { x0, mu }.estimate(sample)
}

/// Estimate of `mu` with `x0` known.
pub fn estimate_mu(sample: &MarginalSample, x0: f64) -> Result<f64> {
    Estimator::Mu { x0 }.estimate(sample)
}

/// Estimate of `x0` with `mu` known: `mean(z) - t*mu`.
pub fn estimate_x0(sample: &MarginalSample, mu: f64) -> Result<f64> {
    Estimator::X0 { mu }.estimate(sample)
}

/// Joint estimate of `(x0, mu)` from observations at two times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEstimate {
    pub x0_hat: f64,
    pub mu_hat: f64,
}

struct JointAccumulator {
    t1: f64,
    t2: f64,
    x0: CompensatedSum,
    mu: CompensatedSum,
}

impl JointAccumulator {
    fn new(sample: &PairedSample) -> Self {
        Self {
            t1: sample.t1().get(),
            t2: sample.t2().get(),
            x0: CompensatedSum::default(),
            mu: CompensatedSum::default(),
        }
    }

    fn add(&mut self, (z1, z2): (f64, f64)) {
        self.x0.add(self.t2 * z1 - self.t1 * z2);
        self.mu.add(z2 - z1);
    }

    fn estimate(&self, n: usize) -> JointEstimate {
        let denom = n as f64 * (self.t2 - self.t1);
        JointEstimate {
            x0_hat: self.x0.value() / denom,
            mu_hat: self.mu.value() / denom,
        }
    }
}

/// `x0_hat = sum(t2 z1 - t1 z2) / (n (t2 - t1))`,
/// `mu_hat = sum(z2 - z1) / (n (t2 - t1))`.
pub fn estimate_joint(sample: &PairedSample) -> JointEstimate {
    let mut acc = JointAccumulator::new(sample);
    for &pair in sample.pairs() {
        acc.add(pair);
    }
    acc.estimate(sample.len())
}

/// Running joint estimates, returned componentwise as `(x0, mu)`.
pub fn running_joint(sample: &PairedSample) -> (RunningEstimate, RunningEstimate) {
    let mut acc = JointAccumulator::new(sample);
    let (x0, mu) = sample
        .pairs()
        .iter()
        .enumerate()
        .map(|(j, &pair)| {
            acc.add(pair);
            let e = acc.estimate(j + 1);
            (e.x0_hat, e.mu_hat)
        })
        .unzip();
    (
        RunningEstimate { values: x0 },
        RunningEstimate { values: mu },
    )
}

/// Estimates `T_1, ..., T_n` after each prefix of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct RunningEstimate {
    values: Vec<f64>,
}

impl RunningEstimate {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("running estimate must be nonempty"));
        }
        Ok(Self { values })
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

    /// Estimate after the first `n` observations.
    pub fn at(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|j| self.values.get(j).copied())
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Min and max of a running estimate after discarding the first `burn_in`
/// entries. Finite-sample surrogate for `liminf` and `limsup`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowBounds {
    pub burn_in: usize,
    pub lower: f64,
    pub upper: f64,
}

pub fn window_bounds(run: &RunningEstimate, burn_in: usize) -> Result<WindowBounds> {
    if burn_in >= run.len() {
        return Err(Error::invalid(format!(
            "burn-in {burn_in} must be smaller than the sequence length {}",
            run.len()
        )));
    }
    let tail = &run.values[burn_in..];
    let (lower, upper) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(WindowBounds {
        burn_in,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TimePoint;

    const TABLE41_HEAD: [f64; 5] = [4.0991, 1.6842, 2.9422, 4.5744, 2.0157];

    fn sample(t: f64, values: &[f64]) -> MarginalSample {
        MarginalSample::new(TimePoint::new(t).unwrap(), values.to_vec()).unwrap()
    }

    fn paired(t1: f64, t2: f64, pairs: &[(f64, f64)]) -> PairedSample {
        PairedSample::new(
            TimePoint::new(t1).unwrap(),
            TimePoint::new(t2).unwrap(),
            pairs.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn sigma2_examples() {
        let s = sample(0.5, &TABLE41_HEAD);
        assert!((estimate_sigma2(&s, 3.0, -1.0).unwrap() - 3.182349).abs() < 1e-3);

        assert_eq!(
            estimate_sigma2(&sample(0.5, &[2.5; 7]), 3.0, -1.0).unwrap(),
            0.0
        );

        for t in [0.25f64, 0.5, 2.0] {
            let c = 1.0 + t * 2.0;
            let s = sample(t, &[c + t.sqrt(), c - t.sqrt()]);
            assert!((estimate_sigma2(&s, 1.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn mu_examples() {
        let s = sample(0.5, &TABLE41_HEAD);
        assert!((estimate_mu(&s, 3.0).unwrap() - 0.12624).abs() < 1e-3);
        assert_eq!(estimate_mu(&sample(0.5, &[3.0; 3]), 3.0).unwrap(), 0.0);
        assert_eq!(estimate_mu(&sample(0.5, &[2.5; 3]), 3.0).unwrap(), -1.0);
    }

    #[test]
    fn x0_examples() {
        assert_eq!(estimate_x0(&sample(0.5, &[2.5; 4]), -1.0).unwrap(), 3.0);
        assert_eq!(estimate_x0(&sample(1.7, &[5.0]), 0.0).unwrap(), 5.0);
        let s = sample(0.5, &TABLE41_HEAD);
        assert!((estimate_x0(&s, -1.0).unwrap() - 3.56312).abs() < 1e-4);
    }

    #[test]
    fn non_finite_known_params_rejected() {
        let s = sample(0.5, &TABLE41_HEAD);
        assert!(estimate_sigma2(&s, f64::NAN, 0.0).is_err());
        assert!(estimate_mu(&s, f64::INFINITY).is_err());
        assert!(Estimator::X0 { mu: f64::NAN }.running(&s).is_err());
    }

    #[test]
    fn joint_examples() {
        let e = estimate_joint(&paired(0.5, 1.0, &[(2.5, 2.0); 6]));
        assert_eq!((e.x0_hat, e.mu_hat), (3.0, -1.0));

        let e = estimate_joint(&paired(1.0, 2.0, &[(5.0, 6.0)]));
        assert_eq!((e.x0_hat, e.mu_hat), (4.0, 1.0));
    }

    #[test]
    fn running_matches_batch_on_prefixes() {
        let s = sample(
            0.5,
            &[4.0991, 1.6842, 2.9422, 4.5744, 2.0157, 2.8821, 4.6284],
        );
        for est in [
            Estimator::Sigma2 { x0: 3.0, mu: -1.0 },
            Estimator::Mu { x0: 3.0 },
            Estimator::X0 { mu: -1.0 },
        ] {
            let run = est.running(&s).unwrap();
            assert_eq!(run.len(), s.len());
            for n in 1..=s.len() {
                let batch = est.estimate(&s.prefix(n).unwrap()).unwrap();
                assert_eq!(run.at(n).unwrap().to_bits(), batch.to_bits());
            }
        }
    }

    #[test]
    fn running_joint_matches_batch() {
        let p = paired(0.5, 1.0, &[(2.0, 1.0), (3.1, 2.4), (2.2, 2.9), (1.7, 0.3)]);
        let (x0, mu) = running_joint(&p);
        for n in 1..=p.len() {
            let sub = paired(0.5, 1.0, &p.pairs()[..n]);
            let e = estimate_joint(&sub);
            assert_eq!(x0.at(n).unwrap(), e.x0_hat);
            assert_eq!(mu.at(n).unwrap(), e.mu_hat);
        }
    }

    #[test]
    fn constant_data_gives_constant_running() {
        let s = sample(0.5, &[1.25; 20]);
        let run = Estimator::Mu { x0: 3.0 }.running(&s).unwrap();
        assert!(run.values().iter().all(|&v| v == run.values()[0]));
    }

    #[test]
    fn window_examples() {
        let c = RunningEstimate::from_values(vec![2.5; 5]).unwrap();
        let w = window_bounds(&c, 2).unwrap();
        assert_eq!((w.lower, w.upper), (2.5, 2.5));

        let r = RunningEstimate::from_values(vec![1.0, 3.0, 2.0, 4.0]).unwrap();
        let w = window_bounds(&r, 1).unwrap();
        assert_eq!((w.lower, w.upper), (2.0, 4.0));
        assert_eq!(window_bounds(&r, 0).unwrap().lower, 1.0);
        assert!(window_bounds(&r, 4).is_err());
        assert!(RunningEstimate::from_values(vec![]).is_err());
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut acc = CompensatedSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            acc.add(x);
        }
        assert_eq!(acc.value(), 2.0);
    }
}
