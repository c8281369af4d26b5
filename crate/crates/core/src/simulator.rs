//! Trajectory and observation generation.
//!
//! Two routes are provided. [`sample_marginal`] draws directly from the normal
//! law of `X_t`. The series route builds a path on `[0, 1]` from the truncated
//! sine expansion
//!
//! ```text
//! x(t) = x0 + mu*t + sigma * (d_0*t + sqrt(2) * sum_{n=1..N} d_n * sin(pi*n*t) / (pi*n))
//! ```
//!
//! with `d_0..d_N` i.i.d. standard normals, one set per trajectory.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result};
use crate::model::{MarginalSample, PairedSample, TimePoint, WienerParams};
use crate::rng::{GaussianStream, NormalSource, Seed};

pub const DEFAULT_TERMS: usize = 1000;
pub const DEFAULT_DT: f64 = 1e-4;

const GRID_TOLERANCE: f64 = 1e-9;

/// Truncation depth of the sine series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesConfig {
    terms: usize,
}

impl SeriesConfig {
    pub fn new(terms: usize) -> Result<Self> {
        if terms == 0 {
            return Err(Error::invalid("terms must be >= 1"));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> usize {
        self.terms
    }
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            terms: DEFAULT_TERMS,
        }
    }
}

/// One trajectory on the uniform grid `0, dt, 2dt, ..., 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGrid {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl PathGrid {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `n` independent observations of `X_t`, one normal draw each.
pub fn sample_marginal<S: NormalSource>(
    params: &WienerParams,
    t: TimePoint,
    n: usize,
    source: &mut S,
) -> Result<MarginalSample> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let center = params.center(t);
    let scale = params.sigma() * t.get().sqrt();
    let values = (0..n)
        .map(|_| center + scale * source.next_normal())
        .collect();
    MarginalSample::new(t, values)
}

/// `n` observation pairs at `t1` and `t2`.
///
/// Each pair comes from two distinct trajectories, so `z1_k` and `z2_k` are
/// independent. Draws alternate `z1_1, z2_1, z1_2, ...` on the one stream.
pub fn sample_paired<S: NormalSource>(
    params: &WienerParams,
    t1: TimePoint,
    t2: TimePoint,
    n: usize,
    source: &mut S,
) -> Result<PairedSample> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    if t1 == t2 {
        return Err(Error::invalid("t1 and t2 must differ"));
    }
    let (c1, s1) = (params.center(t1), params.sigma() * t1.get().sqrt());
    let (c2, s2) = (params.center(t2), params.sigma() * t2.get().sqrt());
    let pairs = (0..n)
        .map(|_| {
            let a = c1 + s1 * source.next_normal();
            let b = c2 + s2 * source.next_normal();
            (a, b)
        })
        .collect();
    PairedSample::new(t1, t2, pairs)
}

/// Series coefficients `d_0..d_N` for one trajectory.
fn draw_coefficients<S: NormalSource>(config: &SeriesConfig, source: &mut S) -> Vec<f64> {
    let mut d = vec![0.0; config.terms + 1];
    source.fill_normals(&mut d);
    d
}

/// Truncated series at `t`, summed in ascending `n`.
fn series_value(params: &WienerParams, coefficients: &[f64], t: f64) -> f64 {
    let mut tail = 0.0;
    for (n, d) in coefficients.iter().enumerate().skip(1) {
        let w = PI * n as f64;
        tail += d * (w * t).sin() / w;
    }
    let noise = coefficients[0] * t + SQRT_2 * tail;
    params.x0() + params.mu() * t + params.sigma() * noise
}

fn grid_steps(dt: f64) -> Result<usize> {
    ensure_finite("dt", dt)?;
    if dt <= 0.0 || dt > 1.0 {
        return Err(Error::invalid(format!("dt must lie in (0, 1], got {dt}")));
    }
    let steps = (1.0 / dt).round();
    if (steps * dt - 1.0).abs() > GRID_TOLERANCE {
        return Err(Error::invalid(format!("dt = {dt} does not divide 1")));
    }
    Ok(steps as usize)
}

/// Uniform grid on `[0, 1]` with step `dt`; endpoints included.
pub fn time_grid(dt: f64) -> Result<Vec<f64>> {
    let steps = grid_steps(dt)?;
    Ok((0..=steps).map(|i| i as f64 / steps as f64).collect())
}

/// One series trajectory on the grid `0, dt, ..., 1`.
///
/// Consumes exactly `terms + 1` draws from `source`.
pub fn build_path<S: NormalSource>(
    params: &WienerParams,
    config: &SeriesConfig,
    dt: f64,
    source: &mut S,
) -> Result<PathGrid> {
    let times = time_grid(dt)?;
    let d = draw_coefficients(config, source);
    let values = times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                params.x0()
            } else {
                series_value(params, &d, t)
            }
        })
        .collect();
    Ok(PathGrid { times, values })
}

/// Series trajectory evaluated at a single time `0 < t <= 1`.
///
/// Uses the same draws as [`build_path`] on an identically positioned stream,
/// so the two agree exactly on grid points.
pub fn path_value_at<S: NormalSource>(
    params: &WienerParams,
    config: &SeriesConfig,
    t: TimePoint,
    source: &mut S,
) -> Result<f64> {
    if t.get() > 1.0 {
        return Err(Error::invalid(format!(
            "series paths are defined on [0, 1]; got t = {}",
            t.get()
        )));
    }
    let d = draw_coefficients(config, source);
    Ok(series_value(params, &d, t.get()))
}

/// `count` series trajectories, trajectory `k` on substream `k`.
pub fn build_paths(
    params: &WienerParams,
    config: &SeriesConfig,
    dt: f64,
    seed: Seed,
    count: usize,
) -> Result<Vec<PathGrid>> {
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    grid_steps(dt)?;
    (0..count as u64)
        .into_par_iter()
        .map(|k| build_path(params, config, dt, &mut GaussianStream::new(seed, k)))
        .collect()
}

/// Observations at `t` of `count` series trajectories, trajectory `k` on
/// substream `k`.
pub fn sample_series_marginal(
    params: &WienerParams,
    config: &SeriesConfig,
    t: TimePoint,
    count: usize,
    seed: Seed,
) -> Result<MarginalSample> {
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    let values = (0..count as u64)
        .into_par_iter()
        .map(|k| path_value_at(params, config, t, &mut GaussianStream::new(seed, k)))
        .collect::<Result<Vec<_>>>()?;
    MarginalSample::new(t, values)
}

/// Series-route paired sample: pair `k` observes trajectory `2k` at `t1`
/// and trajectory `2k + 1` at `t2`.
pub fn sample_series_paired(
    params: &WienerParams,
    config: &SeriesConfig,
    t1: TimePoint,
    t2: TimePoint,
    count: usize,
    seed: Seed,
) -> Result<PairedSample> {
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    if t1 == t2 {
        return Err(Error::invalid("t1 and t2 must differ"));
    }
    let pairs = (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let a = path_value_at(params, config, t1, &mut GaussianStream::new(seed, 2 * k))?;
            let b = path_value_at(
                params,
                config,
                t2,
                &mut GaussianStream::new(seed, 2 * k + 1),
            )?;
            Ok((a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    PairedSample::new(t1, t2, pairs)
}

/// Variance of the truncated series at `t` for `sigma = 1`:
/// `t^2 + 2 * sum_{n=1..N} sin^2(pi*n*t) / (pi*n)^2`.
///
/// Nondecreasing in `N` with limit `t` on `[0, 1]`.
pub fn truncated_variance(config: &SeriesConfig, t: f64) -> f64 {
    let tail: f64 = (1..=config.terms)
        .map(|n| {
            let w = PI * n as f64;
            let s = (w * t).sin() / w;
            s * s
        })
        .sum();
    t * t + 2.0 * tail
}
