//! Domain types for the Wiener process with drift, `X_t = x0 + mu*t + sigma*W_t`.
//!
//! Every constructor validates its input; once built, values are immutable and
//! always satisfy their invariants.

use crate::error::{ensure_finite, Error, Result};

/// Initial position, drift and diffusion coefficient of the process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerParams {
    x0: f64,
    mu: f64,
    sigma: f64,
}

impl WienerParams {
    pub fn new(x0: f64, mu: f64, sigma: f64) -> Result<Self> {
        ensure_finite("x0", x0)?;
        ensure_finite("mu", mu)?;
        ensure_finite("sigma", sigma)?;
        if sigma < 0.0 {
            return Err(Error::invalid(format!("sigma must be >= 0, got {sigma}")));
        }
        Ok(Self { x0, mu, sigma })
    }

    /// Standard Wiener process: `x0 = 0, mu = 0, sigma = 1`.
    pub fn standard() -> Self {
        Self {
            x0: 0.0,
            mu: 0.0,
            sigma: 1.0,
        }
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma * self.sigma
    }

    /// Deterministic part `x0 + mu*t`.
    pub fn center(&self, t: TimePoint) -> f64 {
        self.x0 + self.mu * t.get()
    }
}

/// Strictly positive, finite observation time.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TimePoint(f64);

impl TimePoint {
    pub fn new(t: f64) -> Result<Self> {
        ensure_finite("t", t)?;
        if t <= 0.0 {
            return Err(Error::invalid(format!("t must be > 0, got {t}")));
        }
        Ok(Self(t))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Values of independent trajectories observed at one common time.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalSample {
    t: TimePoint,
    values: Vec<f64>,
}

impl MarginalSample {
    pub fn new(t: TimePoint, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("sample must contain at least one value"));
        }
        if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "sample value {} is not finite: {v}",
                k + 1
            )));
        }
        Ok(Self { t, values })
    }

    pub fn t(&self) -> TimePoint {
        self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The first `n` observations as a new sample.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::invalid(format!(
                "prefix length {n} out of range 1..={}",
                self.len()
            )));
        }
        Ok(Self {
            t: self.t,
            values: self.values[..n].to_vec(),
        })
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Observation pairs `(z1_k, z2_k)` taken at two distinct times.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    t1: TimePoint,
    t2: TimePoint,
    pairs: Vec<(f64, f64)>,
}

impl PairedSample {
    pub fn new(t1: TimePoint, t2: TimePoint, pairs: Vec<(f64, f64)>) -> Result<Self> {
        if t1 == t2 {
            return Err(Error::invalid("t1 and t2 must differ"));
        }
        if pairs.is_empty() {
            return Err(Error::invalid(
                "paired sample must contain at least one pair",
            ));
        }
        if let Some(k) = pairs
            .iter()
            .position(|(a, b)| !a.is_finite() || !b.is_finite())
        {
            return Err(Error::invalid(format!("pair {} is not finite", k + 1)));
        }
        Ok(Self { t1, t2, pairs })
    }

    pub fn t1(&self) -> TimePoint {
        self.t1
    }

    pub fn t2(&self) -> TimePoint {
        self.t2
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> impl Iterator<Item = f64> + '_ {
        self.pairs.iter().map(|p| p.0)
    }

    pub fn second(&self) -> impl Iterator<Item = f64> + '_ {
        self.pairs.iter().map(|p| p.1)
    }
}

/// Normal law of `X_t`: mean `x0 + mu*t`, variance `sigma^2 * t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalLaw {
    pub mean: f64,
    pub variance: f64,
}

impl MarginalLaw {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

pub fn marginal_law(params: &WienerParams, t: TimePoint) -> MarginalLaw {
    MarginalLaw {
        mean: params.center(t),
        variance: params.sigma2() * t.get(),
    }
}
