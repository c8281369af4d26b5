//! Simulation and parameter estimation for the Wiener process with drift,
//! `dX_t = mu dt + sigma dW_t`, `X_0 = x0`.
//!
//! - [`model`]: parameter and sample types, the marginal law of `X_t`.
//! - [`rng`]: seeded N(0, 1) substreams.
//! - [`simulator`]: exact marginal sampling and truncated sine-series paths.
//! - [`estimators`]: estimators of `sigma^2`, `mu`, `x0` and the two-time
//!   joint `(x0, mu)` estimator, running sequences and tail-window bounds.
//! - [`experiments`]: golden tables, sweeps, plug-in pipeline, RMSE curves.
//! - [`io`]: CSV formats.

pub mod error;
pub mod estimators;
pub mod experiments;
pub mod io;
pub mod model;
pub mod rng;
pub mod simulator;

pub use error::{Error, Result};
pub use estimators::{
    estimate_joint, estimate_mu, estimate_sigma2, estimate_x0, running_joint, window_bounds,
    Estimator, JointEstimate, RunningEstimate, WindowBounds,
};
pub use model::{marginal_law, MarginalLaw, MarginalSample, PairedSample, TimePoint, WienerParams};
pub use rng::{draw_standard_normals, GaussianStream, NormalSource, Seed, DEFAULT_SEED};
pub use simulator::{
    build_path, build_paths, path_value_at, sample_marginal, sample_paired, PathGrid, SeriesConfig,
};
