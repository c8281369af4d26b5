use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use driftlab::estimators::running_joint;
use driftlab::experiments::{
    check_fixture, consistency_curve, default_n_list, generate_table41, plugin_pipeline, run_sweep,
    CurveTarget, Execution, Fixture,
};
use driftlab::io::{self as csvio, fmt9};
use driftlab::simulator::{sample_series_marginal, sample_series_paired};
use driftlab::{
    build_paths, estimate_joint, sample_marginal, sample_paired, window_bounds, Error, Estimator,
    GaussianStream, MarginalSample, RunningEstimate, Seed, SeriesConfig, TimePoint, WienerParams,
};

use crate::{
    Command, CurveKind, Estimate, Experiment, ProcessArgs, SampleInput, Simulate, SweepKind,
};

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Validation(_) => 2,
        Error::Io { .. } | Error::Format { .. } => 3,
    }
}

impl ProcessArgs {
    fn params(&self) -> driftlab::Result<WienerParams> {
        WienerParams::new(self.x0, self.mu, self.sigma)
    }
}

/// Writes through `body` to `path`, or to stdout when no path is given.
fn emit(
    path: Option<&Path>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> driftlab::Result<()> {
    let target = path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    let wrap = |source| Error::Io {
        path: target.clone(),
        source,
    };
    match path {
        Some(p) => {
            let mut out = BufWriter::new(File::create(p).map_err(wrap)?);
            body(&mut out).map_err(wrap)?;
            out.flush().map_err(wrap)
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            body(&mut out).map_err(wrap)?;
            out.flush().map_err(wrap)
        }
    }
}

fn default_burn_in(len: usize, requested: Option<usize>) -> usize {
    requested.unwrap_or(len / 2)
}

pub fn run(command: Command) -> driftlab::Result<ExitCode> {
    match command {
        Command::Simulate(cmd) => simulate(cmd),
        Command::Estimate(cmd) => estimate(cmd),
        Command::Experiment(cmd) => experiment(cmd),
    }
    .map(|()| ExitCode::SUCCESS)
    .or_else(|err| match err {
        RunError::FixtureFailed => Ok(ExitCode::from(1)),
        RunError::Lib(e) => Err(e),
    })
}

enum RunError {
    FixtureFailed,
    Lib(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Lib(e)
    }
}

type CmdResult = std::result::Result<(), RunError>;

fn simulate(cmd: Simulate) -> CmdResult {
    match cmd {
        Simulate::Paths {
            process,
            random,
            count,
            dt,
            out,
            per_path_files,
        } => {
            let params = process.params()?;
            let config = SeriesConfig::new(random.terms)?;
            let paths = build_paths(&params, &config, dt, Seed(random.seed), count)?;
            emit(out.as_deref(), |w| csvio::write_paths_to(w, &paths))?;
            if let Some(dir) = per_path_files {
                fs::create_dir_all(&dir).map_err(|source| Error::Io {
                    path: dir.clone(),
                    source,
                })?;
                for (k, path) in paths.iter().enumerate() {
                    csvio::write_path(&dir.join(format!("path_{}.csv", k + 1)), path)?;
                }
            }
        }
        Simulate::Marginal {
            process,
            random,
            t,
            t2,
            n,
            series,
            out,
        } => {
            let params = process.params()?;
            let t = TimePoint::new(t)?;
            let seed = Seed(random.seed);
            let config = SeriesConfig::new(random.terms)?;
            match t2 {
                None => {
                    let sample = if series {
                        sample_series_marginal(&params, &config, t, n, seed)?
                    } else {
                        sample_marginal(&params, t, n, &mut GaussianStream::new(seed, 0))?
                    };
                    emit(out.as_deref(), |w| csvio::write_sample_to(w, &sample))?;
                }
                Some(t2) => {
                    let t2 = TimePoint::new(t2)?;
                    let sample = if series {
                        sample_series_paired(&params, &config, t, t2, n, seed)?
                    } else {
                        sample_paired(&params, t, t2, n, &mut GaussianStream::new(seed, 0))?
                    };
                    emit(out.as_deref(), |w| csvio::write_paired_to(w, &sample))?;
                }
            }
        }
    }
    Ok(())
}

fn print_with_window(
    sample: &MarginalSample,
    estimator: Estimator,
    burn_in: Option<usize>,
) -> CmdResult {
    let run = estimator.running(sample)?;
    let w = window_bounds(&run, default_burn_in(run.len(), burn_in))?;
    emit(None, |out| {
        writeln!(out, "estimate,window_lower,window_upper")?;
        writeln!(
            out,
            "{},{},{}",
            fmt9(run.last()),
            fmt9(w.lower),
            fmt9(w.upper)
        )
    })?;
    Ok(())
}

fn load_sample(input: &SampleInput) -> driftlab::Result<MarginalSample> {
    csvio::read_sample(&input.input, TimePoint::new(input.t)?)
}

fn estimate(cmd: Estimate) -> CmdResult {
    match cmd {
        Estimate::Sigma2 { sample, x0, mu } => {
            let data = load_sample(&sample)?;
            print_with_window(&data, Estimator::Sigma2 { x0, mu }, sample.burn_in)
        }
        Estimate::Mu { sample, x0 } => {
            let data = load_sample(&sample)?;
            print_with_window(&data, Estimator::Mu { x0 }, sample.burn_in)
        }
        Estimate::X0 { sample, mu } => {
            let data = load_sample(&sample)?;
            print_with_window(&data, Estimator::X0 { mu }, sample.burn_in)
        }
        Estimate::Joint {
            input,
            t1,
            t2,
            burn_in,
        } => {
            let (t1, t2) = (TimePoint::new(t1)?, TimePoint::new(t2)?);
            if t1 == t2 {
                return Err(Error::Validation("t1 and t2 must differ".into()).into());
            }
            let paired = csvio::read_paired(&input, t1, t2)?;
            let e = estimate_joint(&paired);
            let (run_x0, run_mu) = running_joint(&paired);
            let burn_in = default_burn_in(paired.len(), burn_in);
            let wx: Vec<_> = [&run_x0, &run_mu]
                .into_iter()
                .map(|r: &RunningEstimate| window_bounds(r, burn_in))
                .collect::<driftlab::Result<_>>()?;
            emit(None, |out| {
                writeln!(
                    out,
                    "x0_hat,mu_hat,x0_window_lower,x0_window_upper,mu_window_lower,mu_window_upper"
                )?;
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    fmt9(e.x0_hat),
                    fmt9(e.mu_hat),
                    fmt9(wx[0].lower),
                    fmt9(wx[0].upper),
                    fmt9(wx[1].lower),
                    fmt9(wx[1].upper)
                )
            })?;
            Ok(())
        }
        Estimate::Pipeline {
            paired,
            t1,
            t2,
            extra,
            t_extra,
        } => {
            let (t1, t2) = (TimePoint::new(t1)?, TimePoint::new(t2)?);
            if t1 == t2 {
                return Err(Error::Validation("t1 and t2 must differ".into()).into());
            }
            let paired = csvio::read_paired(&paired, t1, t2)?;
            let extra = csvio::read_sample(&extra, TimePoint::new(t_extra)?)?;
            let e = plugin_pipeline(&paired, &extra)?;
            emit(None, |out| {
                writeln!(out, "x0_hat,mu_hat,sigma2_hat")?;
                writeln!(
                    out,
                    "{},{},{}",
                    fmt9(e.x0_hat),
                    fmt9(e.mu_hat),
                    fmt9(e.sigma2_hat)
                )
            })?;
            Ok(())
        }
    }
}

fn experiment(cmd: Experiment) -> CmdResult {
    match cmd {
        Experiment::Table41 {
            process,
            random,
            t,
            count,
            out,
        } => {
            let sample = generate_table41(
                &process.params()?,
                TimePoint::new(t)?,
                count,
                &SeriesConfig::new(random.terms)?,
                Seed(random.seed),
            )?;
            emit(out.as_deref(), |w| csvio::write_sample_to(w, &sample))?;
        }
        Experiment::Sweep {
            estimator,
            input,
            process,
            t,
            n_list,
            out,
        } => {
            let params = process.params()?;
            let t = TimePoint::new(t)?;
            let sample = match input {
                Some(path) => csvio::read_sample(&path, t)?,
                None => MarginalSample::new(t, Fixture::embedded().table41)?,
            };
            let (est, truth) = match estimator {
                SweepKind::Sigma2 => (
                    Estimator::Sigma2 {
                        x0: params.x0(),
                        mu: params.mu(),
                    },
                    params.sigma2(),
                ),
                SweepKind::Mu => (Estimator::Mu { x0: params.x0() }, params.mu()),
                SweepKind::X0 => (Estimator::X0 { mu: params.mu() }, params.x0()),
            };
            let n_list = n_list.unwrap_or_else(|| {
                let ns: Vec<usize> = default_n_list()
                    .into_iter()
                    .filter(|&n| n <= sample.len())
                    .collect();
                if ns.is_empty() {
                    vec![sample.len()]
                } else {
                    ns
                }
            });
            let sweep = run_sweep(est, &sample, truth, &n_list)?;
            emit(out.as_deref(), |w| csvio::write_sweep_to(w, &sweep))?;
        }
        Experiment::Fixture { tol, out } => {
            let report = check_fixture(&Fixture::embedded(), tol)?;
            emit(out.as_deref(), |w| {
                writeln!(w, "table,n,computed,expected,delta,status")?;
                for r in &report.rows {
                    writeln!(
                        w,
                        "{},{},{},{},{},{}",
                        r.table.label(),
                        r.n,
                        fmt9(r.computed),
                        fmt9(r.expected),
                        fmt9(r.delta),
                        if r.pass { "pass" } else { "FAIL" }
                    )?;
                }
                Ok(())
            })?;
            eprintln!(
                "fixture: {}/{} rows within {} (max delta {})",
                report.rows.len() - report.failures(),
                report.rows.len(),
                report.tolerance,
                fmt9(report.max_delta())
            );
            if !report.passed() {
                return Err(RunError::FixtureFailed);
            }
        }
        Experiment::Rmse {
            estimator,
            process,
            t,
            t2,
            n_max,
            replications,
            seed,
            sequential,
            out,
        } => {
            let params = process.params()?;
            let t = TimePoint::new(t)?;
            let joint = |t2: f64| -> driftlab::Result<(TimePoint, TimePoint)> {
                let t2 = TimePoint::new(t2)?;
                if t == t2 {
                    return Err(Error::Validation("t1 and t2 must differ".into()));
                }
                Ok((t, t2))
            };
            let target = match estimator {
                CurveKind::Sigma2 => CurveTarget::Sigma2 { t },
                CurveKind::Mu => CurveTarget::Mu { t },
                CurveKind::X0 => CurveTarget::X0 { t },
                CurveKind::JointX0 => {
                    let (t1, t2) = joint(t2)?;
                    CurveTarget::JointX0 { t1, t2 }
                }
                CurveKind::JointMu => {
                    let (t1, t2) = joint(t2)?;
                    CurveTarget::JointMu { t1, t2 }
                }
            };
            let execution = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let rows =
                consistency_curve(target, &params, n_max, replications, Seed(seed), execution)?;
            emit(out.as_deref(), |w| csvio::write_rmse_to(w, &rows))?;
        }
    }
    Ok(())
}
