use hslra::{apbr, cadzow, ssa, ApbrConfig, Schedule, SlraConfig, SolveReport64, TimeSeries64};
use serde::Serialize;

use super::{load_series, Method, Report};
use crate::config::{settings, Effective};
use crate::error::{arg_error, CliError, CliResult};
use crate::io::num;
use crate::Context;

pub const SCHEMA: &str = "hslra.approximate/1";

settings! {
    ApproximateArgs => ApproximateSettings {
        /// Series CSV (one sample per line, optional header).
        input: String = String::new(), "HSLRA_INPUT";
        /// 0-based column to read; `simulate` writes the noisy series to column 3.
        column: usize = 0, "HSLRA_COLUMN";
        method: Method = Method::Cadzow, "HSLRA_METHOD";
        rank: usize = 3, "HSLRA_RANK";
        window: usize = 10, "HSLRA_WINDOW";
        max_iters: usize = 500, "HSLRA_MAX_ITERS";
        /// Stop when the relative change of the series falls below this.
        stop_tol: f64 = 1e-9, "HSLRA_STOP_TOL";
        /// Scale the result by the optimal scalar correction (Cadzow).
        final_correction: bool = false, "HSLRA_FINAL_CORRECTION";
        /// APBR: number of trajectories.
        trajectories: usize = 10, "HSLRA_TRAJECTORIES";
        /// APBR: start spread s0.
        start_spread: f64 = 0.1, "HSLRA_START_SPREAD";
        /// APBR: backtracking and mutation weights initial·ratio^i …
        schedule_initial: f64 = 0.1, "HSLRA_SCHEDULE_INITIAL";
        schedule_ratio: f64 = 0.9, "HSLRA_SCHEDULE_RATIO";
        /// … switched off from this iteration on.
        schedule_cutoff: usize = 30, "HSLRA_SCHEDULE_CUTOFF";
        /// APBR: standard deviation of the perturbation series; 0 uses the
        /// RMS of the data.
        perturbation_std: f64 = 0.0, "HSLRA_PERTURBATION_STD";
    }
}

impl ApproximateSettings {
    pub fn validate(&self) -> CliResult<()> {
        if self.input.is_empty() {
            return arg_error("approximate needs --input");
        }
        self.validate_solver()
    }

    pub(crate) fn validate_solver(&self) -> CliResult<()> {
        if self.rank == 0 || self.window < 2 {
            return arg_error("need rank ≥ 1 and window ≥ 2");
        }
        if self.rank >= self.window {
            return arg_error(format!("rank {} must be below the window {}", self.rank, self.window));
        }
        if !(self.perturbation_std >= 0.0) {
            return arg_error("perturbation_std must be ≥ 0");
        }
        Ok(())
    }

    pub fn slra(&self) -> SlraConfig<f64> {
        let mut cfg = SlraConfig::new(self.rank, self.window)
            .with_max_iters(self.max_iters)
            .with_final_correction(self.final_correction);
        cfg.stop_tol = self.stop_tol;
        cfg
    }

    pub fn apbr(&self, seed: u64) -> ApbrConfig<f64> {
        let schedule = Schedule::Geometric {
            initial: self.schedule_initial,
            ratio: self.schedule_ratio,
            cutoff: self.schedule_cutoff,
        };
        ApbrConfig {
            trajectories: self.trajectories,
            start_spread: self.start_spread,
            backtrack: schedule.clone(),
            mutation: schedule,
            perturbation_std: (self.perturbation_std > 0.0).then_some(self.perturbation_std),
            ..ApbrConfig::new(self.slra(), seed)
        }
    }

    /// Runs `method` on `p`; `seed` only matters for APBR.
    pub fn solve(&self, method: Method, p: &TimeSeries64, seed: u64) -> CliResult<SolveReport64> {
        let n = p.len();
        let k = n + 1 - self.window.min(n);
        if self.window > n || self.rank >= k {
            return arg_error(format!(
                "rank {} and window {} do not fit a series of length {n}",
                self.rank, self.window
            ));
        }
        Ok(match method {
            Method::Cadzow => cadzow(p, &self.slra())?,
            Method::Ssa => ssa(p, self.rank, self.window)?,
            Method::Apbr => apbr(p, &self.apbr(seed))?,
        })
    }
}

#[derive(Serialize)]
struct Outcome<'a> {
    method: &'static str,
    n: usize,
    report: &'a SolveReport64,
}

pub fn run(ctx: &Context, settings: ApproximateSettings) -> CliResult<()> {
    let cfg = Effective::new("approximate", ctx.seed, settings);
    let s = cfg.settings();
    let p = TimeSeries64::new(load_series(&s.input, s.column)?)?;
    let report = s.solve(s.method, &p, ctx.seed)?;
    let rows = (0..p.len()).map(|i| {
        vec![
            (i + 1).to_string(),
            num(p.values()[i]),
            num(report.approximant.values()[i]),
        ]
    });
    ctx.out.csv("approximant.csv", &["k", "input", "approximant"], rows)?;
    ctx.out.json(
        "approximate.json",
        &Report {
            schema: SCHEMA,
            config: &cfg,
            result: Outcome {
                method: s.method.name(),
                n: p.len(),
                report: &report,
            },
        },
    )?;
    // a single SSA step is not an iteration to convergence
    if s.method != Method::Ssa && !report.converged {
        return Err(CliError::NotConverged(format!(
            "{} stopped after {} iterations with rank residual {:e}",
            s.method.name(),
            report.iterations_used,
            report.rank_residual
        )));
    }
    Ok(())
}
