use clap::ValueEnum;
use hslra::{
    complete, exact_complete, forecast_rmse, AdmmSettings, CompletionMode, CompletionProblem, CompletionReport64,
    TimeSeries64, WeightScheme,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{load_series, LossChoice, Report};
use crate::config::{parse_values, settings, Effective};
use crate::error::{arg_error, CliError, CliResult};
use crate::io::{num, opt_num};
use crate::Context;

pub const SCHEMA: &str = "hslra.forecast/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeChoice {
    /// Continue the minimal linear recurrence of order `rank`.
    Exact,
    /// Nuclear-norm completion with the known samples held fixed.
    NnExact,
    /// Weighted misfit plus γ times the nuclear norm.
    Regularized,
    /// Nuclear-norm minimization within misfit τ.
    Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightChoice {
    /// w_j = 1.
    Unit,
    /// w_j = antidiagonal length, so the misfit is a Hankel Frobenius norm.
    Hankel,
    /// w_j = a·exp(l·j).
    Exponential,
}

settings! {
    ForecastArgs => ForecastSettings {
        /// Series CSV (one sample per line, optional header).
        input: String = String::new(), "HSLRA_INPUT";
        /// 0-based column to read.
        column: usize = 0, "HSLRA_COLUMN";
        /// Number of leading samples treated as known; 0 uses all of them.
        /// Samples after the known prefix serve as truth for the RMSE.
        known: usize = 0, "HSLRA_KNOWN";
        /// Number of samples to forecast.
        horizon: usize = 0, "HSLRA_HORIZON";
        /// Window length L over the completed series; 0 picks ⌈(n+m)/2⌉.
        window: usize = 0, "HSLRA_WINDOW";
        mode: ModeChoice = ModeChoice::Regularized, "HSLRA_MODE";
        /// Recurrence order for `exact` mode.
        rank: usize = 2, "HSLRA_RANK";
        gamma: f64 = 100.0, "HSLRA_GAMMA";
        tau: f64 = 0.0, "HSLRA_TAU";
        loss: LossChoice = LossChoice::Unsquared, "HSLRA_LOSS";
        weights: WeightChoice = WeightChoice::Unit, "HSLRA_WEIGHTS";
        a: f64 = 0.001, "HSLRA_A";
        l: f64 = 0.017, "HSLRA_L";
        /// Sweep values, e.g. `log:1e-4:1e-1:7` or `0.01,0.02`; empty
        /// keeps the single value above.
        grid_a: String = String::new(), "HSLRA_GRID_A";
        grid_l: String = String::new(), "HSLRA_GRID_L";
        grid_gamma: String = String::new(), "HSLRA_GRID_GAMMA";
        rho: f64 = 1.0, "HSLRA_RHO";
        max_iters: usize = 2000, "HSLRA_MAX_ITERS";
        tol: f64 = 1e-7, "HSLRA_TOL";
    }
}

/// Known prefix, horizon and (if the input is long enough) the truth.
#[derive(Debug, Clone)]
pub struct Split {
    pub known: TimeSeries64,
    pub truth: Option<TimeSeries64>,
    pub horizon: usize,
    pub window: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Solved {
    pub completed: Vec<f64>,
    pub forecast: Vec<f64>,
    pub rmse: Option<f64>,
    pub converged: bool,
    pub solver: Option<CompletionReport64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub a: f64,
    pub l: f64,
    pub gamma: f64,
    pub rmse: f64,
    pub converged: bool,
    pub iterations: usize,
    pub nuclear_norm: f64,
}

impl ForecastSettings {
    pub fn validate(&self) -> CliResult<()> {
        if self.input.is_empty() {
            return arg_error("forecast needs --input");
        }
        self.validate_solver()?;
        if self.has_grid() {
            if self.mode != ModeChoice::Regularized {
                return arg_error("grid sweeps need --mode regularized");
            }
            let (a, l, _) = self.grid_values()?;
            if (a.len() > 1 || l.len() > 1 || !self.grid_a.is_empty() || !self.grid_l.is_empty())
                && self.weights != WeightChoice::Exponential
            {
                return arg_error("sweeping a or l needs --weights exponential");
            }
        }
        Ok(())
    }

    pub(crate) fn validate_solver(&self) -> CliResult<()> {
        match self.mode {
            ModeChoice::Regularized if !(self.gamma > 0.0) => arg_error("gamma must be positive"),
            ModeChoice::Tolerance if !(self.tau >= 0.0) => arg_error("tau must be ≥ 0"),
            ModeChoice::Exact if self.rank == 0 => arg_error("exact mode needs rank ≥ 1"),
            _ if !(self.rho > 0.0) || !(self.tol > 0.0) || self.max_iters == 0 => {
                arg_error("rho and tol must be positive and max_iters nonzero")
            }
            _ => Ok(()),
        }
    }

    pub fn has_grid(&self) -> bool {
        !(self.grid_a.is_empty() && self.grid_l.is_empty() && self.grid_gamma.is_empty())
    }

    fn grid_values(&self) -> CliResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let pick = |spec: &str, single: f64, what| {
            if spec.is_empty() {
                Ok(vec![single])
            } else {
                parse_values(spec, what)
            }
        };
        Ok((
            pick(&self.grid_a, self.a, "grid_a")?,
            pick(&self.grid_l, self.l, "grid_l")?,
            pick(&self.grid_gamma, self.gamma, "grid_gamma")?,
        ))
    }

    pub fn split(&self, data: &[f64]) -> CliResult<Split> {
        let n = if self.known == 0 { data.len() } else { self.known };
        if n > data.len() {
            return arg_error(format!("known = {n} exceeds the {} input samples", data.len()));
        }
        let total = n + self.horizon;
        let window = if self.window == 0 { total.div_ceil(2) } else { self.window };
        if window > total {
            return arg_error(format!("window {window} exceeds n + m = {total}"));
        }
        let truth = if self.horizon > 0 && data.len() >= total {
            Some(TimeSeries64::new(data[..total].to_vec())?)
        } else {
            None
        };
        Ok(Split {
            known: TimeSeries64::new(data[..n].to_vec())?,
            truth,
            horizon: self.horizon,
            window,
        })
    }

    pub fn weight_scheme(&self, a: f64, l: f64) -> WeightScheme<f64> {
        match self.weights {
            WeightChoice::Unit => WeightScheme::Unit,
            WeightChoice::Hankel => WeightScheme::HankelFrobenius,
            WeightChoice::Exponential => WeightScheme::Exponential { a, l },
        }
    }

    fn admm(&self) -> AdmmSettings<f64> {
        AdmmSettings {
            rho: self.rho,
            max_iters: self.max_iters,
            tol: self.tol,
            ..AdmmSettings::default()
        }
    }

    /// Solves once with the given weights and γ (γ only used in
    /// regularized mode).
    pub fn solve(&self, split: &Split, weights: WeightScheme<f64>, gamma: f64) -> CliResult<Solved> {
        let problem = CompletionProblem::new(split.known.clone(), split.horizon, split.window)?.with_weights(weights);
        let n = split.known.len();
        let (completed, converged, solver) = match self.mode {
            ModeChoice::Exact => (exact_complete(&problem, self.rank)?, true, None),
            mode => {
                let mode = match mode {
                    ModeChoice::NnExact => CompletionMode::ExactConstraint,
                    ModeChoice::Tolerance => CompletionMode::Tolerance { tau: self.tau },
                    _ => CompletionMode::Regularized {
                        gamma,
                        loss: self.loss.into(),
                    },
                };
                let report = complete(&problem.with_mode(mode), &self.admm())?;
                (report.completed.clone(), report.converged, Some(report))
            }
        };
        let rmse = match &split.truth {
            Some(truth) => Some(forecast_rmse(truth, &completed, split.horizon)?),
            None => None,
        };
        let values = completed.into_values();
        Ok(Solved {
            forecast: values[n..].to_vec(),
            completed: values,
            rmse,
            converged,
            solver,
        })
    }

    /// Every (a, l, γ) cell, in nested order a → l → γ regardless of how
    /// the work is scheduled.
    pub fn sweep(&self, split: &Split, a: &[f64], l: &[f64], gamma: &[f64]) -> CliResult<Vec<Cell>> {
        if split.truth.is_none() {
            return arg_error("a sweep needs truth: the input must extend past known + horizon");
        }
        let points: Vec<(f64, f64, f64)> = a
            .iter()
            .flat_map(|&a| l.iter().flat_map(move |&l| gamma.iter().map(move |&g| (a, l, g))))
            .collect();
        points
            .par_iter()
            .map(|&(a, l, g)| {
                let solved = self.solve(split, self.weight_scheme(a, l), g)?;
                let report = solved.solver.as_ref().expect("regularized sweeps use the ADMM solver");
                Ok(Cell {
                    a,
                    l,
                    gamma: g,
                    rmse: solved.rmse.expect("truth present"),
                    converged: solved.converged,
                    iterations: report.iterations,
                    nuclear_norm: report.nuclear_norm,
                })
            })
            .collect()
    }
}

/// Lowest-RMSE cell; earliest on ties.
pub fn best_cell(cells: &[Cell]) -> Option<Cell> {
    cells
        .iter()
        .copied()
        .reduce(|best, c| if c.rmse < best.rmse { c } else { best })
}

pub fn write_grid(ctx: &Context, name: &str, cells: &[Cell]) -> CliResult<()> {
    let rows = cells.iter().map(|c| {
        vec![
            num(c.a),
            num(c.l),
            num(c.gamma),
            num(c.rmse),
            c.converged.to_string(),
            c.iterations.to_string(),
            num(c.nuclear_norm),
        ]
    });
    ctx.out.csv(
        name,
        &["a", "l", "gamma", "rmse", "converged", "iterations", "nuclear_norm"],
        rows,
    )?;
    Ok(())
}

pub fn write_completed(ctx: &Context, name: &str, split: &Split, solved: &Solved) -> CliResult<()> {
    let n = split.known.len();
    let rows = solved.completed.iter().enumerate().map(|(i, &x)| {
        let truth = split.truth.as_ref().map(|t| t.values()[i]);
        let role = if i < n { "known" } else { "forecast" };
        vec![(i + 1).to_string(), role.to_string(), opt_num(truth), num(x)]
    });
    ctx.out.csv(name, &["k", "role", "truth", "value"], rows)?;
    Ok(())
}

#[derive(Serialize)]
struct Outcome<'a> {
    n: usize,
    horizon: usize,
    window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    best: Option<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_cells: Option<usize>,
    result: &'a Solved,
}

pub fn run(ctx: &Context, settings: ForecastSettings) -> CliResult<()> {
    let cfg = Effective::new("forecast", ctx.seed, settings);
    let s = cfg.settings();
    let split = s.split(&load_series(&s.input, s.column)?)?;

    let (solved, best, cells) = if s.has_grid() {
        let (a, l, g) = s.grid_values()?;
        let cells = s.sweep(&split, &a, &l, &g)?;
        write_grid(ctx, "grid.csv", &cells)?;
        let best = best_cell(&cells).expect("non-empty grid");
        let solved = s.solve(&split, s.weight_scheme(best.a, best.l), best.gamma)?;
        (solved, Some(best), Some(cells.len()))
    } else {
        (s.solve(&split, s.weight_scheme(s.a, s.l), s.gamma)?, None, None)
    };

    write_completed(ctx, "forecast.csv", &split, &solved)?;
    ctx.out.json(
        "forecast.json",
        &Report {
            schema: SCHEMA,
            config: &cfg,
            result: Outcome {
                n: split.known.len(),
                horizon: split.horizon,
                window: split.window,
                best,
                grid_cells: cells,
                result: &solved,
            },
        },
    )?;
    if !solved.converged {
        let (iters, primal) = solved
            .solver
            .as_ref()
            .map(|r| (r.iterations, r.primal_residual))
            .unwrap_or_default();
        return Err(CliError::NotConverged(format!(
            "completion stopped after {iters} iterations with primal residual {primal:e}"
        )));
    }
    Ok(())
}
