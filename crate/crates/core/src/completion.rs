//! Hankel low-rank completion of a known prefix `p0 = (p_1 … p_n)` by `m`
//! future samples.
//!
//! [`exact_complete`] continues the prefix with its minimal recurrence.
//! The nuclear-norm variants minimize `‖S(p)‖_*` over the full series
//! of length `N = n + m`, with the prefix either fixed, penalized, or
//! constrained to a tolerance ball. They share an ADMM loop on the split
//! `Z = S(p)` with scaled dual `U`:
//!
//! ```text
//! Z ← svt(S(p) + U, γ/ρ)
//! p ← argmin f(p) + ρ/2 ‖S(p) − (Z − U)‖²_F
//! U ← U + S(p) − Z
//! ```
//!
//! The `p` step is separable per antidiagonal because
//! `‖S(p) − M‖²_F = Σ_k κ_k (p_k − s_k/κ_k)² + const`, with `s_k` the
//! antidiagonal sums of `M`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hankel::{antidiag_sums, hankel_of, minimal_lrr, HankelStructure};
use crate::linalg::{nuclear_norm, svt_with_stats};
use crate::lrr::apply_lrr;
use crate::matrix::hypot_norm;
use crate::{Matrix, Scalar, TimeSeries};

/// Per-sample weights on the known prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightScheme<T> {
    /// `w_j = 1`.
    Unit,
    /// `w_j = κ_j`, the antidiagonal lengths of the full `L × K` embedding.
    HankelFrobenius,
    /// `w_j = a·exp(l·j)`.
    Exponential { a: T, l: T },
}

impl<T: Scalar> WeightScheme<T> {
    /// Weights for samples `1 … n` of a series embedded with `structure`.
    pub fn weights(&self, n: usize, structure: &HankelStructure) -> Result<Vec<T>> {
        let w: Vec<T> = match *self {
            Self::Unit => vec![T::one(); n],
            Self::HankelFrobenius => (1..=n).map(|j| T::from_usize_lossy(structure.kappa(j))).collect(),
            Self::Exponential { a, l } => (1..=n).map(|j| a * (l * T::from_usize_lossy(j)).exp()).collect(),
        };
        if w.iter().any(|&x| !(x > T::zero()) || !x.is_finite()) {
            return invalid(format!("weight scheme {self:?} yields non-positive or non-finite weights"));
        }
        Ok(w)
    }
}

/// Penalty on the prefix misfit `p_{1:n} − p0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    /// `‖x‖_W = sqrt(Σ w_j x_j²)`.
    #[default]
    Unsquared,
    /// `‖x‖²_W`.
    Squared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompletionMode<T> {
    ExactConstraint,
    Tolerance { tau: T },
    Regularized { gamma: T, loss: Loss },
}

#[derive(Debug, Clone)]
pub struct CompletionProblem<T> {
    pub known: TimeSeries<T>,
    pub horizon: usize,
    /// Window `L` of the embedding of the full series of length `n + m`.
    pub window: usize,
    pub weights: WeightScheme<T>,
    pub mode: CompletionMode<T>,
}

impl<T: Scalar> CompletionProblem<T> {
    pub fn new(known: TimeSeries<T>, horizon: usize, window: usize) -> Result<Self> {
        let p = Self {
            known,
            horizon,
            window,
            weights: WeightScheme::Unit,
            mode: CompletionMode::ExactConstraint,
        };
        p.structure()?;
        Ok(p)
    }

    pub fn with_weights(mut self, weights: WeightScheme<T>) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_mode(mut self, mode: CompletionMode<T>) -> Self {
        self.mode = mode;
        self
    }

    pub fn n_known(&self) -> usize {
        self.known.len()
    }

    pub fn n_total(&self) -> usize {
        self.known.len() + self.horizon
    }

    pub fn structure(&self) -> Result<HankelStructure> {
        HankelStructure::new(self.n_total(), self.window)
    }

    pub fn sample_weights(&self) -> Result<Vec<T>> {
        self.weights.weights(self.n_known(), &self.structure()?)
    }

    /// `‖x‖_W` of the prefix misfit of `p`.
    pub fn misfit(&self, p: &[T]) -> Result<T> {
        let w = self.sample_weights()?;
        Ok(weighted_norm(&w, &misfit_vec(p, self.known.values())))
    }
}

fn misfit_vec<T: Scalar>(p: &[T], p0: &[T]) -> Vec<T> {
    p.iter().zip(p0).map(|(&a, &b)| a - b).collect()
}

fn weighted_norm<T: Scalar>(w: &[T], x: &[T]) -> T {
    let scaled: Vec<T> = w.iter().zip(x).map(|(&w, &x)| w.sqrt() * x).collect();
    hypot_norm(&scaled)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmmSettings<T> {
    /// Initial penalty `ρ`.
    pub rho: T,
    pub max_iters: usize,
    /// Stop when both residuals fall below `tol·‖S(p_init)‖_F`.
    pub tol: T,
    /// Double or halve `ρ` when one residual exceeds the other by this factor.
    pub balance: T,
    pub adapt_rho: bool,
}

impl<T: Scalar> Default for AdmmSettings<T> {
    fn default() -> Self {
        Self {
            rho: T::one(),
            max_iters: 2000,
            tol: T::lit(1e-7).max(T::epsilon() * T::lit(100.0)),
            balance: T::lit(10.0),
            adapt_rho: true,
        }
    }
}

impl<T: Scalar> AdmmSettings<T> {
    fn validate(&self) -> Result<()> {
        if !(self.rho > T::zero()) || !(self.tol > T::zero()) || !(self.balance > T::one()) || self.max_iters == 0 {
            return invalid(format!("invalid solver settings {self:?}"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompletionReport<T> {
    pub completed: TimeSeries<T>,
    pub forecast: Vec<T>,
    /// `f(p) + γ‖Z‖_*` after each iteration (not monotone in general).
    pub objective_trace: Vec<T>,
    /// `‖S(p)‖_*` of the returned series.
    pub nuclear_norm: T,
    pub primal_residual: T,
    pub dual_residual: T,
    pub converged: bool,
    pub iterations: usize,
    /// Regularization weight used (found by bisection in tolerance mode).
    pub gamma: Option<T>,
    /// `‖p_{1:n} − p0‖_W`.
    pub constraint_residual: T,
    pub rho: T,
}

/// Prefix update rule inside the ADMM loop.
#[derive(Clone, Copy)]
enum PrefixStep {
    Fixed,
    Squared,
    Unsquared,
}

/// Minimizer of `sqrt(Σ w x²) + ρ/2 Σ κ (x − e)²`:
/// `x_k = ρκ_k e_k t/(ρκ_k t + w_k)` where `t = ‖x‖_W` solves
/// `h(t) = sqrt(Σ w ρ²κ²e²/(ρκt + w)²) = 1`, or `x = 0` if `h(0) ≤ 1`.
fn prox_weighted_norm<T: Scalar>(e: &[T], w: &[T], rk: &[T]) -> Vec<T> {
    let h = |t: T| {
        let v: Vec<T> = e
            .iter()
            .zip(w)
            .zip(rk)
            .map(|((&e, &w), &r)| w.sqrt() * r * e / (r * t + w))
            .collect();
        hypot_norm(&v)
    };
    if h(T::zero()) <= T::one() {
        return vec![T::zero(); e.len()];
    }
    let (mut lo, mut hi) = (T::zero(), weighted_norm(w, e));
    for _ in 0..200 {
        let mid = T::half() * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= T::lit(1e-12) * hi {
            break;
        }
        if h(mid) > T::one() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = T::half() * (lo + hi);
    e.iter()
        .zip(w)
        .zip(rk)
        .map(|((&e, &w), &r)| r * e * t / (r * t + w))
        .collect()
}

struct Admm<'a, T> {
    p0: &'a [T],
    w: &'a [T],
    kappa: Vec<T>,
    n_total: usize,
    window: usize,
    gamma: T,
    step: PrefixStep,
    settings: &'a AdmmSettings<T>,
}

struct AdmmOutcome<T> {
    p: Vec<T>,
    trace: Vec<T>,
    primal: T,
    dual: T,
    converged: bool,
    iterations: usize,
    rho: T,
}

impl<T: Scalar> Admm<'_, T> {
    fn loss(&self, p: &[T]) -> T {
        let x = misfit_vec(p, self.p0);
        match self.step {
            PrefixStep::Fixed => T::zero(),
            PrefixStep::Squared => weighted_norm(self.w, &x).powi(2),
            PrefixStep::Unsquared => weighted_norm(self.w, &x),
        }
    }

    fn update_p(&self, s: &[T], rho: T) -> Vec<T> {
        let n = self.p0.len();
        let mut p: Vec<T> = s.iter().zip(&self.kappa).map(|(&s, &k)| s / k).collect();
        match self.step {
            PrefixStep::Fixed => p[..n].copy_from_slice(self.p0),
            PrefixStep::Squared => {
                for k in 0..n {
                    let two_w = T::two() * self.w[k];
                    p[k] = (two_w * self.p0[k] + rho * s[k]) / (two_w + rho * self.kappa[k]);
                }
            }
            PrefixStep::Unsquared => {
                let e: Vec<T> = (0..n).map(|k| p[k] - self.p0[k]).collect();
                let rk: Vec<T> = self.kappa[..n].iter().map(|&k| rho * k).collect();
                let x = prox_weighted_norm(&e, self.w, &rk);
                for k in 0..n {
                    p[k] = self.p0[k] + x[k];
                }
            }
        }
        p
    }

    fn run(&self, init: Vec<T>) -> Result<AdmmOutcome<T>> {
        let st = self.settings;
        let mut p = init;
        let mut z = hankel_of(&p, self.window);
        let mut u = Matrix::zeros(z.rows(), z.cols());
        let scale = z.frobenius_norm().max(T::min_positive_value());
        let threshold = st.tol * scale;
        let mut rho = st.rho;
        let mut trace = Vec::new();
        let (mut primal, mut dual) = (T::infinity(), T::infinity());
        let mut converged = false;
        let mut iterations = 0;
        for i in 0..st.max_iters {
            let sp = hankel_of(&p, self.window);
            let mut v = sp.clone();
            v.axpy(T::one(), &u)?;
            let (z_new, _, nuc) = svt_with_stats(&v, self.gamma / rho)?;
            let mut target = z_new.clone();
            target.axpy(-T::one(), &u)?;
            p = self.update_p(&antidiag_sums(&target), rho);
            let sp = hankel_of(&p, self.window);
            let r = sp.sub(&z_new)?;
            u.axpy(T::one(), &r)?;
            primal = r.frobenius_norm();
            dual = rho * z_new.sub(&z)?.frobenius_norm();
            z = z_new;
            trace.push(self.loss(&p) + self.gamma * nuc);
            iterations = i + 1;
            if primal <= threshold && dual <= threshold {
                converged = true;
                break;
            }
            if st.adapt_rho {
                if primal > st.balance * dual {
                    rho = rho * T::two();
                    u = u.scaled(T::half());
                } else if dual > st.balance * primal {
                    rho = rho * T::half();
                    u = u.scaled(T::two());
                }
            }
        }
        debug_assert_eq!(p.len(), self.n_total);
        Ok(AdmmOutcome {
            p,
            trace,
            primal,
            dual,
            converged,
            iterations,
            rho,
        })
    }
}

/// Known prefix followed by `m` copies of its last value.
fn initial_guess<T: Scalar>(p0: &[T], m: usize) -> Vec<T> {
    let last = *p0.last().expect("non-empty prefix");
    p0.iter().copied().chain(std::iter::repeat_n(last, m)).collect()
}

/// Runs the splitting scheme on the problem rescaled to unit RMS and maps
/// the result back.
fn solve_scaled<T: Scalar>(
    problem: &CompletionProblem<T>,
    step: PrefixStep,
    gamma: T,
    settings: &AdmmSettings<T>,
) -> Result<CompletionReport<T>> {
    settings.validate()?;
    let structure = problem.structure()?;
    let n = problem.n_known();
    let n_total = problem.n_total();
    let w = problem.sample_weights()?;
    let rms = problem.known.norm() / T::from_usize_lossy(n).sqrt();
    let report_gamma = match step {
        PrefixStep::Fixed => None,
        _ => Some(gamma),
    };
    if rms == T::zero() {
        return finish(problem, vec![T::zero(); n_total], Vec::new(), T::zero(), T::zero(), true, 0, report_gamma, settings.rho);
    }
    let q0: Vec<T> = problem.known.values().iter().map(|&x| x / rms).collect();
    let gamma_scaled = match step {
        PrefixStep::Fixed => T::one(),
        PrefixStep::Unsquared => gamma,
        PrefixStep::Squared => gamma / rms,
    };
    let admm = Admm {
        p0: &q0,
        w: &w,
        kappa: (1..=n_total).map(|j| T::from_usize_lossy(structure.kappa(j))).collect(),
        n_total,
        window: problem.window,
        gamma: gamma_scaled,
        step,
        settings,
    };
    let out = admm.run(initial_guess(&q0, problem.horizon))?;
    let unscale = match step {
        PrefixStep::Squared => rms * rms,
        _ => rms,
    };
    let trace = out.trace.into_iter().map(|v| v * unscale).collect();
    let mut p: Vec<T> = out.p.into_iter().map(|x| x * rms).collect();
    if let PrefixStep::Fixed = step {
        p[..n].copy_from_slice(problem.known.values());
    }
    finish(
        problem,
        p,
        trace,
        out.primal * rms,
        out.dual * rms,
        out.converged,
        out.iterations,
        report_gamma,
        out.rho,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish<T: Scalar>(
    problem: &CompletionProblem<T>,
    p: Vec<T>,
    objective_trace: Vec<T>,
    primal_residual: T,
    dual_residual: T,
    converged: bool,
    iterations: usize,
    gamma: Option<T>,
    rho: T,
) -> Result<CompletionReport<T>> {
    let n = problem.n_known();
    let nuclear = nuclear_norm(&hankel_of(&p, problem.window))?;
    let constraint_residual = problem.misfit(&p)?;
    let completed = TimeSeries::new(p)?;
    Ok(CompletionReport {
        forecast: completed.values()[n..].to_vec(),
        completed,
        objective_trace,
        nuclear_norm: nuclear,
        primal_residual,
        dual_residual,
        converged,
        iterations,
        gamma,
        constraint_residual,
        rho,
    })
}

/// Continues the prefix with its minimal recurrence of order `r`.
pub fn exact_complete<T: Scalar>(problem: &CompletionProblem<T>, r: usize) -> Result<TimeSeries<T>> {
    let s = problem.structure()?;
    let n = problem.n_known();
    let bound = (s.window() - 1).min(s.cols() - 1).min(n / 2);
    if r == 0 || r > bound {
        return Err(Error::RankMismatch(format!(
            "rank {r} must satisfy 1 ≤ r ≤ min(L−1, K−1, n/2) = {bound}"
        )));
    }
    let lrr = minimal_lrr(&problem.known, r)?;
    apply_lrr(&problem.known, &lrr, problem.horizon)
}

/// `min ‖S(p)‖_*` subject to `p_{1:n} = p0`.
pub fn nn_complete_exactfit<T: Scalar>(
    problem: &CompletionProblem<T>,
    settings: &AdmmSettings<T>,
) -> Result<CompletionReport<T>> {
    if problem.horizon == 0 {
        settings.validate()?;
        let p = problem.known.values().to_vec();
        return finish(problem, p, Vec::new(), T::zero(), T::zero(), true, 0, None, settings.rho);
    }
    solve_scaled(problem, PrefixStep::Fixed, T::one(), settings)
}

/// `min loss(p_{1:n} − p0) + γ‖S(p)‖_*`.
pub fn nn_complete_regularized<T: Scalar>(
    problem: &CompletionProblem<T>,
    gamma: T,
    loss: Loss,
    settings: &AdmmSettings<T>,
) -> Result<CompletionReport<T>> {
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return invalid(format!("γ must be positive and finite, got {gamma}"));
    }
    let step = match loss {
        Loss::Squared => PrefixStep::Squared,
        Loss::Unsquared => PrefixStep::Unsquared,
    };
    solve_scaled(problem, step, gamma, settings)
}

/// Bisection depth on `log γ` in tolerance mode.
const TOLERANCE_BISECTIONS: usize = 60;

/// `min ‖S(p)‖_*` subject to `‖p_{1:n} − p0‖_W ≤ τ`, via bisection on the
/// weight `γ` of the squared-loss problem along the trade-off curve.
/// Stops once the misfit lies in `[0.995τ, τ]`.
pub fn nn_complete_tolerance<T: Scalar>(
    problem: &CompletionProblem<T>,
    tau: T,
    settings: &AdmmSettings<T>,
) -> Result<CompletionReport<T>> {
    if !(tau >= T::zero()) || !tau.is_finite() {
        return invalid(format!("τ must be finite and nonnegative, got {tau}"));
    }
    if tau == T::zero() {
        return nn_complete_exactfit(problem, settings);
    }
    settings.validate()?;
    let zero = vec![T::zero(); problem.n_total()];
    let full = problem.misfit(&zero)?;
    if full <= tau {
        return finish(problem, zero, Vec::new(), T::zero(), T::zero(), true, 0, None, settings.rho);
    }
    let solve = |g: T| nn_complete_regularized(problem, g, Loss::Squared, settings);
    let lower_band = T::lit(0.995) * tau;

    let mut hi = T::one();
    let mut hi_report = solve(hi)?;
    let mut lo_report = None;
    let mut lo = hi;
    if hi_report.constraint_residual <= tau {
        lo_report = Some(hi_report.clone());
        for _ in 0..TOLERANCE_BISECTIONS {
            if hi_report.constraint_residual > tau {
                break;
            }
            lo = hi;
            lo_report = Some(hi_report.clone());
            hi = hi * T::lit(10.0);
            hi_report = solve(hi)?;
        }
    } else {
        for _ in 0..TOLERANCE_BISECTIONS {
            lo = lo * T::lit(0.1);
            let r = solve(lo)?;
            if r.constraint_residual <= tau {
                lo_report = Some(r);
                break;
            }
            hi = lo;
            hi_report = r;
        }
    }
    let Some(mut best) = lo_report else {
        // Even tiny γ misses the ball: fall back to the exact fit.
        return nn_complete_exactfit(problem, settings);
    };
    if hi_report.constraint_residual <= tau {
        let mut r = hi_report;
        r.converged = false;
        return Ok(r);
    }
    for _ in 0..TOLERANCE_BISECTIONS {
        if best.constraint_residual >= lower_band {
            return Ok(best);
        }
        let mid = (lo.ln() + hi.ln()) * T::half();
        let g = mid.exp();
        if g <= lo || g >= hi {
            break;
        }
        let r = solve(g)?;
        if r.constraint_residual <= tau {
            lo = g;
            best = r;
        } else {
            hi = g;
        }
    }
    best.converged = best.converged && best.constraint_residual >= lower_band;
    Ok(best)
}

/// Dispatches on `problem.mode`; the exact-constraint mode uses the
/// nuclear-norm relaxation.
pub fn complete<T: Scalar>(problem: &CompletionProblem<T>, settings: &AdmmSettings<T>) -> Result<CompletionReport<T>> {
    match problem.mode {
        CompletionMode::ExactConstraint => nn_complete_exactfit(problem, settings),
        CompletionMode::Tolerance { tau } => nn_complete_tolerance(problem, tau, settings),
        CompletionMode::Regularized { gamma, loss } => nn_complete_regularized(problem, gamma, loss, settings),
    }
}

/// RMSE over the last `m` samples of two equally long series.
pub fn forecast_rmse<T: Scalar>(truth: &TimeSeries<T>, completed: &TimeSeries<T>, m: usize) -> Result<T> {
    if m == 0 {
        return invalid("forecast horizon must be positive");
    }
    if truth.len() != completed.len() || m > truth.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("two series of equal length ≥ {m}"),
            actual: format!("lengths {} and {}", truth.len(), completed.len()),
        });
    }
    let from = truth.len() - m;
    let diff = misfit_vec(&truth.values()[from..], &completed.values()[from..]);
    Ok(hypot_norm(&diff) / T::from_usize_lossy(m).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TimeSeries<f64> {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn exact_fibonacci() {
        let p = CompletionProblem::new(ts(&[1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0]), 3, 5).unwrap();
        let out = exact_complete(&p, 2).unwrap();
        for (got, want) in out.values()[8..].iter().zip([34.0, 55.0, 89.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!(matches!(exact_complete(&p, 5), Err(Error::RankMismatch(_))));
    }

    #[test]
    fn exactfit_geometric() {
        let known = TimeSeries::from_fn(5, |k| 0.5f64.powi(k as i32)).unwrap();
        let p = CompletionProblem::new(known, 2, 3).unwrap();
        let r = nn_complete_exactfit(&p, &AdmmSettings::default()).unwrap();
        assert!((r.forecast[0] - 0.5f64.powi(6)).abs() < 1e-4, "{:?}", r.forecast);
        assert!((r.forecast[1] - 0.5f64.powi(7)).abs() < 1e-4, "{:?}", r.forecast);
    }

    #[test]
    fn exactfit_square_reflection() {
        let p = CompletionProblem::new(ts(&[2.0, 4.0, 8.0]), 2, 3).unwrap();
        let r = nn_complete_exactfit(&p, &AdmmSettings::default()).unwrap();
        assert!((r.forecast[0] - 4.0).abs() < 1e-4, "{:?}", r.forecast);
        assert!((r.forecast[1] - 2.0).abs() < 1e-4, "{:?}", r.forecast);
    }

    #[test]
    fn no_horizon_is_identity() {
        let known = ts(&[1.0, -2.0, 0.5]);
        let p = CompletionProblem::new(known.clone(), 0, 2).unwrap();
        let r = nn_complete_exactfit(&p, &AdmmSettings::default()).unwrap();
        assert_eq!(r.completed, known);
        assert!(r.forecast.is_empty());
    }

    #[test]
    fn prox_matches_closed_form_for_unit_weights() {
        // With w = 1 and ρκ = 1 the prox is block soft thresholding.
        let e = [3.0f64, 4.0];
        let x = prox_weighted_norm(&e, &[1.0, 1.0], &[1.0, 1.0]);
        assert!((x[0] - 3.0 * 0.8).abs() < 1e-10 && (x[1] - 4.0 * 0.8).abs() < 1e-10);
        let x = prox_weighted_norm(&[0.3f64, 0.4], &[1.0, 1.0], &[1.0, 1.0]);
        assert_eq!(x, vec![0.0, 0.0]);
    }

    #[test]
    fn rmse_examples() {
        let a = ts(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(forecast_rmse(&a, &a, 2).unwrap(), 0.0);
        let b = ts(&[1.0, 2.0, 3.5, 3.5]);
        assert!((forecast_rmse(&a, &b, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!(forecast_rmse(&a, &b, 0).is_err());
    }

    #[test]
    fn weight_schemes() {
        let s = HankelStructure::new(5, 2).unwrap();
        assert_eq!(WeightScheme::<f64>::HankelFrobenius.weights(5, &s).unwrap(), vec![1.0, 2.0, 2.0, 2.0, 1.0]);
        let w = WeightScheme::Exponential { a: 2.0, l: 0.0 }.weights(3, &s).unwrap();
        assert_eq!(w, vec![2.0; 3]);
        assert!(WeightScheme::Exponential { a: -1.0, l: 0.0 }.weights(3, &s).is_err());
    }
}
