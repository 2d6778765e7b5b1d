//! Structured low-rank approximation of a series: find `p̂` close to `p0`
//! with `rank S(p̂) ≤ r`.
//!
//! Three solvers share one iteration kernel:
//!
//! * [`cadzow`]: alternating projections onto rank-`r` matrices and onto
//!   Hankel matrices, optionally followed by the scalar correction;
//! * [`cadzow`] with `correct_each_iteration`: the same iteration with the
//!   scalar correction applied after every step;
//! * [`apbr`]: multistart alternating projections with backtracking toward
//!   the data and random Hankel mutations. With a zero start spread and
//!   zero schedules a single trajectory reproduces the corrected Cadzow
//!   iteration bit for bit.
//!
//! Iterates are kept as series; the Hankel matrices are formed only to
//! take SVDs.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::hankel::{hankel_of, project_hankel, project_hankel_weighted, HankelStructure};
use crate::linalg::{qr_norm, svd, QrWeights};
use crate::matrix::hypot_norm;
use crate::signals::{rng_from_seed, standard_normal, Rng};
use crate::{Matrix, Scalar, TimeSeries};

/// Matrix norm the approximation is measured in.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)] // built once per solve
pub enum SlraWeights<T> {
    Frobenius,
    Qr(QrWeights<T>),
}

impl<T: Scalar> SlraWeights<T> {
    /// `<X, Y>` in the configured norm.
    fn inner(&self, x: &Matrix<T>, y: &Matrix<T>) -> Result<T> {
        match self {
            Self::Frobenius => x.frobenius_dot(y),
            Self::Qr(w) => w.q().mul(x).mul(w.r()).frobenius_dot(y),
        }
    }

    pub fn norm(&self, x: &Matrix<T>) -> Result<T> {
        match self {
            Self::Frobenius => Ok(x.frobenius_norm()),
            Self::Qr(w) => qr_norm(x, w),
        }
    }

    /// Norm of the embedded difference `‖S(a) − S(b)‖`, computed in series
    /// space for the Frobenius case via the antidiagonal weights.
    fn series_distance(&self, a: &[T], b: &[T], window: usize) -> T {
        let diff: Vec<T> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
        match self {
            Self::Frobenius => weighted_series_norm(&diff, window),
            Self::Qr(w) => qr_norm(&hankel_of(&diff, window), w).expect("shape checked at validation"),
        }
    }

    fn is_name(&self) -> &'static str {
        match self {
            Self::Frobenius => "frobenius",
            Self::Qr(_) => "qr",
        }
    }
}

/// `‖S(x)‖_F = sqrt(Σ κ_j x_j²)`.
fn weighted_series_norm<T: Scalar>(x: &[T], window: usize) -> T {
    let s = HankelStructure::new(x.len(), window).expect("valid window");
    let scaled: Vec<T> = x
        .iter()
        .enumerate()
        .map(|(j, &v)| v * T::from_usize_lossy(s.kappa(j + 1)).sqrt())
        .collect();
    hypot_norm(&scaled)
}

#[derive(Debug, Clone)]
pub struct SlraConfig<T> {
    pub rank: usize,
    pub window: usize,
    pub weights: SlraWeights<T>,
    pub max_iters: usize,
    /// Stop once `‖p_i − p_{i−1}‖₂ / ‖p_{i−1}‖₂` drops below this.
    pub stop_tol: T,
    /// A stopped run counts as converged only if `σ_{r+1}/σ_1 ≤ rank_tol`.
    pub rank_tol: T,
    pub apply_final_correction: bool,
    pub correct_each_iteration: bool,
}

impl<T: Scalar> SlraConfig<T> {
    /// Frobenius weights, 500 iterations, `stop_tol = 1e-9`, no correction.
    pub fn new(rank: usize, window: usize) -> Self {
        Self {
            rank,
            window,
            weights: SlraWeights::Frobenius,
            max_iters: 500,
            stop_tol: T::lit(1e-9).max(T::epsilon() * T::lit(10.0)),
            rank_tol: T::lit(1e-6).max(T::epsilon().sqrt() * T::lit(10.0)),
            apply_final_correction: false,
            correct_each_iteration: false,
        }
    }

    pub fn with_weights(mut self, weights: SlraWeights<T>) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_final_correction(mut self, on: bool) -> Self {
        self.apply_final_correction = on;
        self
    }

    pub fn with_iteration_correction(mut self, on: bool) -> Self {
        self.correct_each_iteration = on;
        self
    }

    pub fn validate(&self, n: usize) -> Result<HankelStructure> {
        let s = HankelStructure::new(n, self.window)?;
        if self.rank == 0 || self.rank >= s.window().min(s.cols()) {
            return invalid(format!(
                "rank {} must satisfy 1 ≤ r < min(L, K) = {}",
                self.rank,
                s.window().min(s.cols())
            ));
        }
        if self.max_iters == 0 {
            return invalid("max_iters must be ≥ 1");
        }
        if !(self.stop_tol > T::zero()) || !(self.rank_tol > T::zero()) {
            return invalid("tolerances must be positive");
        }
        if let SlraWeights::Qr(w) = &self.weights {
            if w.shape() != (s.window(), s.cols()) {
                return Err(Error::DimensionMismatch {
                    expected: format!("weights for {}x{}", s.window(), s.cols()),
                    actual: format!("{:?}", w.shape()),
                });
            }
        }
        Ok(s)
    }
}

/// Per-iteration coefficient sequence: `δ_i` or `σ_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule<T> {
    /// `initial · ratio^i` for `i < cutoff`, zero afterwards.
    Geometric { initial: T, ratio: T, cutoff: usize },
    /// Explicit values; zero past the end.
    Explicit { values: Vec<T> },
}

impl<T: Scalar> Schedule<T> {
    pub fn zero() -> Self {
        Self::Explicit { values: Vec::new() }
    }

    pub fn value(&self, i: usize) -> T {
        match self {
            Self::Geometric { initial, ratio, cutoff } if i < *cutoff => *initial * ratio.powi(i as i32),
            Self::Geometric { .. } => T::zero(),
            Self::Explicit { values } => values.get(i).copied().unwrap_or_else(T::zero),
        }
    }

    /// First iteration from which the schedule is identically zero.
    pub fn cutoff(&self) -> usize {
        match self {
            Self::Geometric { initial, cutoff, .. } => {
                if *initial == T::zero() {
                    0
                } else {
                    *cutoff
                }
            }
            Self::Explicit { values } => values.iter().rposition(|&v| v != T::zero()).map_or(0, |i| i + 1),
        }
    }

    fn check(&self, name: &str, upper: Option<T>) -> Result<()> {
        let bad = |v: T| !(v >= T::zero()) || upper.is_some_and(|u| v > u) || !v.is_finite();
        let ok = match self {
            Self::Geometric { initial, ratio, .. } => {
                !bad(*initial) && *ratio >= T::zero() && *ratio <= T::one()
            }
            Self::Explicit { values } => !values.iter().any(|&v| bad(v)),
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("invalid {name} schedule {self:?}"))
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApbrConfig<T> {
    pub base: SlraConfig<T>,
    /// Number of independent trajectories `M`.
    pub trajectories: usize,
    /// Start spread `s0 ∈ [0, 1]`.
    pub start_spread: T,
    /// Backtracking weights `δ_i ∈ [0, 1]`.
    pub backtrack: Schedule<T>,
    /// Mutation weights `σ_i ≥ 0`.
    pub mutation: Schedule<T>,
    /// Standard deviation of the Gaussian series behind the perturbation
    /// Hankel matrix. `None` uses the RMS of the data, `‖p0‖₂/√N`.
    pub perturbation_std: Option<T>,
    /// Trajectory `j` draws from seed `seed + j`.
    pub seed: u64,
}

impl<T: Scalar> ApbrConfig<T> {
    /// `M = 10`, `s0 = 0.1`, `δ_i = 0.1·0.9^i`, `σ_i = 0.1·0.9^i`, both cut
    /// off after 30 iterations, perturbation std = RMS of the data.
    pub fn new(base: SlraConfig<T>, seed: u64) -> Self {
        let geometric = Schedule::Geometric {
            initial: T::lit(0.1),
            ratio: T::lit(0.9),
            cutoff: 30,
        };
        Self {
            base,
            trajectories: 10,
            start_spread: T::lit(0.1),
            backtrack: geometric.clone(),
            mutation: geometric,
            perturbation_std: None,
            seed,
        }
    }

    /// All randomness and backtracking switched off.
    pub fn deterministic(base: SlraConfig<T>) -> Self {
        Self {
            trajectories: 1,
            start_spread: T::zero(),
            backtrack: Schedule::zero(),
            mutation: Schedule::zero(),
            ..Self::new(base, 0)
        }
    }

    pub fn validate(&self, n: usize) -> Result<HankelStructure> {
        let s = self.base.validate(n)?;
        if self.trajectories == 0 {
            return invalid("need at least one trajectory");
        }
        if !(self.start_spread >= T::zero() && self.start_spread <= T::one()) {
            return invalid(format!("start spread {} outside [0, 1]", self.start_spread));
        }
        self.backtrack.check("backtracking", Some(T::one()))?;
        self.mutation.check("mutation", None)?;
        if self.perturbation_std.is_some_and(|v| !(v >= T::zero()) || !v.is_finite()) {
            return invalid("perturbation std must be finite and ≥ 0");
        }
        Ok(s)
    }

    /// Iteration after which both schedules vanish.
    pub fn schedule_cutoff(&self) -> usize {
        self.backtrack.cutoff().max(self.mutation.cutoff())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport<T> {
    pub approximant: TimeSeries<T>,
    pub iterations_used: usize,
    /// `‖S(p̂) − S(p0)‖` in the configured matrix norm; for Frobenius
    /// weights this is `sqrt(Σ κ_j (p̂_j − p0_j)²)`.
    pub objective: T,
    /// Plain `‖p̂ − p0‖₂`.
    pub l2_residual: T,
    /// `σ_{r+1}/σ_1` of `S(p̂)`.
    pub rank_residual: T,
    pub converged: bool,
    /// Objective after each iteration.
    pub trace: Vec<T>,
    /// `‖A − π_r(A)‖` of the iterate entering each iteration.
    pub gap_trace: Vec<T>,
    /// Scalar correction applied after the last iteration, if any.
    pub final_correction: Option<T>,
    /// Winning trajectory and every trajectory's final objective (APBR).
    pub best_trajectory: Option<usize>,
    pub trajectory_objectives: Vec<T>,
    pub weights: &'static str,
}

/// `c = argmin_b ‖target − b·z‖²` in the configured norm, and `c·z`.
pub fn scalar_correction<T: Scalar>(
    z: &Matrix<T>,
    target: &Matrix<T>,
    weights: &SlraWeights<T>,
) -> Result<(T, Matrix<T>)> {
    let zz = weights.inner(z, z)?;
    if !(zz > T::zero()) {
        return Err(Error::Degenerate("scalar correction of a zero matrix".into()));
    }
    let c = weights.inner(z, target)? / zz;
    let corrected = z.scaled(c);
    debug_assert!({
        let before = weights.norm(&z.sub(target)?)?;
        let after = weights.norm(&corrected.sub(target)?)?;
        after <= before * (T::one() + T::epsilon() * T::lit(64.0)) + T::min_positive_value()
    });
    Ok((c, corrected))
}

/// Series-space version of [`scalar_correction`] for Hankel `z`, `target`.
fn correct_series<T: Scalar>(z: &[T], target: &[T], window: usize, weights: &SlraWeights<T>) -> Result<T> {
    match weights {
        SlraWeights::Frobenius => {
            let s = HankelStructure::new(z.len(), window)?;
            let (mut zz, mut zt) = (T::zero(), T::zero());
            for (j, (&a, &b)) in z.iter().zip(target).enumerate() {
                let k = T::from_usize_lossy(s.kappa(j + 1));
                zz = zz + k * a * a;
                zt = zt + k * a * b;
            }
            if !(zz > T::zero()) {
                return Err(Error::Degenerate("scalar correction of a zero series".into()));
            }
            Ok(zt / zz)
        }
        SlraWeights::Qr(_) => {
            let (c, _) = scalar_correction(&hankel_of(z, window), &hankel_of(target, window), weights)?;
            Ok(c)
        }
    }
}

/// `π_H(π_r(S(p)))` as a series, plus `‖S(p) − π_r(S(p))‖`.
fn project_once<T: Scalar>(p: &[T], cfg: &SlraConfig<T>) -> Result<(Vec<T>, T)> {
    let a = hankel_of(p, cfg.window);
    match &cfg.weights {
        SlraWeights::Frobenius => {
            let f = svd(&a)?;
            let gap = f.tail_norm(cfg.rank);
            Ok((project_hankel(&f.reconstruct(cfg.rank))?.into_values(), gap))
        }
        SlraWeights::Qr(w) => {
            let f = svd(&w.whiten(&a)?)?;
            let gap = f.tail_norm(cfg.rank);
            let low = w.unwhiten(&f.reconstruct(cfg.rank))?;
            Ok((project_hankel_weighted(&low, w)?.into_values(), gap))
        }
    }
}

fn rank_residual<T: Scalar>(p: &[T], window: usize, rank: usize) -> Result<T> {
    let f = svd(&hankel_of(p, window))?;
    let s1 = f.singular_values[0];
    Ok(if s1 == T::zero() {
        T::zero()
    } else {
        f.singular_values.get(rank).map_or(T::zero(), |&s| s / s1)
    })
}

fn relative_change<T: Scalar>(new: &[T], old: &[T]) -> T {
    let diff: Vec<T> = new.iter().zip(old).map(|(&a, &b)| a - b).collect();
    let d = hypot_norm(&diff);
    let base = hypot_norm(old);
    if base == T::zero() {
        d
    } else {
        d / base
    }
}

/// Randomization and backtracking for one trajectory; `None` means plain
/// (optionally corrected) alternating projections.
struct Perturbation<'a, T> {
    cfg: &'a ApbrConfig<T>,
    rng: Rng,
    std: T,
}

impl<T: Scalar> Perturbation<'_, T> {
    fn gaussian_series(&mut self, n: usize) -> Vec<T> {
        (0..n).map(|_| self.std * standard_normal::<T>(&mut self.rng)).collect()
    }
}

struct Trajectory<T> {
    p: Vec<T>,
    iterations: usize,
    stopped: bool,
    trace: Vec<T>,
    gap_trace: Vec<T>,
}

fn run_trajectory<T: Scalar>(
    p0: &[T],
    cfg: &SlraConfig<T>,
    mut perturb: Option<Perturbation<'_, T>>,
) -> Result<Trajectory<T>> {
    let n = p0.len();
    let mut p = p0.to_vec();
    if let Some(pt) = perturb.as_mut() {
        let s0 = pt.cfg.start_spread;
        let xi = pt.gaussian_series(n);
        p = p0
            .iter()
            .zip(&xi)
            .map(|(&a, &x)| (T::one() - s0) * a + s0 * x)
            .collect();
    }
    let cutoff = perturb.as_ref().map_or(0, |pt| pt.cfg.schedule_cutoff());
    let mut trace = Vec::new();
    let mut gap_trace = Vec::new();
    let mut stopped = false;
    let mut iterations = 0;
    for i in 0..cfg.max_iters {
        let (mut next, gap) = project_once(&p, cfg)?;
        gap_trace.push(gap);
        if let Some(pt) = perturb.as_mut() {
            let delta = pt.cfg.backtrack.value(i);
            let sigma = pt.cfg.mutation.value(i);
            if delta != T::zero() {
                for (x, &a) in next.iter_mut().zip(p0) {
                    *x = (T::one() - delta) * *x + delta * a;
                }
            }
            if sigma != T::zero() {
                let xi = pt.gaussian_series(n);
                for (x, &e) in next.iter_mut().zip(&xi) {
                    *x = *x + sigma * e;
                }
            }
        }
        if cfg.correct_each_iteration || perturb.is_some() {
            let c = correct_series(&next, p0, cfg.window, &cfg.weights)?;
            next.iter_mut().for_each(|x| *x = *x * c);
        }
        iterations = i + 1;
        trace.push(cfg.weights.series_distance(&next, p0, cfg.window));
        let change = relative_change(&next, &p);
        p = next;
        if i >= cutoff && change < cfg.stop_tol {
            stopped = true;
            break;
        }
    }
    Ok(Trajectory {
        p,
        iterations,
        stopped,
        trace,
        gap_trace,
    })
}

fn finish<T: Scalar>(
    p0: &[T],
    cfg: &SlraConfig<T>,
    mut t: Trajectory<T>,
    allow_final_correction: bool,
) -> Result<SolveReport<T>> {
    let mut final_correction = None;
    if allow_final_correction && cfg.apply_final_correction {
        let c = correct_series(&t.p, p0, cfg.window, &cfg.weights)?;
        t.p.iter_mut().for_each(|x| *x = *x * c);
        final_correction = Some(c);
    }
    let rank_residual = rank_residual(&t.p, cfg.window, cfg.rank)?;
    let objective = cfg.weights.series_distance(&t.p, p0, cfg.window);
    let diff: Vec<T> = t.p.iter().zip(p0).map(|(&a, &b)| a - b).collect();
    Ok(SolveReport {
        approximant: TimeSeries::new(t.p)?,
        iterations_used: t.iterations,
        objective,
        l2_residual: hypot_norm(&diff),
        rank_residual,
        converged: t.stopped && rank_residual <= cfg.rank_tol,
        trace: t.trace,
        gap_trace: t.gap_trace,
        final_correction,
        best_trajectory: None,
        trajectory_objectives: Vec::new(),
        weights: cfg.weights.is_name(),
    })
}

/// Alternating projections `A ← π_H(π_r(A))` from `A = S(p0)`.
pub fn cadzow<T: Scalar>(p0: &TimeSeries<T>, cfg: &SlraConfig<T>) -> Result<SolveReport<T>> {
    cfg.validate(p0.len())?;
    let t = run_trajectory(p0.values(), cfg, None)?;
    finish(p0.values(), cfg, t, true)
}

/// A single Cadzow iteration: basic singular spectrum analysis.
pub fn ssa<T: Scalar>(p0: &TimeSeries<T>, rank: usize, window: usize) -> Result<SolveReport<T>> {
    cadzow(p0, &SlraConfig::new(rank, window).with_max_iters(1))
}

/// Multistart alternating projections with backtracking and randomization.
/// Returns the trajectory with the smallest final objective (lowest index
/// on ties).
pub fn apbr<T: Scalar>(p0: &TimeSeries<T>, cfg: &ApbrConfig<T>) -> Result<SolveReport<T>> {
    cfg.validate(p0.len())?;
    let n = p0.len();
    let std = cfg
        .perturbation_std
        .unwrap_or_else(|| p0.norm() / T::from_usize_lossy(n).sqrt());
    let mut best: Option<SolveReport<T>> = None;
    let mut objectives = Vec::with_capacity(cfg.trajectories);
    for j in 0..cfg.trajectories {
        let perturb = Perturbation {
            cfg,
            rng: rng_from_seed(cfg.seed.wrapping_add(j as u64)),
            std,
        };
        let t = run_trajectory(p0.values(), &cfg.base, Some(perturb))?;
        let mut report = finish(p0.values(), &cfg.base, t, false)?;
        objectives.push(report.objective);
        if best.as_ref().is_none_or(|b| report.objective < b.objective) {
            report.best_trajectory = Some(j);
            best = Some(report);
        }
    }
    let mut best = best.expect("at least one trajectory");
    best.trajectory_objectives = objectives;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correction_examples() {
        let t = Matrix::from_rows(&[vec![1.0f64, 2.0], vec![2.0, 3.0]]).unwrap();
        let w = SlraWeights::Frobenius;
        let (c, _) = scalar_correction(&t, &t, &w).unwrap();
        assert!((c - 1.0).abs() < 1e-15);
        let (c, fixed) = scalar_correction(&t.scaled(2.0), &t, &w).unwrap();
        assert!((c - 0.5).abs() < 1e-15);
        assert!(fixed.sub(&t).unwrap().max_abs() < 1e-15);
        assert!(matches!(
            scalar_correction(&Matrix::zeros(2, 2), &t, &w),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn config_validation() {
        let p = TimeSeries::from_fn(10, |k| k as f64).unwrap();
        assert!(cadzow(&p, &SlraConfig::new(0, 4)).is_err());
        assert!(cadzow(&p, &SlraConfig::new(4, 4)).is_err());
        assert!(cadzow(&p, &SlraConfig::new(1, 11)).is_err());
        assert!(cadzow(&p, &SlraConfig::new(1, 4).with_max_iters(0)).is_err());
        let mut bad = ApbrConfig::new(SlraConfig::new(1, 4), 0);
        bad.start_spread = 1.5;
        assert!(apbr(&p, &bad).is_err());
        let mut bad = ApbrConfig::new(SlraConfig::new(1, 4), 0);
        bad.backtrack = Schedule::Explicit { values: vec![0.5, 2.0] };
        assert!(apbr(&p, &bad).is_err());
    }

    #[test]
    fn schedules_vanish_after_cutoff() {
        let s = Schedule::Geometric { initial: 0.1f64, ratio: 0.9, cutoff: 30 };
        assert!((s.value(2) - 0.081).abs() < 1e-15);
        assert_eq!(s.value(30), 0.0);
        assert_eq!(s.cutoff(), 30);
        let e = Schedule::Explicit { values: vec![0.3, 0.0, 0.1, 0.0] };
        assert_eq!(e.cutoff(), 3);
        assert_eq!(Schedule::<f64>::zero().cutoff(), 0);
    }
}
