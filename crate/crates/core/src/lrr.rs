//! Linear recurrence relations `θ_0 p_k + … + θ_r p_{k+r} = 0`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::matrix::hypot_norm;
use crate::{Scalar, TimeSeries};

/// Nonzero coefficient vector `θ = (θ_0, …, θ_r)` of a linear recurrence.
///
/// Stored with unit Euclidean norm and the first entry that is not
/// negligible (relative to the largest) positive; a recurrence is only
/// defined up to scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LrrCoefficients<T> {
    theta: Vec<T>,
}

impl<T: Scalar> LrrCoefficients<T> {
    pub fn new(theta: Vec<T>) -> Result<Self> {
        if theta.is_empty() {
            return invalid("recurrence needs at least one coefficient");
        }
        if let Some(index) = theta.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let norm = hypot_norm(&theta);
        if norm == T::zero() {
            return invalid("recurrence coefficients must not all be zero");
        }
        let mut theta: Vec<T> = theta.into_iter().map(|x| x / norm).collect();
        let max = theta.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        let lead = theta
            .iter()
            .find(|x| x.abs() > max * T::default_rank_tol())
            .copied()
            .expect("nonzero vector");
        if lead < T::zero() {
            theta.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    /// Recurrence order `r` (number of coefficients minus one).
    pub fn order(&self) -> usize {
        self.theta.len() - 1
    }

    /// Whether the last coefficient is non-negligible, i.e. the recurrence
    /// can be solved for the newest sample.
    pub fn is_continuable(&self) -> bool {
        self.theta[self.order()].abs() > T::default_rank_tol()
    }

    /// Monic coefficients `a_k = −θ_k/θ_r`, `k = 0 … r−1`, so that
    /// `p_j = a_{r−1} p_{j−1} + … + a_0 p_{j−r}`.
    pub fn monic(&self) -> Result<Vec<T>> {
        let r = self.order();
        let last = self.theta[r];
        if !self.is_continuable() {
            return Err(Error::NotContinuable(last.as_f64()));
        }
        Ok(self.theta[..r].iter().map(|&t| -t / last).collect())
    }

    /// Largest `|Σ θ_i p_{k+i}|` over all windows, relative to `‖p‖_∞`.
    pub fn relative_residual(&self, p: &[T]) -> T {
        let r = self.order();
        let scale = p.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        if p.len() <= r || scale == T::zero() {
            return T::zero();
        }
        let worst = p
            .windows(r + 1)
            .map(|w| w.iter().zip(&self.theta).map(|(&x, &t)| x * t).sum::<T>().abs())
            .fold(T::zero(), T::max);
        worst / scale
    }
}

/// Extends `prefix` by `horizon` samples with the recurrence.
pub fn apply_lrr<T: Scalar>(
    prefix: &TimeSeries<T>,
    lrr: &LrrCoefficients<T>,
    horizon: usize,
) -> Result<TimeSeries<T>> {
    let r = lrr.order();
    let a = lrr.monic()?;
    if prefix.len() < r {
        return invalid(format!(
            "prefix of length {} is shorter than recurrence order {r}",
            prefix.len()
        ));
    }
    let mut out = prefix.values().to_vec();
    out.reserve(horizon);
    for _ in 0..horizon {
        let j = out.len();
        let next: T = (0..r).map(|k| a[k] * out[j - r + k]).sum();
        out.push(next);
    }
    TimeSeries::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TimeSeries<f64> {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn fibonacci_continuation() {
        let lrr = LrrCoefficients::new(vec![1.0, 1.0, -1.0]).unwrap();
        let out = apply_lrr(&ts(&[1.0, 1.0, 2.0, 3.0, 5.0, 8.0]), &lrr, 2).unwrap();
        assert_eq!(out.len(), 8);
        assert!((out.values()[6] - 13.0).abs() < 1e-12);
        assert!((out.values()[7] - 21.0).abs() < 1e-12);
    }

    #[test]
    fn constant_continuation() {
        let lrr = LrrCoefficients::new(vec![1.0, -1.0]).unwrap();
        let out = apply_lrr(&ts(&[2.5; 4]), &lrr, 6).unwrap();
        assert!(out.values().iter().all(|&x| (x - 2.5).abs() < 1e-14));
    }

    #[test]
    fn geometric_continuation() {
        let prefix = TimeSeries::from_fn(10, |k| 0.5f64.powi(k as i32)).unwrap();
        let lrr = LrrCoefficients::new(vec![0.5, -1.0]).unwrap();
        let out = apply_lrr(&prefix, &lrr, 5).unwrap();
        for k in 11..=15 {
            assert!((out.values()[k - 1] - 0.5f64.powi(k as i32)).abs() < 1e-10);
        }
    }

    #[test]
    fn errors() {
        let stuck = LrrCoefficients::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(apply_lrr(&ts(&[1.0, 2.0]), &stuck, 1), Err(Error::NotContinuable(_))));
        let long = LrrCoefficients::new(vec![1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(apply_lrr(&ts(&[1.0, 2.0]), &long, 1).is_err());
        assert!(LrrCoefficients::<f64>::new(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn normalization() {
        let q = LrrCoefficients::new(vec![-2.0, 1.0]).unwrap();
        let n = 5f64.sqrt();
        assert!((q.theta()[0] - 2.0 / n).abs() < 1e-15);
        assert!((q.theta()[1] + 1.0 / n).abs() < 1e-15);
    }
}
