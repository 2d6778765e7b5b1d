use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::matrix::hypot_norm;
use crate::Scalar;

/// Ordered real samples `p_1 … p_N`, `N ≥ 2`, all finite.
///
/// Indexing through [`TimeSeries::values`] is 0-based; docs elsewhere use
/// the 1-based sample numbering `p_1 … p_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TimeSeries<T> {
    values: Vec<T>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return invalid(format!("time series needs at least 2 samples, got {}", values.len()));
        }
        if let Some(index) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> T) -> Result<Self> {
        Self::new((1..=n).map(f).collect())
    }

    pub(crate) fn from_vec_unchecked(values: Vec<T>) -> Self {
        debug_assert!(values.len() >= 2);
        Self { values }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with slices.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Samples `p_{from+1} … p_{to}` (0-based half-open range).
    pub fn slice(&self, range: std::ops::Range<usize>) -> &[T] {
        &self.values[range]
    }

    pub fn norm(&self) -> T {
        hypot_norm(&self.values)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self::from_vec_unchecked(self.values.iter().map(|&x| x * s).collect())
    }

    /// Element-wise sum; lengths must agree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self::from_vec_unchecked(
            self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self::from_vec_unchecked(
            self.values.iter().zip(&other.values).map(|(&a, &b)| a - b).collect(),
        ))
    }

    /// Plain Euclidean distance `‖self − other‖₂`.
    pub fn l2_distance(&self, other: &Self) -> Result<T> {
        Ok(self.sub(other)?.norm())
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("length {}", self.len()),
                actual: format!("length {}", other.len()),
            });
        }
        Ok(())
    }

    pub fn cast<U: Scalar>(&self) -> TimeSeries<U> {
        TimeSeries::from_vec_unchecked(self.values.iter().map(|x| U::lit(x.as_f64())).collect())
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for TimeSeries<T> {
    type Error = Error;

    fn try_from(values: Vec<T>) -> Result<Self> {
        Self::new(values)
    }
}

impl<T: Scalar> TryFrom<&[T]> for TimeSeries<T> {
    type Error = Error;

    fn try_from(values: &[T]) -> Result<Self> {
        Self::new(values.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants() {
        assert!(TimeSeries::new(vec![1.0]).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::INFINITY]).is_err());
        let p = TimeSeries::from_fn(3, |k| k as f64).unwrap();
        assert_eq!(p.values(), &[1.0, 2.0, 3.0]);
        assert!(p.sub(&TimeSeries::new(vec![0.0, 0.0]).unwrap()).is_err());
    }
}
