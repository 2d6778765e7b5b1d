//! Unstructured low-rank approximation: Eckart–Young truncation, the
//! weighted `(Q,R)` variant, nuclear norm and singular-value thresholding.

use super::eigen::symmetric_eigen;
use super::svd::svd;
use crate::error::{invalid, Error, Result};
use crate::{Matrix, Scalar};

/// Positive definite row weight `Q` (L×L) and column weight `R` (K×K)
/// defining `‖X‖_{Q,R} = sqrt(trace(Q X R Xᵀ))`, with cached symmetric
/// square roots and their inverses.
#[derive(Debug, Clone)]
pub struct QrWeights<T> {
    q: Matrix<T>,
    r: Matrix<T>,
    q_sqrt: Matrix<T>,
    r_sqrt: Matrix<T>,
    q_sqrt_inv: Matrix<T>,
    r_sqrt_inv: Matrix<T>,
}

/// Square root and inverse square root of an SPD matrix.
fn spd_roots<T: Scalar>(m: &Matrix<T>, name: &str) -> Result<(Matrix<T>, Matrix<T>)> {
    if m.rows() != m.cols() {
        return invalid(format!("{name} must be square, got {}x{}", m.rows(), m.cols()));
    }
    let sym_tol = T::lit(1e-12).max(T::epsilon() * T::lit(100.0));
    if !m.is_symmetric(sym_tol) {
        return invalid(format!("{name} is not symmetric"));
    }
    let e = symmetric_eigen(m)?;
    let max = e.values[0];
    let min = *e.values.last().expect("non-empty");
    if max <= T::zero() || min <= T::lit(1e-12) * max {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min.as_f64(),
            max_eigenvalue: max.as_f64(),
        });
    }
    Ok((e.compose(|x| x.sqrt()), e.compose(|x| T::one() / x.sqrt())))
}

impl<T: Scalar> QrWeights<T> {
    pub fn new(q: Matrix<T>, r: Matrix<T>) -> Result<Self> {
        let (q_sqrt, q_sqrt_inv) = spd_roots(&q, "Q")?;
        let (r_sqrt, r_sqrt_inv) = spd_roots(&r, "R")?;
        Ok(Self {
            q,
            r,
            q_sqrt,
            r_sqrt,
            q_sqrt_inv,
            r_sqrt_inv,
        })
    }

    /// Diagonal weights; a common special case.
    pub fn diagonal(q: &[T], r: &[T]) -> Result<Self> {
        Self::new(Matrix::square_diag(q), Matrix::square_diag(r))
    }

    /// `Q = I_L`, `R = I_K`: the Frobenius norm.
    pub fn identity(rows: usize, cols: usize) -> Self {
        Self::new(Matrix::identity(rows), Matrix::identity(cols)).expect("identity is SPD")
    }

    pub fn q(&self) -> &Matrix<T> {
        &self.q
    }

    pub fn r(&self) -> &Matrix<T> {
        &self.r
    }

    pub fn q_sqrt(&self) -> &Matrix<T> {
        &self.q_sqrt
    }

    pub fn r_sqrt(&self) -> &Matrix<T> {
        &self.r_sqrt
    }

    pub fn q_sqrt_inv(&self) -> &Matrix<T> {
        &self.q_sqrt_inv
    }

    pub fn r_sqrt_inv(&self) -> &Matrix<T> {
        &self.r_sqrt_inv
    }

    /// `(rows of Q, rows of R)`, i.e. the matrix shape these weights apply to.
    pub fn shape(&self) -> (usize, usize) {
        (self.q.rows(), self.r.rows())
    }

    pub(crate) fn check_shape(&self, a: &Matrix<T>) -> Result<()> {
        if a.shape() != self.shape() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.q.rows(), self.r.rows()),
                actual: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        Ok(())
    }

    /// `Q^{1/2} A R^{1/2}`.
    pub fn whiten(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_shape(a)?;
        Ok(self.q_sqrt.mul(a).mul(&self.r_sqrt))
    }

    /// `Q^{-1/2} B R^{-1/2}`.
    pub fn unwhiten(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_shape(b)?;
        Ok(self.q_sqrt_inv.mul(b).mul(&self.r_sqrt_inv))
    }
}

fn check_rank<T: Scalar>(a: &Matrix<T>, r: usize) -> Result<()> {
    let max = a.rows().min(a.cols());
    if r > max {
        return invalid(format!("rank {r} exceeds min dimension {max}"));
    }
    Ok(())
}

/// Best rank-`r` approximation in every unitarily invariant norm.
pub fn truncated_lra<T: Scalar>(a: &Matrix<T>, r: usize) -> Result<Matrix<T>> {
    check_rank(a, r)?;
    if r == a.rows().min(a.cols()) {
        return Ok(a.clone());
    }
    Ok(svd(a)?.reconstruct(r))
}

/// Best rank-`r` approximation in the `(Q,R)` norm.
pub fn qr_lra<T: Scalar>(a: &Matrix<T>, r: usize, w: &QrWeights<T>) -> Result<Matrix<T>> {
    check_rank(a, r)?;
    let whitened = w.whiten(a)?;
    w.unwhiten(&truncated_lra(&whitened, r)?)
}

/// `sqrt(trace(Q A R Aᵀ))`.
pub fn qr_norm<T: Scalar>(a: &Matrix<T>, w: &QrWeights<T>) -> Result<T> {
    w.check_shape(a)?;
    let qar = w.q.mul(a).mul(&w.r);
    // trace(Q A R Aᵀ) = <Q A R, A>_F; clamp round-off below zero
    Ok(qar.frobenius_dot(a)?.max(T::zero()).sqrt())
}

pub fn nuclear_norm<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    Ok(svd(a)?.singular_values.into_iter().sum())
}

/// Proximal operator of `tau·‖·‖_*`: soft-thresholds the singular values.
pub fn svt<T: Scalar>(a: &Matrix<T>, tau: T) -> Result<Matrix<T>> {
    if !(tau >= T::zero()) || !tau.is_finite() {
        return invalid(format!("threshold must be finite and nonnegative, got {tau}"));
    }
    if tau == T::zero() {
        return Ok(a.clone());
    }
    let f = svd(a)?;
    let keep = f.singular_values.iter().filter(|&&s| s > tau).count();
    Ok(f.reconstruct_with(keep, |s| s - tau))
}

/// Singular-value thresholding that also returns the number of retained
/// singular values and their thresholded sum.
pub(crate) fn svt_with_stats<T: Scalar>(a: &Matrix<T>, tau: T) -> Result<(Matrix<T>, usize, T)> {
    let f = svd(a)?;
    let keep = f.singular_values.iter().filter(|&&s| s > tau).count();
    let nuc: T = f.singular_values[..keep].iter().map(|&s| s - tau).sum();
    Ok((f.reconstruct_with(keep, |s| s - tau), keep, nuc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_of_diagonal() {
        let a = Matrix::square_diag(&[3.0, 1.0]);
        let b = truncated_lra(&a, 1).unwrap();
        assert!(b.sub(&Matrix::square_diag(&[3.0, 0.0])).unwrap().max_abs() < 1e-15);
        assert!(truncated_lra(&a, 3).is_err());
        assert_eq!(truncated_lra(&a, 0).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn qr_norm_examples() {
        let w = QrWeights::identity(2, 2);
        let n = qr_norm(&Matrix::<f64>::identity(2), &w).unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-15);

        let w = QrWeights::diagonal(&[9.0, 1.0], &[1.0, 1.0]).unwrap();
        let n = qr_norm(&Matrix::square_diag(&[1.0, 2.0]), &w).unwrap();
        assert!((n - 13f64.sqrt()).abs() < 1e-14);

        assert!(qr_norm(&Matrix::<f64>::zeros(3, 2), &w).is_err());
    }

    #[test]
    fn weights_reject_indefinite_and_asymmetric() {
        let bad = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            QrWeights::new(bad, Matrix::identity(2)),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(QrWeights::new(Matrix::identity(2), asym).is_err());
        assert!(QrWeights::diagonal(&[1.0, 1e-14], &[1.0]).is_err());
    }

    #[test]
    fn qr_lra_prefers_heavily_weighted_row() {
        // Q = diag(4,1): error on row 1 costs 4x, so the rank-1 approximant
        // keeps the first diagonal entry.
        let w = QrWeights::diagonal(&[4.0, 1.0], &[1.0, 1.0]).unwrap();
        let b = qr_lra(&Matrix::<f64>::identity(2), 1, &w).unwrap();
        assert!(b.sub(&Matrix::square_diag(&[1.0, 0.0])).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn svt_examples() {
        let a = Matrix::square_diag(&[3.0, 1.0]);
        let b = svt(&a, 2.0).unwrap();
        assert!(b.sub(&Matrix::square_diag(&[1.0, 0.0])).unwrap().max_abs() < 1e-14);
        assert_eq!(svt(&a, 0.0).unwrap(), a);
        assert!(svt(&a, -1.0).is_err());
        assert!((nuclear_norm(&Matrix::square_diag(&[3.0f64, 4.0])).unwrap() - 7.0).abs() < 1e-14);
    }
}
