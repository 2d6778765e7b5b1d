use crate::error::{Error, Result};
use crate::{Matrix, Scalar};

/// Solves `G x = b` for symmetric positive definite `G`.
pub fn cholesky_solve<T: Scalar>(g: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = g.rows();
    if g.cols() != n || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} system"),
            actual: format!("{}x{} with rhs {}", g.rows(), g.cols(), b.len()),
        });
    }
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = g[(j, j)];
        for k in 0..j {
            d = d - l[(j, k)] * l[(j, k)];
        }
        if d <= T::zero() || !d.is_finite() {
            return Err(Error::Degenerate(format!(
                "normal equations not positive definite at pivot {j}"
            )));
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = g[(i, j)];
            for k in 0..j {
                s = s - l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] = y[i] - l[(i, k)] * y[k];
        }
        y[i] = y[i] / l[(i, i)];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            y[i] = y[i] - l[(k, i)] * y[k];
        }
        y[i] = y[i] / l[(i, i)];
    }
    Ok(y)
}
