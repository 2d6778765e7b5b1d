//! One-sided (Hestenes) Jacobi singular value decomposition.
//!
//! Columns of the working matrix are rotated pairwise until mutually
//! orthogonal; the column norms are then the singular values. The sweep
//! order is fixed, so results are deterministic for a given input.

use crate::error::{Error, Result};
use crate::matrix::hypot_norm;
use crate::{Matrix, Scalar};

/// Sweep cap for the Jacobi iteration. Convergence is quadratic once the
/// columns are nearly orthogonal; well-scaled inputs finish in < 15 sweeps.
pub const MAX_SWEEPS: usize = 80;

/// Full SVD `A = U · diag(σ) · Vᵀ` with `U` (rows × rows) and `V`
/// (cols × cols) orthogonal and `σ` sorted non-increasing.
///
/// Each left singular vector has its first nonzero entry nonnegative.
#[derive(Debug, Clone)]
pub struct SvdFactors<T> {
    pub u: Matrix<T>,
    pub singular_values: Vec<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> SvdFactors<T> {
    /// Sum of the leading `rank` rank-one terms `σ_i u_i v_iᵀ`.
    pub fn reconstruct(&self, rank: usize) -> Matrix<T> {
        self.reconstruct_with(rank, |s| s)
    }

    /// `U · diag(f(σ)) · Vᵀ` restricted to the leading `rank` terms.
    pub fn reconstruct_with(&self, rank: usize, f: impl Fn(T) -> T) -> Matrix<T> {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut out = Matrix::zeros(m, n);
        for k in 0..rank.min(self.singular_values.len()) {
            let s = f(self.singular_values[k]);
            if s == T::zero() {
                continue;
            }
            for i in 0..m {
                let us = self.u[(i, k)] * s;
                if us == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + us * self.v[(j, k)];
                }
            }
        }
        out
    }

    /// Frobenius norm of the discarded tail `σ_{rank+1}, …`.
    pub fn tail_norm(&self, rank: usize) -> T {
        hypot_norm(self.singular_values.get(rank..).unwrap_or(&[]))
    }

    /// Number of singular values above `tol · σ_1`.
    pub fn numerical_rank(&self, tol: T) -> usize {
        let s1 = self.singular_values.first().copied().unwrap_or_else(T::zero);
        if s1 == T::zero() {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > tol * s1).count()
    }
}

pub fn svd<T: Scalar>(a: &Matrix<T>) -> Result<SvdFactors<T>> {
    let mut f = if a.rows() >= a.cols() {
        jacobi_tall(a)?
    } else {
        let t = jacobi_tall(&a.transpose())?;
        SvdFactors {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        }
    };
    normalize_signs(&mut f);
    Ok(f)
}

fn jacobi_tall<T: Scalar>(a: &Matrix<T>) -> Result<SvdFactors<T>> {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<T>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();

    let tol = T::epsilon() * T::from_usize_lossy(m.max(2));
    // Columns at roundoff level relative to the whole matrix are treated as
    // null; rotating them against large columns never settles.
    let total: T = w.iter().map(|c| dot(c, c)).sum();
    let negligible = total * (T::epsilon() * T::epsilon());
    let mut sweeps = 0;
    loop {
        let mut worst = T::zero();
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if alpha <= negligible || beta <= negligible || gamma == T::zero() {
                    continue;
                }
                let ratio = gamma.abs() / (alpha.sqrt() * beta.sqrt());
                worst = worst.max(ratio);
                if ratio <= tol {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::two() * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence {
                what: "jacobi svd",
                iterations: sweeps,
                residual: worst.as_f64(),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<T> = w.iter().map(|c| hypot_norm(c)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));
    let singular_values: Vec<T> = order.iter().map(|&i| norms[i]).collect();

    let s1 = singular_values[0];
    let null_tol = s1 * T::epsilon() * T::from_usize_lossy(m.max(n));
    let mut u_cols: Vec<Option<Vec<T>>> = order
        .iter()
        .map(|&i| {
            let s = norms[i];
            if s > null_tol && s > T::min_positive_value() {
                Some(w[i].iter().map(|&x| x / s).collect())
            } else {
                None
            }
        })
        .collect();
    u_cols.resize(m, None);
    let u_cols = complete_orthonormal(u_cols, m);

    let mut u = Matrix::zeros(m, m);
    for (j, col) in u_cols.iter().enumerate() {
        u.set_column(j, col);
    }
    let mut vm = Matrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vm.set_column(k, &v[i]);
    }
    Ok(SvdFactors {
        u,
        singular_values,
        v: vm,
    })
}

#[inline]
fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Fills the `None` slots with unit vectors orthogonal to everything else,
/// drawn from the standard basis by twice-repeated Gram–Schmidt.
fn complete_orthonormal<T: Scalar>(mut cols: Vec<Option<Vec<T>>>, m: usize) -> Vec<Vec<T>> {
    for slot in 0..cols.len() {
        if cols[slot].is_some() {
            continue;
        }
        let basis: Vec<Vec<T>> = cols.iter().flatten().cloned().collect();
        let mut best: Option<(T, Vec<T>)> = None;
        for e in 0..m {
            let mut x = vec![T::zero(); m];
            x[e] = T::one();
            for _ in 0..2 {
                for b in &basis {
                    let d = dot(b, &x);
                    for (xi, &bi) in x.iter_mut().zip(b) {
                        *xi = *xi - d * bi;
                    }
                }
            }
            let nx = hypot_norm(&x);
            if best.as_ref().is_none_or(|(bn, _)| nx > *bn) {
                best = Some((nx, x));
            }
        }
        let (nx, x) = best.expect("m > 0");
        cols[slot] = Some(x.into_iter().map(|xi| xi / nx).collect());
    }
    cols.into_iter().map(|c| c.expect("filled")).collect()
}

fn normalize_signs<T: Scalar>(f: &mut SvdFactors<T>) {
    let m = f.u.rows();
    let n = f.v.rows();
    for k in 0..m {
        let col = f.u.column(k);
        let scale = col.iter().fold(T::zero(), |a, x| a.max(x.abs()));
        let lead = col.iter().find(|x| x.abs() > scale * T::lit(1e-3)).copied();
        if lead.is_some_and(|x| x < T::zero()) {
            for i in 0..m {
                f.u[(i, k)] = -f.u[(i, k)];
            }
            if k < n {
                for i in 0..n {
                    f.v[(i, k)] = -f.v[(i, k)];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthogonality_error(q: &Matrix<f64>) -> f64 {
        let qtq = q.transpose().mul(q);
        qtq.sub(&Matrix::identity(q.cols())).unwrap().max_abs()
    }

    #[test]
    fn diagonal_input() {
        let a = Matrix::square_diag(&[3.0, 1.0]);
        let f = svd(&a).unwrap();
        assert_eq!(f.singular_values, vec![3.0, 1.0]);
        assert!(f.u.sub(&Matrix::identity(2)).unwrap().max_abs() < 1e-15);
        assert!(f.v.sub(&Matrix::identity(2)).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_has_orthogonal_factors() {
        let a = Matrix::<f64>::zeros(2, 3);
        let f = svd(&a).unwrap();
        assert_eq!(f.singular_values, vec![0.0, 0.0]);
        assert!(orthogonality_error(&f.u) < 1e-14);
        assert!(orthogonality_error(&f.v) < 1e-14);
    }

    #[test]
    fn rank_deficient_wide_and_tall() {
        // rank one, both orientations
        let u = [1.0, -2.0, 0.5];
        let v = [2.0, 1.0, 0.0, -1.0];
        let mut a = Matrix::zeros(3, 4);
        for i in 0..3 {
            for j in 0..4 {
                a[(i, j)] = u[i] * v[j];
            }
        }
        for m in [a.clone(), a.transpose()] {
            let f = svd(&m).unwrap();
            assert!(orthogonality_error(&f.u) < 1e-13);
            assert!(orthogonality_error(&f.v) < 1e-13);
            let rec = f.reconstruct(f.singular_values.len());
            assert!(rec.sub(&m).unwrap().frobenius_norm() < 1e-13);
            assert_eq!(f.numerical_rank(1e-10), 1);
        }
    }

    #[test]
    fn sign_convention() {
        let a = Matrix::from_rows(&[vec![-1.0f64, 2.0], vec![3.0, -4.0], vec![0.5, 0.5]]).unwrap();
        let f = svd(&a).unwrap();
        for k in 0..3 {
            let lead = f.u.column(k).into_iter().find(|x| x.abs() > 1e-12).unwrap();
            assert!(lead > 0.0);
        }
    }
}
