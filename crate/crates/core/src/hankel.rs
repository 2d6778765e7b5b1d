//! Hankel embedding `S(p)`, its orthogonal projections, rank diagnostics
//! and kernel (linear recurrence) extraction.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{cholesky_solve, svd, QrWeights};
use crate::{LrrCoefficients, Matrix, Scalar, TimeSeries};

/// Shape of the Hankel embedding of a length-`N` series with window `L`:
/// an `L × K` matrix with `K = N − L + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HankelStructure {
    n_total: usize,
    window: usize,
    cols: usize,
}

impl HankelStructure {
    pub fn new(n_total: usize, window: usize) -> Result<Self> {
        if n_total < 1 || window < 1 || window > n_total {
            return invalid(format!("window {window} must lie in 1..={n_total}"));
        }
        Ok(Self {
            n_total,
            window,
            cols: n_total - window + 1,
        })
    }

    pub fn for_matrix<T: Scalar>(a: &Matrix<T>) -> Self {
        Self {
            n_total: a.rows() + a.cols() - 1,
            window: a.rows(),
            cols: a.cols(),
        }
    }

    #[inline]
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    #[inline]
    pub fn window(&self) -> usize {
        self.window
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of matrix entries on antidiagonal `j` (1-based):
    /// `min(j, L, K, N − j + 1)`.
    #[inline]
    pub fn kappa(&self, j: usize) -> usize {
        j.min(self.window).min(self.cols).min(self.n_total + 1 - j)
    }
}

/// Antidiagonal multiplicities `κ_1 … κ_N`; `Σ κ_j = L·K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntidiagWeights {
    pub kappa: Vec<usize>,
}

impl AntidiagWeights {
    pub fn as_scalars<T: Scalar>(&self) -> Vec<T> {
        self.kappa.iter().map(|&k| T::from_usize_lossy(k)).collect()
    }
}

pub fn antidiag_weights(structure: &HankelStructure) -> AntidiagWeights {
    AntidiagWeights {
        kappa: (1..=structure.n_total).map(|j| structure.kappa(j)).collect(),
    }
}

/// `L × K` Hankel matrix with entry `(i, j)` equal to `p[i + j]` (0-based).
pub fn embed<T: Scalar>(p: &TimeSeries<T>, structure: &HankelStructure) -> Result<Matrix<T>> {
    if p.len() != structure.n_total {
        return Err(Error::DimensionMismatch {
            expected: format!("series of length {}", structure.n_total),
            actual: format!("length {}", p.len()),
        });
    }
    Ok(hankel_of(p.values(), structure.window))
}

/// `H_L(p)` for raw samples; `1 ≤ window ≤ p.len()` is the caller's duty.
pub(crate) fn hankel_of<T: Scalar>(p: &[T], window: usize) -> Matrix<T> {
    let cols = p.len() + 1 - window;
    let mut data = Vec::with_capacity(window * cols);
    for i in 0..window {
        data.extend_from_slice(&p[i..i + cols]);
    }
    Matrix::from_vec_unchecked(window, cols, data)
}

/// Sums of the antidiagonals of `a`: entry `j` collects `a[l][k]`, `l + k = j`.
pub fn antidiag_sums<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    let (l, k) = a.shape();
    let mut sums = vec![T::zero(); l + k - 1];
    for i in 0..l {
        for (s, &x) in sums[i..i + k].iter_mut().zip(a.row(i)) {
            *s = *s + x;
        }
    }
    sums
}

/// Antidiagonal averaging: the series whose embedding is the Frobenius-
/// nearest Hankel matrix to `a`.
pub fn project_hankel<T: Scalar>(a: &Matrix<T>) -> Result<TimeSeries<T>> {
    let s = HankelStructure::for_matrix(a);
    let (l, k) = a.shape();
    let sums = antidiag_sums(a);
    TimeSeries::new(
        sums.into_iter()
            .enumerate()
            .map(|(j, x)| {
                // Constant antidiagonals are returned as is, so that Hankel
                // inputs survive the round trip bit for bit.
                let first = a[(j.saturating_sub(k - 1), j - j.saturating_sub(k - 1))];
                let rows = j.saturating_sub(k - 1)..=j.min(l - 1);
                if rows.into_iter().all(|i| a[(i, j - i)] == first) {
                    first
                } else {
                    x / T::from_usize_lossy(s.kappa(j + 1))
                }
            })
            .collect(),
    )
}

/// Series minimising `‖Q^{1/2}(S(p) − A)R^{1/2}‖_F`, via the normal
/// equations of the whitened Hankel basis.
pub fn project_hankel_weighted<T: Scalar>(
    a: &Matrix<T>,
    w: &QrWeights<T>,
) -> Result<TimeSeries<T>> {
    w.check_shape(a)?;
    let (l, k) = a.shape();
    let n = l + k - 1;
    // <Q^{1/2} X R^{1/2}, Q^{1/2} Y R^{1/2}>_F = <Q X R, Y>_F for symmetric Q, R.
    let rhs = antidiag_sums(&w.q().mul(a).mul(w.r()));
    let mut gram = Matrix::zeros(n, n);
    let mut basis = Matrix::zeros(l, k);
    for j in 0..n {
        for i in 0..l {
            if j >= i && j - i < k {
                basis[(i, j - i)] = T::one();
            }
        }
        let col = antidiag_sums(&w.q().mul(&basis).mul(w.r()));
        gram.set_column(j, &col);
        for i in 0..l {
            if j >= i && j - i < k {
                basis[(i, j - i)] = T::zero();
            }
        }
    }
    let p = cholesky_solve(&gram, &rhs)?;
    TimeSeries::new(p)
}

/// Numerical rank of `H_L(p)` for `L = 1 … N`, counting `σ_i > tol·σ_1`.
pub fn rank_profile<T: Scalar>(p: &TimeSeries<T>, tol: T) -> Result<Vec<usize>> {
    if !(tol > T::zero() && tol < T::one()) {
        return invalid(format!("rank tolerance must lie in (0, 1), got {tol}"));
    }
    (1..=p.len())
        .map(|l| Ok(svd(&hankel_of(p.values(), l))?.numerical_rank(tol)))
        .collect()
}

/// Rank `d` such that the profile equals `min(L, K, d)` for every window,
/// provided the plateau is visible, i.e. `d < ⌊(N+1)/2⌋`. Full-rank
/// profiles (white noise) yield `None`.
pub fn detect_plateau(profile: &[usize]) -> Option<usize> {
    let n = profile.len();
    let d = *profile.iter().max()?;
    if d >= n.div_ceil(2) {
        return None;
    }
    let fits = profile
        .iter()
        .enumerate()
        .all(|(i, &r)| r == (i + 1).min(n - i).min(d));
    fits.then_some(d)
}

/// Minimal recurrence of a series of finite rank `d`, read off the
/// one-dimensional left kernel of `H_{d+1}(p)`.
pub fn minimal_lrr<T: Scalar>(p: &TimeSeries<T>, d: usize) -> Result<LrrCoefficients<T>> {
    minimal_lrr_with_tol(p, d, T::default_rank_tol())
}

pub fn minimal_lrr_with_tol<T: Scalar>(
    p: &TimeSeries<T>,
    d: usize,
    tol: T,
) -> Result<LrrCoefficients<T>> {
    if d + 1 > p.len() {
        return invalid(format!("rank {d} too large for series of length {}", p.len()));
    }
    let h = hankel_of(p.values(), d + 1);
    let f = svd(&h)?;
    let rank = f.numerical_rank(tol);
    let kernel_dim = d + 1 - rank;
    if kernel_dim != 1 {
        let s = &f.singular_values;
        let s1 = s.first().copied().unwrap_or_else(T::zero);
        let gap = |i: usize| s.get(i).map_or(0.0, |&x| (x / s1).as_f64());
        return Err(Error::RankMismatch(format!(
            "left kernel of H_{} has dimension {kernel_dim}, expected 1 \
             (σ_{d}/σ_1 = {:.3e}, σ_{}/σ_1 = {:.3e}, tol {tol:e})",
            d + 1,
            gap(d.saturating_sub(1)),
            d + 1,
            gap(d),
        )));
    }
    LrrCoefficients::new(f.u.column(d))
}

/// Banded `(r+1) × (shift+1)` matrix `M_shift(q)`, `r = d + shift`, whose
/// column `k` holds `q` shifted down by `k` rows: multiplication by `q(z)`.
pub fn multiplication_matrix<T: Scalar>(q: &LrrCoefficients<T>, shift: usize) -> Matrix<T> {
    let d = q.order();
    let mut m = Matrix::zeros(d + shift + 1, shift + 1);
    for k in 0..=shift {
        for (i, &t) in q.theta().iter().enumerate() {
            m[(i + k, k)] = t;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TimeSeries<f64> {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn embed_pattern() {
        let s = HankelStructure::new(5, 2).unwrap();
        let h = embed(&ts(&[1.0, 2.0, 3.0, 4.0, 5.0]), &s).unwrap();
        assert_eq!(h, Matrix::from_rows(&[vec![1., 2., 3., 4.], vec![2., 3., 4., 5.]]).unwrap());
        assert!(embed(&ts(&[1.0, 2.0]), &s).is_err());
        assert_eq!(embed(&ts(&[0.0; 5]), &s).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn structure_validation() {
        assert!(HankelStructure::new(5, 0).is_err());
        assert!(HankelStructure::new(5, 6).is_err());
        assert_eq!(HankelStructure::new(5, 5).unwrap().cols(), 1);
    }

    #[test]
    fn kappa_examples() {
        let w = |n, l| antidiag_weights(&HankelStructure::new(n, l).unwrap()).kappa;
        assert_eq!(w(5, 2), vec![1, 2, 2, 2, 1]);
        assert_eq!(w(5, 3), vec![1, 2, 3, 2, 1]);
        assert_eq!(w(5, 4), vec![1, 2, 2, 2, 1]);
        assert_eq!(w(20, 10).iter().sum::<usize>(), 110);
    }

    #[test]
    fn averaging_example() {
        let a = Matrix::from_rows(&[vec![1.0, 3.0], vec![5.0, 7.0]]).unwrap();
        assert_eq!(project_hankel(&a).unwrap().values(), &[1.0, 4.0, 7.0]);
    }

    #[test]
    fn weighted_projection_example() {
        let a = Matrix::from_rows(&[vec![1.0f64, 3.0], vec![5.0, 7.0]]).unwrap();
        let w = QrWeights::diagonal(&[2.0, 1.0], &[1.0, 1.0]).unwrap();
        let p = project_hankel_weighted(&a, &w).unwrap();
        assert!((p.values()[0] - 1.0).abs() < 1e-13);
        assert!((p.values()[1] - 11.0 / 3.0).abs() < 1e-13);
        assert!((p.values()[2] - 7.0).abs() < 1e-13);
    }

    #[test]
    fn minimal_lrr_examples() {
        let geo = TimeSeries::from_fn(8, |k| 2f64.powi(k as i32)).unwrap();
        let q = minimal_lrr(&geo, 1).unwrap();
        let n = 5f64.sqrt();
        assert!((q.theta()[0] - 2.0 / n).abs() < 1e-10);
        assert!((q.theta()[1] + 1.0 / n).abs() < 1e-10);

        let fib = ts(&[1., 1., 2., 3., 5., 8., 13.]);
        let q = minimal_lrr(&fib, 2).unwrap();
        let s = 3f64.sqrt();
        for (got, want) in q.theta().iter().zip([1.0 / s, 1.0 / s, -1.0 / s]) {
            assert!((got - want).abs() < 1e-10);
        }

        let q = minimal_lrr(&ts(&[3.0; 6]), 1).unwrap();
        let s = 2f64.sqrt();
        assert!((q.theta()[0] - 1.0 / s).abs() < 1e-12);
        assert!((q.theta()[1] + 1.0 / s).abs() < 1e-12);
    }

    #[test]
    fn minimal_lrr_rank_mismatch() {
        let fib = ts(&[1., 1., 2., 3., 5., 8., 13.]);
        assert!(matches!(minimal_lrr(&fib, 1), Err(Error::RankMismatch(_))));
        assert!(matches!(minimal_lrr(&fib, 3), Err(Error::RankMismatch(_))));
    }

    #[test]
    fn multiplication_matrix_band() {
        let q = LrrCoefficients::new(vec![3.0, 4.0]).unwrap();
        let (q0, q1) = (0.6f64, 0.8);
        let m = multiplication_matrix(&q, 1);
        let want = Matrix::from_rows(&[vec![q0, 0.0], vec![q1, q0], vec![0.0, q1]]).unwrap();
        assert!(m.sub(&want).unwrap().max_abs() < 1e-15);
        let m0 = multiplication_matrix(&q, 0);
        assert_eq!(m0.shape(), (2, 1));
        assert!((m0[(0, 0)] - q0).abs() < 1e-15);
    }

    #[test]
    fn constant_series_profile() {
        let p = ts(&[2.0; 9]);
        let prof = rank_profile(&p, 1e-8).unwrap();
        assert!(prof.iter().all(|&r| r == 1));
        assert_eq!(detect_plateau(&prof), Some(1));
        assert!(rank_profile(&p, 0.0).is_err());
    }
}
