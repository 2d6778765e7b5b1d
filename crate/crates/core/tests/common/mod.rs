#![allow(dead_code)]

use hslra::signals::{rng_from_seed, standard_normal, Rng};
use hslra::{CanonicalModel, ExponentialTerm, Matrix};
use num_complex::Complex;
use rand::Rng as _;

pub fn rng(seed: u64) -> Rng {
    rng_from_seed(seed)
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    standard_normal(rng)
}

pub fn random_matrix(rng: &mut Rng, rows: usize, cols: usize) -> Matrix<f64> {
    Matrix::new(rows, cols, (0..rows * cols).map(|_| gaussian(rng)).collect()).unwrap()
}

pub fn random_rank(rng: &mut Rng, rows: usize, cols: usize, rank: usize) -> Matrix<f64> {
    let mut acc = Matrix::zeros(rows, cols);
    for _ in 0..rank {
        let u = random_matrix(rng, rows, 1);
        let v = random_matrix(rng, 1, cols);
        acc = acc.add(&u.matmul(&v).unwrap()).unwrap();
    }
    acc
}

/// `B Bᵀ + n·I`, well conditioned.
pub fn random_spd(rng: &mut Rng, n: usize) -> Matrix<f64> {
    let b = random_matrix(rng, n, n);
    b.matmul(&b.transpose()).unwrap().add(&Matrix::identity(n).scaled(n as f64)).unwrap()
}

pub fn to_na(a: &Matrix<f64>) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt().max(1e-300);
    num / den
}

pub fn max_rel_err(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0f64, |m, x| m.max(x.abs())).max(1e-300);
    a.iter().zip(b).fold(0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// Roots spread over an annulus with pairwise separation at least `sep`.
fn pick_root(rng: &mut Rng, taken: &[Complex<f64>], radius: (f64, f64), complex: bool, sep: f64) -> Complex<f64> {
    loop {
        let r = rng.random_range(radius.0..radius.1);
        let z = if complex {
            let theta = rng.random_range(0.35..(std::f64::consts::PI - 0.35));
            Complex::from_polar(r, theta)
        } else if rng.random_bool(0.5) {
            Complex::new(r, 0.0)
        } else {
            Complex::new(-r, 0.0)
        };
        let far = taken
            .iter()
            .all(|&t| (t - z).norm() > sep && (t.conj() - z).norm() > sep);
        if far {
            return z;
        }
    }
}

pub struct ModelSpec {
    pub max_rank: usize,
    pub radius: (f64, f64),
    pub transients: bool,
    pub multiplicities: bool,
    pub complex: bool,
}

/// Random real finite-rank model with rank between 1 and `max_rank`.
pub fn random_model(rng: &mut Rng, spec: &ModelSpec) -> CanonicalModel<f64> {
    let target = rng.random_range(1..=spec.max_rank);
    let mut remaining = target;
    let mut head = Vec::new();
    let mut tail = Vec::new();
    if spec.transients && remaining > 1 && rng.random_bool(0.4) {
        head.push(rng.random_range(0.5..1.5));
        remaining -= 1;
    }
    if spec.transients && remaining > 1 && rng.random_bool(0.4) {
        tail.push(rng.random_range(0.5..1.5));
        remaining -= 1;
    }
    let mut roots: Vec<Complex<f64>> = Vec::new();
    let mut terms = Vec::new();
    while remaining > 0 {
        let pair = spec.complex && remaining >= 2 && rng.random_bool(0.5);
        let mult = if spec.multiplicities && !pair && remaining >= 2 && rng.random_bool(0.3) { 2 } else { 1 };
        let z = pick_root(rng, &roots, spec.radius, pair, 0.2);
        roots.push(z);
        if pair {
            let c = Complex::new(rng.random_range(0.5..1.5), rng.random_range(-1.0..1.0));
            terms.push(ExponentialTerm { lambda: z, poly: vec![c] });
            terms.push(ExponentialTerm { lambda: z.conj(), poly: vec![c.conj()] });
            remaining -= 2;
        } else {
            let mut poly: Vec<f64> = (0..mult).map(|_| rng.random_range(0.5..1.5)).collect();
            if mult == 2 {
                poly[1] *= 0.2;
            }
            terms.push(ExponentialTerm::real(z.re, poly));
            remaining -= mult;
        }
    }
    let model = CanonicalModel::new(head, tail, terms).unwrap();
    assert_eq!(model.rank(), target);
    model
}
