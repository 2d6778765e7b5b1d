//! Finite-rank signal generators and the additive noise models used in the
//! experiments.
//!
//! All random draws go through [`rng_from_seed`] (ChaCha8 seeded from a
//! 64-bit integer), so every generator is bit-reproducible for a given seed.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::{Scalar, TimeSeries};

/// The crate's random generator: ChaCha with 8 rounds.
pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard normal draw, converted to `T`.
pub fn standard_normal<T: Scalar>(rng: &mut Rng) -> T {
    let x: f64 = StandardNormal.sample(rng);
    T::lit(x)
}

/// `P(k)·exp(d·k)·sin(2π ω k + φ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DampedTerm<T> {
    /// Polynomial coefficients in increasing degree: `P(k) = Σ c_i k^i`.
    pub poly: Vec<T>,
    pub damping: T,
    /// Cycles per sample, in `[0, 0.5]`.
    pub frequency: T,
    /// Radians.
    pub phase: T,
}

impl<T: Scalar> DampedTerm<T> {
    pub fn simple(amplitude: T, damping: T, frequency: T, phase: T) -> Self {
        Self {
            poly: vec![amplitude],
            damping,
            frequency,
            phase,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DampedSinusoidModel<T> {
    pub terms: Vec<DampedTerm<T>>,
}

impl<T: Scalar> DampedSinusoidModel<T> {
    pub fn new(terms: Vec<DampedTerm<T>>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if t.poly.is_empty() {
                return invalid(format!("term {i}: polynomial needs at least one coefficient"));
            }
            if !(t.frequency >= T::zero() && t.frequency <= T::half()) {
                return invalid(format!("term {i}: frequency {} outside [0, 0.5]", t.frequency));
            }
            let finite = t.poly.iter().chain([&t.damping, &t.frequency, &t.phase]);
            if finite.into_iter().any(|x| !x.is_finite()) {
                return invalid(format!("term {i}: non-finite parameter"));
            }
        }
        Ok(Self { terms })
    }

    /// The single damped sinusoid `exp(d k)·sin(2π ω k)`.
    pub fn single(damping: T, frequency: T) -> Result<Self> {
        Self::new(vec![DampedTerm::simple(T::one(), damping, frequency, T::zero())])
    }
}

fn horner<T: Scalar>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

/// `p_k = Σ_j P_j(k)·exp(d_j k)·sin(2π ω_j k + φ_j)` for `k = 1 … n`.
pub fn generate_damped<T: Scalar>(model: &DampedSinusoidModel<T>, n: usize) -> Result<TimeSeries<T>> {
    TimeSeries::from_fn(n, |k| {
        let kf = T::from_usize_lossy(k);
        model
            .terms
            .iter()
            .map(|t| {
                horner(&t.poly, kf)
                    * (t.damping * kf).exp()
                    * (T::TAU() * t.frequency * kf + t.phase).sin()
            })
            .sum()
    })
}

/// `P(k)·λ^k` with complex `λ ≠ 0` and complex polynomial `P` of degree
/// `ν − 1` (so `P` has `ν` coefficients, leading one nonzero).
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialTerm<T> {
    pub lambda: Complex<T>,
    pub poly: Vec<Complex<T>>,
}

impl<T: Scalar> ExponentialTerm<T> {
    pub fn real(lambda: T, poly: Vec<T>) -> Self {
        Self {
            lambda: Complex::new(lambda, T::zero()),
            poly: poly.into_iter().map(|c| Complex::new(c, T::zero())).collect(),
        }
    }

    /// Multiplicity `ν` of the root `λ`.
    pub fn multiplicity(&self) -> usize {
        self.poly.len()
    }
}

/// Canonical representation of a finite-rank series: leading and trailing
/// transients plus polynomial-modulated exponentials.
///
/// `head[j-1]` is added at sample `j` (1-based), `tail[l-1]` at sample
/// `N − l + 1`, and each exponential term contributes `P(k)·λ^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalModel<T> {
    head: Vec<T>,
    tail: Vec<T>,
    terms: Vec<ExponentialTerm<T>>,
}

impl<T: Scalar> CanonicalModel<T> {
    pub fn new(head: Vec<T>, tail: Vec<T>, terms: Vec<ExponentialTerm<T>>) -> Result<Self> {
        if head.last().is_some_and(|&a| a == T::zero()) {
            return invalid("last head coefficient must be nonzero");
        }
        if tail.last().is_some_and(|&b| b == T::zero()) {
            return invalid("last tail coefficient must be nonzero");
        }
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        let close = |a: Complex<T>, b: Complex<T>| (a - b).norm() <= tol * (T::one() + a.norm());
        for (i, t) in terms.iter().enumerate() {
            if t.lambda.norm() == T::zero() {
                return invalid(format!("term {i}: root must be nonzero"));
            }
            if t.poly.last().is_none_or(|c| c.norm() == T::zero()) {
                return invalid(format!("term {i}: polynomial needs a nonzero leading coefficient"));
            }
            if terms[..i].iter().any(|u| close(u.lambda, t.lambda)) {
                return invalid(format!("term {i}: repeated root {}", t.lambda));
            }
            let real_root = t.lambda.im.abs() <= tol * (T::one() + t.lambda.norm());
            let paired = terms.iter().any(|u| {
                close(u.lambda, t.lambda.conj())
                    && u.poly.len() == t.poly.len()
                    && u.poly.iter().zip(&t.poly).all(|(&a, &b)| close(a, b.conj()))
            });
            if !real_root && !paired {
                return invalid(format!(
                    "term {i}: complex root {} has no conjugate partner with conjugate polynomial",
                    t.lambda
                ));
            }
            if real_root && t.poly.iter().any(|c| c.im.abs() > tol * (T::one() + c.norm())) {
                return invalid(format!("term {i}: real root with complex polynomial"));
            }
        }
        Ok(Self { head, tail, terms })
    }

    /// Pure transients and/or exponentials with real roots.
    pub fn real(head: Vec<T>, tail: Vec<T>, terms: Vec<(T, Vec<T>)>) -> Result<Self> {
        Self::new(
            head,
            tail,
            terms.into_iter().map(|(l, p)| ExponentialTerm::real(l, p)).collect(),
        )
    }

    /// Total rank `d = ν_0 + Σ ν_j + ν_∞`.
    pub fn rank(&self) -> usize {
        self.head.len() + self.tail.len() + self.terms.iter().map(|t| t.multiplicity()).sum::<usize>()
    }

    pub fn head(&self) -> &[T] {
        &self.head
    }

    pub fn tail(&self) -> &[T] {
        &self.tail
    }

    pub fn terms(&self) -> &[ExponentialTerm<T>] {
        &self.terms
    }
}

pub fn generate_canonical<T: Scalar>(model: &CanonicalModel<T>, n: usize) -> Result<TimeSeries<T>> {
    if model.head.len() + model.tail.len() > n {
        return invalid(format!("transients do not fit in {n} samples"));
    }
    let mut p: Vec<T> = (1..=n)
        .map(|k| {
            let kc = Complex::new(T::from_usize_lossy(k), T::zero());
            let s: Complex<T> = model
                .terms
                .iter()
                .map(|t| {
                    let poly = t.poly.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, &c| {
                        acc * kc + c
                    });
                    poly * t.lambda.powu(k as u32)
                })
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
            s.re
        })
        .collect();
    for (j, &a) in model.head.iter().enumerate() {
        p[j] = p[j] + a;
    }
    for (l, &b) in model.tail.iter().enumerate() {
        p[n - 1 - l] = p[n - 1 - l] + b;
    }
    TimeSeries::new(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind<T> {
    /// i.i.d. `N(0, σ²)`.
    White { sigma: T },
    /// Deterministic `c·(−1)^j`.
    Alternating { c: T },
    /// `σ·u_j` with the unit-variance AR(1) `u_j = α u_{j−1} + η_j`,
    /// `η_j ~ N(0, 1 − α²)`, `u_0 = 0`.
    Red { sigma: T, alpha: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel<T> {
    pub kind: NoiseKind<T>,
    pub seed: u64,
}

impl<T: Scalar> NoiseModel<T> {
    pub fn new(kind: NoiseKind<T>, seed: u64) -> Result<Self> {
        match kind {
            NoiseKind::White { sigma } if !(sigma >= T::zero()) => invalid("σ must be ≥ 0"),
            NoiseKind::Alternating { c } if !(c >= T::zero()) => invalid("c must be ≥ 0"),
            NoiseKind::Red { sigma, alpha } if !(sigma >= T::zero()) || !(alpha.abs() < T::one()) => {
                invalid("red noise needs σ ≥ 0 and |α| < 1")
            }
            _ => Ok(Self { kind, seed }),
        }
    }
}

pub fn generate_noise<T: Scalar>(model: &NoiseModel<T>, n: usize) -> Result<TimeSeries<T>> {
    let mut rng = rng_from_seed(model.seed);
    let values: Vec<T> = match model.kind {
        NoiseKind::White { sigma } => (0..n).map(|_| sigma * standard_normal::<T>(&mut rng)).collect(),
        NoiseKind::Alternating { c } => (1..=n)
            .map(|j| if j % 2 == 0 { c } else { -c })
            .collect(),
        NoiseKind::Red { sigma, alpha } => {
            let innov = (T::one() - alpha * alpha).sqrt();
            let mut u = T::zero();
            (0..n)
                .map(|_| {
                    u = alpha * u + innov * standard_normal::<T>(&mut rng);
                    sigma * u
                })
                .collect()
        }
    };
    TimeSeries::new(values)
}
