mod common;

use common::*;
use hslra::{
    apply_lrr, generate_canonical, generate_damped, generate_noise, minimal_lrr, rank_profile, detect_plateau,
    CanonicalModel, DampedSinusoidModel, DampedTerm, ExponentialTerm, NoiseKind, NoiseModel, TimeSeries,
};
use num_complex::Complex;
use rand::Rng as _;

#[test]
fn test_signal_of_the_experiments() {
    let m = DampedSinusoidModel::single(0.05, 0.2).unwrap();
    let s = generate_damped(&m, 20).unwrap();
    assert_eq!(s.len(), 20);
    let want = |k: f64| (0.05 * k).exp() * (0.4 * std::f64::consts::PI * k).sin();
    for (k, &x) in s.values().iter().enumerate() {
        assert!((x - want(k as f64 + 1.0)).abs() < 1e-14);
    }
}

#[test]
fn canonical_examples() {
    let head = CanonicalModel::real(vec![1.0], vec![], vec![]).unwrap();
    assert_eq!(generate_canonical(&head, 5).unwrap().values(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
    let tail = CanonicalModel::real(vec![], vec![1.0], vec![]).unwrap();
    assert_eq!(generate_canonical(&tail, 5).unwrap().values(), &[0.0, 0.0, 0.0, 0.0, 1.0]);
    let both = CanonicalModel::real(vec![1.0], vec![1.0], vec![(1.0, vec![1.0])]).unwrap();
    assert_eq!(generate_canonical(&both, 5).unwrap().values(), &[2.0, 1.0, 1.0, 1.0, 2.0]);

    let m = CanonicalModel::real(vec![0.7], vec![-1.3], vec![(0.9, vec![1.0])]).unwrap();
    assert_eq!(m.rank(), 3);
    let p = generate_canonical(&m, 15).unwrap();
    assert_eq!(detect_plateau(&rank_profile(&p, 1e-8).unwrap()), Some(3));
}

#[test]
fn canonical_validation() {
    let z = Complex::new(0.3, 0.4);
    let lonely = ExponentialTerm { lambda: z, poly: vec![Complex::new(1.0, 0.0)] };
    assert!(CanonicalModel::new(vec![], vec![], vec![lonely.clone()]).is_err());
    let partner = ExponentialTerm { lambda: z.conj(), poly: vec![Complex::new(1.0, 0.0)] };
    assert!(CanonicalModel::new(vec![], vec![], vec![lonely, partner]).is_ok());
    assert!(CanonicalModel::real(vec![1.0, 0.0], vec![], vec![]).is_err());
    assert!(CanonicalModel::real(vec![], vec![], vec![(0.0, vec![1.0])]).is_err());
    assert!(CanonicalModel::real(vec![], vec![], vec![(0.5, vec![1.0]), (0.5, vec![2.0])]).is_err());
}

#[test]
fn generated_series_follow_their_minimal_recurrence() {
    let mut rng = rng(30);
    let spec = ModelSpec {
        max_rank: 5,
        radius: (0.6, 1.1),
        transients: false,
        multiplicities: true,
        complex: true,
    };
    for _ in 0..50 {
        let model = random_model(&mut rng, &spec);
        let d = model.rank();
        let n = 2 * d + rng.random_range(2..10);
        let hold = 6;
        let full = generate_canonical(&model, n + hold).unwrap();
        let prefix = TimeSeries::new(full.values()[..n].to_vec()).unwrap();
        let q = minimal_lrr(&prefix, d).unwrap();
        let out = apply_lrr(&prefix, &q, hold).unwrap();
        assert!(max_rel_err(&out.values()[n..], &full.values()[n..]) < 1e-8);
    }
    let damped = DampedSinusoidModel::new(vec![
        DampedTerm::simple(1.0, 0.05, 0.2, 0.0),
        DampedTerm { poly: vec![0.5, 0.1], damping: -0.1, frequency: 0.07, phase: 1.0 },
    ])
    .unwrap();
    let full = generate_damped(&damped, 30).unwrap();
    let prefix = TimeSeries::new(full.values()[..24].to_vec()).unwrap();
    let out = apply_lrr(&prefix, &minimal_lrr(&prefix, 6).unwrap(), 6).unwrap();
    assert!(max_rel_err(&out.values()[24..], &full.values()[24..]) < 1e-8);
}

/// All roots of `Σ c_i z^i` by Weierstrass (Durand–Kerner) iteration.
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<Complex<f64>> = coeffs.iter().map(|&c| Complex::new(c / lead, 0.0)).collect();
    let eval = |z: Complex<f64>| monic.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c);
    let seed = Complex::new(0.4, 0.9);
    let mut roots: Vec<Complex<f64>> = (0..deg).map(|i| seed.powu(i as u32)).collect();
    for _ in 0..500 {
        for i in 0..deg {
            let denom = (0..deg)
                .filter(|&j| j != i)
                .fold(Complex::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            roots[i] = roots[i] - eval(roots[i]) / denom;
        }
    }
    roots
}

#[test]
fn minimal_recurrence_roots_are_the_signal_roots() {
    let mut rng = rng(31);
    for _ in 0..30 {
        let d = rng.random_range(1..=4);
        let mut lambdas: Vec<f64> = Vec::new();
        while lambdas.len() < d {
            let x = rng.random_range(0.3..1.2) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            if lambdas.iter().all(|l| (l - x).abs() > 0.2) {
                lambdas.push(x);
            }
        }
        let terms: Vec<(f64, Vec<f64>)> = lambdas.iter().map(|&l| (l, vec![rng.random_range(0.5..2.0)])).collect();
        let p = generate_canonical(&CanonicalModel::real(vec![], vec![], terms).unwrap(), 3 * d + 4).unwrap();
        let q = minimal_lrr(&p, d).unwrap();
        let roots = polynomial_roots(q.theta());
        for &l in &lambdas {
            let hit = roots.iter().map(|z| (z - l).norm()).fold(f64::INFINITY, f64::min);
            assert!(hit < 1e-6, "root {l} missing from {roots:?}");
        }
    }
}

#[test]
fn noise_models() {
    let alt = generate_noise(&NoiseModel::new(NoiseKind::Alternating { c: 0.2 }, 0).unwrap(), 4).unwrap();
    assert_eq!(alt.values(), &[-0.2, 0.2, -0.2, 0.2]);
    let silent = generate_noise(&NoiseModel::new(NoiseKind::White { sigma: 0.0 }, 9).unwrap(), 6).unwrap();
    assert!(silent.values().iter().all(|&x| x == 0.0));

    let white = NoiseModel::new(NoiseKind::White { sigma: 0.3 }, 42).unwrap();
    let a = generate_noise::<f64>(&white, 100).unwrap();
    let b = generate_noise::<f64>(&white, 100).unwrap();
    assert_eq!(a, b);
    let other = generate_noise::<f64>(&NoiseModel::new(NoiseKind::White { sigma: 0.3 }, 43).unwrap(), 100).unwrap();
    assert_ne!(a, other);

    assert!(NoiseModel::new(NoiseKind::Red { sigma: 1.0, alpha: 1.0 }, 0).is_err());
    assert!(NoiseModel::new(NoiseKind::White { sigma: -1.0 }, 0).is_err());
}

#[test]
fn red_noise_has_ar1_moments() {
    let m = NoiseModel::new(NoiseKind::Red { sigma: 1.0, alpha: 0.5 }, 7).unwrap();
    let x = generate_noise::<f64>(&m, 100_000).unwrap();
    let v = x.values();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n;
    let cov = v.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum::<f64>() / (n - 1.0);
    assert!((var - 1.0).abs() < 0.03, "variance {var}");
    assert!((cov / var - 0.5).abs() < 0.02, "autocorrelation {}", cov / var);

    let scaled = NoiseModel::new(NoiseKind::Red { sigma: 0.3, alpha: 0.5 }, 7).unwrap();
    let y = generate_noise::<f64>(&scaled, 100_000).unwrap();
    for (a, b) in v.iter().zip(y.values()) {
        assert!((0.3 * a - b).abs() < 1e-12);
    }
}
