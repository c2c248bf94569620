//! Synthetic data with known exponents for the fitting routines.
#![allow(dead_code)]

use std::f64::consts::PI;

use rdm_core::rng::SplitMix64;
use rdm_core::statistics::{
    ccdf_points, fit_epsilon_exponents, fit_scaling_with_correction, fit_tail_exponent,
    fit_winding_kappa, EpsilonPoint, FitResult,
};

pub const SIZES: [f64; 6] = [8.0, 16.0, 24.0, 32.0, 48.0, 64.0];

pub fn gaussian(rng: &mut SplitMix64) -> f64 {
    let u = rng.next_open_unit();
    let v = rng.next_open_unit();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

/// Pareto samples with `P[S > s] = s^-zeta` for `s >= 1`.
pub fn pareto(zeta: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| rng.next_open_unit().powf(-1.0 / zeta))
        .collect()
}

/// `A L^exponent exp(c L^-d)` with relative Gaussian noise `rel`.
pub fn scaling_data(exponent: f64, c: f64, d: f64, rel: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = SplitMix64::new(seed);
    let mut means = Vec::new();
    let mut se = Vec::new();
    for &l in &SIZES {
        let truth = 1.7 * l.powf(exponent) * (c * l.powf(-d)).exp();
        means.push(truth * (1.0 + rel * gaussian(&mut rng)));
        se.push(truth * rel);
    }
    (means, se)
}

/// `a + (kappa/4) ln L` with absolute noise `sigma`.
pub fn winding_data(kappa: f64, sigma: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = SplitMix64::new(seed);
    let means = SIZES
        .iter()
        .map(|l| 0.8 + kappa / 4.0 * l.ln() + sigma * gaussian(&mut rng))
        .collect();
    (means, vec![sigma; SIZES.len()])
}

/// `d = 0.9 eps^beta`, `E = 0.4 d^tau`, relative noise `rel` on both.
pub fn epsilon_data(beta: f64, tau: f64, rel: f64, seed: u64) -> Vec<EpsilonPoint> {
    let mut rng = SplitMix64::new(seed);
    rdm_core::excitation::epsilon_grid()
        .into_iter()
        .map(|eps| {
            let d = 0.9 * eps.powf(beta);
            let e = 0.4 * d.powf(tau);
            EpsilonPoint {
                epsilon: eps,
                distance: d * (1.0 + rel * gaussian(&mut rng)),
                distance_se: d * rel,
                energy: e * (1.0 + rel * gaussian(&mut rng)),
                energy_se: e * rel,
            }
        })
        .collect()
}

/// A fitting routine applied to one regeneration: `(estimate, truth)`.
pub struct Recovery {
    pub name: &'static str,
    pub pulls: Vec<f64>,
}

impl Recovery {
    pub fn max_abs_pull(&self) -> f64 {
        self.pulls.iter().fold(0.0, |m, p| m.max(p.abs()))
    }

    pub fn within(&self, k: f64) -> usize {
        self.pulls.iter().filter(|p| p.abs() <= k).count()
    }

    pub fn pull_rms(&self) -> f64 {
        (self.pulls.iter().map(|p| p * p).sum::<f64>() / self.pulls.len() as f64).sqrt()
    }
}

fn pull(fit: &FitResult, truth: f64) -> f64 {
    (fit.exponent - truth) / fit.std_error
}

/// Pulls `(estimate - truth)/std_error` of every fitting routine over
/// `regenerations` independent noisy data sets.
pub fn recoveries(regenerations: u64) -> Vec<Recovery> {
    let mut tail = Vec::new();
    let mut scaling = Vec::new();
    let mut kappa = Vec::new();
    let mut beta = Vec::new();
    let mut tau = Vec::new();
    for r in 0..regenerations {
        let ccdf = ccdf_points(&pareto(0.6, 5_000, 1000 + r));
        tail.push(pull(&fit_tail_exponent(&ccdf, (2.0, 200.0)).unwrap(), 0.6));

        let (m, se) = scaling_data(0.59, 0.0, 1.0, 0.01, 2000 + r);
        scaling.push(pull(
            &fit_scaling_with_correction(&SIZES, &m, &se).unwrap(),
            0.59,
        ));

        let (m, se) = winding_data(2.0, 0.02, 3000 + r);
        kappa.push(pull(&fit_winding_kappa(&SIZES, &m, &se).unwrap(), 2.0));

        let pts = epsilon_data(0.5, 3.0, 0.01, 4000 + r);
        let (b, t) = fit_epsilon_exponents(&pts, 0.3).unwrap();
        beta.push(pull(&b, 0.5));
        tau.push(pull(&t, 3.0));
    }
    vec![
        Recovery {
            name: "tail exponent",
            pulls: tail,
        },
        Recovery {
            name: "scaling (power law)",
            pulls: scaling,
        },
        Recovery {
            name: "winding kappa",
            pulls: kappa,
        },
        Recovery {
            name: "epsilon beta",
            pulls: beta,
        },
        Recovery {
            name: "epsilon tau",
            pulls: tau,
        },
    ]
}

/// Absolute exponent errors of every fitting routine on noise-free input.
pub fn exact_recoveries() -> Vec<(&'static str, f64)> {
    let points: Vec<(f64, f64)> = (1..=200)
        .map(|s| (s as f64, (s as f64).powf(-0.6)))
        .collect();
    let ccdf = rdm_core::statistics::Ccdf {
        points,
        samples: 1_000_000,
        values: Vec::new(),
    };
    let tail = fit_tail_exponent(&ccdf, (2.0, 150.0)).unwrap().exponent - 0.6;

    let y: Vec<f64> = SIZES.iter().map(|l| 3.0 * l.powf(0.5)).collect();
    let scaling = fit_scaling_with_correction(&SIZES, &y, &[0.01; 6])
        .unwrap()
        .exponent
        - 0.5;

    let theta: Vec<f64> = SIZES.iter().map(|l| 1.0 + 0.5 * l.ln()).collect();
    let kappa = fit_winding_kappa(&SIZES, &theta, &[0.0; 6])
        .unwrap()
        .exponent
        - 2.0;

    let pts: Vec<EpsilonPoint> = rdm_core::excitation::epsilon_grid()
        .into_iter()
        .map(|e| EpsilonPoint {
            epsilon: e,
            distance: e.sqrt(),
            distance_se: 0.0,
            energy: e.powf(1.5),
            energy_se: 0.0,
        })
        .collect();
    let (b, t) = fit_epsilon_exponents(&pts, rdm_core::statistics::DEFAULT_EPSILON_CUT).unwrap();
    vec![
        ("tail exponent", tail.abs()),
        ("scaling exponent", scaling.abs()),
        ("winding kappa", kappa.abs()),
        ("epsilon beta", (b.exponent - 0.5).abs()),
        ("epsilon tau", (t.exponent - 3.0).abs()),
    ]
}
