use proptest::prelude::*;
use rdm_core::harness::config::FULL_SIZES;
use rdm_core::statistics::*;
use rdm_core::StatsError;

mod common;

#[test]
fn ccdf_of_small_sample() {
    let c = ccdf_points(&[4.0, 4.0, 8.0]);
    assert_eq!(c.points, vec![(4.0, 1.0 / 3.0), (8.0, 0.0)]);
    assert!(empirical_ccdf(&[1.0; 10]).is_err());
}

#[test]
fn exact_linear_data() {
    let x = [1.0, 2.0, 3.0, 4.0];
    let y = [3.0, 5.0, 7.0, 9.0];
    let f = linear_fit(&x, &y, None).unwrap();
    assert!((f.slope - 2.0).abs() < 1e-14);
    assert!((f.intercept - 1.0).abs() < 1e-14);
    assert!(f.slope_se > 0.0);
    assert!(matches!(
        linear_fit(&[1.0, 1.0], &[0.0, 1.0], None),
        Err(StatsError::DegenerateWindow(_))
    ));
}

#[test]
fn paper_relations() {
    let d = fractal_dimension(Estimate::new(0.591, 0.017), Estimate::new(1.208, 0.018));
    assert!((d.value - 1.383).abs() < 1e-12);
    let z = zeta_from(Estimate::new(0.591, 0.0), Estimate::new(1.208, 0.0));
    assert!((z.value - 0.573).abs() < 5e-4);
    let k = dimension_from_kappa(Estimate::new(2.035, 0.004));
    assert!((k.value - 1.254).abs() < 5e-4);
    assert_eq!(dimension_from_kappa(Estimate::new(9.0, 0.1)).value, 2.0);
    let g = 1.3;
    let z = zeta_from(Estimate::new(g - 1.0, 0.0), Estimate::new(g, 0.0));
    assert!((z.value - (2.0 - g)).abs() < 1e-14);
    assert!((tau_from_beta(Estimate::new(0.5, 0.0)).value - 3.0).abs() < 1e-14);
}

#[test]
fn bootstrap_is_deterministic() {
    let data: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
    let est = |idx: &[usize]| Some(idx.iter().map(|&i| data[i]).sum::<f64>() / idx.len() as f64);
    let a = bootstrap_std(data.len(), 200, 9, est).unwrap();
    let b = bootstrap_std(data.len(), 200, 9, est).unwrap();
    assert_eq!(a, b);
    assert!(a > 0.0);
}

#[test]
fn exact_tail_is_recovered() {
    let points: Vec<(f64, f64)> = (1..=200)
        .map(|s| (s as f64, (s as f64).powf(-0.6)))
        .collect();
    let ccdf = Ccdf {
        points,
        samples: 1_000_000,
        values: Vec::new(),
    };
    let fit = fit_tail_exponent(&ccdf, (2.0, 150.0)).unwrap();
    assert!((fit.exponent - 0.6).abs() < 1e-12);
    assert!(fit.std_error > 0.0 && fit.std_error < 0.01);
    assert_eq!(fit.n_points, 149);
}

#[test]
fn exact_scaling_is_recovered() {
    let l = common::SIZES;
    let y: Vec<f64> = l.iter().map(|l| 3.0 * l.powf(0.5)).collect();
    let fit = fit_scaling_with_correction(&l, &y, &[0.01; 6]).unwrap();
    assert!((fit.exponent - 0.5).abs() < 1e-12);
    assert!(fit.correction.is_none());

    let (y, se) = common::scaling_data(0.59, 0.8, 1.0, 0.0, 0);
    let se: Vec<f64> = se.iter().zip(&y).map(|(_, y)| 0.01 * y).collect();
    let fit = fit_scaling_with_correction(&l, &y, &se).unwrap();
    let (c, d) = fit.correction.expect("correction kept");
    assert!((fit.exponent - 0.59).abs() < 1e-9);
    assert!((c - 0.8).abs() < 1e-7 && (d - 1.0).abs() < 1e-7);
}

#[test]
fn strong_correction_example() {
    let l: Vec<f64> = FULL_SIZES.iter().map(|&l| l as f64).collect();
    let y: Vec<f64> = l.iter().map(|l| l.powf(0.5) * (1.0 + 5.0 / l)).collect();
    let se: Vec<f64> = y.iter().map(|y| 0.01 * y).collect();
    let fit = fit_scaling_with_correction(&l, &y, &se).unwrap();
    assert!(fit.correction.is_some());
    assert!((fit.exponent - 0.5).abs() < 0.03, "{}", fit.exponent);
}

#[test]
fn exact_kappa_and_epsilon_exponents() {
    let l = common::SIZES;
    let theta: Vec<f64> = l.iter().map(|l| 1.0 + 0.5 * l.ln()).collect();
    let fit = fit_winding_kappa(&l, &theta, &[0.0; 6]).unwrap();
    assert!((fit.exponent - 2.0).abs() < 1e-12);

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
    let (beta, tau) = fit_epsilon_exponents(&pts, DEFAULT_EPSILON_CUT).unwrap();
    assert!((beta.exponent - 0.5).abs() < 1e-12);
    assert!((tau.exponent - 3.0).abs() < 1e-12);
    assert!(beta.window.1 <= DEFAULT_EPSILON_CUT);
}

#[test]
fn noisy_synthetic_data_within_three_sigma() {
    for r in common::recoveries(100) {
        assert_eq!(
            r.within(3.0),
            100,
            "{}: max |pull| {:.2}",
            r.name,
            r.max_abs_pull()
        );
        let rms = r.pull_rms();
        assert!(rms > 0.6 && rms < 1.5, "{}: pull rms {rms:.2}", r.name);
    }
}

#[test]
fn insufficient_data_is_reported() {
    let l = [8.0, 16.0, 32.0, 64.0];
    let y = [1.0, 2.0, 3.0, 4.0];
    assert!(matches!(
        fit_scaling_with_correction(&l, &y, &[0.1; 4]),
        Err(StatsError::InsufficientData(_))
    ));
    assert!(matches!(
        fit_winding_kappa(&l[..3], &y[..3], &[0.1; 3]),
        Err(StatsError::InsufficientData(_))
    ));
    let few: Vec<EpsilonPoint> = (1..8)
        .map(|i| EpsilonPoint {
            epsilon: 0.01 * i as f64,
            distance: 0.1,
            distance_se: 0.01,
            energy: 0.1,
            energy_se: 0.01,
        })
        .collect();
    assert!(matches!(
        fit_epsilon_exponents(&few, 0.3),
        Err(StatsError::InsufficientData(_))
    ));
    let c = ccdf_points(&common::pareto(0.6, 500, 1));
    assert!(matches!(
        fit_tail_exponent(&c, (1e6, 1e7)),
        Err(StatsError::InsufficientData(_))
    ));
}

#[test]
fn tail_bootstrap_is_deterministic() {
    let c = ccdf_points(&common::pareto(0.5, 2000, 7));
    let a = fit_tail_exponent(&c, (2.0, 100.0)).unwrap();
    let b = fit_tail_exponent(&c, (2.0, 100.0)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exponential_ccdf_within_dkw_band() {
    let samples = rdm_core::instance::draw_exponential(5000, 11);
    let c = empirical_ccdf(&samples).unwrap();
    let band = ((2.0f64 / 0.001).ln() / (2.0 * 5000.0)).sqrt();
    for &(s, p) in &c.points {
        assert!((p - (-s).exp()).abs() <= band, "s={s}");
    }
}

#[test]
fn derived_errors_add_in_quadrature() {
    let a = Estimate::new(0.6, 0.03);
    let g = Estimate::new(1.2, 0.04);
    let d = fractal_dimension(a, g);
    assert!((d.error - 0.05).abs() < 1e-15);
}

proptest! {
    #[test]
    fn ccdf_is_monotone(samples in prop::collection::vec(1u32..500, 1..300)) {
        let v: Vec<f64> = samples.iter().map(|&s| s as f64).collect();
        let c = ccdf_points(&v);
        let mut prev = 1.0;
        let mut drops = 0.0;
        for &(_, p) in &c.points {
            prop_assert!(p <= prev);
            drops += prev - p;
            prev = p;
        }
        prop_assert!(c.points.windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!((drops - (1.0 - prev)).abs() < 1e-12);
        prop_assert_eq!(prev, 0.0);
    }
}
