use rdm_core::instance::*;
use rdm_core::lattice::{build_lattice, LatticeKind};
use std::sync::Arc;

#[test]
fn same_seed_same_weights() {
    let g = Arc::new(build_lattice(LatticeKind::Q, 16).unwrap());
    let a = sample_weights(g.clone(), 99, 3);
    let b = sample_weights(g.clone(), 99, 3);
    assert_eq!(a.weights, b.weights);
    let c = sample_weights(g, 99, 4);
    assert_ne!(a.weights, c.weights);
}

#[test]
fn mean_is_near_one() {
    let g = Arc::new(build_lattice(LatticeKind::Q, 64).unwrap());
    let inst = sample_weights(g, 1, 0);
    let mean = inst.weights.iter().sum::<f64>() / inst.weights.len() as f64;
    assert!((mean - 1.0).abs() < 0.05, "mean {mean}");
    assert!(inst.weights.iter().all(|&w| w > 0.0));
}

#[test]
fn tail_fraction_and_ks_distance() {
    let mut draws = draw_exponential(100_000, 2024);
    let above = draws.iter().filter(|&&w| w > 1.0).count() as f64 / draws.len() as f64;
    assert!((above - (-1.0f64).exp()).abs() < 0.01, "fraction {above}");

    draws.sort_by(f64::total_cmp);
    let n = draws.len() as f64;
    let ks = draws
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let cdf = 1.0 - (-w).exp();
            (cdf - i as f64 / n)
                .abs()
                .max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.01, "KS distance {ks}");
}

#[test]
fn weights_are_distinct() {
    let w = draw_exponential(50_000, 5);
    let mut sorted = w.clone();
    sorted.sort_by(f64::total_cmp);
    assert!(sorted.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn weight_dump_round_trips() {
    let g = Arc::new(build_lattice(LatticeKind::T, 4).unwrap());
    let inst = sample_weights(g, 8, 1);
    let mut buf = Vec::new();
    inst.write_weights(&mut buf).unwrap();
    let parsed: Vec<f64> = String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(parsed, inst.weights);
}
