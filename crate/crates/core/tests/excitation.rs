use rdm_core::excitation::*;
use rdm_core::lattice::{build_lattice, LatticeKind};
use rdm_core::matching::brute_force_graph;
use rdm_core::{min_weight_perfect_matching, Matching, WeightedInstance};
use std::sync::Arc;

fn small_instance() -> WeightedInstance {
    let g = Arc::new(build_lattice(LatticeKind::Q, 4).unwrap());
    rdm_core::instance::sample_weights(g, 3, 0)
}

#[test]
fn grid_shape() {
    let g = epsilon_grid();
    assert_eq!(g.len(), 24);
    assert_eq!(g[0], 0.01);
    assert_eq!(g[23], 0.9);
    assert!(g.windows(2).all(|w| w[1] > w[0]));
    let r0 = g[1] / g[0];
    assert!(g.windows(2).all(|w| ((w[1] / w[0]) - r0).abs() < 1e-12));
}

#[test]
fn max_weight_matches_brute_force() {
    let inst = small_instance();
    let ground = min_weight_perfect_matching(&inst, &[], None).unwrap();
    let res = max_weight_excite(&inst, &ground).unwrap();
    assert!(ground.contains(res.removed_edge));
    assert!(!res.excited.contains(res.removed_edge));
    let bf = brute_force_graph(
        inst.graph.as_ref(),
        &inst.weights,
        &[res.removed_edge],
        None,
    )
    .unwrap();
    assert_eq!(bf.matching.edge_ids, res.excited.edge_ids);
    assert!(res.delta_e > 0.0);
    let direct = res.excited.cost - ground.cost;
    assert!((res.delta_e - direct).abs() <= 1e-12 * direct.abs().max(1.0));
}

#[test]
fn epsilon_zero_is_identity() {
    let inst = small_instance();
    let ground = min_weight_perfect_matching(&inst, &[], None).unwrap();
    let res = epsilon_excite(&inst, &ground, 0.0).unwrap();
    assert_eq!(res.excited, ground);
    assert_eq!(res.overlap, 1.0);
    assert_eq!(res.distance, 0.0);
    assert_eq!(res.delta_e, 0.0);
    assert!(epsilon_excite(&inst, &ground, f64::NAN).is_err());
}

#[test]
fn energy_difference_counts_both_sides() {
    let w = [0.1, 0.2, 0.3, 0.4];
    let a = Matching {
        edge_ids: vec![0, 2],
        cost: 0.4,
        penalized_cost: 0.4,
    };
    let b = Matching {
        edge_ids: vec![1, 3],
        cost: 0.6,
        penalized_cost: 0.6,
    };
    assert!((energy_difference(&w, &a, &b) - 0.2).abs() < 1e-15);
    assert_eq!(shared_edges(&a, &b), 0);
    assert_eq!(shared_edges(&a, &a), 2);
}

use rdm_core::lattice::{Edge, LatticeGraph, Vertex};
use rdm_core::rng::SplitMix64;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Unit square with edge ids 0..4 running around the cycle.
fn four_cycle() -> WeightedInstance {
    let pos = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let vertices = pos
        .iter()
        .enumerate()
        .map(|(i, &p)| Vertex {
            x: i % 2,
            y: i / 2,
            position: p,
            parity: Some((i % 2) as u8),
        })
        .collect();
    let edge = |u: usize, v: usize| Edge {
        u,
        v,
        displacement: [pos[v][0] - pos[u][0], pos[v][1] - pos[u][1]],
    };
    let edges = vec![edge(0, 1), edge(1, 2), edge(2, 3), edge(0, 3)];
    let g = LatticeGraph::from_raw_parts(LatticeKind::Q, 2, vertices, edges);
    WeightedInstance {
        graph: Arc::new(g),
        weights: vec![0.1, 0.2, 0.3, 0.4],
        master_seed: 0,
        instance_index: 0,
    }
}

#[test]
fn four_cycle_link_excitations() {
    let inst = four_cycle();
    let ground = min_weight_perfect_matching(&inst, &[], None).unwrap();
    assert_eq!(ground.edge_ids, vec![0, 2]);
    let max = max_weight_excite(&inst, &ground).unwrap();
    assert_eq!(max.removed_edge, 2);
    assert_eq!(max.excited.edge_ids, vec![1, 3]);
    assert!((max.delta_e - 0.2).abs() < 1e-15);

    let mut rng = SplitMix64::new(5);
    let mut hits = [0u32; 4];
    for _ in 0..2000 {
        let r = random_link_excite(&inst, &ground, &mut rng).unwrap();
        hits[r.removed_edge] += 1;
        assert!((r.delta_e - 0.2).abs() < 1e-15);
    }
    assert_eq!(hits[1] + hits[3], 0);
    assert!((hits[0] as f64 - 1000.0).abs() < 4.0 * 2000f64.sqrt() / 2.0);
}

#[test]
fn four_cycle_epsilon_excitation() {
    let inst = four_cycle();
    let ground = min_weight_perfect_matching(&inst, &[], None).unwrap();
    let r = epsilon_excite(&inst, &ground, 0.5).unwrap();
    assert_eq!(r.excited.edge_ids, vec![1, 3]);
    assert_eq!(r.overlap, 0.0);
    assert_eq!(r.distance, 1.0);
    assert!((r.delta_e - 0.2).abs() < 1e-15);
    assert!((r.excited.penalized_cost - 0.6).abs() < 1e-15);
    // below the gap nothing moves
    let r = epsilon_excite(&inst, &ground, 0.05).unwrap();
    assert_eq!(r.excited.edge_ids, ground.edge_ids);
    assert_eq!(r.delta_e, 0.0);
}

#[test]
fn epsilon_matches_brute_force_on_grid() {
    for kind in LatticeKind::ALL {
        let g = Arc::new(build_lattice(kind, 4).unwrap());
        for seed in 0..3 {
            let inst = rdm_core::instance::sample_weights(g.clone(), seed, 0);
            let ground = min_weight_perfect_matching(&inst, &[], None).unwrap();
            let mut eps = epsilon_grid();
            eps.push(50.0);
            for e in eps {
                let r = epsilon_excite(&inst, &ground, e).unwrap();
                let mut pen = vec![0.0; inst.weights.len()];
                for &id in &ground.edge_ids {
                    pen[id] = e;
                }
                let bf =
                    brute_force_graph(inst.graph.as_ref(), &inst.weights, &[], Some(&pen)).unwrap();
                assert_eq!(bf.matching.edge_ids, r.excited.edge_ids, "{kind} eps={e}");
            }
        }
    }
}

#[test]
fn epsilon_response_is_monotone() {
    for kind in LatticeKind::ALL {
        let g = Arc::new(build_lattice(kind, 8).unwrap());
        for seed in 0..10 {
            let inst = rdm_core::instance::sample_weights(g.clone(), seed, 0);
            let ground = min_weight_perfect_matching(&inst, &[], None).unwrap();
            let mut prev = epsilon_excite(&inst, &ground, 0.0).unwrap();
            for e in epsilon_grid() {
                let r = epsilon_excite(&inst, &ground, e).unwrap();
                assert!(r.overlap <= prev.overlap, "{kind} seed {seed} eps {e}");
                assert!(
                    r.delta_e >= prev.delta_e - 1e-12,
                    "{kind} seed {seed} eps {e}"
                );
                prev = r;
            }
        }
    }
}

#[test]
fn link_excitation_invariants() {
    for kind in LatticeKind::ALL {
        let g = Arc::new(build_lattice(kind, 16).unwrap());
        for seed in 0..10 {
            let inst = rdm_core::instance::sample_weights(g.clone(), seed, 0);
            let ground = min_weight_perfect_matching(&inst, &[], None).unwrap();
            let mut rng = inst.auxiliary_stream(1);
            for r in [
                max_weight_excite(&inst, &ground).unwrap(),
                random_link_excite(&inst, &ground, &mut rng).unwrap(),
            ] {
                assert!(ground.contains(r.removed_edge));
                assert!(!r.excited.contains(r.removed_edge));
                assert!(r.delta_e > 0.0);
                let direct = r.excited.cost - ground.cost;
                assert!((r.delta_e - direct).abs() <= 1e-12 * ground.cost.abs());
            }
            let heaviest = ground.edge_ids.iter().all(|&e| {
                inst.weights[e]
                    <= inst.weights[max_weight_excite(&inst, &ground).unwrap().removed_edge]
            });
            assert!(heaviest);
        }
    }
}

#[test]
fn random_link_is_uniform() {
    let g = Arc::new(build_lattice(LatticeKind::Q, 4).unwrap());
    let inst = rdm_core::instance::sample_weights(g, 21, 0);
    let ground = min_weight_perfect_matching(&inst, &[], None).unwrap();
    let mut rng = SplitMix64::new(99);
    let trials = 10_000;
    let mut counts = vec![0u32; ground.len()];
    for _ in 0..trials {
        let r = random_link_excite(&inst, &ground, &mut rng).unwrap();
        let slot = ground.edge_ids.binary_search(&r.removed_edge).unwrap();
        counts[slot] += 1;
    }
    let expected = trials as f64 / counts.len() as f64;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let p = 1.0
        - ChiSquared::new((counts.len() - 1) as f64)
            .unwrap()
            .cdf(chi2);
    assert!(p > 0.01, "chi2 {chi2}, p {p}");
}

#[test]
fn random_link_energy_matches_reference() {
    let g = Arc::new(build_lattice(LatticeKind::Q, 24).unwrap());
    let n = 600;
    let mut sum = 0.0;
    let mut sq = 0.0;
    for i in 0..n {
        let inst = rdm_core::instance::sample_weights(g.clone(), 17, i);
        let ground = min_weight_perfect_matching(&inst, &[], None).unwrap();
        let mut rng = inst.auxiliary_stream(1);
        let d = random_link_excite(&inst, &ground, &mut rng)
            .unwrap()
            .delta_e;
        sum += d;
        sq += d * d;
    }
    let mean = sum / n as f64;
    let se = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((mean - 0.655).abs() < 0.07, "mean {mean} +/- {se}");
}
