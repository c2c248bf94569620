use rdm_core::lattice::EdgeListGraph;
use rdm_core::matching::*;
use rdm_core::MatchingError;

fn square() -> EdgeListGraph {
    EdgeListGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)])
}

#[test]
fn single_edge() {
    let g = EdgeListGraph::new(2, vec![(0, 1)]);
    let m = solve_graph(&g, &[0.7], &[], None).unwrap();
    assert_eq!(m.edge_ids, vec![0]);
    assert_eq!(m.cost, 0.7);
}

#[test]
fn four_cycle_picks_cheaper_pair() {
    let w = [0.1, 0.2, 0.3, 0.4];
    let m = solve_graph(&square(), &w, &[], None).unwrap();
    assert_eq!(m.edge_ids, vec![0, 2]);
    assert!((m.cost - 0.4).abs() < 1e-15);
    let bf = brute_force_graph(&square(), &w, &[], None).unwrap();
    assert_eq!(bf.matching.edge_ids, vec![0, 2]);
    assert_eq!(bf.count, 2u64);
}

#[test]
fn penalties_move_the_argmin_but_not_the_cost() {
    let w = [0.1, 0.2, 0.3, 0.4];
    let pen = [0.5, 0.0, 0.5, 0.0];
    let m = solve_graph(&square(), &w, &[], Some(&pen)).unwrap();
    assert_eq!(m.edge_ids, vec![1, 3]);
    assert!((m.cost - 0.6).abs() < 1e-15);
    assert!((m.penalized_cost - 0.6).abs() < 1e-15);
}

#[test]
fn forbidding_an_edge() {
    let w = [0.1, 0.2, 0.3, 0.4];
    let m = solve_graph(&square(), &w, &[2], None).unwrap();
    assert_eq!(m.edge_ids, vec![1, 3]);
    let err = solve_graph(&square(), &w, &[0, 1], None).unwrap_err();
    assert_eq!(err, MatchingError::NoPerfectMatching);
}

#[test]
fn path_of_four() {
    let g = EdgeListGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]);
    let w = [1.0, 0.1, 1.0];
    assert_eq!(solve_graph(&g, &w, &[], None).unwrap().edge_ids, vec![0, 2]);
    let bf = brute_force_graph(&g, &w, &[], None).unwrap();
    assert_eq!(bf.matching.edge_ids, vec![0, 2]);
    assert_eq!(bf.count, 1u64);
}

#[test]
fn complete_bipartite_two_by_two() {
    // a1=0, a2=1, b1=2, b2=3
    let g = EdgeListGraph::new(4, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    let w = [1.0, 2.0, 3.0, 1.0];
    let h = hungarian_graph(&g, &w, &[], None).unwrap();
    assert_eq!(h.edge_ids, vec![0, 3]);
    assert_eq!(h.cost, 2.0);
    assert_eq!(solve_graph(&g, &w, &[], None).unwrap().edge_ids, vec![0, 3]);
}

#[test]
fn hungarian_rejects_odd_cycle() {
    let g = EdgeListGraph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]);
    let err = hungarian_graph(&g, &[1.0; 4], &[], None).unwrap_err();
    assert_eq!(err, MatchingError::NotBipartite);
}

#[test]
fn rejects_bad_weights() {
    let w = [0.1, f64::NAN, 0.3, 0.4];
    assert!(matches!(
        solve_graph(&square(), &w, &[], None),
        Err(MatchingError::NonFiniteWeight { edge: 1, .. })
    ));
    assert!(matches!(
        solve_graph(&square(), &[1.0; 3], &[], None),
        Err(MatchingError::WeightCount { .. })
    ));
}

#[test]
fn odd_vertex_count_has_no_perfect_matching() {
    let g = EdgeListGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]);
    assert_eq!(
        solve_graph(&g, &[1.0; 3], &[], None).unwrap_err(),
        MatchingError::NoPerfectMatching
    );
}

#[test]
fn parallel_edges_keep_the_cheapest_copy() {
    let g = EdgeListGraph::new(2, vec![(0, 1), (1, 0), (0, 1)]);
    let m = solve_graph(&g, &[0.5, 0.2, 0.9], &[], None).unwrap();
    assert_eq!(m.edge_ids, vec![1]);
}

#[test]
fn blossom_needed() {
    // two triangles joined by an edge: the optimum uses the bridge
    let g = EdgeListGraph::new(
        6,
        vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)],
    );
    let w = [1.0, 5.0, 5.0, 1.0, 5.0, 5.0, 0.5];
    let a = solve_graph_audited(&g, &w, &[], None).unwrap();
    assert_eq!(a.certificate, Ok(()));
    assert_eq!(a.matching.edge_ids, vec![0, 4, 6]);
}

#[test]
fn dump_format() {
    let m = solve_graph(&square(), &[0.1, 0.2, 0.3, 0.4], &[], None).unwrap();
    let mut buf = Vec::new();
    m.write_dump(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("cost "));
    assert_eq!(&lines[1..], &["0", "2"]);
}
