//! Minimum-weight perfect matching: blossom solver, Hungarian cross-check and
//! an exhaustive oracle for small graphs.
//!
//! Effective weights `w_e + penalty_e` are converted once to integers,
//! `round(w * 2^40)`, and the solvers work on those. Parallel edges are
//! collapsed to the cheapest copy and forbidden edges are dropped before
//! solving. Reported costs are always recomputed from the original reals.

mod blossom;
mod brute;
mod hungarian;

use std::collections::HashMap;
use std::io::{self, Write};

use crate::error::MatchingError;
use crate::instance::WeightedInstance;
use crate::lattice::Graph;

use blossom::{BlossomSolver, CostGraph, UNMATCHED};

pub use brute::{BruteForce, BRUTE_FORCE_VERTEX_LIMIT};

/// Integer scale applied to effective weights.
pub const WEIGHT_SCALE: f64 = (1u64 << 40) as f64;

/// Largest accepted effective weight magnitude; keeps dual arithmetic far
/// from `i64` overflow.
pub const MAX_ABS_WEIGHT: f64 = 4096.0;

/// A perfect matching given by sorted edge ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub edge_ids: Vec<usize>,
    /// Sum of the original weights in edge-id order.
    pub cost: f64,
    /// Sum of weight plus penalty, the objective the solver minimised.
    pub penalized_cost: f64,
}

impl Matching {
    fn from_edges(mut edge_ids: Vec<usize>, weights: &[f64], penalties: Option<&[f64]>) -> Self {
        edge_ids.sort_unstable();
        let cost = edge_ids.iter().map(|&e| weights[e]).sum();
        let penalized_cost = edge_ids
            .iter()
            .map(|&e| weights[e] + penalties.map_or(0.0, |p| p[e]))
            .sum();
        Self {
            edge_ids,
            cost,
            penalized_cost,
        }
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edge_ids.binary_search(&e).is_ok()
    }

    /// Edge covering each vertex, or `None` where uncovered.
    pub fn mates<G: Graph>(&self, g: &G) -> Vec<Option<usize>> {
        let mut mate = vec![None; g.num_vertices()];
        for &e in &self.edge_ids {
            let (u, v) = g.endpoints(e);
            mate[u] = Some(e);
            mate[v] = Some(e);
        }
        mate
    }

    /// `cost <decimal>` followed by one edge id per line.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "cost {:.16e}", self.cost)?;
        for e in &self.edge_ids {
            writeln!(out, "{e}")?;
        }
        Ok(())
    }
}

/// True when every vertex is covered by exactly one edge of `m`.
pub fn is_perfect<G: Graph>(g: &G, m: &Matching) -> bool {
    let mut seen = vec![0u8; g.num_vertices()];
    for &e in &m.edge_ids {
        if e >= g.num_edges() {
            return false;
        }
        let (u, v) = g.endpoints(e);
        if u == v {
            return false;
        }
        seen[u] += 1;
        seen[v] += 1;
    }
    seen.iter().all(|&c| c == 1) && 2 * m.len() == g.num_vertices()
}

/// Simple graph with integer costs derived from a host graph.
struct Prepared {
    graph: CostGraph,
    /// Host edge id of every simple-graph edge.
    original: Vec<usize>,
    /// Effective real weight of every simple-graph edge.
    effective: Vec<f64>,
}

fn prepare<G: Graph>(
    g: &G,
    weights: &[f64],
    forbidden: &[usize],
    penalties: Option<&[f64]>,
) -> Result<Prepared, MatchingError> {
    let m = g.num_edges();
    if weights.len() != m {
        return Err(MatchingError::WeightCount {
            expected: m,
            found: weights.len(),
        });
    }
    if let Some(p) = penalties {
        if p.len() != m {
            return Err(MatchingError::WeightCount {
                expected: m,
                found: p.len(),
            });
        }
    }
    let mut blocked = vec![false; m];
    for &e in forbidden {
        if e < m {
            blocked[e] = true;
        }
    }

    let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
    let mut ends = Vec::new();
    let mut original = Vec::new();
    let mut effective = Vec::new();
    for e in 0..m {
        if blocked[e] {
            continue;
        }
        let w = weights[e] + penalties.map_or(0.0, |p| p[e]);
        if !w.is_finite() || w.abs() > MAX_ABS_WEIGHT {
            return Err(MatchingError::NonFiniteWeight { edge: e, weight: w });
        }
        let (a, b) = g.endpoints(e);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        match slot.get(&key) {
            Some(&i) => {
                if w < effective[i] {
                    effective[i] = w;
                    original[i] = e;
                }
            }
            None => {
                slot.insert(key, ends.len());
                ends.push([key.0, key.1]);
                original.push(e);
                effective.push(w);
            }
        }
    }
    // doubled so that S-S slacks stay even
    let cost = effective
        .iter()
        .map(|&w| 2 * (w * WEIGHT_SCALE).round() as i64)
        .collect();
    Ok(Prepared {
        graph: CostGraph::new(g.num_vertices(), ends, cost),
        original,
        effective,
    })
}

fn mates_to_edges(p: &Prepared, mate: &[usize]) -> Result<Vec<usize>, MatchingError> {
    let mut out = Vec::with_capacity(mate.len() / 2);
    for (v, &e) in mate.iter().enumerate() {
        if e == UNMATCHED {
            return Err(MatchingError::NoPerfectMatching);
        }
        let [a, _] = p.graph.ends[e];
        if a == v {
            out.push(p.original[e]);
        }
    }
    Ok(out)
}

/// Minimum-cost perfect matching of any graph by the blossom algorithm.
pub fn solve_graph<G: Graph>(
    g: &G,
    weights: &[f64],
    forbidden: &[usize],
    penalties: Option<&[f64]>,
) -> Result<Matching, MatchingError> {
    let p = prepare(g, weights, forbidden, penalties)?;
    let solved = BlossomSolver::new(&p.graph).solve()?;
    let edges = mates_to_edges(&p, &solved.mate)?;
    Ok(Matching::from_edges(edges, weights, penalties))
}

/// Blossom solution together with the outcome of an independent audit of
/// its dual certificate (feasibility, tightness of matched edges, fullness
/// of blossoms with positive dual).
#[derive(Debug, Clone)]
pub struct Audited {
    pub matching: Matching,
    pub certificate: Result<(), String>,
}

pub fn solve_graph_audited<G: Graph>(
    g: &G,
    weights: &[f64],
    forbidden: &[usize],
    penalties: Option<&[f64]>,
) -> Result<Audited, MatchingError> {
    let p = prepare(g, weights, forbidden, penalties)?;
    let solved = BlossomSolver::new(&p.graph).solve()?;
    let certificate = solved.certificate.verify(&p.graph, &solved.mate);
    let edges = mates_to_edges(&p, &solved.mate)?;
    Ok(Audited {
        matching: Matching::from_edges(edges, weights, penalties),
        certificate,
    })
}

/// Ground state of `inst` with `forbidden` edges removed and optional
/// per-edge additive penalties.
pub fn min_weight_perfect_matching(
    inst: &WeightedInstance,
    forbidden: &[usize],
    penalties: Option<&[f64]>,
) -> Result<Matching, MatchingError> {
    solve_graph(inst.graph.as_ref(), &inst.weights, forbidden, penalties)
}

/// Hungarian method on a bipartite graph.
pub fn hungarian_graph<G: Graph>(
    g: &G,
    weights: &[f64],
    forbidden: &[usize],
    penalties: Option<&[f64]>,
) -> Result<Matching, MatchingError> {
    let p = prepare(g, weights, forbidden, penalties)?;
    let mate = hungarian::solve(&p.graph)?;
    let edges = mates_to_edges(&p, &mate)?;
    Ok(Matching::from_edges(edges, weights, penalties))
}

pub fn min_weight_perfect_matching_bipartite(
    inst: &WeightedInstance,
) -> Result<Matching, MatchingError> {
    hungarian_graph(inst.graph.as_ref(), &inst.weights, &[], None)
}

/// Exhaustive minimum over all perfect matchings, with their count.
pub fn brute_force_graph<G: Graph>(
    g: &G,
    weights: &[f64],
    forbidden: &[usize],
    penalties: Option<&[f64]>,
) -> Result<BruteForce, MatchingError> {
    if g.num_vertices() > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(MatchingError::TooLarge {
            vertices: g.num_vertices(),
            limit: BRUTE_FORCE_VERTEX_LIMIT,
        });
    }
    let p = prepare(g, weights, forbidden, penalties)?;
    let (best, count) = brute::enumerate(&p.graph, &p.effective)?;
    let edges = best.into_iter().map(|e| p.original[e]).collect();
    Ok(BruteForce {
        matching: Matching::from_edges(edges, weights, penalties),
        count,
    })
}

pub fn brute_force_matching(
    inst: &WeightedInstance,
    forbidden: &[usize],
) -> Result<BruteForce, MatchingError> {
    brute_force_graph(inst.graph.as_ref(), &inst.weights, forbidden, None)
}
