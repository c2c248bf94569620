//! Exhaustive enumeration of perfect matchings for small graphs.

use super::blossom::CostGraph;
use super::Matching;
use crate::error::MatchingError;

pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 20;

#[derive(Debug, Clone)]
pub struct BruteForce {
    pub matching: Matching,
    /// Number of distinct perfect matchings of the simple graph.
    pub count: u64,
}

struct Search<'a> {
    g: &'a CostGraph,
    weight: &'a [f64],
    covered: Vec<bool>,
    stack: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
    count: u64,
}

impl Search<'_> {
    fn recurse(&mut self) {
        let Some(v) = self.covered.iter().position(|&c| !c) else {
            self.count += 1;
            let mut edges = self.stack.clone();
            edges.sort_unstable();
            let cost: f64 = edges.iter().map(|&e| self.weight[e]).sum();
            if self.best.as_ref().is_none_or(|(c, _)| cost < *c) {
                self.best = Some((cost, edges));
            }
            return;
        };
        self.covered[v] = true;
        for &e in self.g.incident(v) {
            let w = self.g.other(e, v);
            if self.covered[w] {
                continue;
            }
            self.covered[w] = true;
            self.stack.push(e);
            self.recurse();
            self.stack.pop();
            self.covered[w] = false;
        }
        self.covered[v] = false;
    }
}

/// Minimum-weight perfect matching (as simple-graph edge indices) and the
/// number of perfect matchings.
pub(super) fn enumerate(g: &CostGraph, weight: &[f64]) -> Result<(Vec<usize>, u64), MatchingError> {
    let mut s = Search {
        g,
        weight,
        covered: vec![false; g.n],
        stack: Vec::new(),
        best: None,
        count: 0,
    };
    s.recurse();
    match s.best {
        Some((_, edges)) => Ok((edges, s.count)),
        None => Err(MatchingError::NoPerfectMatching),
    }
}
