//! Hungarian method (successive shortest augmenting paths with potentials)
//! on sparse bipartite graphs with integer costs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::blossom::{CostGraph, UNMATCHED};
use crate::error::MatchingError;

fn two_colour(g: &CostGraph) -> Option<Vec<u8>> {
    let mut colour = vec![u8::MAX; g.n];
    let mut queue = VecDeque::new();
    for s in 0..g.n {
        if colour[s] != u8::MAX {
            continue;
        }
        colour[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                let w = g.other(e, v);
                if colour[w] == u8::MAX {
                    colour[w] = 1 - colour[v];
                    queue.push_back(w);
                } else if colour[w] == colour[v] {
                    return None;
                }
            }
        }
    }
    Some(colour)
}

/// Matched edge of every vertex.
pub(super) fn solve(g: &CostGraph) -> Result<Vec<usize>, MatchingError> {
    let colour = two_colour(g).ok_or(MatchingError::NotBipartite)?;
    let left: Vec<usize> = (0..g.n).filter(|&v| colour[v] == 0).collect();
    if 2 * left.len() != g.n {
        return Err(MatchingError::NoPerfectMatching);
    }

    // dual feasibility: reduced cost c - pot[l] - pot[r] >= 0
    let mut pot = vec![0i64; g.n];
    for v in (0..g.n).filter(|&v| colour[v] == 1) {
        pot[v] = g
            .incident(v)
            .iter()
            .map(|&e| g.cost[e])
            .min()
            .ok_or(MatchingError::NoPerfectMatching)?;
    }

    let mut mate = vec![UNMATCHED; g.n];
    let mut dist = vec![i64::MAX; g.n];
    let mut via = vec![UNMATCHED; g.n];
    let mut settled = Vec::new();
    let mut done = vec![false; g.n];
    let mut heap = BinaryHeap::new();

    for &root in &left {
        dist.iter_mut().for_each(|d| *d = i64::MAX);
        done.iter_mut().for_each(|d| *d = false);
        settled.clear();
        heap.clear();
        dist[root] = 0;
        heap.push(Reverse((0i64, root)));
        let mut end = UNMATCHED;
        while let Some(Reverse((d, v))) = heap.pop() {
            if done[v] || d > dist[v] {
                continue;
            }
            done[v] = true;
            settled.push(v);
            if colour[v] == 1 {
                if mate[v] == UNMATCHED {
                    end = v;
                    break;
                }
                let l = g.other(mate[v], v);
                if d < dist[l] {
                    dist[l] = d;
                    via[l] = mate[v];
                    heap.push(Reverse((d, l)));
                }
                continue;
            }
            for &e in g.incident(v) {
                if e == mate[v] {
                    continue;
                }
                let r = g.other(e, v);
                let nd = d + g.cost[e] - pot[v] - pot[r];
                debug_assert!(nd >= d);
                if nd < dist[r] {
                    dist[r] = nd;
                    via[r] = e;
                    heap.push(Reverse((nd, r)));
                }
            }
        }
        if end == UNMATCHED {
            return Err(MatchingError::NoPerfectMatching);
        }
        let total = dist[end];
        for &v in &settled {
            let shift = total - dist[v];
            if colour[v] == 0 {
                pot[v] += shift;
            } else {
                pot[v] -= shift;
            }
        }
        let mut r = end;
        loop {
            let e = via[r];
            let l = g.other(e, r);
            mate[r] = e;
            let next = if l == root {
                UNMATCHED
            } else {
                g.other(via[l], l)
            };
            mate[l] = e;
            if next == UNMATCHED {
                break;
            }
            r = next;
        }
    }
    Ok(mate)
}
