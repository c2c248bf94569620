//! Perturbations of a ground state: removal of the heaviest matched edge,
//! removal of a random matched edge, and a uniform penalty `epsilon` on all
//! matched edges.

use std::fmt;
use std::str::FromStr;

use crate::error::MatchingError;
use crate::instance::WeightedInstance;
use crate::matching::{min_weight_perfect_matching, Matching};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExcitationMode {
    Max,
    Random,
    Epsilon,
}

impl ExcitationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ExcitationMode::Max => "max",
            ExcitationMode::Random => "random",
            ExcitationMode::Epsilon => "epsilon",
        }
    }
}

impl fmt::Display for ExcitationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExcitationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" => Ok(ExcitationMode::Max),
            "random" => Ok(ExcitationMode::Random),
            "epsilon" | "eps" => Ok(ExcitationMode::Epsilon),
            other => Err(format!("unknown excitation mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinkExcitationResult {
    pub removed_edge: usize,
    pub ground: Matching,
    pub excited: Matching,
    pub delta_e: f64,
}

#[derive(Debug, Clone)]
pub struct EpsilonExcitationResult {
    pub epsilon: f64,
    pub ground: Matching,
    pub excited: Matching,
    pub delta_e: f64,
    pub overlap: f64,
    pub distance: f64,
}

/// `sum_e (n'_e - n_e) w_e`, accumulated over the symmetric difference in
/// edge-id order.
pub fn energy_difference(weights: &[f64], from: &Matching, to: &Matching) -> f64 {
    let (a, b) = (&from.edge_ids, &to.edge_ids);
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                sum -= weights[x];
                i += 1;
            }
            (Some(_), Some(&y)) => {
                sum += weights[y];
                j += 1;
            }
            (Some(&x), None) => {
                sum -= weights[x];
                i += 1;
            }
            (None, Some(&y)) => {
                sum += weights[y];
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    sum
}

/// Number of edges shared by two matchings.
pub fn shared_edges(a: &Matching, b: &Matching) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a.edge_ids[i].cmp(&b.edge_ids[j]) {
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    n
}

fn excite_link(
    inst: &WeightedInstance,
    ground: &Matching,
    removed_edge: usize,
) -> Result<LinkExcitationResult, MatchingError> {
    let excited = min_weight_perfect_matching(inst, &[removed_edge], None)?;
    let delta_e = energy_difference(&inst.weights, ground, &excited);
    Ok(LinkExcitationResult {
        removed_edge,
        ground: ground.clone(),
        excited,
        delta_e,
    })
}

/// Remove the heaviest ground-state edge and re-solve.
pub fn max_weight_excite(
    inst: &WeightedInstance,
    ground: &Matching,
) -> Result<LinkExcitationResult, MatchingError> {
    let removed = ground
        .edge_ids
        .iter()
        .copied()
        .max_by(|&a, &b| inst.weights[a].total_cmp(&inst.weights[b]))
        .ok_or(MatchingError::NoPerfectMatching)?;
    excite_link(inst, ground, removed)
}

/// Remove a uniformly chosen ground-state edge and re-solve.
pub fn random_link_excite(
    inst: &WeightedInstance,
    ground: &Matching,
    rng: &mut SplitMix64,
) -> Result<LinkExcitationResult, MatchingError> {
    if ground.is_empty() {
        return Err(MatchingError::NoPerfectMatching);
    }
    let removed = ground.edge_ids[rng.below(ground.len() as u64) as usize];
    excite_link(inst, ground, removed)
}

/// Penalise every ground-state edge by `epsilon` and re-solve.
pub fn epsilon_excite(
    inst: &WeightedInstance,
    ground: &Matching,
    epsilon: f64,
) -> Result<EpsilonExcitationResult, MatchingError> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(MatchingError::NonFiniteWeight {
            edge: ground.edge_ids.first().copied().unwrap_or(0),
            weight: epsilon,
        });
    }
    let excited = if epsilon == 0.0 {
        ground.clone()
    } else {
        let mut penalties = vec![0.0; inst.weights.len()];
        for &e in &ground.edge_ids {
            penalties[e] = epsilon;
        }
        min_weight_perfect_matching(inst, &[], Some(&penalties))?
    };
    let delta_e = energy_difference(&inst.weights, ground, &excited);
    let overlap = shared_edges(ground, &excited) as f64 / ground.len() as f64;
    Ok(EpsilonExcitationResult {
        epsilon,
        ground: ground.clone(),
        excited,
        delta_e,
        overlap,
        distance: 1.0 - overlap,
    })
}

/// `points` values spaced geometrically from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let ratio = (hi / lo).ln() / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i + 1 == points {
                        hi
                    } else {
                        lo * (ratio * i as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Default 24-point epsilon grid on `[0.01, 0.9]`.
pub fn epsilon_grid() -> Vec<f64> {
    geometric_grid(0.01, 0.9, 24)
}
