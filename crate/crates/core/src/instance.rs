//! Reproducible i.i.d. exponential edge weights.

use std::io::{self, Write};
use std::sync::Arc;

use crate::lattice::{Graph, LatticeGraph};
use crate::rng::{mix_seed, SplitMix64};

/// Edge-weight law. Only the unit exponential is used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightDistribution {
    #[default]
    Exponential,
}

#[derive(Debug, Clone)]
pub struct WeightedInstance {
    pub graph: Arc<LatticeGraph>,
    pub weights: Vec<f64>,
    pub master_seed: u64,
    pub instance_index: u64,
}

impl WeightedInstance {
    /// Seed of this instance's private stream.
    pub fn stream_seed(&self) -> u64 {
        stream_seed(self.master_seed, self.instance_index)
    }

    /// Stream reserved for choices made after the weights are drawn,
    /// e.g. the random-link excitation.
    pub fn auxiliary_stream(&self, tag: u64) -> SplitMix64 {
        SplitMix64::new(self.stream_seed()).substream(tag)
    }

    pub fn write_weights<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (e, w) in self.weights.iter().enumerate() {
            writeln!(out, "{e} {w:.16e}")?;
        }
        Ok(())
    }
}

pub fn stream_seed(master_seed: u64, instance_index: u64) -> u64 {
    mix_seed(&[master_seed, instance_index])
}

/// Draw `w = -ln u`, `u` uniform in `(0, 1]`, for every edge. Zero draws and
/// exact duplicates are replaced by further draws from the same stream so
/// that all weights are positive and pairwise distinct.
pub fn sample_weights(
    graph: Arc<LatticeGraph>,
    master_seed: u64,
    instance_index: u64,
) -> WeightedInstance {
    let weights = draw_exponential(graph.num_edges(), stream_seed(master_seed, instance_index));
    WeightedInstance {
        graph,
        weights,
        master_seed,
        instance_index,
    }
}

/// `count` distinct positive Exp(1) variates from the stream `seed`.
pub fn draw_exponential(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    let draw = |rng: &mut SplitMix64| loop {
        let w = -rng.next_open_unit().ln();
        if w > 0.0 {
            return w;
        }
    };
    let mut weights: Vec<f64> = (0..count).map(|_| draw(&mut rng)).collect();

    loop {
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
        let mut clash = false;
        for pair in order.windows(2) {
            if weights[pair[0]] == weights[pair[1]] {
                weights[pair[1]] = draw(&mut rng);
                clash = true;
            }
        }
        if !clash {
            return weights;
        }
    }
}
