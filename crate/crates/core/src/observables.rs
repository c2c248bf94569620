//! Loops of the symmetric difference of two perfect matchings and their
//! geometric observables.

use std::f64::consts::PI;

use crate::error::ObservableError;
use crate::lattice::LatticeGraph;
use crate::matching::Matching;

/// A closed alternating cycle, traversed from its smallest vertex along the
/// edge of the first matching.
#[derive(Debug, Clone)]
pub struct Loop {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// Unwrapped position of each vertex, integrated along the loop.
    pub positions: Vec<[f64; 2]>,
    /// Step vector of each edge in traversal order.
    pub steps: Vec<[f64; 2]>,
    /// Sum of all steps; a multiple of the torus periods.
    pub closure: [f64; 2],
    pub winding: (i64, i64),
    /// Signed exterior angle at each vertex, between the incoming and the
    /// outgoing step, in `(-pi, pi]`.
    pub turning_angles: Vec<f64>,
}

/// Signed angle from `a` to `b` in `(-pi, pi]`.
pub fn turning_angle(a: [f64; 2], b: [f64; 2]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    let t = cross.atan2(dot);
    if t <= -PI {
        PI
    } else {
        t
    }
}

fn solve_periods(periods: [[f64; 2]; 2], d: [f64; 2]) -> [f64; 2] {
    let [a, b] = periods;
    let det = a[0] * b[1] - a[1] * b[0];
    [
        (d[0] * b[1] - d[1] * b[0]) / det,
        (a[0] * d[1] - a[1] * d[0]) / det,
    ]
}

impl Loop {
    /// Build a loop from a start position and the step of every edge.
    pub fn from_steps(
        vertices: Vec<usize>,
        edges: Vec<usize>,
        start: [f64; 2],
        steps: Vec<[f64; 2]>,
        periods: [[f64; 2]; 2],
    ) -> Self {
        let s = steps.len();
        let mut positions = Vec::with_capacity(s);
        let mut p = start;
        for d in &steps {
            positions.push(p);
            p = [p[0] + d[0], p[1] + d[1]];
        }
        let closure = [p[0] - start[0], p[1] - start[1]];
        let w = solve_periods(periods, closure);
        let turning_angles = (0..s)
            .map(|i| turning_angle(steps[(i + s - 1) % s], steps[i]))
            .collect();
        Self {
            vertices,
            edges,
            positions,
            steps,
            closure,
            winding: (w[0].round() as i64, w[1].round() as i64),
            turning_angles,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn is_winding(&self) -> bool {
        self.winding != (0, 0)
    }
}

/// Decompose `m1 xor m2` into vertex-disjoint alternating cycles, ordered by
/// their smallest vertex.
pub fn symmetric_difference(
    m1: &Matching,
    m2: &Matching,
    g: &LatticeGraph,
) -> Result<Vec<Loop>, ObservableError> {
    let n = g.vertices().len();
    let mut first = vec![usize::MAX; n];
    let mut second = vec![usize::MAX; n];
    let mut degree = vec![0usize; n];
    let only = |a: &Matching, b: &Matching| -> Vec<usize> {
        a.edge_ids
            .iter()
            .copied()
            .filter(|&e| !b.contains(e))
            .collect()
    };
    for (slot, list) in [(&mut first, only(m1, m2)), (&mut second, only(m2, m1))] {
        for e in list {
            let edge = g.edge(e);
            for v in [edge.u, edge.v] {
                degree[v] += 1;
                if slot[v] != usize::MAX {
                    return Err(ObservableError::MalformedMatching {
                        vertex: v,
                        degree: degree[v],
                    });
                }
                slot[v] = e;
            }
        }
    }
    for v in 0..n {
        if degree[v] != 0 && degree[v] != 2 {
            return Err(ObservableError::MalformedMatching {
                vertex: v,
                degree: degree[v],
            });
        }
        if degree[v] == 2 && (first[v] == usize::MAX || second[v] == usize::MAX) {
            return Err(ObservableError::MalformedMatching {
                vertex: v,
                degree: 2,
            });
        }
    }

    let mut visited = vec![false; n];
    let mut loops = Vec::new();
    for start in 0..n {
        if degree[start] == 0 || visited[start] {
            continue;
        }
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut steps = Vec::new();
        let mut v = start;
        let mut use_first = true;
        loop {
            visited[v] = true;
            let e = if use_first { first[v] } else { second[v] };
            vertices.push(v);
            edges.push(e);
            steps.push(g.step(e, v));
            v = g.other_end(e, v);
            use_first = !use_first;
            if v == start {
                break;
            }
        }
        loops.push(Loop::from_steps(
            vertices,
            edges,
            g.vertices()[start].position,
            steps,
            g.periods(),
        ));
    }
    Ok(loops)
}

/// Mean squared distance between all ordered vertex pairs divided by two,
/// i.e. the mean squared distance from the centroid.
pub fn gyration_radius(l: &Loop) -> f64 {
    let s = l.positions.len() as f64;
    if s == 0.0 {
        return 0.0;
    }
    let (mut cx, mut cy) = (0.0, 0.0);
    for p in &l.positions {
        cx += p[0];
        cy += p[1];
    }
    cx /= s;
    cy /= s;
    l.positions
        .iter()
        .map(|p| (p[0] - cx).powi(2) + (p[1] - cy).powi(2))
        .sum::<f64>()
        / s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingAngleStats {
    /// Mean of `theta^2` with `theta = 0` on the first edge.
    pub theta_sq_mean: f64,
    /// Mean of `(theta - mean theta)^2`.
    pub theta_sq_gauged: f64,
    /// Sum of all turning angles, including the one closing the loop.
    pub theta_sum: f64,
}

/// Cumulative winding angle of every edge, starting from zero.
pub fn winding_angle_series(l: &Loop) -> Vec<f64> {
    let mut theta = Vec::with_capacity(l.len());
    let mut t = 0.0;
    for (i, a) in l.turning_angles.iter().enumerate() {
        if i > 0 {
            t += a;
        }
        theta.push(t);
    }
    theta
}

pub fn winding_angle_stats(l: &Loop) -> WindingAngleStats {
    let theta = winding_angle_series(l);
    let s = theta.len().max(1) as f64;
    let raw = theta.iter().map(|t| t * t).sum::<f64>() / s;
    let mean = theta.iter().sum::<f64>() / s;
    let gauged = theta.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / s;
    WindingAngleStats {
        theta_sq_mean: raw,
        theta_sq_gauged: gauged,
        theta_sum: l.turning_angles.iter().sum(),
    }
}

pub fn winding_numbers(l: &Loop) -> (i64, i64) {
    l.winding
}

/// Observables of one loop as stored in the records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopStats {
    pub length: usize,
    pub r2: f64,
    pub theta2_gauged: f64,
    pub theta2_raw: f64,
    pub theta_sum: f64,
    pub winding: (i64, i64),
}

pub fn loop_stats(l: &Loop) -> LoopStats {
    let w = winding_angle_stats(l);
    LoopStats {
        length: l.len(),
        r2: gyration_radius(l),
        theta2_gauged: w.theta_sq_gauged,
        theta2_raw: w.theta_sq_mean,
        theta_sum: w.theta_sum,
        winding: l.winding,
    }
}
