//! Periodic honeycomb, square and triangular lattices on an `L x L` torus.
//!
//! Vertices live on an integer grid `(x, y)` with id `y * L + x`. The three
//! kinds differ in which neighbours are connected and in the geometric
//! embedding used for loop observables:
//!
//! * `Q`: square grid, unit steps along both axes.
//! * `T`: square grid plus the `(x, y) - (x + 1, y + 1)` diagonal, embedded
//!   with basis `(1, 0)` and `(-1/2, sqrt(3)/2)` so every bond has length one.
//! * `H`: brick-wall grid. `(x, y)` always connects horizontally and connects
//!   to `(x, y + 1)` when `x + y` is even. The embedding places the vertices
//!   on a regular honeycomb with unit bonds.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::error::LatticeError;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeKind {
    H,
    Q,
    T,
}

impl LatticeKind {
    pub const ALL: [LatticeKind; 3] = [LatticeKind::H, LatticeKind::Q, LatticeKind::T];

    pub fn is_bipartite(self) -> bool {
        !matches!(self, LatticeKind::T)
    }

    pub fn degree(self) -> usize {
        match self {
            LatticeKind::H => 3,
            LatticeKind::Q => 4,
            LatticeKind::T => 6,
        }
    }

    /// Stable small integer used when mixing seeds.
    pub fn tag(self) -> u64 {
        match self {
            LatticeKind::H => 1,
            LatticeKind::Q => 2,
            LatticeKind::T => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LatticeKind::H => "H",
            LatticeKind::Q => "Q",
            LatticeKind::T => "T",
        }
    }

    /// Grid shifts that are automorphisms of the lattice.
    fn translations(self) -> &'static [(usize, usize)] {
        match self {
            // a unit shift in x swaps the brick parity, so the honeycomb
            // period is two cells along each axis (or one diagonal step)
            LatticeKind::H => &[(2, 0), (1, 1), (0, 2)],
            LatticeKind::Q | LatticeKind::T => &[(1, 0), (0, 1)],
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LatticeKind {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "H" | "h" => Ok(LatticeKind::H),
            "Q" | "q" => Ok(LatticeKind::Q),
            "T" | "t" => Ok(LatticeKind::T),
            other => Err(LatticeError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub x: usize,
    pub y: usize,
    pub position: [f64; 2],
    /// Colour class on bipartite lattices.
    pub parity: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Geometric step from `u` to `v` in the unwrapped plane.
    pub displacement: [f64; 2],
}

/// Immutable torus lattice.
#[derive(Debug, Clone)]
pub struct LatticeGraph {
    kind: LatticeKind,
    size: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

/// Minimal read-only view of an undirected multigraph, shared by the
/// lattices and the small hand-built graphs used as solver test cases.
pub trait Graph {
    fn num_vertices(&self) -> usize;
    fn num_edges(&self) -> usize;
    fn endpoints(&self, e: usize) -> (usize, usize);
}

impl Graph for LatticeGraph {
    fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    fn num_edges(&self) -> usize {
        self.edges.len()
    }

    fn endpoints(&self, e: usize) -> (usize, usize) {
        let edge = &self.edges[e];
        (edge.u, edge.v)
    }
}

/// Plain edge list, used for non-lattice inputs.
#[derive(Debug, Clone)]
pub struct EdgeListGraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeListGraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        Self {
            num_vertices,
            edges,
        }
    }

    /// Open `rows x cols` grid graph with free boundaries.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let id = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        Self::new(rows * cols, edges)
    }
}

impl Graph for EdgeListGraph {
    fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    fn num_edges(&self) -> usize {
        self.edges.len()
    }

    fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }
}

fn position(kind: LatticeKind, x: usize, y: usize) -> [f64; 2] {
    let (xf, yf) = (x as f64, y as f64);
    match kind {
        LatticeKind::Q => [xf, yf],
        LatticeKind::T => [xf - 0.5 * yf, SQRT3_2 * yf],
        LatticeKind::H => {
            let shift = if (x + y) % 2 == 1 { 0.5 } else { 0.0 };
            [SQRT3_2 * xf, 1.5 * yf - shift]
        }
    }
}

fn period_vectors(kind: LatticeKind, size: usize) -> [[f64; 2]; 2] {
    let l = size as f64;
    match kind {
        LatticeKind::Q => [[l, 0.0], [0.0, l]],
        LatticeKind::T => [[l, 0.0], [-0.5 * l, SQRT3_2 * l]],
        LatticeKind::H => [[SQRT3_2 * l, 0.0], [0.0, 1.5 * l]],
    }
}

/// Forward neighbours of `(x, y)` as `(dx, dy, displacement)`.
fn forward_steps(kind: LatticeKind, x: usize, y: usize) -> Vec<(usize, usize, [f64; 2])> {
    match kind {
        LatticeKind::Q => vec![(1, 0, [1.0, 0.0]), (0, 1, [0.0, 1.0])],
        LatticeKind::T => vec![
            (1, 0, [1.0, 0.0]),
            (0, 1, [-0.5, SQRT3_2]),
            (1, 1, [0.5, SQRT3_2]),
        ],
        LatticeKind::H => {
            if (x + y).is_multiple_of(2) {
                vec![(1, 0, [SQRT3_2, -0.5]), (0, 1, [0.0, 1.0])]
            } else {
                vec![(1, 0, [SQRT3_2, 0.5])]
            }
        }
    }
}

pub fn build_lattice(kind: LatticeKind, size: usize) -> Result<LatticeGraph, LatticeError> {
    if size < 2 {
        return Err(LatticeError::TooSmall(size));
    }
    if !size.is_multiple_of(2) {
        return Err(LatticeError::OddSize(size));
    }
    let id = |x: usize, y: usize| y * size + x;
    let mut vertices = Vec::with_capacity(size * size);
    for y in 0..size {
        for x in 0..size {
            vertices.push(Vertex {
                x,
                y,
                position: position(kind, x, y),
                parity: kind.is_bipartite().then_some(((x + y) % 2) as u8),
            });
        }
    }

    let mut edges = Vec::with_capacity(size * size * kind.degree() / 2);
    for y in 0..size {
        for x in 0..size {
            for (dx, dy, disp) in forward_steps(kind, x, y) {
                let a = id(x, y);
                let b = id((x + dx) % size, (y + dy) % size);
                let edge = if a < b {
                    Edge {
                        u: a,
                        v: b,
                        displacement: disp,
                    }
                } else {
                    Edge {
                        u: b,
                        v: a,
                        displacement: [-disp[0], -disp[1]],
                    }
                };
                edges.push(edge);
            }
        }
    }
    // stable: parallel edges (L = 2) keep generation order
    edges.sort_by_key(|e| (e.u, e.v));

    Ok(LatticeGraph::from_raw_parts(kind, size, vertices, edges))
}

/// A broken lattice invariant, as reported by [`validate_lattice`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    VertexCount {
        expected: usize,
        found: usize,
    },
    Degree {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    EndpointOrder {
        edge: usize,
    },
    EdgeLength {
        edge: usize,
        length: f64,
    },
    Displacement {
        edge: usize,
    },
    Bipartite {
        edge: usize,
    },
    Translation {
        shift: (usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexCount { expected, found } => {
                write!(f, "vertex count: expected {expected}, found {found}")
            }
            Violation::Degree {
                vertex,
                expected,
                found,
            } => {
                write!(
                    f,
                    "degree at vertex {vertex}: expected {expected}, found {found}"
                )
            }
            Violation::EndpointOrder { edge } => write!(f, "edge {edge}: endpoints out of order"),
            Violation::EdgeLength { edge, length } => {
                write!(f, "edge {edge}: length {length} is not 1")
            }
            Violation::Displacement { edge } => {
                write!(
                    f,
                    "edge {edge}: displacement does not reach v modulo the torus periods"
                )
            }
            Violation::Bipartite { edge } => {
                write!(f, "edge {edge}: joins two vertices of one class")
            }
            Violation::Translation { shift } => {
                write!(f, "edge set not invariant under shift {shift:?}")
            }
        }
    }
}

impl LatticeGraph {
    /// Assemble a graph without checking any invariant. Adjacency is rebuilt
    /// from `edges`. Use [`validate_lattice`] to diagnose the result.
    pub fn from_raw_parts(
        kind: LatticeKind,
        size: usize,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (e, edge) in edges.iter().enumerate() {
            adjacency[edge.u].push(e);
            if edge.v != edge.u {
                adjacency[edge.v].push(e);
            }
        }
        Self {
            kind,
            size,
            vertices,
            edges,
            adjacency,
        }
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// Linear size `L`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let edge = &self.edges[e];
        if edge.u == v {
            edge.v
        } else {
            edge.u
        }
    }

    /// Displacement of edge `e` when traversed starting at `from`.
    pub fn step(&self, e: usize, from: usize) -> [f64; 2] {
        let edge = &self.edges[e];
        if edge.u == from {
            edge.displacement
        } else {
            [-edge.displacement[0], -edge.displacement[1]]
        }
    }

    /// The two torus period vectors `a_x`, `a_y` in the embedding plane.
    pub fn periods(&self) -> [[f64; 2]; 2] {
        period_vectors(self.kind, self.size)
    }

    /// Express a planar vector in the period basis.
    pub fn period_coordinates(&self, d: [f64; 2]) -> [f64; 2] {
        let [a, b] = self.periods();
        let det = a[0] * b[1] - a[1] * b[0];
        [
            (d[0] * b[1] - d[1] * b[0]) / det,
            (a[0] * d[1] - a[1] * d[0]) / det,
        ]
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "{} {} {} {}",
            self.kind,
            self.size,
            self.vertices.len(),
            self.edges.len()
        )?;
        for (e, edge) in self.edges.iter().enumerate() {
            writeln!(
                out,
                "{} {} {} {} {}",
                e, edge.u, edge.v, edge.displacement[0], edge.displacement[1]
            )?;
        }
        Ok(())
    }
}

/// Check every structural invariant of a torus lattice and list what fails.
pub fn validate_lattice(g: &LatticeGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let size = g.size;
    let expected_vertices = size * size;
    if g.vertices.len() != expected_vertices {
        out.push(Violation::VertexCount {
            expected: expected_vertices,
            found: g.vertices.len(),
        });
        return out;
    }

    let degree = g.kind.degree();
    for (v, inc) in g.adjacency.iter().enumerate() {
        if inc.len() != degree {
            out.push(Violation::Degree {
                vertex: v,
                expected: degree,
                found: inc.len(),
            });
        }
    }

    for (e, edge) in g.edges.iter().enumerate() {
        if edge.u >= edge.v {
            out.push(Violation::EndpointOrder { edge: e });
        }
        let len = edge.displacement[0].hypot(edge.displacement[1]);
        if (len - 1.0).abs() > 1e-9 {
            out.push(Violation::EdgeLength {
                edge: e,
                length: len,
            });
        }
        let pu = g.vertices[edge.u].position;
        let pv = g.vertices[edge.v].position;
        let gap = [
            pu[0] + edge.displacement[0] - pv[0],
            pu[1] + edge.displacement[1] - pv[1],
        ];
        let c = g.period_coordinates(gap);
        if c.iter().any(|x| (x - x.round()).abs() > 1e-9) {
            out.push(Violation::Displacement { edge: e });
        }
        if g.kind.is_bipartite() {
            let (pu, pv) = (g.vertices[edge.u].parity, g.vertices[edge.v].parity);
            if pu.is_none() || pu == pv {
                out.push(Violation::Bipartite { edge: e });
            }
        }
    }

    let key = |u: usize, v: usize| (u.min(v), u.max(v));
    let mut edge_keys: Vec<(usize, usize)> = g.edges.iter().map(|e| key(e.u, e.v)).collect();
    edge_keys.sort_unstable();
    for &(sx, sy) in g.kind.translations() {
        let shift = |v: usize| {
            let vx = &g.vertices[v];
            ((vx.y + sy) % size) * size + (vx.x + sx) % size
        };
        let mut shifted: Vec<(usize, usize)> = g
            .edges
            .iter()
            .map(|e| key(shift(e.u), shift(e.v)))
            .collect();
        shifted.sort_unstable();
        if shifted != edge_keys {
            out.push(Violation::Translation { shift: (sx, sy) });
        }
    }
    out
}
