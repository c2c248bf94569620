//! Random dimer model on periodic lattices.
//!
//! Builds honeycomb, square and triangular tori, draws exponential edge
//! weights, computes exact minimum-weight perfect matchings, applies link
//! and epsilon excitations, measures the resulting loops and fits scaling
//! exponents to the measurements.

pub mod error;
pub mod excitation;
pub mod harness;
pub mod instance;
pub mod kasteleyn;
pub mod lattice;
pub mod matching;
pub mod observables;
pub mod rng;
pub mod statistics;

pub use error::{
    CountError, HarnessError, InstanceError, LatticeError, MatchingError, ObservableError,
    StatsError,
};
pub use instance::{sample_weights, WeightedInstance};
pub use lattice::{build_lattice, validate_lattice, Graph, LatticeGraph, LatticeKind};
pub use matching::{min_weight_perfect_matching, Matching};
