//! Median graphs as 1-skeletons of cube complexes, with wall
//! combinatorics made exact.
//!
//! A complex is accepted only after full validation: connectivity, the
//! unique-median property on every triple, walls (square-equivalence
//! classes of edges) splitting the graph into exactly two convex
//! halfspaces. On top of that sit the separation tools: transversality,
//! facing triples, L-well-separation with an explicit subset budget, the
//! chain metrics delta_L computed by a crossing-order DP and
//! cross-checked by subset brute force, ultrafilter enumeration (every
//! consistent orientation of the walls is principal), and the skewering
//! check, which on a finite complex can only ever come back false.
//!
//! Everything is integer arithmetic on bitsets; budgets are explicit
//! and exceeding one is a reported outcome, never a silent skip.

mod bits;
mod complex;
mod instances;
mod ultra;
mod wellsep;

pub use complex::{skewers, CubeComplex, Hyperplane};
pub use instances::{
    cube_q, path_complex, product, random_median_complex, random_staircase, random_tree_complex,
    sweep_geodesic_additivity, sweep_median_product, CubeSweep,
};
pub use ultra::{enumerate_ultrafilters, ULTRA_WALL_CAP};
pub use wellsep::{
    facing_triple, four_point_of_matrix, transverse_matrix, well_separated, AdditivityCheck,
    DeltaL, MedianCheck, WsVerdict, SUBSET_CAP,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CubeError {
    #[error("vertex {0} out of range")]
    VertexRange(u32),
    #[error("bad edge ({u}, {v}): {reason}")]
    BadEdge { u: u32, v: u32, reason: String },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("triple ({x}, {y}, {z}) has {count} medians; a median graph has exactly one")]
    NotMedian { x: u32, y: u32, z: u32, count: u32 },
    #[error("wall {0} does not cut the complex into two halfspaces")]
    BadWall(usize),
    #[error("halfspace of wall {wall} fails convexity at pair ({u}, {v})")]
    NotConvex { wall: usize, u: u32, v: u32 },
    #[error("wall index {0} out of range")]
    WallRange(usize),
    #[error("{what} exceeds its budget")]
    Budget { what: String },
    #[error("{what}")]
    Axiom { what: String },
    #[error("not an automorphism: {what}")]
    NotAutomorphism { what: String },
    #[error("precondition failed: {what}")]
    Precondition { what: String },
}
