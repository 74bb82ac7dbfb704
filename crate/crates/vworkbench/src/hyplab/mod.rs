//! Exact hyperbolicity checks on finite graphs.
//!
//! Everything is integer or rational arithmetic: graph distances are hop
//! counts, Gromov products are half-integers carried as doubled integers,
//! and the four-point constant comes out of a full quadruple scan. The
//! checks mirror a standard toolkit: comparison tripods, nearest-point
//! projections onto quasiconvex paths, broken-geodesic estimates, and an
//! integer line model for the one elliptic-displacement statement that
//! needs a loxodromic isometry (finite graphs have none).
//!
//! Morse constants are existential, so no check ever quotes one. Where a
//! statement says "within M of", the validator substitutes the Hausdorff
//! distance between the instance's own broken path and its geodesics,
//! which is the quantity the proofs actually bound.

mod checks;
mod graph;
mod instances;
mod line;

pub use checks::{
    check_broken_geodesic, check_distproj, check_foot, check_projection_window,
    check_quasigeodesic_fact, hausdorff, project, tripod_check, BrokenCheck, DistprojCheck,
    FootCheck, LineWitness, ProjectionWindowCheck, QuasiCheck,
};
pub use graph::{four_point_delta, graphify, FiniteMetricSpace, HypGraph};
pub use instances::{
    grid_graph, random_connected_graph, random_metric_space, random_tree, sweep_broken_geodesic,
    sweep_foot, sweep_line_model, sweep_projection_gap, sweep_projection_window,
    sweep_quasigeodesic, CheckReport,
};
pub use line::{line_model_check, LineModelCheck, LineModelIsometry};

use thiserror::Error;

/// Per-pair cap on enumerated geodesics; pairs beyond it are skipped and
/// counted, never silently dropped.
pub const GEODESIC_CAP: u64 = 100_000;

#[derive(Debug, Error)]
pub enum HypError {
    #[error("metric invalid: {reason}")]
    MetricInvalid { reason: String },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unit-edge graph distorts the metric at pair ({u}, {v})")]
    Distorted { u: u32, v: u32 },
    #[error("vertex {0} out of range")]
    VertexRange(u32),
    #[error("path is not a geodesic between its endpoints")]
    NotGeodesic,
    #[error("consecutive path vertices are not adjacent")]
    BrokenPath,
    #[error("{what} violates its bound")]
    BoundViolated { what: String },
    #[error("precondition failed: {what}")]
    Precondition { what: String },
}

/// Result of a gated check: the gate can fail (instance ineligible), the
/// geodesic budget can run out, or the check runs to completion.
#[derive(Debug, Clone)]
pub enum Outcome<T> {
    Ineligible,
    Budget,
    Checked(T),
}

impl<T> Outcome<T> {
    pub fn checked(&self) -> Option<&T> {
        match self {
            Outcome::Checked(t) => Some(t),
            _ => None,
        }
    }
}
