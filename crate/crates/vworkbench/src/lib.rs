//! Exact-arithmetic workbench for three interlocking toolkits:
//!
//! * [`dyadic`] / [`vcore`]: standard dyadic intervals encoded as binary words,
//!   and prefix-exchange bijections of the Cantor set (tree-pair elements) with
//!   exact reduction, composition, support and thickness computations.
//! * [`constructions`]: certificate-producing constructions over those elements:
//!   five-factor decompositions into reducible pieces, conjugation of supports
//!   into prescribed cylinders, simultaneous handles for pairs of elements, a
//!   finitely generated solving family for controlled conjugation, and a
//!   seeded audit that exercises all of them together.
//! * [`hyplab`] / [`cubelab`]: finite-graph validators for hyperbolicity
//!   estimates (four-point delta, tripod fibers, projections, broken
//!   geodesics, a line model for elliptic-displacement bounds) and for median
//!   graphs / cube complexes (hyperplanes, well-separation, the chain metrics
//!   delta_L, ultrafilter enumeration).
//!
//! Everything is exact: no floating point anywhere. All randomized entry
//! points take explicit seeds and are byte-deterministic.
//!
//! The primary interface is the `examples/` directory (one runnable example
//! per capability, e.g. `cargo run --example decompose_five`); the same
//! functionality is scriptable through the thin `vworkbench` binary
//! (`decompose`, `audit`, `verify`, `cube` subcommands).

pub mod cli;
pub mod constructions;
pub mod cubelab;
pub mod dyadic;
pub mod hyplab;
pub mod vcore;
