//! Randomized incremental Delaunay triangulation in the plane.
//!
//! Three constructions share one region store:
//!
//! * [`influence`]: on-line insertion located through the history DAG,
//! * [`conflict`]: the static conflict-graph construction,
//! * [`accelerated`]: history-DAG insertion seeded at a few key stages by
//!   conflicts rebuilt from a bounded-degree spanning subgraph of the final
//!   triangulation (for example the Euclidean minimum spanning tree).
//!
//! [`analysis`] holds brute-force oracles and the estimators used to check
//! the expected-cost statements empirically.

pub mod accelerated;
pub mod analysis;
pub mod conflict;
pub mod error;
pub mod geometry;
pub mod influence;
pub mod io;
pub mod random;
pub mod runner;
pub mod spanning;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{Point, PointId, Sign};
pub use influence::{influence_build, InfluenceGraph, NodeId, Triangulation};
pub use stats::RunStats;
