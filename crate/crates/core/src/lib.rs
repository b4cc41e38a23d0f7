//! Transversal and rainbow Hamilton paths and cycles in graph collections.
//!
//! A *graph collection* is a list of graphs `G_0, ..., G_{m-1}` on one vertex
//! set, graph `i` carrying color `i`. A graph `H` on the same vertices is
//! *rainbow* if its edges can be given distinct colors with every edge present
//! in its color's graph, and *transversal* if moreover every color is used.
//!
//! - [`graph`] and [`tgc`]: the data model and its text format.
//! - [`assign`]: edge-to-color assignment by bipartite matching.
//! - [`solver`]: exhaustive searches for transversal Hamilton paths and cycles.
//! - [`construct`]: the rotation and splicing constructions behind the
//!   minimum-degree guarantee for transversal Hamilton paths.
//! - [`families`]: extremal collections without transversal Hamilton
//!   cycles or paths, their certificates, and a structural classifier.
//! - [`harness`]: seeded sampling and verification campaigns.

pub mod assign;
pub mod construct;
pub mod error;
pub mod families;
pub mod graph;
pub mod harness;
pub mod solver;
pub mod tgc;

pub use error::{Error, Result};
pub use graph::{Graph, GraphCollection, Partition};
pub use solver::{RainbowWalkResult, WalkKind};
