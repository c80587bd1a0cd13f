//! Enumeration of all minimum k-cuts of a weighted graph.
//!
//! The main entry point is [`minkcut::enumerate_min_kcuts`]. It packs
//! spanning trees, and for each tree recursively branches on cheap cut sides
//! classified by how many tree edges they cross. Brute-force oracles for
//! every routine live in [`oracle`].

pub mod combinatorics;
pub mod config;
pub mod contraction;
pub mod error;
pub mod extremal;
pub mod generators;
pub mod graph;
pub mod io;
pub mod minkcut;
pub mod oracle;
pub mod set_system;
pub mod tree_packing;
pub mod union_find;
pub mod verify;
pub mod vertex_set;

pub use config::{Rational, ScheduleConfig};
pub use error::{KcutError, Result};
pub use graph::{Edge, Forest, Partition, Weight, WeightedGraph};
pub use vertex_set::VertexSet;
