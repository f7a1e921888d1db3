//! Learning paths over a frequent-pattern prerequisite graph.
//!
//! Term definitions and classroom Q&A answers become [`corpus::Transaction`]s,
//! which build and reinforce an [`fpgraph::FpGraph`]. The [`aco`] module
//! searches that graph for the sequence of prerequisites a learner should
//! study before an unknown term, and checks itself against an exhaustive
//! oracle. [`service`] exposes the whole loop over HTTP, [`cli`] from the
//! command line.

pub mod aco;
pub mod cli;
pub mod corpus;
pub mod fixtures;
pub mod fpgraph;
pub mod service;

/// Reserved term of the graph's root node.
pub const ROOT: &str = "root-sentinel";

pub use aco::{brute_force_oracle, learning_path, AcoError, AcoParams, LearningPath, TargetGate};
pub use corpus::{normalize_term, Transaction, TransactionKind};
pub use fpgraph::{FpGraph, GraphError};
