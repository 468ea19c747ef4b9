//! Budgeted maximum coverage on weighted bipartite graphs.
//!
//! X-nodes have costs, Y-nodes have weights; pick X-nodes within a budget to
//! maximize the weight of Y-nodes adjacent to the selection. The crate
//! provides a belief-propagation solver, two greedy baselines, an exact
//! branch-and-bound oracle for small instances, an extractive summarization
//! pipeline (sentences as X, words as Y), ROUGE-1 scoring, and parameter
//! sweeps that write CSV tables.

pub mod error;
pub mod experiments;
pub mod graph;
pub mod oracle;
pub mod rouge;
pub mod solvers;
pub mod text;

pub use error::{Error, Result};
pub use graph::{BipartiteGraph, CoverInstance, CoverSolution};
