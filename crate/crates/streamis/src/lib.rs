//! Adaptive adversary and exact certification toolkit for deterministic
//! bounded-memory streaming independent-set algorithms, at a scale where
//! every probabilistic object can be enumerated and every claimed set can be
//! certified by an exact solver.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: dense bitset graphs (≤ 64 vertices), vertex sets, fixed
//!   partitions, and the edge-list text format.
//! - [`oracles`]: exact maximum-clique / maximum-independent-set solvers,
//!   the greedy baseline, and the degree-sum bound.
//! - [`streaming`]: the byte-level state contract for deterministic
//!   streaming algorithms, the subsampling baseline, the seeded-permutation
//!   baseline, and adversary-fodder strawmen.
//! - [`protocol`]: the one-way multi-party game, message budgets, and the
//!   streaming-to-protocol reduction.
//! - [`compression`]: bounded-degree subgraph distributions, exhaustive
//!   support enumeration, summary classes, missing graphs, and the
//!   light-summary search.
//! - [`removal`]: degree splits, certified Las-Vegas clique removal, and the
//!   partition-and-compress round step.
//! - [`adversary`]: the multi-round adaptive adversary, parameter
//!   derivation, verdicts, and result verification.
//! - [`generators`]: deterministic and seeded graph families for harness
//!   runs.
//! - [`experiment`]: batch runs of streaming algorithms with certified
//!   outcomes and CSV reporting.
//! - [`seeding`]: hierarchical seed derivation so that every module draws
//!   from its own reproducible stream.

pub mod adversary;
pub mod compression;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod oracles;
pub mod protocol;
pub mod removal;
pub mod seeding;
pub mod streaming;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, Partition, VertexSet};
