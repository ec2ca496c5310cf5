//! Incremental maintenance of the 2-edge-connected blocks of a directed graph.
//!
//! Two vertices are 2-edge-connected when each reaches the other along two
//! edge-disjoint paths. [`TwoEcIndex`] keeps the blocks of this relation up to
//! date while edges are inserted one at a time, answers pairwise queries in
//! constant time (with a separating strong bridge as a witness when the answer
//! is negative), and reports the full partition in linear time.
//!
//! The engine is layered:
//!
//! * [`graph`]: the shared adjacency store.
//! * [`dominator`]: dominator trees of the forward and reverse flow graphs of
//!   a strongly connected component, their bridges, and the bridge
//!   decomposition, updated incrementally.
//! * [`auxiliary`]: shortcut-edge resolution and per-vertex labels.
//! * [`inc_scc`]: incremental strongly connected components (one-way
//!   topological search and two-way leveled search).
//! * [`blocks`]: per-component orchestration and the top-level index.
//! * [`query`]: pairwise tests, witnesses and block reports.
//! * [`oracle`]: brute-force references used by the test suites.

pub mod auxiliary;
pub mod blocks;
pub mod cli;
pub mod dominator;
mod error;
pub mod graph;
pub mod inc_scc;
pub mod oracle;
pub mod query;

pub use blocks::{Engine, TwoEcIndex};
pub use error::{Error, Result};
pub use graph::{Digraph, EdgeId, Vertex};
pub use query::Witness;

/// Sentinel for "no vertex" / "no edge" in the dense `u32` arrays used by the
/// engine internals.
pub(crate) const NIL: u32 = u32::MAX;
