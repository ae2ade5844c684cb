//! Structural decompositions of dense graphs.
//!
//! - [`bfkm_partition`] splits a graph of minimum degree `k` into parts of
//!   size at least `k/8`, each `⌈k²/16n⌉`-vertex-connected.
//! - [`extract_bipartite_core`] finds disjoint `A`, `B` such that the
//!   bipartite graph `(A ∪ B, E(A,B))` is highly connected and `A` spans an
//!   edge of the host.
//! - [`robust_partition`] splits along balanced sparse cuts until none
//!   remain, then repairs low in-part degrees.
//! - [`key2_extract`] is the vertex-game analogue of the core extraction,
//!   certifying `χ(G[A]) > b + 1` instead of a single internal edge.
//!
//! Every result is re-certified with the `graph` primitives before it is
//! returned.

mod bfkm;
mod core;
mod cutsearch;
mod robust;

pub use self::bfkm::{bfkm_partition, PartCertificate, Partition};
pub use self::core::{
    extract_bipartite_core, extract_bipartite_core_with, key2_extract, key2_extract_with, BipartiteCore, CoreOptions,
    Key2Stats,
};
pub use self::cutsearch::{find_sparse_balanced_cut, CutSearch, CutSearchConfig};
pub use self::robust::{robust_partition, robust_partition_with, PartStats, RobustPartition, RobustStats};
