//! Cartesian products of finite undirected graphs with loops, and the unique
//! prime factorization of connected graphs that have at least one unlooped
//! vertex.
//!
//! The crate is organized around a few small pieces:
//!
//! - [`Graph`]: adjacency lists for 2-edges plus a per-vertex loop flag.
//! - [`product`]: the Cartesian product, coordinatizations, projections and
//!   layer subgraphs.
//! - [`matrix`]: adjacency matrices and the Kronecker sum, which describes the
//!   product on the matrix side.
//! - [`simple`]: prime factorization of connected loop-free graphs via the
//!   square edge relation and BFS coordinatization.
//! - [`loops`]: prime factorization in the presence of loops, by coarsening a
//!   partition of the loop-free base factors — both the subset-scan and the
//!   BFS merge-scan algorithm.
//! - [`oracle`]: brute-force ground truth and random instance generation for
//!   testing, capped at small sizes.

pub mod bfs;
pub mod graph;
pub mod iso;
pub mod loops;
pub mod matrix;
pub mod oracle;
pub mod product;
pub mod simple;

pub use bfs::{bfs_order, BfsOrder};
pub use graph::Graph;
pub use iso::{find_isomorphism, find_isomorphism_capped};
pub use loops::{
    assemble_factors, check_conditions, factor_loops_from_base, factor_loops_linear,
    factor_loops_linear_with_stats, factor_loops_subset_scan, merge_nonroot_parts,
    project_to_part, relative_coordinates, relative_coordinates_from, verify_factorization,
    ConditionCheck, FactorPartition, RelativeCoordinates, ScanStats, ViolationKind,
};
pub use matrix::{adjacency_matrix, kronecker_product, kronecker_sum, IntMatrix};
pub use oracle::{
    brute_force_factor, brute_force_factor_capped, brute_force_split_sized,
    brute_force_two_split, brute_force_two_split_capped, random_instance, with_random_loops,
    InstanceSpec,
};
pub use product::{cartesian_product, layer_subgraph, Coordinatization, Factorization};
pub use simple::{
    coordinatize_by_coloring, factor_simple, factor_simple_rooted, square_relation_closure,
    EdgeColoring, MergeWitness,
};

/// Errors shared by the graph operations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A vertex id is not below the declared vertex count.
    #[error("IdOutOfRange: vertex {id} out of range for {n} vertices")]
    IdOutOfRange { id: usize, n: usize },
    /// A pair (v, v) was supplied where a 2-edge was expected.
    #[error("SelfPairInTwoEdges: pair ({v}, {v}) must be given as a loop")]
    SelfPairInTwoEdges { v: usize },
    /// The same 2-edge was supplied twice.
    #[error("DuplicateEdge: edge ({u}, {v}) supplied more than once")]
    DuplicateEdge { u: usize, v: usize },
    /// The factor list of a product was empty.
    #[error("EmptyFactorList: a Cartesian product needs at least one factor")]
    EmptyFactorList,
    /// A factor with no vertices was supplied.
    #[error("EmptyFactor: factor {index} has no vertices")]
    EmptyFactor { index: usize },
    /// A factor index does not exist in the coordinatization.
    #[error("IndexOutOfRange: factor index {index} out of range for {len} factors")]
    IndexOutOfRange { index: usize, len: usize },
    /// A matrix operation required square input.
    #[error("NonSquareInput: matrix is {rows}x{cols}")]
    NonSquareInput { rows: usize, cols: usize },
    /// The graph is not connected.
    #[error("Disconnected: operation requires a connected graph")]
    Disconnected,
    /// The graph is trivial (a single vertex without edges).
    #[error("Trivial: operation requires a nontrivial graph")]
    Trivial,
    /// The graph has loops where a loop-free graph was required.
    #[error("HasLoops: operation requires a loop-free graph")]
    HasLoops,
    /// The chosen root carries a loop.
    #[error("RootLooped: root vertex {root} carries a loop")]
    RootLooped { root: usize },
    /// Every vertex carries a loop, so no prime factorization exists.
    #[error("NoUnloopedVertex: every vertex carries a loop")]
    NoUnloopedVertex,
    /// The instance exceeds a configured size cap.
    #[error("SizeLimitExceeded: size {n} exceeds cap {cap}")]
    SizeLimitExceeded { n: usize, cap: usize },
    /// A merge was requested where the support touches at most one part.
    #[error("NothingToMerge: support of vertex {v} touches at most one part")]
    NothingToMerge { v: usize },
    /// Coordinate tuples do not map vertices bijectively onto the box.
    #[error("NotABijection: coordinates are not a bijection onto the coordinate box")]
    NotABijection,
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
