//! Tree decompositions of the underlying undirected graph and the
//! dynamic program that solves the problem on them.

pub mod decomposition;
pub mod dp;
pub mod nice;

pub use decomposition::{min_fill_decomposition, read_td, validate_td, write_td, TreeDecomposition};
pub use dp::{consistent, run as run_nice, solve_treewidth, treewidth_optimum, BagState, DpOutcome, DpStats};
pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NodeKind};
