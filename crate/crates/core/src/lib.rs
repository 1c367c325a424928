//! Knot-free vertex deletion: detection, exact solvers and instance tooling.
//!
//! A knot is a strongly connected component with at least two vertices and
//! no arc leaving it. A digraph is knot-free iff every vertex reaches a sink.

pub mod branching;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod io;
pub mod kernel;
pub mod metrics;
pub mod oracle;
pub mod reduction;
pub mod treewidth;

pub use error::{Error, GraphError, ParseError, Result};
pub use graph::{
    bypass_loops, bypass_vertices, find_knots, is_knot_free, strongly_connected_components, Digraph, IdMap, SccInfo, Vertex,
    VertexSet,
};
pub use oracle::{brute_force_min, verify_solution, Algorithm, DisjointInstance, Solution, Status};
