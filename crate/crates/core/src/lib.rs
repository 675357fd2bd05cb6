//! Exact computation, construction and verification of fractional total
//! colorings.
//!
//! All arithmetic is over arbitrary-precision rationals. The crate covers
//! the total graph and its independent sets, an exact simplex with column
//! generation for the fractional total chromatic number, decompositions into
//! sub-2-factors, interval color sets with piecewise isometries, and the
//! recoloring and cut-gluing constructions built on them.

pub mod chi;
pub mod coloring;
pub mod construct;
pub mod decompose;
pub mod fixtures;
pub mod graph;
pub mod interval;
pub mod isometry;
pub mod rational;
pub mod simplex;
pub mod total;

pub use graph::{EdgeCut, EdgeId, Extended, Graph, GraphError, Subgraph, VertexId};
pub use rational::Rational;
