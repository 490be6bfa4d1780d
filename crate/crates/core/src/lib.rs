//! Dense-graph expander extraction and small-clique-minor search.

pub mod error;
pub mod expansion;
pub mod graph;
pub mod rational;
pub mod seed;
pub mod extraction;
pub mod gen;
pub mod minor;
pub mod oracle;

pub use error::{Error, Result};
pub use graph::{Density, Graph, InducedSubgraph, VertexSet};
