//! Regression graphs: mixed graphs with arrows, dashed lines and full lines
//! over a response/context split of the nodes. The crate decides the
//! conditional independences such a graph implies, tests Markov equivalence,
//! classifies a graph against neighboring model classes, orients eligible
//! graphs into Markov equivalent DAGs, and cross-validates everything both
//! against a brute-force path-enumeration oracle and numerically through
//! linear-Gaussian parametrizations.

pub mod corpus;
pub mod equivalence;
pub mod error;
pub mod gaussian;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod orientation;
pub mod separation;

pub use error::{Error, Result};
pub use graph::{EdgeKind, Flavor, RegressionGraph, StoredEdge, UndirectedGraph};
pub use separation::{collision_vs, pairwise_independences, separates};
