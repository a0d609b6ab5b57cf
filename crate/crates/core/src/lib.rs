//! Deterministic edge connectivity for simple graphs.
//!
//! The pipeline decomposes the graph into certified expanders with
//! conductance parameter `40/δ`, trims and shaves every part, contracts what
//! is left of each part into one vertex, and asks a `k`-bounded connectivity
//! oracle about the (much smaller) contracted multigraph. Contraction keeps
//! every non-trivial minimum cut, and trivial cuts are covered by the minimum
//! degree, so `min(λ', δ)` is the edge connectivity.
//!
//! ```
//! use edgecon::{generate, pipeline};
//!
//! let g = generate::clique_pair(60, 4).unwrap();
//! let (cut, report) = pipeline::edge_connectivity(&g).unwrap();
//! assert_eq!(cut.lambda, 4);
//! assert_eq!(report.delta, 59);
//! ```

pub mod decomp;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod spectral;
pub mod trimshave;
pub mod verify;

pub use decomp::{expander_decompose, CertStatus, DecompConfig, DecompositionReport, Partition};
pub use error::{Error, Result};
pub use graph::{build_simple_graph, cut_size, volume, LoopedGraph, MultiGraph, SimpleGraph, VertexSet};
pub use oracle::{bounded_edge_connectivity, OracleChoice};
pub use pipeline::{contract, edge_connectivity, verify_cut, CutResult, PipelineConfig, PipelineReport};
