//! Degree/diameter analysis for bipartite graphs of small defect.
//!
//! The crate mechanizes the arithmetic and structure theory behind the
//! bipartite degree/diameter problem at small defect: exact Moore bipartite
//! bounds, feasibility verdicts assembled from number-theoretic and
//! structural filters, verifiers for the short-cycle machinery valid in
//! defect-4 hosts, builders for the known extremal graphs, and an
//! isomorph-free exhaustive search that regenerates the small catalogues.
//!
//! Entry points:
//! - [`graph::BipartiteGraph`]: certified simple connected bipartite graphs.
//! - [`metrics`]: Moore bounds, diameter/girth, defect, spec membership.
//! - [`structure`]: short cycles, repeats, saturation, Θ-subgraphs.
//! - [`feasibility`]: existence verdicts with citation-tagged reasons.
//! - [`constructions`]: named extremal graphs and elementary families.
//! - [`search`]: canonical-augmentation catalogue generation.

pub mod canon;
pub mod constructions;
pub mod feasibility;
pub mod graph;
pub mod graph6;
pub mod metrics;
pub mod search;
pub mod structure;

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use graph::{BipartiteGraph, GraphError};
pub use metrics::{GraphSpec, MooreValue};
