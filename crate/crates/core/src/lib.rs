//! Formal concept analysis engine.
//!
//! The crate covers the whole path from a numeric trait table to a reduced
//! set of class-specific concepts:
//!
//! - [`context`]: formal contexts, derivation and closure operators, `.cxt`
//!   and binary CSV formats.
//! - [`mining`]: enumeration of all concepts (Close-by-One) and a brute
//!   force reference.
//! - [`lattice`]: order, covering relation, meet/join, iceberg filtering
//!   and DOT export.
//! - [`binarize`]: median and geographic-bin discretization of trait
//!   tables.
//! - [`contrast`]: positive/negative splitting and removal of concepts
//!   shared with the negative class.
//! - [`generate`]: seeded random contexts for tests and benchmarks.

pub mod binarize;
pub mod bits;
pub mod context;
pub mod contrast;
pub mod generate;
pub mod lattice;
pub mod mining;

pub use bits::{AttributeSet, ObjectSet};
pub use context::{parse_binary_csv, parse_cxt, write_binary_csv, write_cxt, ContextError, FormalContext};
pub use lattice::{export_dot, iceberg, join, meet, order_leq, ConceptLattice, DotOptions, HasseDiagram};
pub use mining::{
    brute_force_concepts, enumerate_concepts, enumerate_concepts_with, support, Concept,
    MiningError, MiningOptions,
};
