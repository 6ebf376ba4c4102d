//! Color refinement, amenability recognition and exact symmetry parameters
//! (distinguishing number, fixing number) for amenable graphs.
//!
//! The pipeline is `graph` → `refinement` (stable partition) →
//! `cell_structure` (cell graph, anisotropic forest) → `amenability` →
//! `symmetry`. `oracle` holds brute-force reference implementations and
//! `generators` builds test and benchmark instances.

pub mod amenability;
pub mod cell_structure;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod refinement;
pub mod symmetry;

pub use amenability::{amenable_iso, check_amenable, AmenabilityVerdict, IsoAnswer, Violation};
pub use graph::{Graph, GraphError, Vertex};
pub use refinement::{cr_iso_test, refine, stable_partition, Partition};
pub use symmetry::{analyze, dist_number, fix_number, CountMode, SymmetryError, SymmetryReport};
