//! Invariance and minimality analysis for dynamical systems given by closed relations.
//!
//! A closed relation `G ⊆ X × X` generalizes the graph of a continuous map; its
//! orbits are the sequences whose consecutive pairs lie in `G`. This crate decides
//! the four invariance notions and the sixteen minimality notions exactly on finite
//! relations, runs resolution-bounded diagnostics on segment relations over `[0, 1]`,
//! and transports relations along homeomorphisms.
//!
//! ```
//! use crdyn_core::{classify, FiniteRelation, MinimalityKind};
//!
//! let cycle = FiniteRelation::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
//! let report = classify(&cycle);
//! assert!(MinimalityKind::ALL.iter().all(|&k| report.flags[k]));
//! ```

pub mod audit;
pub mod conjugacy;
pub mod corpus;
mod error;
pub mod finite;
pub mod interval;
pub mod numeric;
pub mod relation;

pub use error::{Error, Result};
pub use finite::{
    classify, decide_minimal_fast, decide_minimal_oracle, is_invariant, is_shift_minimal, Flags,
    InvarianceKind, MinimalityKind, MinimalityReport, Witness,
};
pub use interval::IntervalSet;
pub use relation::{
    AnyRelation, Direction, FiniteRelation, OrbitPolicy, OrbitPrefix, Relation, RelationFile,
    Segment, SegmentRelation, VertexSet,
};
