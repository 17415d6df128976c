//! Relation backends and the primitives shared by every analysis engine.
//!
//! Two carriers are supported: a finite discrete space `{0, …, n-1}`
//! ([`FiniteRelation`], exact) and the unit interval with relations given as
//! finite unions of line segments ([`SegmentRelation`], numeric). Both
//! implement [`Relation`].

mod finite;
mod io;
pub(crate) mod orbit;
mod segment;

pub use finite::{FiniteRelation, VertexSet, MAX_POINTS};
pub use io::{AnyRelation, RelationFile};
pub use orbit::{extend_orbit, simulate, OrbitPolicy, OrbitPrefix, OrbitRelation, SimulatedOrbit};
pub use segment::{segment_hausdorff, Segment, SegmentRelation, DEFAULT_TOLERANCE};

use crate::error::Result;

/// A closed relation `G ⊆ X × X` on some carrier `X`.
pub trait Relation: Sized {
    type Point: Copy + PartialEq + std::fmt::Debug;
    type PointSet;

    /// Whether `(x, y) ∈ G`.
    fn contains(&self, x: Self::Point, y: Self::Point) -> Result<bool>;

    /// The fibre `{y : (x, y) ∈ G}`.
    fn successors(&self, x: Self::Point) -> Result<Self::PointSet>;

    /// The fibre `{x : (x, y) ∈ G}`.
    fn predecessors(&self, y: Self::Point) -> Result<Self::PointSet>;

    /// `G⁻¹ = {(y, x) : (x, y) ∈ G}`.
    fn inverse(&self) -> Self;

    /// `(p₁(G), p₂(G))`.
    fn projections(&self) -> (Self::PointSet, Self::PointSet);
}

/// Which way orbits run: along `G` or along `G⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl std::str::FromStr for Direction {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Direction::Forward),
            "backward" => Ok(Direction::Backward),
            other => Err(crate::Error::InvalidParameter(format!(
                "direction `{other}`"
            ))),
        }
    }
}
