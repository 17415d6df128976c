use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::InvarianceKind;
use crate::interval::IntervalSet;
use crate::relation::{Relation, SegmentRelation};

/// Sampling pitch for 1-invariance checks on nondegenerate intervals.
pub const GRID_PITCH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceCheck {
    pub holds: bool,
    /// A pair `(x, y)` of the relation (of its inverse for backward kinds) with
    /// `x ∈ A` that breaks invariance.
    pub violation: Option<(f64, f64)>,
}

impl InvarianceCheck {
    fn ok() -> Self {
        InvarianceCheck {
            holds: true,
            violation: None,
        }
    }

    fn broken(x: f64, y: f64) -> Self {
        InvarianceCheck {
            holds: false,
            violation: Some((x, y)),
        }
    }
}

/// Invariance of a closed set at the relation's tolerance.
///
/// ∞-invariance compares exact images against the tolerance-fattened set.
/// 1-invariance is sampled: every degenerate interval of `a`, the endpoints of
/// every other interval, and a grid of pitch [`GRID_PITCH`] inside it.
pub fn check_invariant_candidate(
    r: &SegmentRelation,
    a: &IntervalSet,
    kind: InvarianceKind,
) -> Result<InvarianceCheck> {
    if a.is_empty() {
        return Err(Error::EmptySample);
    }
    let inv;
    let g = if kind.is_backward() {
        inv = r.inverse();
        &inv
    } else {
        r
    };
    let slack = a.fatten(g.tolerance());
    match kind {
        InvarianceKind::ForwardInf | InvarianceKind::BackwardInf => {
            for (i, (lo, hi), piece) in g.image_pieces(a) {
                let piece = IntervalSet::interval(piece.0, piece.1);
                if let Some(y) = piece.first_uncovered(&slack) {
                    let x = g.segments()[i].point_with_ordinate(y, lo, hi).unwrap_or(lo);
                    return Ok(InvarianceCheck::broken(x, y));
                }
            }
            Ok(InvarianceCheck::ok())
        }
        InvarianceKind::Forward1 | InvarianceKind::Backward1 => {
            for x in sample_grid(a) {
                let succ = g.successors(x)?;
                if succ.is_empty() {
                    continue;
                }
                if succ.intersection(&slack).is_empty() {
                    return Ok(InvarianceCheck::broken(x, succ.min().expect("nonempty")));
                }
            }
            Ok(InvarianceCheck::ok())
        }
    }
}

fn sample_grid(a: &IntervalSet) -> impl Iterator<Item = f64> + '_ {
    a.intervals().iter().flat_map(|&(lo, hi)| {
        let steps = ((hi - lo) / GRID_PITCH).floor() as usize;
        (0..=steps)
            .map(move |k| lo + k as f64 * GRID_PITCH)
            .chain((hi > lo).then_some(hi))
    })
}
