use serde::Serialize;

use super::invariance::check_invariant_candidate;
use crate::error::Result;
use crate::finite::{InvarianceKind, MinimalityKind};
use crate::interval::IntervalSet;
use crate::relation::SegmentRelation;

const SINGLETON_GRID: u32 = 128;
const GEOMETRIC_TERMS: i32 = 60;

/// Candidate closed sets, in search order: singletons on the grid `k/128`,
/// geometric sequences accumulating at 0 or 1, then unions of grid intervals.
pub fn candidate_library() -> Vec<IntervalSet> {
    let mut out: Vec<IntervalSet> = (0..=SINGLETON_GRID)
        .map(|k| IntervalSet::point(k as f64 / SINGLETON_GRID as f64))
        .collect();

    for q in [0.5f64, 1.0 / 3.0, 0.25] {
        let tail = |from: i32| (from..=GEOMETRIC_TERMS).map(move |k| q.powi(k));
        // {1 - q^k} ∪ {1}, with and without 0
        out.push(IntervalSet::from_points(
            tail(0).map(|t| 1.0 - t).chain([1.0]),
        ));
        out.push(IntervalSet::from_points(
            tail(1).map(|t| 1.0 - t).chain([1.0]),
        ));
        // {q^k} ∪ {0}, with and without 1
        out.push(IntervalSet::from_points(tail(0).chain([0.0])));
        out.push(IntervalSet::from_points(tail(1).chain([0.0])));
    }

    let eighths = |k: u32| k as f64 / 8.0;
    for a in 0..8 {
        for b in a + 1..=8 {
            if (a, b) != (0, 8) {
                out.push(IntervalSet::interval(eighths(a), eighths(b)));
            }
        }
    }
    for (a, b) in [(0.0, 0.125), (0.0, 0.25)] {
        out.push(IntervalSet::from_intervals([(a, b), (1.0 - b, 1.0 - a)]));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentWitnessSearch {
    pub kind: MinimalityKind,
    /// The invariance notion whose proper invariant sets refute `kind`.
    pub refuted_through: InvarianceKind,
    /// First verified candidate in library order.
    pub witness: Option<IntervalSet>,
    pub verified_candidates: Vec<IntervalSet>,
    pub candidates_tried: usize,
}

/// Searches the candidate library for a proper nonempty closed set refuting `kind`.
///
/// The six 1-type kinds are refuted by 1-invariant sets (forward or backward),
/// all other kinds by ∞-invariant ones, since each of them implies ∞-minimality
/// in its direction.
pub fn search_witness(r: &SegmentRelation, kind: MinimalityKind) -> Result<SegmentWitnessSearch> {
    let one_type = matches!(
        kind.forward_twin(),
        MinimalityKind::One | MinimalityKind::OnePlus | MinimalityKind::OneOmega
    );
    let through = match (one_type, kind.is_backward()) {
        (true, false) => InvarianceKind::Forward1,
        (false, false) => InvarianceKind::ForwardInf,
        (true, true) => InvarianceKind::Backward1,
        (false, true) => InvarianceKind::BackwardInf,
    };
    let library = candidate_library();
    let mut verified = Vec::new();
    for cand in &library {
        if check_invariant_candidate(r, cand, through)?.holds {
            verified.push(cand.clone());
        }
    }
    Ok(SegmentWitnessSearch {
        kind,
        refuted_through: through,
        witness: verified.first().cloned(),
        verified_candidates: verified,
        candidates_tried: library.len(),
    })
}
