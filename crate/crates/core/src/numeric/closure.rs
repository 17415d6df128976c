use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::relation::SegmentRelation;

/// Change below which an iterate counts as stable.
pub const STABILITY_THRESHOLD: f64 = 1e-12;
/// Iteration stops, unconverged, once an iterate has more pieces than this.
pub const MAX_PIECES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureMode {
    /// Reachable points only; approximates the closure of the forward orbit union.
    Inner,
    /// Fattens before imaging; overshoots to a closed invariant hull.
    Outer,
}

impl std::str::FromStr for ClosureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inner" => Ok(ClosureMode::Inner),
            "outer" => Ok(ClosureMode::Outer),
            other => Err(Error::InvalidParameter(format!("closure mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureResult {
    pub set: IntervalSet,
    pub iterations: usize,
    pub converged: bool,
    pub mode: ClosureMode,
    pub epsilon: f64,
}

/// Iterates `S ← S ∪ G(fatten(S, ε))` until stable or `max_iter` images are taken.
///
/// An iterate is stable when both its Hausdorff distance and the measure of its
/// symmetric difference to the previous set fall below [`STABILITY_THRESHOLD`].
/// Measure alone cannot see new isolated points. Multivalued relations can
/// multiply isolated points at every step, so iteration also stops, unconverged,
/// past [`MAX_PIECES`] pieces.
pub fn invariant_closure(
    r: &SegmentRelation,
    s0: &IntervalSet,
    mode: ClosureMode,
    epsilon: f64,
    max_iter: usize,
) -> Result<ClosureResult> {
    if s0.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon}")));
    }
    if mode == ClosureMode::Inner && epsilon != 0.0 {
        return Err(Error::InvalidParameter(
            "inner closure takes epsilon = 0".into(),
        ));
    }
    let mut set = s0.clone();
    for i in 1..=max_iter {
        let next = set.union(&r.image(&set.fatten(epsilon)));
        let stable = next.hausdorff(&set) < STABILITY_THRESHOLD
            && next.symmetric_difference_measure(&set) < STABILITY_THRESHOLD;
        set = next;
        if !stable && set.len() > MAX_PIECES {
            return Ok(ClosureResult {
                set,
                iterations: i,
                converged: false,
                mode,
                epsilon,
            });
        }
        if stable {
            return Ok(ClosureResult {
                set,
                iterations: i,
                converged: true,
                mode,
                epsilon,
            });
        }
    }
    Ok(ClosureResult {
        set,
        iterations: max_iter,
        converged: false,
        mode,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Segment;
    use proptest::prelude::*;

    fn ex22() -> SegmentRelation {
        SegmentRelation::from_segments(vec![
            Segment::new(0.0, 0.5, 1.0, 1.0).unwrap(),
            Segment::new(1.0, 0.0, 1.0, 1.0).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn inner_closure_of_ex22_is_the_geometric_sequence() {
        let res = invariant_closure(
            &ex22(),
            &IntervalSet::point(0.0),
            ClosureMode::Inner,
            0.0,
            60,
        )
        .unwrap();
        let expected = IntervalSet::from_points((0..=60).map(|k| 1.0 - 0.5f64.powi(k)));
        assert!(res.set.hausdorff(&expected) < 1e-9);
        assert!(res.set.max_gap() >= 0.2);
        assert!(!res.set.contains(1.0));
    }

    #[test]
    fn outer_closure_of_ex22_floods() {
        let res = invariant_closure(
            &ex22(),
            &IntervalSet::point(0.0),
            ClosureMode::Outer,
            1e-3,
            1000,
        )
        .unwrap();
        assert!(res.converged);
        assert!(res.set.max_gap() < 1e-3);
    }

    #[test]
    fn whole_space_is_stable_at_once() {
        for (mode, eps) in [(ClosureMode::Inner, 0.0), (ClosureMode::Outer, 1e-3)] {
            let res = invariant_closure(&ex22(), &IntervalSet::unit(), mode, eps, 10).unwrap();
            assert_eq!(res.iterations, 1);
            assert!(res.converged);
            assert_eq!(res.set, IntervalSet::unit());
        }
    }

    #[test]
    fn parameters_are_checked() {
        let g = ex22();
        assert!(invariant_closure(&g, &IntervalSet::empty(), ClosureMode::Inner, 0.0, 5).is_err());
        assert!(
            invariant_closure(&g, &IntervalSet::point(0.0), ClosureMode::Inner, 1e-3, 5).is_err()
        );
        assert!(
            invariant_closure(&g, &IntervalSet::point(0.0), ClosureMode::Outer, -1.0, 5).is_err()
        );
    }

    fn arb_relation() -> impl Strategy<Value = SegmentRelation> {
        proptest::collection::vec(proptest::array::uniform4(0.0f64..=1.0), 1..4).prop_map(|segs| {
            SegmentRelation::from_segments(
                segs.into_iter()
                    .map(|[a, b, c, d]| Segment::new(a, b, c, d).unwrap())
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn inner_is_inside_outer(g in arb_relation(), x in 0.0f64..=1.0, eps in 1e-4f64..1e-1) {
            let s0 = IntervalSet::point(x);
            let inner = invariant_closure(&g, &s0, ClosureMode::Inner, 0.0, 8).unwrap();
            let outer = invariant_closure(&g, &s0, ClosureMode::Outer, eps, 8).unwrap();
            prop_assert!(inner.set.is_subset_of(&outer.set.fatten(1e-12)));
        }

        #[test]
        fn iterates_grow(g in arb_relation(), x in 0.0f64..=1.0, k in 1usize..10) {
            let s0 = IntervalSet::point(x);
            let a = invariant_closure(&g, &s0, ClosureMode::Inner, 0.0, k).unwrap();
            let b = invariant_closure(&g, &s0, ClosureMode::Inner, 0.0, k + 1).unwrap();
            prop_assert!(s0.is_subset_of(&a.set));
            prop_assert!(a.set.is_subset_of(&b.set));
        }
    }
}
