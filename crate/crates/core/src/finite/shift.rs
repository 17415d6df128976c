use crate::error::{Error, Result};
use crate::relation::FiniteRelation;

/// Minimality of the one-sided vertex shift on the backward orbit space.
///
/// With both projections full every point lies on a bi-infinite path, so the
/// shift space is the full edge shift of `G⁻¹`. A vertex shift is minimal exactly
/// when it is a single periodic orbit, that is when the digraph is one cycle
/// through all of `X`.
pub fn is_shift_minimal(g: &FiniteRelation) -> Result<bool> {
    if g.successor_rows().contains(&0) || g.predecessor_rows().contains(&0) {
        return Err(Error::HypothesisViolated(
            "both projections must be the whole carrier".into(),
        ));
    }
    if !g.is_functional() || g.predecessor_rows().iter().any(|r| r.count_ones() != 1) {
        return Ok(false);
    }
    let mut v = 0;
    for step in 1..=g.size() {
        v = g.succ_set(v).first().expect("functional");
        if v == 0 {
            return Ok(step == g.size());
        }
    }
    Ok(false)
}
