//! Exact analysis of finite relations.
//!
//! In a finite discrete space every subset is closed and `Cl(S) = S`, so "dense"
//! means "equal to `X`" and the limit set of an eventually periodic walk is the
//! vertex set of its periodic part.

mod fast;
mod kinds;
mod limit;
mod oracle;
mod report;
mod shift;

pub use fast::{decide_minimal_fast, is_strongly_connected, one_minimal_structure};
pub use kinds::{Flags, InvarianceKind, MinimalityKind};
pub use limit::{alpha_set, omega_set, EventuallyPeriodicWalk};
pub use oracle::{decide_minimal_oracle, oracle_flags, ORBIT_ORACLE_CAP, SUBSET_ORACLE_CAP};
pub use report::{classify, witness, MinimalityReport, Witness};
pub use shift::is_shift_minimal;

use crate::error::Result;
use crate::relation::{FiniteRelation, VertexSet};

/// Whether `a` is invariant in the sense `kind`.
pub fn is_invariant(g: &FiniteRelation, a: VertexSet, kind: InvarianceKind) -> Result<bool> {
    g.check_subset(a)?;
    let rows = match kind {
        InvarianceKind::Forward1 | InvarianceKind::ForwardInf => g.successor_rows(),
        InvarianceKind::Backward1 | InvarianceKind::BackwardInf => g.predecessor_rows(),
    };
    Ok(match kind {
        InvarianceKind::Forward1 | InvarianceKind::Backward1 => one_invariant(rows, a.0),
        InvarianceKind::ForwardInf | InvarianceKind::BackwardInf => inf_invariant(rows, a.0),
    })
}

pub(crate) fn one_invariant(rows: &[u64], a: u64) -> bool {
    VertexSet(a)
        .iter()
        .all(|x| rows[x] == 0 || rows[x] & a != 0)
}

pub(crate) fn inf_invariant(rows: &[u64], a: u64) -> bool {
    VertexSet(a).iter().all(|x| rows[x] & !a == 0)
}
