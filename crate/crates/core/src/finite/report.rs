use std::collections::BTreeMap;

use serde::Serialize;

use super::fast::{find_cycle, is_strongly_connected, one_minimal_structure, reachable};
use super::kinds::{Flags, MinimalityKind};
use super::oracle::{least_invariant_subset, SUBSET_ORACLE_CAP};
use crate::relation::orbit::live_vertices;
use crate::relation::{FiniteRelation, VertexSet};

/// Evidence that a relation is not minimal in some sense. Orbit witnesses for
/// backward kinds describe walks of the inverse relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// A proper nonempty invariant subset.
    Subset { points: VertexSet },
    /// A point with no infinite orbit.
    NoOrbit { at: usize },
    /// The orbit `prefix, cycle, cycle, …` from `start` never visits `avoided`.
    /// For kinds other than 1⊕ and 1ω no orbit from `start` visits it either.
    AvoidingLasso {
        start: usize,
        prefix: Vec<usize>,
        cycle: Vec<usize>,
        avoided: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalityReport {
    pub flags: Flags,
    pub p1_full: bool,
    pub p2_full: bool,
    /// One entry per false flag.
    pub witnesses: BTreeMap<MinimalityKind, Witness>,
}

/// Classifies `g` under all sixteen notions using the fast deciders.
pub fn classify(g: &FiniteRelation) -> MinimalityReport {
    let flags = Flags::from_fn(|k| super::decide_minimal_fast(g, k));
    let witnesses = MinimalityKind::ALL
        .into_iter()
        .filter(|&k| !flags[k])
        .map(|k| (k, witness(g, k).expect("false flags have witnesses")))
        .collect();
    MinimalityReport {
        flags,
        p1_full: g.successor_rows().iter().all(|&r| r != 0),
        p2_full: g.predecessor_rows().iter().all(|&r| r != 0),
        witnesses,
    }
}

/// A witness against `kind`-minimality, or `None` when `g` is `kind`-minimal.
///
/// Subset witnesses are the least invariant subsets in size-then-lexicographic
/// order up to the subset oracle cap, and constructive beyond it.
pub fn witness(g: &FiniteRelation, kind: MinimalityKind) -> Option<Witness> {
    let rows = if kind.is_backward() {
        g.predecessor_rows()
    } else {
        g.successor_rows()
    };
    let n = rows.len();
    let full = VertexSet::full(n).0;
    let one_type = matches!(
        kind.forward_twin(),
        MinimalityKind::One | MinimalityKind::OnePlus | MinimalityKind::OneOmega
    );
    let holds = if one_type {
        one_minimal_structure(rows)
    } else {
        is_strongly_connected(rows)
    };
    if holds {
        return None;
    }

    if kind.is_subset_kind() {
        let points = if n <= SUBSET_ORACLE_CAP {
            least_invariant_subset(rows, one_type).expect("non-minimal")
        } else if one_type {
            match (0..n).find(|&v| rows[v] == 0) {
                Some(v) => VertexSet::singleton(v),
                None => avoiding_cycle(rows, full)
                    .map(|(_, c)| c.into_iter().collect())
                    .expect("non-minimal"),
            }
        } else {
            (0..n)
                .map(|x| reachable(rows, x))
                .find(|&r| r != full)
                .map(VertexSet)
                .expect("non-minimal")
        };
        return Some(Witness::Subset { points });
    }

    let live = live_vertices(rows);
    if let Some(at) = (0..n).find(|&v| !live.contains(v)) {
        return Some(Witness::NoOrbit { at });
    }
    if one_type {
        let (avoided, cycle) = avoiding_cycle(rows, full).expect("non-minimal");
        return Some(Witness::AvoidingLasso {
            start: cycle[0],
            prefix: Vec::new(),
            cycle,
            avoided,
        });
    }
    let (start, avoided) = (0..n)
        .find_map(|x| {
            let r = reachable(rows, x);
            (0..n).find(|&y| r >> y & 1 == 0).map(|y| (x, y))
        })
        .expect("non-minimal");
    let (prefix, cycle) = least_successor_lasso(rows, start);
    Some(Witness::AvoidingLasso {
        start,
        prefix,
        cycle,
        avoided,
    })
}

// The least `v` such that `X ∖ {v}` carries a cycle, with that cycle.
fn avoiding_cycle(rows: &[u64], full: u64) -> Option<(usize, Vec<usize>)> {
    (0..rows.len()).find_map(|v| find_cycle(rows, full & !(1 << v)).map(|c| (v, c)))
}

// Follows the least successor from `x` until a point repeats. Every point must
// have a successor.
fn least_successor_lasso(rows: &[u64], x: usize) -> (Vec<usize>, Vec<usize>) {
    let mut walk = vec![x];
    let mut v = x;
    loop {
        v = VertexSet(rows[v])
            .first()
            .expect("every point has a successor");
        if let Some(at) = walk.iter().position(|&p| p == v) {
            let cycle = walk.split_off(at);
            return (walk, cycle);
        }
        walk.push(v);
    }
}
