//! Definition-level deciders, by exhaustion.
//!
//! Subset kinds enumerate every proper nonempty subset. Orbit kinds enumerate
//! lassos: every infinite walk eventually repeats closed walks at some vertex `c`,
//! so its point set is `P ∪ M` and its limit set is `M`, where `P` is the vertex set
//! of a prefix ending at `c` and `M` the vertex set of a closed walk at `c`.
//! Both are found by search over (vertex, visited-set) states.

use super::kinds::{Flags, MinimalityKind};
use super::{inf_invariant, one_invariant};
use crate::error::{Error, Result};
use crate::relation::{FiniteRelation, VertexSet};

/// Largest carrier for subset enumeration.
pub const SUBSET_ORACLE_CAP: usize = 12;
/// Largest carrier for the lasso search.
pub const ORBIT_ORACLE_CAP: usize = 8;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded {
            what: "oracle carrier size",
            requested: n as u128,
            cap: cap as u128,
        })
    } else {
        Ok(())
    }
}

pub fn decide_minimal_oracle(g: &FiniteRelation, kind: MinimalityKind) -> Result<bool> {
    let rows = if kind.is_backward() {
        g.predecessor_rows()
    } else {
        g.successor_rows()
    };
    let n = g.size();
    if kind.is_subset_kind() {
        check_cap(n, SUBSET_ORACLE_CAP)?;
        let one = matches!(kind, MinimalityKind::One | MinimalityKind::OneBack);
        let full = VertexSet::full(n).0;
        return Ok(!(1..full).any(|a| subset_invariant(rows, a, one)));
    }
    check_cap(n, ORBIT_ORACLE_CAP)?;
    Ok(OrbitFlags::compute(rows).get(kind.forward_twin()))
}

/// All sixteen flags by exhaustion.
pub fn oracle_flags(g: &FiniteRelation) -> Result<Flags> {
    check_cap(g.size(), ORBIT_ORACLE_CAP)?;
    let fwd = OrbitFlags::compute(g.successor_rows());
    let bwd = OrbitFlags::compute(g.predecessor_rows());
    let mut flags = Flags::default();
    for k in MinimalityKind::ALL {
        flags[k] = if k.is_subset_kind() {
            decide_minimal_oracle(g, k)?
        } else if k.is_backward() {
            bwd.get(k.forward_twin())
        } else {
            fwd.get(k)
        };
    }
    Ok(flags)
}

fn subset_invariant(rows: &[u64], a: u64, one: bool) -> bool {
    if one {
        one_invariant(rows, a)
    } else {
        inf_invariant(rows, a)
    }
}

/// The least proper nonempty invariant subset, ordered by size and then
/// lexicographically by sorted elements.
pub(crate) fn least_invariant_subset(rows: &[u64], one: bool) -> Option<VertexSet> {
    let n = rows.len();
    fn combos(rows: &[u64], one: bool, from: usize, left: usize, acc: u64) -> Option<u64> {
        if left == 0 {
            return subset_invariant(rows, acc, one).then_some(acc);
        }
        (from..=rows.len() - left).find_map(|v| combos(rows, one, v + 1, left - 1, acc | 1 << v))
    }
    (1..n)
        .find_map(|k| combos(rows, one, 0, k, 0))
        .map(VertexSet)
}

struct OrbitFlags {
    one_plus: bool,
    two_plus: bool,
    three_plus: bool,
    one_omega: bool,
    two_omega: bool,
    three_omega: bool,
}

impl OrbitFlags {
    fn get(&self, kind: MinimalityKind) -> bool {
        match kind {
            MinimalityKind::OnePlus => self.one_plus,
            MinimalityKind::TwoPlus => self.two_plus,
            MinimalityKind::ThreePlus => self.three_plus,
            MinimalityKind::OneOmega => self.one_omega,
            MinimalityKind::TwoOmega => self.two_omega,
            MinimalityKind::ThreeOmega => self.three_omega,
            other => unreachable!("{other} is not a forward orbit kind"),
        }
    }

    fn compute(rows: &[u64]) -> OrbitFlags {
        let n = rows.len();
        let full = VertexSet::full(n).0;
        let cycles: Vec<ClosedWalks> = (0..n).map(|c| ClosedWalks::at(rows, c)).collect();

        let mut all_live = true;
        let mut every_walk_dense = true;
        let mut two_plus = true;
        let mut three_plus = true;
        let mut two_omega = true;
        let mut three_omega = true;
        for x in 0..n {
            let mut live = false;
            let mut dense_walk = false;
            let mut hull = 0u64;
            let mut full_limit = false;
            let mut limits = 0u64;
            for (c, prefix) in states_from(rows, x) {
                let cw = &cycles[c];
                if cw.masks.is_empty() {
                    continue;
                }
                live = true;
                let missing = full & !prefix;
                if missing & !cw.intersection != 0 {
                    every_walk_dense = false;
                }
                dense_walk |= cw.has_superset(missing);
                hull |= prefix | cw.union;
                full_limit |= cw.has_superset(full);
                limits |= cw.union;
            }
            all_live &= live;
            two_plus &= dense_walk;
            three_plus &= hull == full;
            two_omega &= full_limit;
            three_omega &= limits == full;
        }
        let limits_full = cycles
            .iter()
            .all(|cw| cw.masks.is_empty() || cw.intersection == full);
        OrbitFlags {
            one_plus: all_live && every_walk_dense,
            two_plus,
            three_plus,
            one_omega: all_live && limits_full,
            two_omega,
            three_omega,
        }
    }
}

/// Vertex sets of the closed walks of positive length at one vertex.
struct ClosedWalks {
    masks: Vec<u64>,
    union: u64,
    intersection: u64,
    supersets: Vec<bool>,
}

impl ClosedWalks {
    fn at(rows: &[u64], c: usize) -> ClosedWalks {
        let n = rows.len();
        let mut found = vec![false; 1 << n];
        for (v, m) in states_from(rows, c) {
            if rows[v] >> c & 1 == 1 {
                found[m as usize] = true;
            }
        }
        let masks: Vec<u64> = (0..1u64 << n).filter(|&m| found[m as usize]).collect();
        let union = masks.iter().fold(0, |a, m| a | m);
        let intersection = masks.iter().fold(u64::MAX, |a, m| a & m);
        let mut supersets = found;
        for b in 0..n {
            for m in 0..1usize << n {
                if m >> b & 1 == 0 && supersets[m | 1 << b] {
                    supersets[m] = true;
                }
            }
        }
        ClosedWalks {
            masks,
            union,
            intersection,
            supersets,
        }
    }

    fn has_superset(&self, m: u64) -> bool {
        self.supersets[m as usize]
    }
}

/// All (vertex, visited-set) states of finite walks starting at `x`.
fn states_from(rows: &[u64], x: usize) -> Vec<(usize, u64)> {
    let n = rows.len();
    let mut seen = vec![false; n << n];
    let start = (x, 1u64 << x);
    seen[x << n | start.1 as usize] = true;
    let mut stack = vec![start];
    let mut out = Vec::new();
    while let Some((v, m)) = stack.pop() {
        out.push((v, m));
        for w in VertexSet(rows[v]).iter() {
            let m2 = m | 1 << w;
            let key = w << n | m2 as usize;
            if !seen[key] {
                seen[key] = true;
                stack.push((w, m2));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use MinimalityKind::*;

    fn rel(n: usize, edges: &[(usize, usize)]) -> FiniteRelation {
        FiniteRelation::new(n, edges.iter().copied()).unwrap()
    }

    fn star3() -> FiniteRelation {
        FiniteRelation::new(3, (0..3).flat_map(|x| [(x, 1), (1, x)])).unwrap()
    }

    #[test]
    fn cycle_is_minimal_in_every_sense() {
        let g = rel(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(oracle_flags(&g).unwrap().0.iter().all(|&b| b));
    }

    #[test]
    fn full_relation_on_two_points() {
        let g = FiniteRelation::full(2).unwrap();
        assert!(!decide_minimal_oracle(&g, One).unwrap());
        assert!(decide_minimal_oracle(&g, Inf).unwrap());
        assert_eq!(
            least_invariant_subset(g.successor_rows(), true),
            Some(VertexSet::singleton(0))
        );
    }

    #[test]
    fn identity_is_minimal_in_no_sense() {
        let g = rel(2, &[(0, 0), (1, 1)]);
        assert!(oracle_flags(&g).unwrap().0.iter().all(|&b| !b));
        assert_eq!(
            least_invariant_subset(g.successor_rows(), false),
            Some(VertexSet::singleton(0))
        );
    }

    #[test]
    fn star_separates_the_one_kinds_from_the_rest() {
        let f = oracle_flags(&star3()).unwrap();
        for k in [
            Inf, InfBack, TwoPlus, ThreePlus, TwoMinus, ThreeMinus, TwoOmega, ThreeOmega, TwoAlpha,
            ThreeAlpha,
        ] {
            assert!(f[k], "{k}");
        }
        for k in [One, OnePlus, OneOmega, OneBack, OneMinus, OneAlpha] {
            assert!(!f[k], "{k}");
        }
        assert_eq!(
            least_invariant_subset(star3().successor_rows(), true),
            Some(VertexSet::singleton(1))
        );
    }

    #[test]
    fn two_cycle_with_loop() {
        let g = rel(2, &[(0, 1), (1, 0), (1, 1)]);
        assert!(!decide_minimal_oracle(&g, One).unwrap());
        assert!(decide_minimal_oracle(&g, Inf).unwrap());
    }

    #[test]
    fn dead_end_kills_orbit_kinds() {
        // 1 -> 0 only: no infinite walk at all
        let g = rel(2, &[(1, 0)]);
        let f = oracle_flags(&g).unwrap();
        for k in [OnePlus, TwoPlus, ThreePlus, OneOmega, TwoOmega, ThreeOmega] {
            assert!(!f[k], "{k}");
        }
    }

    #[test]
    fn single_loop_is_all_true() {
        let g = rel(1, &[(0, 0)]);
        assert!(oracle_flags(&g).unwrap().0.iter().all(|&b| b));
    }

    #[test]
    fn caps_are_enforced() {
        let big = FiniteRelation::new(9, (0..9).map(|i| (i, (i + 1) % 9))).unwrap();
        assert!(matches!(
            decide_minimal_oracle(&big, TwoPlus),
            Err(Error::CapExceeded { .. })
        ));
        assert!(decide_minimal_oracle(&big, One).unwrap());
        let huge = FiniteRelation::new(13, (0..13).map(|i| (i, (i + 1) % 13))).unwrap();
        assert!(decide_minimal_oracle(&huge, Inf).is_err());
    }

    #[test]
    fn shortlex_prefers_small_then_lexicographic() {
        // two disjoint 2-cycles: {0,1} and {2,3}; no singleton is 1-invariant
        let g = rel(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]);
        assert_eq!(
            least_invariant_subset(g.successor_rows(), true),
            Some([0, 1].into_iter().collect())
        );
    }
}
