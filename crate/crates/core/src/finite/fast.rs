//! Graph-theoretic deciders. Each one is checked against the oracle in tests and
//! by the audit before its answers are trusted.

use super::kinds::MinimalityKind;
use crate::relation::{FiniteRelation, VertexSet};

pub fn decide_minimal_fast(g: &FiniteRelation, kind: MinimalityKind) -> bool {
    let rows = if kind.is_backward() {
        g.predecessor_rows()
    } else {
        g.successor_rows()
    };
    match kind.forward_twin() {
        MinimalityKind::One | MinimalityKind::OnePlus | MinimalityKind::OneOmega => {
            one_minimal_structure(rows)
        }
        _ => is_strongly_connected(rows),
    }
}

/// Strong connectivity of the edge digraph; a single point needs its loop.
pub fn is_strongly_connected(rows: &[u64]) -> bool {
    if rows.len() == 1 {
        return rows[0] & 1 == 1;
    }
    scc_ids(rows).iter().all(|&c| c == 0)
}

/// Every point has a successor and every cycle passes through every point.
pub fn one_minimal_structure(rows: &[u64]) -> bool {
    let full = VertexSet::full(rows.len()).0;
    rows.iter().all(|&r| r != 0) && (0..rows.len()).all(|v| is_acyclic(rows, full & !(1 << v)))
}

/// Kahn's algorithm on the subgraph induced by `mask`; loops count as cycles.
pub(crate) fn is_acyclic(rows: &[u64], mask: u64) -> bool {
    let mut indeg = [0u32; 64];
    for v in VertexSet(mask).iter() {
        for w in VertexSet(rows[v] & mask).iter() {
            indeg[w] += 1;
        }
    }
    let mut ready: Vec<usize> = VertexSet(mask).iter().filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = ready.pop() {
        removed += 1;
        for w in VertexSet(rows[v] & mask).iter() {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
    }
    removed == VertexSet(mask).len()
}

/// Some cycle inside `mask`, as a vertex list `c₀ → c₁ → … → c₀`.
pub(crate) fn find_cycle(rows: &[u64], mask: u64) -> Option<Vec<usize>> {
    fn dfs(
        rows: &[u64],
        mask: u64,
        v: usize,
        state: &mut [u8],
        path: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        state[v] = 1;
        path.push(v);
        for w in VertexSet(rows[v] & mask).iter() {
            if state[w] == 1 {
                let at = path.iter().position(|&p| p == w).expect("on path");
                return Some(path[at..].to_vec());
            }
            if state[w] == 0 {
                if let Some(c) = dfs(rows, mask, w, state, path) {
                    return Some(c);
                }
            }
        }
        path.pop();
        state[v] = 2;
        None
    }
    let mut state = vec![0u8; rows.len()];
    VertexSet(mask).iter().find_map(|v| {
        if state[v] == 0 {
            dfs(rows, mask, v, &mut state, &mut Vec::new())
        } else {
            None
        }
    })
}

/// Vertices reachable from `x` by walks of length ≥ 0.
pub(crate) fn reachable(rows: &[u64], x: usize) -> u64 {
    let mut seen = 1u64 << x;
    let mut frontier = seen;
    while frontier != 0 {
        let next = VertexSet(frontier)
            .iter()
            .fold(0u64, |acc, v| acc | rows[v])
            & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

/// Strongly connected components by Tarjan's algorithm, numbered in order of
/// their least vertex.
pub(crate) fn scc_ids(rows: &[u64]) -> Vec<usize> {
    struct Tarjan<'a> {
        rows: &'a [u64],
        index: Vec<usize>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        comp: Vec<usize>,
        comps: usize,
    }

    impl Tarjan<'_> {
        fn visit(&mut self, v: usize) {
            self.index[v] = self.next;
            self.low[v] = self.next;
            self.next += 1;
            self.stack.push(v);
            self.on_stack[v] = true;
            for w in VertexSet(self.rows[v]).iter() {
                if self.index[w] == usize::MAX {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                } else if self.on_stack[w] {
                    self.low[v] = self.low[v].min(self.index[w]);
                }
            }
            if self.low[v] == self.index[v] {
                loop {
                    let w = self.stack.pop().expect("nonempty");
                    self.on_stack[w] = false;
                    self.comp[w] = self.comps;
                    if w == v {
                        break;
                    }
                }
                self.comps += 1;
            }
        }
    }

    let n = rows.len();
    let mut t = Tarjan {
        rows,
        index: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        comp: vec![0; n],
        comps: 0,
    };
    for v in 0..n {
        if t.index[v] == usize::MAX {
            t.visit(v);
        }
    }
    let mut renumber = vec![usize::MAX; t.comps];
    let mut fresh = 0;
    t.comp
        .iter()
        .map(|&c| {
            if renumber[c] == usize::MAX {
                renumber[c] = fresh;
                fresh += 1;
            }
            renumber[c]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::oracle_flags;
    use proptest::prelude::*;

    fn rows(n: usize, edges: &[(usize, usize)]) -> Vec<u64> {
        FiniteRelation::new(n, edges.iter().copied())
            .unwrap()
            .successor_rows()
            .to_vec()
    }

    #[test]
    fn scc_of_two_cycles_joined_one_way() {
        let r = rows(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)]);
        assert_eq!(scc_ids(&r), vec![0, 0, 1, 1]);
        assert!(!is_strongly_connected(&r));
    }

    #[test]
    fn loops_make_cycles() {
        let r = rows(2, &[(0, 1), (1, 1)]);
        assert!(!is_acyclic(&r, 0b10));
        assert!(is_acyclic(&r, 0b01));
        assert_eq!(find_cycle(&r, 0b10), Some(vec![1]));
        assert_eq!(find_cycle(&r, 0b01), None);
    }

    #[test]
    fn cycle_is_one_minimal() {
        let r = rows(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(one_minimal_structure(&r));
        let star = rows(3, &[(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)]);
        assert!(!one_minimal_structure(&star));
        assert!(is_strongly_connected(&star));
    }

    #[test]
    fn reachability() {
        let r = rows(4, &[(0, 1), (1, 2), (3, 0)]);
        assert_eq!(reachable(&r, 0), 0b0111);
        assert_eq!(reachable(&r, 2), 0b0100);
        assert_eq!(reachable(&r, 3), 0b1111);
    }

    fn arb_relation(max_n: usize) -> impl Strategy<Value = FiniteRelation> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<u64>(), n).prop_filter_map("empty", move |raw| {
                let full = VertexSet::full(n).0;
                FiniteRelation::from_rows(n, raw.iter().map(|r| r & full).collect()).ok()
            })
        })
    }

    proptest! {
        #[test]
        fn fast_matches_oracle(g in arb_relation(6)) {
            let oracle = oracle_flags(&g).unwrap();
            for k in MinimalityKind::ALL {
                prop_assert_eq!(decide_minimal_fast(&g, k), oracle[k], "{} on {}", k, g.encode());
            }
        }
    }
}
