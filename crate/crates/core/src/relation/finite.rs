use std::fmt;

use serde::{Deserialize, Serialize};

use super::{OrbitPrefix, Relation};
use crate::error::{Error, Result};

/// Largest carrier a [`FiniteRelation`] can hold; rows are stored as `u64` bitmasks.
pub const MAX_POINTS: usize = 64;

/// Default cap on the number of sequences [`FiniteRelation::mahavier_paths`] will materialize.
pub const DEFAULT_PATH_CAP: u128 = 1_000_000;

/// A subset of `{0, …, n-1}` as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        VertexSet(full_mask(n))
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&p| p >= MAX_POINTS) {
            return Err(serde::de::Error::custom(format!(
                "point {bad} out of range"
            )));
        }
        Ok(v.into_iter().collect())
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A nonempty relation on the discrete space `{0, …, n-1}`.
///
/// Every subset of a finite discrete space is closed, so any nonempty edge
/// set is a closed relation. Rows are kept in both directions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    n: usize,
    succ: Vec<u64>,
    pred: Vec<u64>,
}

impl FiniteRelation {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRelation);
        }
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints { n, max: MAX_POINTS });
        }
        let mut succ = vec![0u64; n];
        for (x, y) in edges {
            for p in [x, y] {
                if p >= n {
                    return Err(Error::PointOutOfRange { point: p, n });
                }
            }
            succ[x] |= 1 << y;
        }
        Self::from_rows(n, succ)
    }

    /// Builds from successor bitmasks, one row per point.
    pub fn from_rows(n: usize, succ: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRelation);
        }
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints { n, max: MAX_POINTS });
        }
        if succ.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} rows for {n} points",
                succ.len()
            )));
        }
        let full = full_mask(n);
        if let Some(row) = succ.iter().find(|r| **r & !full != 0) {
            let point = 63 - (row & !full).leading_zeros() as usize;
            return Err(Error::PointOutOfRange { point, n });
        }
        if succ.iter().all(|r| *r == 0) {
            return Err(Error::EmptyRelation);
        }
        let mut pred = vec![0u64; n];
        for (x, row) in succ.iter().enumerate() {
            for y in VertexSet(*row).iter() {
                pred[y] |= 1 << x;
            }
        }
        Ok(FiniteRelation { n, succ, pred })
    }

    /// The graph `Γ(f)` of a self-map given as a lookup table.
    pub fn functional(map: &[usize]) -> Result<Self> {
        Self::new(map.len(), map.iter().copied().enumerate())
    }

    /// All `n²` pairs.
    pub fn full(n: usize) -> Result<Self> {
        Self::from_rows(n, vec![full_mask(n); n])
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn carrier(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn successor_rows(&self) -> &[u64] {
        &self.succ
    }

    pub fn predecessor_rows(&self) -> &[u64] {
        &self.pred
    }

    pub fn succ_set(&self, x: usize) -> VertexSet {
        VertexSet(self.succ[x])
    }

    pub fn pred_set(&self, y: usize) -> VertexSet {
        VertexSet(self.pred[y])
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        x < self.n && y < self.n && self.succ[x] >> y & 1 == 1
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(x, row)| VertexSet(*row).iter().map(move |y| (x, y)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// True when every point has exactly one successor, i.e. the relation is `Γ(f)`.
    pub fn is_functional(&self) -> bool {
        self.succ.iter().all(|r| r.count_ones() == 1)
    }

    pub(crate) fn check_point(&self, p: usize) -> Result<()> {
        if p < self.n {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                point: p,
                n: self.n,
            })
        }
    }

    pub(crate) fn check_subset(&self, a: VertexSet) -> Result<()> {
        if a.0 & !full_mask(self.n) != 0 {
            let point = 63 - (a.0 & !full_mask(self.n)).leading_zeros() as usize;
            return Err(Error::PointOutOfRange { point, n: self.n });
        }
        Ok(())
    }

    /// Number of sequences in the `m`-th Mahavier product, i.e. walks with `m` edges.
    pub fn count_paths(&self, m: usize) -> u128 {
        let mut counts = vec![1u128; self.n];
        for _ in 0..m {
            let next: Vec<u128> = (0..self.n)
                .map(|x| {
                    VertexSet(self.succ[x])
                        .iter()
                        .map(|y| counts[y])
                        .fold(0u128, u128::saturating_add)
                })
                .collect();
            counts = next;
        }
        counts.into_iter().fold(0, u128::saturating_add)
    }

    /// The `m`-th Mahavier product `⋆_{i=1}^{m} G`, in lexicographic order.
    pub fn mahavier_paths(&self, m: usize) -> Result<Vec<OrbitPrefix<usize>>> {
        self.mahavier_paths_capped(m, DEFAULT_PATH_CAP)
    }

    pub fn mahavier_paths_capped(&self, m: usize, cap: u128) -> Result<Vec<OrbitPrefix<usize>>> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "Mahavier product order must be >= 1".into(),
            ));
        }
        let count = self.count_paths(m);
        if count > cap {
            return Err(Error::CapExceeded {
                what: "Mahavier product size",
                requested: count,
                cap,
            });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut stack = Vec::with_capacity(m + 1);
        for x in 0..self.n {
            stack.push(x);
            self.extend_paths(m, &mut stack, &mut out);
            stack.pop();
        }
        Ok(out)
    }

    fn extend_paths(&self, m: usize, stack: &mut Vec<usize>, out: &mut Vec<OrbitPrefix<usize>>) {
        if stack.len() == m + 1 {
            out.push(OrbitPrefix::from_trusted(stack.clone()));
            return;
        }
        let last = *stack.last().expect("nonempty");
        for y in VertexSet(self.succ[last]).iter() {
            stack.push(y);
            self.extend_paths(m, stack, out);
            stack.pop();
        }
    }

    /// Compact, deterministic encoding such as `n=3:0-1,1-2,2-0`.
    pub fn encode(&self) -> String {
        let edges: Vec<String> = self.edges().map(|(x, y)| format!("{x}-{y}")).collect();
        format!("n={}:{}", self.n, edges.join(","))
    }
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRelation({})", self.encode())
    }
}

impl Relation for FiniteRelation {
    type Point = usize;
    type PointSet = VertexSet;

    fn contains(&self, x: usize, y: usize) -> Result<bool> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.has_edge(x, y))
    }

    fn successors(&self, x: usize) -> Result<VertexSet> {
        self.check_point(x)?;
        Ok(VertexSet(self.succ[x]))
    }

    fn predecessors(&self, y: usize) -> Result<VertexSet> {
        self.check_point(y)?;
        Ok(VertexSet(self.pred[y]))
    }

    fn inverse(&self) -> Self {
        FiniteRelation {
            n: self.n,
            succ: self.pred.clone(),
            pred: self.succ.clone(),
        }
    }

    fn projections(&self) -> (VertexSet, VertexSet) {
        let p1 = (0..self.n).filter(|&x| self.succ[x] != 0).collect();
        let p2 = (0..self.n).filter(|&y| self.pred[y] != 0).collect();
        (p1, p2)
    }
}
