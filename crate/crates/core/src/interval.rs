//! Closed subsets of the unit interval as finite unions of closed intervals.
//!
//! An [`IntervalSet`] keeps its intervals sorted and pairwise disjoint. Two
//! intervals whose gap is at most [`MERGE_RESOLUTION`] are merged, so a
//! cluster of points closer than that collapses into one short interval.
//! Degenerate intervals `[a, a]` encode single points.

use serde::{Deserialize, Serialize};

/// Gaps at or below this width are closed when normalizing.
pub const MERGE_RESOLUTION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl From<Vec<(f64, f64)>> for IntervalSet {
    fn from(v: Vec<(f64, f64)>) -> Self {
        IntervalSet::from_intervals(v)
    }
}

impl From<IntervalSet> for Vec<(f64, f64)> {
    fn from(s: IntervalSet) -> Self {
        s.intervals
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    /// The whole carrier `[0, 1]`.
    pub fn unit() -> Self {
        IntervalSet {
            intervals: vec![(0.0, 1.0)],
        }
    }

    pub fn point(x: f64) -> Self {
        IntervalSet::from_intervals([(x, x)])
    }

    pub fn interval(a: f64, b: f64) -> Self {
        IntervalSet::from_intervals([(a, b)])
    }

    /// Builds a normalized set; endpoints are clamped to `[0, 1]` and reversed pairs are swapped.
    pub fn from_intervals(iter: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut v: Vec<(f64, f64)> = iter
            .into_iter()
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(a, b)| {
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                (a.clamp(0.0, 1.0), b.clamp(0.0, 1.0))
            })
            .collect();
        v.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 + MERGE_RESOLUTION => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn from_points(iter: impl IntoIterator<Item = f64>) -> Self {
        IntervalSet::from_intervals(iter.into_iter().map(|x| (x, x)))
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of maximal intervals (not points).
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn min(&self) -> Option<f64> {
        self.intervals.first().map(|iv| iv.0)
    }

    pub fn max(&self) -> Option<f64> {
        self.intervals.last().map(|iv| iv.1)
    }

    /// Exact membership.
    pub fn contains(&self, x: f64) -> bool {
        self.distance_to(x) == 0.0
    }

    pub fn contains_within(&self, x: f64, tol: f64) -> bool {
        self.distance_to(x) <= tol
    }

    /// Distance from `x` to the set; `+inf` for the empty set.
    pub fn distance_to(&self, x: f64) -> f64 {
        let idx = self.intervals.partition_point(|iv| iv.1 < x);
        let mut best = f64::INFINITY;
        if let Some(&(a, b)) = self.intervals.get(idx) {
            best = if x >= a { 0.0 } else { a - x };
            debug_assert!(x <= b);
        }
        if idx > 0 {
            best = best.min(x - self.intervals[idx - 1].1);
        }
        best
    }

    /// The point of the set closest to `x` (smallest on ties).
    pub fn nearest(&self, x: f64) -> Option<f64> {
        let idx = self.intervals.partition_point(|iv| iv.1 < x);
        let right = self.intervals.get(idx).map(|&(a, _)| a.max(x));
        let left = idx.checked_sub(1).map(|i| self.intervals[i].1);
        match (left, right) {
            (Some(l), Some(r)) => Some(if x - l <= r - x { l } else { r }),
            (l, r) => l.or(r),
        }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.intervals.iter().chain(&other.intervals).copied())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = self.intervals[i];
            let (a2, b2) = other.intervals[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo <= hi {
                out.push((lo, hi));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet::from_intervals(out)
    }

    /// Closed `eps`-neighbourhood, clipped to `[0, 1]`.
    pub fn fatten(&self, eps: f64) -> IntervalSet {
        if eps <= 0.0 {
            return self.clone();
        }
        IntervalSet::from_intervals(self.intervals.iter().map(|&(a, b)| (a - eps, b + eps)))
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Measure of the symmetric difference.
    pub fn symmetric_difference_measure(&self, other: &IntervalSet) -> f64 {
        let common = self.intersection(other).measure();
        (self.measure() - common) + (other.measure() - common)
    }

    /// Some point of `self` outside `other`, if any.
    pub fn first_uncovered(&self, other: &IntervalSet) -> Option<f64> {
        for &(a, b) in &self.intervals {
            let mut cursor = a;
            loop {
                if !other.contains(cursor) {
                    return Some(cursor);
                }
                // cursor is covered: jump past the covering interval.
                let idx = other.intervals.partition_point(|iv| iv.1 < cursor);
                let end = other.intervals[idx].1;
                if end >= b {
                    break;
                }
                let next_start = other
                    .intervals
                    .get(idx + 1)
                    .map_or(f64::INFINITY, |iv| iv.0);
                let hi = next_start.min(b);
                cursor = if hi > end { 0.5 * (end + hi) } else { hi };
                if cursor <= end {
                    break;
                }
            }
        }
        None
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.first_uncovered(other).is_none()
    }

    /// Largest uncovered gap in `[0, 1]`, counting the stretches to 0 and to 1.
    pub fn max_gap(&self) -> f64 {
        if self.intervals.is_empty() {
            return 1.0;
        }
        let mut gap = self.intervals[0].0;
        for w in self.intervals.windows(2) {
            gap = gap.max(w[1].0 - w[0].1);
        }
        gap.max(1.0 - self.intervals[self.intervals.len() - 1].1)
    }

    /// The point of `[0, 1]` farthest from the set, with its distance.
    pub fn farthest_point(&self) -> (f64, f64) {
        if self.intervals.is_empty() {
            return (0.0, f64::INFINITY);
        }
        let first = self.intervals[0].0;
        let mut best = (0.0, first);
        for w in self.intervals.windows(2) {
            let d = 0.5 * (w[1].0 - w[0].1);
            if d > best.1 {
                best = (0.5 * (w[0].1 + w[1].0), d);
            }
        }
        let last = self.intervals[self.intervals.len() - 1].1;
        if 1.0 - last > best.1 {
            best = (1.0, 1.0 - last);
        }
        best
    }

    /// Hausdorff distance; `+inf` when exactly one side is empty.
    pub fn hausdorff(&self, other: &IntervalSet) -> f64 {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => 0.0,
            (true, false) | (false, true) => f64::INFINITY,
            _ => self
                .directed_hausdorff(other)
                .max(other.directed_hausdorff(self)),
        }
    }

    // sup over self of the distance to other; attained at an endpoint of self
    // or at the midpoint of a gap of other lying inside one of self's intervals.
    fn directed_hausdorff(&self, other: &IntervalSet) -> f64 {
        let gaps: Vec<(f64, f64)> = other
            .intervals
            .windows(2)
            .map(|w| (0.5 * (w[0].1 + w[1].0), 0.5 * (w[1].0 - w[0].1)))
            .collect();
        let mut worst: f64 = 0.0;
        let mut j = 0;
        for &(a, b) in &self.intervals {
            worst = worst.max(other.distance_to(a)).max(other.distance_to(b));
            while j < gaps.len() && gaps[j].0 <= a {
                j += 1;
            }
            while j < gaps.len() && gaps[j].0 < b {
                worst = worst.max(gaps[j].1);
                j += 1;
            }
        }
        worst
    }
}
