//! Finite orbit prefixes and the policies that extend them.
//!
//! Infinite elements of `⋆G` are never materialized; an orbit is a finite
//! prefix that a policy keeps extending one coordinate at a time.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FiniteRelation, Relation, SegmentRelation, VertexSet};
use crate::error::{Error, Result};
use crate::interval::IntervalSet;

/// A finite sequence `(x₁, …, x_m)` with every consecutive pair in the relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct OrbitPrefix<P> {
    points: Vec<P>,
}

impl<P: Copy + PartialEq + std::fmt::Debug> OrbitPrefix<P> {
    pub fn start(x: P) -> Self {
        OrbitPrefix { points: vec![x] }
    }

    /// Validates every consecutive pair against `rel`.
    pub fn new<R: Relation<Point = P>>(rel: &R, points: Vec<P>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InconsistentWalk("empty orbit prefix".into()));
        }
        for w in points.windows(2) {
            if !rel.contains(w[0], w[1])? {
                return Err(Error::InconsistentWalk(format!(
                    "({:?}, {:?}) is not in the relation",
                    w[0], w[1]
                )));
            }
        }
        Ok(OrbitPrefix { points })
    }

    pub(crate) fn from_trusted(points: Vec<P>) -> Self {
        OrbitPrefix { points }
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn into_points(self) -> Vec<P> {
        self.points
    }

    pub fn last(&self) -> P {
        *self.points.last().expect("orbit prefixes are nonempty")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// How the next coordinate of an orbit is chosen among the admissible successors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitPolicy {
    /// The least successor.
    First,
    /// Uniform over fibre pieces, then uniform within the chosen piece.
    Random,
    /// Steer toward the point of the carrier farthest from everything visited so far.
    Greedy,
}

impl OrbitPolicy {
    pub fn name(self) -> &'static str {
        match self {
            OrbitPolicy::First => "first",
            OrbitPolicy::Random => "random",
            OrbitPolicy::Greedy => "greedy",
        }
    }
}

impl std::str::FromStr for OrbitPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(OrbitPolicy::First),
            "random" => Ok(OrbitPolicy::Random),
            "greedy" | "greedy-coverage" => Ok(OrbitPolicy::Greedy),
            other => Err(Error::InvalidParameter(format!("orbit policy `{other}`"))),
        }
    }
}

/// A relation whose orbits can be grown by an [`OrbitPolicy`].
pub trait OrbitRelation: Relation {
    /// Per-orbit memory of what has been visited.
    type Tracker;

    fn tracker(&self, visited: &[Self::Point]) -> Self::Tracker;

    fn record(&self, tracker: &mut Self::Tracker, p: Self::Point);

    /// The next coordinate after `x`, or `None` at a dead end.
    fn choose(
        &self,
        x: Self::Point,
        policy: OrbitPolicy,
        tracker: &mut Self::Tracker,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<Self::Point>>;
}

/// Appends one coordinate to `prefix`.
pub fn extend_orbit<R: OrbitRelation>(
    rel: &R,
    prefix: &OrbitPrefix<R::Point>,
    policy: OrbitPolicy,
    rng: &mut ChaCha8Rng,
) -> Result<OrbitPrefix<R::Point>> {
    let mut tracker = rel.tracker(prefix.points());
    let last = prefix.last();
    match rel.choose(last, policy, &mut tracker, rng)? {
        Some(y) => {
            let mut points = prefix.points.clone();
            points.push(y);
            Ok(OrbitPrefix { points })
        }
        None => Err(Error::DeadEnd {
            at: format!("{last:?}"),
        }),
    }
}

/// An orbit grown from a start point by a seeded policy.
#[derive(Debug, Clone, Serialize)]
pub struct SimulatedOrbit<P> {
    pub orbit: OrbitPrefix<P>,
    /// Set when a dead end stopped the orbit before the requested length.
    pub truncated: bool,
    pub policy: OrbitPolicy,
    pub seed: u64,
}

/// Grows an orbit of `steps` further coordinates from `x0`, stopping early only at a dead end.
pub fn simulate<R: OrbitRelation>(
    rel: &R,
    x0: R::Point,
    steps: usize,
    policy: OrbitPolicy,
    seed: u64,
) -> Result<SimulatedOrbit<R::Point>> {
    // validates x0
    rel.successors(x0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(steps + 1);
    points.push(x0);
    let mut tracker = rel.tracker(&points);
    let mut x = x0;
    let mut truncated = false;
    for _ in 0..steps {
        match rel.choose(x, policy, &mut tracker, &mut rng)? {
            Some(y) => {
                rel.record(&mut tracker, y);
                points.push(y);
                x = y;
            }
            None => {
                truncated = true;
                break;
            }
        }
    }
    Ok(SimulatedOrbit {
        orbit: OrbitPrefix { points },
        truncated,
        policy,
        seed,
    })
}

pub struct FiniteTracker {
    visited: VertexSet,
    live: VertexSet,
}

/// Points from which an infinite walk starts.
pub(crate) fn live_vertices(rows: &[u64]) -> VertexSet {
    let mut live = VertexSet::full(rows.len()).0;
    loop {
        let next = (0..rows.len())
            .filter(|&v| live >> v & 1 == 1 && rows[v] & live != 0)
            .fold(0u64, |acc, v| acc | 1 << v);
        if next == live {
            return VertexSet(live);
        }
        live = next;
    }
}

impl OrbitRelation for FiniteRelation {
    type Tracker = FiniteTracker;

    fn tracker(&self, visited: &[usize]) -> FiniteTracker {
        FiniteTracker {
            visited: visited.iter().copied().collect(),
            live: live_vertices(self.successor_rows()),
        }
    }

    fn record(&self, tracker: &mut FiniteTracker, p: usize) {
        tracker.visited.insert(p);
    }

    fn choose(
        &self,
        x: usize,
        policy: OrbitPolicy,
        tracker: &mut FiniteTracker,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<usize>> {
        let succ = self.successors(x)?;
        if succ.is_empty() {
            return Ok(None);
        }
        let pick = match policy {
            OrbitPolicy::First => succ.first(),
            OrbitPolicy::Random => succ.iter().nth(rng.random_range(0..succ.len())),
            OrbitPolicy::Greedy => {
                let alive = VertexSet(succ.0 & tracker.live.0);
                let cands = if alive.is_empty() { succ } else { alive };
                let fresh = VertexSet(cands.0 & !tracker.visited.0);
                fresh
                    .first()
                    .or_else(|| self.step_toward_unvisited(cands, tracker))
                    .or(cands.first())
            }
        };
        Ok(pick)
    }
}

impl FiniteRelation {
    // First step of a shortest walk from one of `cands` to an unvisited live point.
    fn step_toward_unvisited(&self, cands: VertexSet, tracker: &FiniteTracker) -> Option<usize> {
        let mut origin = vec![usize::MAX; self.size()];
        let mut queue = VecDeque::new();
        for c in cands.iter() {
            origin[c] = c;
            queue.push_back(c);
        }
        while let Some(v) = queue.pop_front() {
            if !tracker.visited.contains(v) && tracker.live.contains(v) {
                return Some(origin[v]);
            }
            for w in self.succ_set(v).iter() {
                if origin[w] == usize::MAX {
                    origin[w] = origin[v];
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Visited points of an orbit on `[0, 1]` with a lazily maintained queue of holes.
pub struct Coverage {
    points: Vec<f64>,
    holes: BinaryHeap<Hole>,
}

// A hole between two adjacent visited points; `None` stands for the boundary 0 or 1.
#[derive(Debug, Clone, Copy)]
struct Hole {
    reach: f64,
    target: f64,
    left: Option<f64>,
    right: Option<f64>,
}

impl PartialEq for Hole {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Hole {}
impl PartialOrd for Hole {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Hole {
    fn cmp(&self, other: &Self) -> Ordering {
        self.reach
            .total_cmp(&other.reach)
            .then(other.target.total_cmp(&self.target))
    }
}

impl Hole {
    fn between(left: Option<f64>, right: Option<f64>) -> Hole {
        let (target, reach) = match (left, right) {
            (None, Some(r)) => (0.0, r),
            (Some(l), None) => (1.0, 1.0 - l),
            (Some(l), Some(r)) => (0.5 * (l + r), 0.5 * (r - l)),
            (None, None) => (0.0, f64::INFINITY),
        };
        Hole {
            reach,
            target,
            left,
            right,
        }
    }
}

impl Coverage {
    pub fn new() -> Self {
        let mut holes = BinaryHeap::new();
        holes.push(Hole::between(None, None));
        Coverage {
            points: Vec::new(),
            holes,
        }
    }

    pub fn insert(&mut self, p: f64) {
        let idx = self.points.partition_point(|&q| q < p);
        if self.points.get(idx) == Some(&p) {
            return;
        }
        let left = idx.checked_sub(1).map(|i| self.points[i]);
        let right = self.points.get(idx).copied();
        self.points.insert(idx, p);
        for hole in [Hole::between(left, Some(p)), Hole::between(Some(p), right)] {
            if hole.reach > 0.0 {
                self.holes.push(hole);
            }
        }
    }

    fn is_current(&self, h: &Hole) -> bool {
        let adjacent = |l: Option<f64>, r: Option<f64>| match (l, r) {
            (None, None) => self.points.is_empty(),
            (None, Some(r)) => self.points.first() == Some(&r),
            (Some(l), None) => self.points.last() == Some(&l),
            (Some(l), Some(r)) => {
                let i = self.points.partition_point(|&q| q < l);
                self.points.get(i) == Some(&l) && self.points.get(i + 1) == Some(&r)
            }
        };
        adjacent(h.left, h.right)
    }

    /// The point of `[0, 1]` farthest from the visited set, with that distance.
    pub fn farthest(&mut self) -> (f64, f64) {
        while let Some(top) = self.holes.peek() {
            if self.is_current(top) {
                return (top.target, top.reach);
            }
            self.holes.pop();
        }
        // every hole has width zero: the visited set is {0, 1}-dense already
        (0.0, 0.0)
    }

    /// The point of `[a, b]` farthest from the visited set, with that distance.
    pub fn farthest_in(&self, a: f64, b: f64) -> (f64, f64) {
        let mut best = (a, self.distance_to(a));
        let mut consider = |x: f64| {
            let d = self.distance_to(x);
            if d > best.1 {
                best = (x, d);
            }
        };
        consider(b);
        let start = self.points.partition_point(|&q| q < a).saturating_sub(1);
        for w in self.points[start..].windows(2) {
            if w[0] > b {
                break;
            }
            let m = 0.5 * (w[0] + w[1]);
            if a < m && m < b {
                consider(m);
            }
        }
        best
    }

    pub fn distance_to(&self, x: f64) -> f64 {
        let idx = self.points.partition_point(|&q| q < x);
        let r = self.points.get(idx).map_or(f64::INFINITY, |&q| q - x);
        let l = idx
            .checked_sub(1)
            .map_or(f64::INFINITY, |i| x - self.points[i]);
        l.min(r)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Default for Coverage {
    fn default() -> Self {
        Coverage::new()
    }
}

/// Fibre points examined by the greedy lookahead before it gives up.
const LOOKAHEAD_NODES: usize = 4096;

impl SegmentRelation {
    // The fibre point farthest from everything visited; ties go to the target side.
    fn freshest(&self, pieces: &[(f64, f64)], target: f64, cov: &Coverage) -> (f64, f64) {
        pieces.iter().map(|&(a, b)| cov.farthest_in(a, b)).fold(
            (f64::NAN, f64::NEG_INFINITY),
            |best, c| {
                let closer = (c.0 - target).abs() < (best.0 - target).abs();
                if c.1 > best.1 || (c.1 == best.1 && closer) {
                    c
                } else {
                    best
                }
            },
        )
    }

    // First step of a shortest walk to a point not yet visited, exploring from
    // each fibre piece its freshest point and its point nearest `target`.
    fn step_toward_fresh(&self, x: f64, target: f64, cov: &Coverage) -> Option<f64> {
        let tol = self.tolerance();
        let mut seen = std::collections::HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(x.to_bits());
        queue.push_back((x, None::<f64>));
        while let Some((v, first)) = queue.pop_front() {
            let pieces = self.fiber_pieces(v);
            let mut best: Option<(f64, f64)> = None;
            for &(a, b) in &pieces {
                let c = cov.farthest_in(a, b);
                if c.1 > tol && best.is_none_or(|bst| c.1 > bst.1) {
                    best = Some(c);
                }
            }
            if let Some(found) = best {
                return Some(first.unwrap_or(found.0));
            }
            for &(a, b) in &pieces {
                for w in [target.clamp(a, b), cov.farthest_in(a, b).0] {
                    if seen.len() < LOOKAHEAD_NODES && seen.insert(w.to_bits()) {
                        queue.push_back((w, first.or(Some(w))));
                    }
                }
            }
        }
        None
    }
}

impl OrbitRelation for SegmentRelation {
    type Tracker = Coverage;

    fn tracker(&self, visited: &[f64]) -> Coverage {
        let mut c = Coverage::new();
        for &p in visited {
            c.insert(p);
        }
        c
    }

    fn record(&self, tracker: &mut Coverage, p: f64) {
        tracker.insert(p);
    }

    fn choose(
        &self,
        x: f64,
        policy: OrbitPolicy,
        tracker: &mut Coverage,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<f64>> {
        self.successors(x)?; // validates x
        let pieces = self.fiber_pieces(x);
        if pieces.is_empty() {
            return Ok(None);
        }
        let pick = match policy {
            OrbitPolicy::First => pieces.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
            OrbitPolicy::Random => {
                let (a, b) = pieces[rng.random_range(0..pieces.len())];
                if a == b {
                    a
                } else {
                    rng.random_range(a..=b)
                }
            }
            OrbitPolicy::Greedy => {
                let (target, _) = tracker.farthest();
                let tol = self.tolerance();
                let fresh = self.freshest(&pieces, target, tracker);
                if fresh.1 > tol {
                    fresh.0
                } else if let Some(step) = self.step_toward_fresh(x, target, tracker) {
                    step
                } else {
                    // nothing new within the lookahead: head for the largest hole
                    let away = IntervalSet::from_intervals(pieces.iter().flat_map(|&(a, b)| {
                        let left = (a <= x - tol).then(|| (a, b.min(x - tol)));
                        let right = (b >= x + tol).then(|| (a.max(x + tol), b));
                        left.into_iter().chain(right)
                    }));
                    away.nearest(target).unwrap_or(x)
                }
            }
        };
        Ok(Some(pick))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Segment;

    fn ex1() -> SegmentRelation {
        SegmentRelation::from_segments(vec![
            Segment::new(0.0, 0.5, 1.0, 0.5).unwrap(),
            Segment::new(0.5, 0.0, 0.5, 1.0).unwrap(),
        ])
        .unwrap()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    #[test]
    fn first_policy_takes_the_forced_successor() {
        let g = ex1();
        let p = extend_orbit(&g, &OrbitPrefix::start(0.3), OrbitPolicy::First, &mut rng()).unwrap();
        assert_eq!(p.points(), &[0.3, 0.5]);
    }

    #[test]
    fn greedy_jumps_to_the_farthest_boundary() {
        let g = ex1();
        let prefix = OrbitPrefix::new(&g, vec![0.3, 0.5]).unwrap();
        let p = extend_orbit(&g, &prefix, OrbitPolicy::Greedy, &mut rng()).unwrap();
        let y = p.last();
        assert!(y == 0.0 || y == 1.0, "{y}");
    }

    #[test]
    fn dead_ends_are_reported() {
        let g = FiniteRelation::new(2, [(1, 0)]).unwrap();
        let prefix = OrbitPrefix::new(&g, vec![1, 0]).unwrap();
        for policy in [OrbitPolicy::First, OrbitPolicy::Random, OrbitPolicy::Greedy] {
            assert!(matches!(
                extend_orbit(&g, &prefix, policy, &mut rng()),
                Err(Error::DeadEnd { .. })
            ));
        }
        let seg = SegmentRelation::from_segments(vec![Segment::point(1.0, 0.0).unwrap()]).unwrap();
        let run = simulate(&seg, 1.0, 10, OrbitPolicy::First, 0).unwrap();
        assert_eq!(run.orbit.points(), &[1.0, 0.0]);
        assert!(run.truncated);
    }

    #[test]
    fn prefixes_are_validated() {
        let g = ex1();
        assert!(OrbitPrefix::new(&g, vec![0.3, 0.4]).is_err());
    }

    #[test]
    fn finite_greedy_covers_a_cycle_with_a_chord() {
        // 0 -> 1 -> 2 -> 0 plus 0 -> 0; greedy must not idle on the loop
        let g = FiniteRelation::new(3, [(0, 0), (0, 1), (1, 2), (2, 0)]).unwrap();
        let run = simulate(&g, 0, 6, OrbitPolicy::Greedy, 0).unwrap();
        let seen: VertexSet = run.orbit.points().iter().copied().collect();
        assert_eq!(seen, VertexSet::full(3));
    }

    #[test]
    fn coverage_tracks_largest_hole() {
        let mut c = Coverage::new();
        c.insert(0.3);
        c.insert(0.5);
        assert_eq!(c.farthest(), (1.0, 0.5));
        c.insert(1.0);
        assert_eq!(c.farthest(), (0.0, 0.3));
        c.insert(0.0);
        let (t, r) = c.farthest();
        assert!((t - 0.75).abs() < 1e-15 && (r - 0.25).abs() < 1e-15);
    }

    #[test]
    fn simulation_is_deterministic_per_seed() {
        let g = ex1();
        let a = simulate(&g, 0.3, 50, OrbitPolicy::Random, 7).unwrap();
        let b = simulate(&g, 0.3, 50, OrbitPolicy::Random, 7).unwrap();
        assert_eq!(a.orbit, b.orbit);
        for w in a.orbit.points().windows(2) {
            assert!(g.contains(w[0], w[1]).unwrap());
        }
    }
}
