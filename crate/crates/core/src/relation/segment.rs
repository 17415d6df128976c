use super::Relation;
use crate::error::{Error, Result};
use crate::interval::IntervalSet;

/// Default membership slack for segment relations.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A closed line segment in the unit square; equal endpoints denote a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

fn check_coord(c: f64) -> Result<()> {
    if (0.0..=1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::CoordinateOutOfRange(c))
    }
}

impl Segment {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<Self> {
        for c in [x1, y1, x2, y2] {
            check_coord(c)?;
        }
        Ok(Segment { x1, y1, x2, y2 })
    }

    pub fn point(x: f64, y: f64) -> Result<Self> {
        Self::new(x, y, x, y)
    }

    pub fn is_point(&self) -> bool {
        self.x1 == self.x2 && self.y1 == self.y2
    }

    pub fn is_vertical(&self) -> bool {
        self.x1 == self.x2
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x1.min(self.x2), self.x1.max(self.x2))
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y1.min(self.y2), self.y1.max(self.y2))
    }

    pub fn swapped(&self) -> Segment {
        Segment {
            x1: self.y1,
            y1: self.x1,
            x2: self.y2,
            y2: self.x2,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x1, self.y1, self.x2, self.y2]
    }

    /// Point at parameter `t ∈ [0, 1]`.
    pub fn at(&self, t: f64) -> (f64, f64) {
        (
            interior_lerp(self.x1, self.x2, t),
            interior_lerp(self.y1, self.y2, t),
        )
    }

    // Parameter of abscissa x on a non-vertical segment, if x lies in its range.
    fn param_at_x(&self, x: f64) -> Option<f64> {
        let (lo, hi) = self.x_range();
        if x < lo || x > hi {
            return None;
        }
        let mut t = ((x - self.x1) / (self.x2 - self.x1)).clamp(0.0, 1.0);
        // Interior abscissae keep interior parameters.
        if t == 1.0 && x != self.x2 {
            t = 1.0f64.next_down();
        } else if t == 0.0 && x != self.x1 {
            t = 0.0f64.next_up();
        }
        Some(t)
    }

    /// `{y : (x, y) ∈ segment}` as a closed interval, if nonempty. Exact abscissa test.
    pub fn fiber(&self, x: f64) -> Option<(f64, f64)> {
        if self.is_vertical() {
            return (x == self.x1).then(|| self.y_range());
        }
        let t = self.param_at_x(x)?;
        let y = self.at(t).1;
        Some((y, y))
    }

    /// Image of the abscissa window `[a, b]` under this segment.
    pub fn image(&self, a: f64, b: f64) -> Option<(f64, f64)> {
        if self.is_vertical() {
            return (a <= self.x1 && self.x1 <= b).then(|| self.y_range());
        }
        let (lo, hi) = self.x_range();
        let (ca, cb) = (a.max(lo), b.min(hi));
        if ca > cb {
            return None;
        }
        let ya = self.at(self.param_at_x(ca)?).1;
        let yb = self.at(self.param_at_x(cb)?).1;
        Some((ya.min(yb), ya.max(yb)))
    }

    /// A point of the segment with ordinate `y` and abscissa in `[a, b]`, if any.
    pub fn point_with_ordinate(&self, y: f64, a: f64, b: f64) -> Option<f64> {
        let (lo, hi) = self.x_range();
        let (ca, cb) = (a.max(lo), b.min(hi));
        if ca > cb {
            return None;
        }
        if self.y1 == self.y2 {
            return (y == self.y1).then_some(ca);
        }
        let t = ((y - self.y1) / (self.y2 - self.y1)).clamp(0.0, 1.0);
        Some(self.at(t).0.clamp(ca, cb))
    }

    /// Euclidean distance from `(px, py)` to the segment.
    pub fn distance_to(&self, px: f64, py: f64) -> f64 {
        let (dx, dy) = (self.x2 - self.x1, self.y2 - self.y1);
        let len2 = dx * dx + dy * dy;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((px - self.x1) * dx + (py - self.y1) * dy) / len2).clamp(0.0, 1.0)
        };
        let (qx, qy) = (self.x1 + t * dx, self.y1 + t * dy);
        ((px - qx).powi(2) + (py - qy).powi(2)).sqrt()
    }
}

// Linear interpolation that never rounds an interior parameter onto an endpoint.
// Without this, f(t) = t/2 + 1/2 iterated from 0 reaches exactly 1.0 after 54 steps.
fn interior_lerp(a: f64, b: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return a;
    }
    if t >= 1.0 {
        return b;
    }
    let v = (a + t * (b - a)).clamp(a.min(b), a.max(b));
    if a == b {
        return a;
    }
    let toward = |v: f64, target: f64| {
        if target > v {
            v.next_up()
        } else {
            v.next_down()
        }
    };
    if v == b {
        toward(v, a)
    } else if v == a {
        toward(v, b)
    } else {
        v
    }
}

const BUCKETS: usize = 1024;

/// A closed relation on `[0, 1]` given as a finite union of segments.
#[derive(Debug, Clone)]
pub struct SegmentRelation {
    segments: Vec<Segment>,
    tolerance: f64,
    // segment indices whose x-range meets each bucket [k/B, (k+1)/B]
    buckets: Vec<Vec<u32>>,
}

impl PartialEq for SegmentRelation {
    fn eq(&self, other: &Self) -> bool {
        self.segments == other.segments && self.tolerance == other.tolerance
    }
}

fn bucket_of(x: f64) -> usize {
    ((x * BUCKETS as f64) as usize).min(BUCKETS - 1)
}

fn build_buckets(segments: &[Segment]) -> Vec<Vec<u32>> {
    let mut buckets = vec![Vec::new(); BUCKETS];
    for (i, s) in segments.iter().enumerate() {
        let (lo, hi) = s.x_range();
        for b in &mut buckets[bucket_of(lo)..=bucket_of(hi)] {
            b.push(i as u32);
        }
    }
    buckets
}

impl SegmentRelation {
    pub fn new(segments: Vec<Segment>, tolerance: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyRelation);
        }
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!("tolerance {tolerance}")));
        }
        for s in &segments {
            for c in s.as_array() {
                check_coord(c)?;
            }
        }
        Ok(SegmentRelation {
            buckets: build_buckets(&segments),
            segments,
            tolerance,
        })
    }

    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        Self::new(segments, DEFAULT_TOLERANCE)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(&self, tolerance: f64) -> Result<Self> {
        Self::new(self.segments.clone(), tolerance)
    }

    /// One fibre piece per segment meeting the vertical line at `x`, unmerged.
    pub fn fiber_pieces(&self, x: f64) -> Vec<(f64, f64)> {
        self.buckets[bucket_of(x)]
            .iter()
            .filter_map(|&i| self.segments[i as usize].fiber(x))
            .collect()
    }

    /// `{y : (x, y) ∈ G for some x ∈ set}`.
    pub fn image(&self, set: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.image_pieces(set).into_iter().map(|p| p.2))
    }

    /// Image pieces tagged with the segment index and source window.
    pub(crate) fn image_pieces(&self, set: &IntervalSet) -> Vec<(usize, (f64, f64), (f64, f64))> {
        let mut out = Vec::new();
        for (i, s) in self.segments.iter().enumerate() {
            for &(a, b) in set.intervals() {
                if let Some(piece) = s.image(a, b) {
                    out.push((i, (a, b), piece));
                }
            }
        }
        out
    }
}

impl Relation for SegmentRelation {
    type Point = f64;
    type PointSet = IntervalSet;

    fn contains(&self, x: f64, y: f64) -> Result<bool> {
        check_coord(x)?;
        check_coord(y)?;
        Ok(self
            .segments
            .iter()
            .any(|s| s.distance_to(x, y) <= self.tolerance))
    }

    fn successors(&self, x: f64) -> Result<IntervalSet> {
        check_coord(x)?;
        Ok(IntervalSet::from_intervals(self.fiber_pieces(x)))
    }

    fn predecessors(&self, y: f64) -> Result<IntervalSet> {
        check_coord(y)?;
        Ok(IntervalSet::from_intervals(
            self.segments.iter().filter_map(|s| s.swapped().fiber(y)),
        ))
    }

    fn inverse(&self) -> Self {
        let segments: Vec<Segment> = self.segments.iter().map(Segment::swapped).collect();
        SegmentRelation {
            buckets: build_buckets(&segments),
            segments,
            tolerance: self.tolerance,
        }
    }

    fn projections(&self) -> (IntervalSet, IntervalSet) {
        (
            IntervalSet::from_intervals(self.segments.iter().map(Segment::x_range)),
            IntervalSet::from_intervals(self.segments.iter().map(Segment::y_range)),
        )
    }
}

/// Hausdorff distance between the point sets of two segment unions, estimated by
/// sampling `samples` points along every segment of each side.
pub fn segment_hausdorff(a: &SegmentRelation, b: &SegmentRelation, samples: usize) -> f64 {
    fn directed(a: &SegmentRelation, b: &SegmentRelation, samples: usize) -> f64 {
        let k = samples.max(2);
        a.segments
            .iter()
            .flat_map(|s| (0..k).map(move |i| s.at(i as f64 / (k - 1) as f64)))
            .map(|(x, y)| {
                b.segments
                    .iter()
                    .map(|t| t.distance_to(x, y))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
    directed(a, b, samples).max(directed(b, a, samples))
}
