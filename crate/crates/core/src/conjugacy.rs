//! Homeomorphisms of the carrier and transport of relations along them.
//!
//! A homeomorphism `φ` carries `G` to `H = {(φ(x), φ(y)) : (x, y) ∈ G}`.
//! Finite carriers use permutations; the interval uses strictly monotone
//! piecewise-linear maps, which send segment unions to segment unions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::{classify, is_invariant, InvarianceKind, MinimalityKind, MinimalityReport};
use crate::numeric::{diagnose, DiagnosticConfig, SegmentDiagnostic};
use crate::relation::{AnyRelation, FiniteRelation, Segment, SegmentRelation, VertexSet};

const ROUND_TRIP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "inc")]
    Increasing,
    #[serde(rename = "dec")]
    Decreasing,
}

/// A strictly monotone piecewise-linear self-map of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlMap {
    orientation: Orientation,
    // sorted by abscissa
    breakpoints: Vec<(f64, f64)>,
}

impl PlMap {
    pub fn new(orientation: Orientation, mut breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidHomeomorphism(msg.into()));
        if breakpoints.len() < 2 {
            return bad("at least two breakpoints are needed");
        }
        if breakpoints
            .iter()
            .any(|&(x, y)| !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y))
        {
            return bad("breakpoints must lie in the unit square");
        }
        breakpoints.sort_by(|a, b| a.0.total_cmp(&b.0));
        let first = breakpoints[0];
        let last = breakpoints[breakpoints.len() - 1];
        let ends = match orientation {
            Orientation::Increasing => ((0.0, 0.0), (1.0, 1.0)),
            Orientation::Decreasing => ((0.0, 1.0), (1.0, 0.0)),
        };
        if (first, last) != ends {
            return bad("breakpoints must fix the endpoints per orientation");
        }
        for w in breakpoints.windows(2) {
            let monotone = match orientation {
                Orientation::Increasing => w[1].1 > w[0].1,
                Orientation::Decreasing => w[1].1 < w[0].1,
            };
            if w[1].0 <= w[0].0 || !monotone {
                return bad("breakpoints must be strictly monotone");
            }
        }
        Ok(PlMap {
            orientation,
            breakpoints,
        })
    }

    pub fn identity() -> Self {
        PlMap {
            orientation: Orientation::Increasing,
            breakpoints: vec![(0.0, 0.0), (1.0, 1.0)],
        }
    }

    /// `t ↦ 1 - t`.
    pub fn flip() -> Self {
        PlMap {
            orientation: Orientation::Decreasing,
            breakpoints: vec![(0.0, 1.0), (1.0, 0.0)],
        }
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn apply(&self, t: f64) -> f64 {
        let bp = &self.breakpoints;
        let i = bp.partition_point(|p| p.0 <= t).clamp(1, bp.len() - 1);
        let (x0, y0) = bp[i - 1];
        let (x1, y1) = bp[i];
        if t == x0 {
            return y0;
        }
        if t == x1 {
            return y1;
        }
        (y0 + (t - x0) / (x1 - x0) * (y1 - y0)).clamp(0.0, 1.0)
    }

    pub fn inverse(&self) -> PlMap {
        let mut breakpoints: Vec<(f64, f64)> =
            self.breakpoints.iter().map(|&(x, y)| (y, x)).collect();
        breakpoints.sort_by(|a, b| a.0.total_cmp(&b.0));
        PlMap {
            orientation: self.orientation,
            breakpoints,
        }
    }

    fn kinks(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.breakpoints.len();
        self.breakpoints[1..n - 1].iter().map(|p| p.0)
    }

    /// Image of a segment: a polyline, one piece per affine stretch.
    pub fn transport_segment(&self, s: &Segment) -> Vec<Segment> {
        let mut ts = vec![0.0, 1.0];
        for k in self.kinks() {
            for (a, b) in [(s.x1, s.x2), (s.y1, s.y2)] {
                if a != b {
                    let t = (k - a) / (b - a);
                    if t > 0.0 && t < 1.0 {
                        ts.push(t);
                    }
                }
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let image = |t: f64| {
            let (x, y) = s.at(t);
            (self.apply(x), self.apply(y))
        };
        if s.is_point() {
            let (x, y) = image(0.0);
            return vec![Segment {
                x1: x,
                y1: y,
                x2: x,
                y2: y,
            }];
        }
        ts.windows(2)
            .map(|w| {
                let (x1, y1) = image(w[0]);
                let (x2, y2) = image(w[1]);
                Segment { x1, y1, x2, y2 }
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum HomeomorphismFile {
    Permutation {
        map: Vec<usize>,
    },
    Pl {
        orientation: Orientation,
        breakpoints: Vec<[f64; 2]>,
    },
}

/// A homeomorphism of one of the two carriers.
#[derive(Debug, Clone, PartialEq)]
pub enum Homeomorphism {
    Permutation(Vec<usize>),
    Pl(PlMap),
}

impl Homeomorphism {
    pub fn permutation(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidHomeomorphism(format!(
                    "{map:?} is not a permutation of 0..{n}"
                )));
            }
        }
        if n == 0 {
            return Err(Error::InvalidHomeomorphism("empty permutation".into()));
        }
        Ok(Homeomorphism::Permutation(map))
    }

    pub fn inverse(&self) -> Homeomorphism {
        match self {
            Homeomorphism::Permutation(map) => {
                let mut inv = vec![0; map.len()];
                for (i, &v) in map.iter().enumerate() {
                    inv[v] = i;
                }
                Homeomorphism::Permutation(inv)
            }
            Homeomorphism::Pl(f) => Homeomorphism::Pl(f.inverse()),
        }
    }

    /// Parses the JSON form; malformed JSON is a parse error, a map that is not
    /// a homeomorphism a constraint error.
    pub fn from_json(s: &str) -> Result<Self> {
        match serde_json::from_str::<HomeomorphismFile>(s)? {
            HomeomorphismFile::Permutation { map } => Homeomorphism::permutation(map),
            HomeomorphismFile::Pl {
                orientation,
                breakpoints,
            } => Ok(Homeomorphism::Pl(PlMap::new(
                orientation,
                breakpoints.into_iter().map(|[x, y]| (x, y)).collect(),
            )?)),
        }
    }

    pub fn to_json(&self) -> String {
        let file = match self {
            Homeomorphism::Permutation(map) => HomeomorphismFile::Permutation { map: map.clone() },
            Homeomorphism::Pl(f) => HomeomorphismFile::Pl {
                orientation: f.orientation,
                breakpoints: f.breakpoints.iter().map(|&(x, y)| [x, y]).collect(),
            },
        };
        serde_json::to_string(&file).expect("homeomorphisms serialize")
    }

    /// Checks that the map composed with its inverse is the identity.
    pub fn check_round_trip(&self) -> Result<()> {
        let inv = self.inverse();
        match (self, &inv) {
            (Homeomorphism::Permutation(f), Homeomorphism::Permutation(g)) => {
                if (0..f.len()).all(|i| g[f[i]] == i) {
                    return Ok(());
                }
            }
            (Homeomorphism::Pl(f), Homeomorphism::Pl(g)) => {
                let probes = f
                    .breakpoints
                    .iter()
                    .map(|p| p.0)
                    .chain((0..=64).map(|k| k as f64 / 64.0));
                if probes
                    .clone()
                    .all(|t| (g.apply(f.apply(t)) - t).abs() <= ROUND_TRIP_TOLERANCE)
                {
                    return Ok(());
                }
            }
            _ => unreachable!("inverse keeps the backend"),
        }
        Err(Error::InvalidHomeomorphism(
            "composition with the inverse is not the identity".into(),
        ))
    }
}

/// Permutes the points of a finite relation.
pub fn transport_finite(g: &FiniteRelation, map: &[usize]) -> Result<FiniteRelation> {
    if map.len() != g.size() {
        return Err(Error::BackendMismatch);
    }
    FiniteRelation::new(g.size(), g.edges().map(|(x, y)| (map[x], map[y])))
}

pub fn transport_segments(g: &SegmentRelation, f: &PlMap) -> Result<SegmentRelation> {
    let segments = g
        .segments()
        .iter()
        .flat_map(|s| f.transport_segment(s))
        .collect();
    SegmentRelation::new(segments, g.tolerance())
}

/// `H = (φ × φ)(G)`.
pub fn transport(g: &AnyRelation, phi: &Homeomorphism) -> Result<AnyRelation> {
    match (g, phi) {
        (AnyRelation::Finite(g), Homeomorphism::Permutation(map)) => {
            Ok(AnyRelation::Finite(transport_finite(g, map)?))
        }
        (AnyRelation::Segments(g), Homeomorphism::Pl(f)) => {
            Ok(AnyRelation::Segments(transport_segments(g, f)?))
        }
        _ => Err(Error::BackendMismatch),
    }
}

/// Image of a point set under a permutation.
pub fn transport_subset(a: VertexSet, map: &[usize]) -> VertexSet {
    a.iter().map(|v| map[v]).collect()
}

/// Classifications of `G` and of its transport, compared kind by kind.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyReport<R> {
    pub before: R,
    pub after: R,
    pub agreement: BTreeMap<MinimalityKind, bool>,
    /// `p₁(G) = X ⟺ p₁(H) = Y`, and the same for second projections.
    pub projections_agree: bool,
}

impl<R> ConjugacyReport<R> {
    pub fn holds(&self) -> bool {
        self.projections_agree && self.agreement.values().all(|&b| b)
    }

    pub fn disagreements(&self) -> Vec<MinimalityKind> {
        self.agreement
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(&k, _)| k)
            .collect()
    }
}

pub fn check_conjugacy_finite(
    g: &FiniteRelation,
    map: &[usize],
) -> Result<ConjugacyReport<MinimalityReport>> {
    let h = transport_finite(g, map)?;
    let (before, after) = (classify(g), classify(&h));
    Ok(ConjugacyReport {
        agreement: MinimalityKind::ALL
            .into_iter()
            .map(|k| (k, before.flags[k] == after.flags[k]))
            .collect(),
        projections_agree: before.p1_full == after.p1_full && before.p2_full == after.p2_full,
        before,
        after,
    })
}

/// The segment version compares diagnostic verdicts, not decided flags.
pub fn check_conjugacy_segments(
    g: &SegmentRelation,
    f: &PlMap,
    config: &DiagnosticConfig,
) -> Result<ConjugacyReport<SegmentDiagnostic>> {
    let h = transport_segments(g, f)?;
    let before = diagnose(g, config)?;
    let after = diagnose(&h, config)?;
    Ok(ConjugacyReport {
        agreement: MinimalityKind::ALL
            .into_iter()
            .map(|k| (k, before.verdicts[&k].verdict == after.verdicts[&k].verdict))
            .collect(),
        projections_agree: before.p1_full == after.p1_full && before.p2_full == after.p2_full,
        before,
        after,
    })
}

/// Whether `A` and its image have the same invariance, one entry per kind.
pub fn subset_transport(
    g: &FiniteRelation,
    map: &[usize],
    a: VertexSet,
) -> Result<[(InvarianceKind, bool); 4]> {
    let h = transport_finite(g, map)?;
    let b = transport_subset(a, map);
    let mut out = [(InvarianceKind::Forward1, true); 4];
    for (slot, kind) in out.iter_mut().zip(InvarianceKind::ALL) {
        *slot = (
            kind,
            is_invariant(g, a, kind)? == is_invariant(&h, b, kind)?,
        );
    }
    Ok(out)
}

/// Every `(A, kind)` over all subsets of the carrier for which transport changes invariance.
pub fn subset_transport_violations(
    g: &FiniteRelation,
    map: &[usize],
) -> Result<Vec<(VertexSet, InvarianceKind)>> {
    let n = g.size();
    if n > crate::finite::SUBSET_ORACLE_CAP {
        return Err(Error::CapExceeded {
            what: "subset transport",
            requested: n as u128,
            cap: crate::finite::SUBSET_ORACLE_CAP as u128,
        });
    }
    let mut bad = Vec::new();
    for bits in 0..(1u64 << n) {
        for (kind, ok) in subset_transport(g, map, VertexSet(bits))? {
            if !ok {
                bad.push((VertexSet(bits), kind));
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{segment_hausdorff, Relation};
    use proptest::prelude::*;

    fn c3() -> FiniteRelation {
        FiniteRelation::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn ex1() -> SegmentRelation {
        SegmentRelation::from_segments(vec![
            Segment::new(0.0, 0.5, 1.0, 0.5).unwrap(),
            Segment::new(0.5, 0.0, 0.5, 1.0).unwrap(),
        ])
        .unwrap()
    }

    fn bent() -> PlMap {
        PlMap::new(
            Orientation::Increasing,
            vec![(0.0, 0.0), (0.25, 0.5), (1.0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn swapping_two_points_of_a_cycle() {
        let h = transport_finite(&c3(), &[1, 0, 2]).unwrap();
        assert_eq!(h, FiniteRelation::new(3, [(1, 0), (0, 2), (2, 1)]).unwrap());
        let rep = check_conjugacy_finite(&c3(), &[1, 0, 2]).unwrap();
        assert!(rep.holds());
        assert!(rep.after.flags.iter().all(|(_, b)| b));
    }

    #[test]
    fn star_under_permutations() {
        let s3 = FiniteRelation::new(3, [(0, 1), (1, 1), (2, 1), (1, 0), (1, 2)]).unwrap();
        for map in [[0, 1, 2], [2, 1, 0], [1, 0, 2], [1, 2, 0]] {
            assert!(check_conjugacy_finite(&s3, &map).unwrap().holds());
            assert!(subset_transport_violations(&s3, &map).unwrap().is_empty());
        }
    }

    #[test]
    fn identity_changes_nothing() {
        assert_eq!(transport_finite(&c3(), &[0, 1, 2]).unwrap(), c3());
        let g = ex1();
        let h = transport_segments(&g, &PlMap::identity()).unwrap();
        assert_eq!(h, g);
    }

    #[test]
    fn ex1_is_fixed_by_the_flip() {
        let h = transport_segments(&ex1(), &PlMap::flip()).unwrap();
        assert!(segment_hausdorff(&h, &ex1(), 200) < 1e-12);
    }

    #[test]
    fn pl_maps_bend_segments() {
        let f = bent();
        assert_eq!(f.apply(0.25), 0.5);
        assert!((f.apply(0.625) - 0.75).abs() < 1e-15);
        let diag = Segment::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let pieces = f.transport_segment(&diag);
        assert_eq!(pieces.len(), 2);
        // the diagonal is mapped onto itself
        for s in pieces {
            assert!((s.x1 - s.y1).abs() < 1e-15 && (s.x2 - s.y2).abs() < 1e-15);
        }
        let h = transport_segments(&ex1(), &f).unwrap();
        assert!(h.contains(f.apply(0.1), f.apply(0.5)).unwrap());
        assert!(h.contains(f.apply(0.5), f.apply(0.9)).unwrap());
    }

    #[test]
    fn homeomorphisms_are_validated() {
        assert!(Homeomorphism::permutation(vec![0, 0]).is_err());
        assert!(Homeomorphism::permutation(vec![1, 2]).is_err());
        assert!(PlMap::new(
            Orientation::Increasing,
            vec![(0.0, 0.0), (0.5, 0.7), (0.6, 0.6), (1.0, 1.0)]
        )
        .is_err());
        assert!(PlMap::new(Orientation::Decreasing, vec![(0.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(PlMap::new(Orientation::Increasing, vec![(0.0, 0.0)]).is_err());
        assert!(Homeomorphism::Pl(bent()).check_round_trip().is_ok());
    }

    #[test]
    fn backends_must_match() {
        let g = AnyRelation::Finite(c3());
        assert!(matches!(
            transport(&g, &Homeomorphism::Pl(PlMap::flip())),
            Err(Error::BackendMismatch)
        ));
        let phi = Homeomorphism::permutation(vec![0, 1]).unwrap();
        assert!(matches!(transport(&g, &phi), Err(Error::BackendMismatch)));
    }

    #[test]
    fn json_forms() {
        let p = Homeomorphism::from_json(r#"{"type":"permutation","map":[2,0,1]}"#).unwrap();
        assert_eq!(p, Homeomorphism::Permutation(vec![2, 0, 1]));
        let f = Homeomorphism::from_json(
            r#"{"type":"pl","orientation":"dec","breakpoints":[[0,1],[0.5,0.25],[1,0]]}"#,
        )
        .unwrap();
        assert_eq!(Homeomorphism::from_json(&f.to_json()).unwrap(), f);
        assert!(Homeomorphism::from_json("{").unwrap_err().is_parse());
        assert!(
            !Homeomorphism::from_json(r#"{"type":"permutation","map":[1,1]}"#)
                .unwrap_err()
                .is_parse()
        );
    }

    fn arb_relation() -> impl Strategy<Value = FiniteRelation> {
        (1usize..=5).prop_flat_map(|n| {
            proptest::collection::vec(any::<u64>(), n).prop_filter_map("nonempty", move |rows| {
                let rows: Vec<u64> = rows.iter().map(|r| r & ((1u64 << n) - 1)).collect();
                FiniteRelation::from_rows(n, rows).ok()
            })
        })
    }

    fn arb_pl() -> impl Strategy<Value = PlMap> {
        (
            proptest::collection::vec((0.01f64..0.99, 0.01f64..0.99), 0..4),
            any::<bool>(),
        )
            .prop_filter_map("strictly monotone", |(inner, inc)| {
                let mut xs: Vec<f64> = inner.iter().map(|p| p.0).collect();
                let mut ys: Vec<f64> = inner.iter().map(|p| p.1).collect();
                xs.sort_by(f64::total_cmp);
                ys.sort_by(f64::total_cmp);
                if !inc {
                    ys.reverse();
                }
                let (o, ends) = if inc {
                    (Orientation::Increasing, [(0.0, 0.0), (1.0, 1.0)])
                } else {
                    (Orientation::Decreasing, [(0.0, 1.0), (1.0, 0.0)])
                };
                let bp = ends.into_iter().chain(xs.into_iter().zip(ys)).collect();
                PlMap::new(o, bp).ok()
            })
    }

    proptest! {
        #[test]
        fn finite_round_trip(g in arb_relation(), seed in any::<u64>()) {
            let n = g.size();
            let mut map: Vec<usize> = (0..n).collect();
            let k = (seed as usize) % n;
            map.rotate_left(k);
            let phi = Homeomorphism::permutation(map).unwrap();
            let h = transport(&AnyRelation::Finite(g.clone()), &phi).unwrap();
            let back = transport(&h, &phi.inverse()).unwrap();
            prop_assert_eq!(back, AnyRelation::Finite(g));
        }

        #[test]
        fn segment_round_trip(f in arb_pl(), segs in proptest::collection::vec(proptest::array::uniform4(0.0f64..=1.0), 1..4)) {
            let g = SegmentRelation::from_segments(
                segs.into_iter().map(|[a, b, c, d]| Segment::new(a, b, c, d).unwrap()).collect(),
            ).unwrap();
            prop_assert!(Homeomorphism::Pl(f.clone()).check_round_trip().is_ok());
            let h = transport_segments(&g, &f).unwrap();
            let back = transport_segments(&h, &f.inverse()).unwrap();
            prop_assert!(segment_hausdorff(&back, &g, 50) < 1e-9);
        }

        #[test]
        fn transported_points_stay_related(f in arb_pl(), t in 0.0f64..=1.0) {
            let g = ex1();
            let h = transport_segments(&g, &f).unwrap();
            prop_assert!(h.contains(f.apply(t), f.apply(0.5)).unwrap());
            prop_assert!(h.contains(f.apply(0.5), f.apply(t)).unwrap());
        }
    }
}
