use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    density, invariant_closure, omega_estimate, search_witness, simulate_orbit, ClosureMode,
    DEFAULT_EPSILON, DEFAULT_STEPS,
};
use crate::error::Result;
use crate::finite::MinimalityKind;
use crate::interval::IntervalSet;
use crate::relation::{OrbitPolicy, Relation, SegmentRelation};

/// Label carried by every segment classification.
pub const DIAGNOSTIC_LABEL: &str = "resolution-bounded diagnostic";

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticConfig {
    /// Number of evenly spaced start points in `[0, 1]`, endpoints included.
    pub starts: usize,
    pub steps: usize,
    /// Density threshold for orbits and closures.
    pub epsilon: f64,
    /// Fattening for the outer closure.
    pub closure_epsilon: f64,
    pub inner_iterations: usize,
    pub outer_iterations: usize,
    pub burn_in: f64,
    pub seed: u64,
}

impl Default for DiagnosticConfig {
    fn default() -> Self {
        DiagnosticConfig {
            starts: 5,
            steps: DEFAULT_STEPS,
            epsilon: DEFAULT_EPSILON,
            closure_epsilon: 1e-3,
            inner_iterations: 60,
            outer_iterations: 500,
            burn_in: 0.5,
            seed: 0,
        }
    }
}

impl DiagnosticConfig {
    pub fn start_points(&self) -> Vec<f64> {
        match self.starts {
            0 => Vec::new(),
            1 => vec![0.0],
            k => (0..k).map(|i| i as f64 / (k - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Plausible,
    Implausible,
    RefutedByWitness,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assessment {
    pub verdict: Verdict,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<IntervalSet>,
}

impl Assessment {
    fn new(verdict: Verdict, detail: impl Into<String>) -> Self {
        Assessment {
            verdict,
            detail: detail.into(),
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentDiagnostic {
    pub label: &'static str,
    pub p1_full: bool,
    pub p2_full: bool,
    pub config: DiagnosticConfig,
    pub verdicts: BTreeMap<MinimalityKind, Assessment>,
}

/// Numeric evidence for each of the sixteen notions. Backward notions are
/// assessed as the forward ones on the inverse relation.
pub fn diagnose(r: &SegmentRelation, config: &DiagnosticConfig) -> Result<SegmentDiagnostic> {
    let (p1, p2) = r.projections();
    let p1_full = p1 == IntervalSet::unit();
    let p2_full = p2 == IntervalSet::unit();
    let mut verdicts = BTreeMap::new();
    for (g, backward) in [(r.clone(), false), (r.inverse(), true)] {
        let ev = Evidence::gather(&g, config)?;
        for k in MinimalityKind::ALL.into_iter().filter(|k| !k.is_backward()) {
            let kind = if backward { k.mirrored() } else { k };
            let mut a = ev.assess(k, config, p1_full && p2_full);
            if a.verdict == Verdict::RefutedByWitness {
                a.witness = search_witness(r, kind)?.witness;
            }
            verdicts.insert(kind, a);
        }
    }
    Ok(SegmentDiagnostic {
        label: DIAGNOSTIC_LABEL,
        p1_full,
        p2_full,
        config: config.clone(),
        verdicts,
    })
}

// Worst cases over all start points, in one direction.
struct Evidence {
    truncated: bool,
    gap_all_orbits: f64,
    gap_all_tails: f64,
    gap_greedy: f64,
    gap_greedy_tail: f64,
    gap_limit_union: f64,
    gap_inner: f64,
    inner_converged: bool,
    gap_outer: f64,
    one_witness: bool,
    inf_witness: bool,
}

impl Evidence {
    fn gather(g: &SegmentRelation, cfg: &DiagnosticConfig) -> Result<Evidence> {
        let mut ev = Evidence {
            truncated: false,
            gap_all_orbits: 0.0,
            gap_all_tails: 0.0,
            gap_greedy: 0.0,
            gap_greedy_tail: 0.0,
            gap_limit_union: 0.0,
            gap_inner: 0.0,
            inner_converged: true,
            gap_outer: 0.0,
            one_witness: search_witness(g, MinimalityKind::One)?.witness.is_some(),
            inf_witness: search_witness(g, MinimalityKind::Inf)?.witness.is_some(),
        };
        let runs = [
            (OrbitPolicy::First, cfg.seed),
            (OrbitPolicy::Greedy, cfg.seed),
            (OrbitPolicy::Random, cfg.seed),
            (OrbitPolicy::Random, cfg.seed.wrapping_add(1)),
        ];
        for x0 in cfg.start_points() {
            let mut union_tails = Vec::new();
            let mut greedy_points = Vec::new();
            for (policy, seed) in runs {
                let run = simulate_orbit(g, x0, cfg.steps, policy, seed)?;
                ev.truncated |= run.truncated;
                let pts = run.orbit.points();
                let gap = density(pts)?.max_gap;
                let tail = omega_estimate(pts, cfg.burn_in)?;
                let tail_gap = density(&tail)?.max_gap;
                ev.gap_all_orbits = ev.gap_all_orbits.max(gap);
                ev.gap_all_tails = ev.gap_all_tails.max(tail_gap);
                if policy == OrbitPolicy::Greedy {
                    ev.gap_greedy = ev.gap_greedy.max(gap);
                    ev.gap_greedy_tail = ev.gap_greedy_tail.max(tail_gap);
                    greedy_points = pts.to_vec();
                }
                if !run.truncated {
                    union_tails.extend(tail);
                }
            }
            let union_gap = if union_tails.is_empty() {
                1.0
            } else {
                density(&union_tails)?.max_gap
            };
            ev.gap_limit_union = ev.gap_limit_union.max(union_gap);

            let s0 = IntervalSet::point(x0);
            let inner = invariant_closure(g, &s0, ClosureMode::Inner, 0.0, cfg.inner_iterations)?;
            let hull = inner.set.union(&IntervalSet::from_points(greedy_points));
            let inner_gap = hull.max_gap();
            if inner_gap >= cfg.epsilon {
                ev.inner_converged &= inner.converged;
            }
            ev.gap_inner = ev.gap_inner.max(inner_gap);
            let outer = invariant_closure(
                g,
                &s0,
                ClosureMode::Outer,
                cfg.closure_epsilon,
                cfg.outer_iterations,
            )?;
            ev.gap_outer = ev.gap_outer.max(outer.set.max_gap());
        }
        Ok(ev)
    }

    fn assess(&self, kind: MinimalityKind, cfg: &DiagnosticConfig, surjective: bool) -> Assessment {
        use MinimalityKind::*;
        use Verdict::*;
        let eps = cfg.epsilon;
        let one_type = matches!(kind, One | OnePlus | OneOmega);
        if one_type && self.one_witness {
            return Assessment::new(RefutedByWitness, "a proper closed 1-invariant set");
        }
        if !one_type && self.inf_witness {
            return Assessment::new(RefutedByWitness, "a proper closed inf-invariant set");
        }
        if !surjective {
            return Assessment::new(Implausible, "a projection misses part of [0, 1]");
        }
        if kind != Inf && self.truncated {
            return Assessment::new(Implausible, "a simulated orbit reached a dead end");
        }
        let gap = |what: &str, g: f64| format!("{what} max_gap {g:.3e}");
        let dense_or = |g: f64, what: &str, otherwise: Verdict| {
            if g < eps {
                Assessment::new(Plausible, gap(what, g))
            } else {
                Assessment::new(otherwise, gap(what, g))
            }
        };
        match kind {
            Inf => dense_or(self.gap_outer, "outer closure", Implausible),
            One | OnePlus => dense_or(self.gap_all_orbits, "every simulated orbit", Implausible),
            OneOmega => dense_or(self.gap_all_tails, "every orbit tail", Implausible),
            TwoPlus => dense_or(self.gap_greedy, "greedy orbit", Undecided),
            TwoOmega => dense_or(self.gap_greedy_tail, "greedy orbit tail", Undecided),
            ThreeOmega => dense_or(self.gap_limit_union, "union of orbit tails", Undecided),
            ThreePlus => {
                let fallback = if self.inner_converged {
                    Implausible
                } else {
                    Undecided
                };
                dense_or(self.gap_inner, "inner closure", fallback)
            }
            other => unreachable!("{other} is a backward kind"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Segment;

    fn quick() -> DiagnosticConfig {
        DiagnosticConfig {
            steps: 3000,
            ..DiagnosticConfig::default()
        }
    }

    #[test]
    fn ex1_diagnostic() {
        let g = SegmentRelation::from_segments(vec![
            Segment::new(0.0, 0.5, 1.0, 0.5).unwrap(),
            Segment::new(0.5, 0.0, 0.5, 1.0).unwrap(),
        ])
        .unwrap();
        let d = diagnose(&g, &quick()).unwrap();
        assert_eq!(d.label, DIAGNOSTIC_LABEL);
        assert!(d.p1_full && d.p2_full);
        assert_eq!(d.verdicts[&MinimalityKind::Inf].verdict, Verdict::Plausible);
        let one = &d.verdicts[&MinimalityKind::One];
        assert_eq!(one.verdict, Verdict::RefutedByWitness);
        assert_eq!(one.witness, Some(IntervalSet::point(0.5)));
        assert_eq!(
            d.verdicts[&MinimalityKind::TwoPlus].verdict,
            Verdict::Plausible
        );
        assert_eq!(d.verdicts.len(), 16);
    }

    #[test]
    fn ex22_is_inf_but_not_three_plus() {
        let g = SegmentRelation::from_segments(vec![
            Segment::new(0.0, 0.5, 1.0, 1.0).unwrap(),
            Segment::new(1.0, 0.0, 1.0, 1.0).unwrap(),
        ])
        .unwrap();
        let d = diagnose(&g, &quick()).unwrap();
        assert_eq!(d.verdicts[&MinimalityKind::Inf].verdict, Verdict::Plausible);
        assert_eq!(
            d.verdicts[&MinimalityKind::ThreePlus].verdict,
            Verdict::Implausible
        );
        assert_eq!(
            d.verdicts[&MinimalityKind::InfBack].verdict,
            Verdict::RefutedByWitness
        );
    }
}
