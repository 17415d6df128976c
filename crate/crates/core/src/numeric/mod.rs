//! Resolution-bounded analysis of segment relations on `[0, 1]`.
//!
//! Nothing here decides minimality. Orbits are finite prefixes, closures are
//! iterated to a fixed resolution, and density means a small largest gap.

mod closure;
mod diagnose;
mod invariance;
mod witness;

pub use closure::{invariant_closure, ClosureMode, ClosureResult, MAX_PIECES, STABILITY_THRESHOLD};
pub use diagnose::{
    diagnose, Assessment, DiagnosticConfig, SegmentDiagnostic, Verdict, DIAGNOSTIC_LABEL,
};
pub use invariance::{check_invariant_candidate, InvarianceCheck, GRID_PITCH};
pub use witness::{candidate_library, search_witness, SegmentWitnessSearch};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relation::{simulate, OrbitPolicy, Relation, SegmentRelation, SimulatedOrbit};

/// Default density threshold.
pub const DEFAULT_EPSILON: f64 = 1e-2;
/// Default orbit length.
pub const DEFAULT_STEPS: usize = 10_000;

/// Largest gap of a sample of `[0, 1]`, with 0 and 1 as sentinels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityDiagnostic {
    pub sample_count: usize,
    pub max_gap: f64,
}

impl DensityDiagnostic {
    pub fn dense_at(&self, eps: f64) -> bool {
        self.max_gap < eps
    }
}

pub fn density(points: &[f64]) -> Result<DensityDiagnostic> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(&bad) = points.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::CoordinateOutOfRange(bad));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut max_gap = sorted[0];
    for w in sorted.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    max_gap = max_gap.max(1.0 - sorted[sorted.len() - 1]);
    Ok(DensityDiagnostic {
        sample_count: points.len(),
        max_gap,
    })
}

fn check_run(x0: f64, steps: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::CoordinateOutOfRange(x0));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    Ok(())
}

/// A forward orbit prefix of length at most `steps + 1`.
pub fn simulate_orbit(
    r: &SegmentRelation,
    x0: f64,
    steps: usize,
    policy: OrbitPolicy,
    seed: u64,
) -> Result<SimulatedOrbit<f64>> {
    check_run(x0, steps)?;
    simulate(r, x0, steps, policy, seed)
}

/// A backward orbit prefix: a forward orbit of the inverse relation.
pub fn simulate_backward_orbit(
    r: &SegmentRelation,
    x0: f64,
    steps: usize,
    policy: OrbitPolicy,
    seed: u64,
) -> Result<SimulatedOrbit<f64>> {
    simulate_orbit(&r.inverse(), x0, steps, policy, seed)
}

/// The tail of an orbit after discarding the first `burn_in` fraction.
pub fn omega_estimate(orbit: &[f64], burn_in: f64) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&burn_in) {
        return Err(Error::InvalidParameter(format!("burn-in {burn_in}")));
    }
    let skip = (orbit.len() as f64 * burn_in).floor() as usize;
    let tail = &orbit[skip.min(orbit.len())..];
    if tail.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(tail.to_vec())
}

/// [`omega_estimate`] of a backward orbit.
pub fn alpha_estimate(backward_orbit: &[f64], burn_in: f64) -> Result<Vec<f64>> {
    omega_estimate(backward_orbit, burn_in)
}

/// Union of limit-set estimates over several orbits from one point; a lower
/// approximation of the union over all orbits.
#[derive(Debug, Clone, Serialize)]
pub struct LimitUnionEstimate {
    pub runs: Vec<(OrbitPolicy, u64)>,
    pub density: DensityDiagnostic,
    #[serde(skip)]
    pub points: Vec<f64>,
}

/// Lower estimate of `ψ(x0)` from first, greedy and seeded random orbits.
pub fn psi_estimate(
    r: &SegmentRelation,
    x0: f64,
    steps: usize,
    seeds: &[u64],
    burn_in: f64,
) -> Result<LimitUnionEstimate> {
    let mut runs = vec![(OrbitPolicy::First, 0), (OrbitPolicy::Greedy, 0)];
    runs.extend(seeds.iter().map(|&s| (OrbitPolicy::Random, s)));
    let mut points = Vec::new();
    for &(policy, seed) in &runs {
        let orbit = simulate_orbit(r, x0, steps, policy, seed)?;
        if orbit.truncated {
            continue;
        }
        points.extend(omega_estimate(orbit.orbit.points(), burn_in)?);
    }
    let density = if points.is_empty() {
        DensityDiagnostic {
            sample_count: 0,
            max_gap: 1.0,
        }
    } else {
        density(&points)?
    };
    Ok(LimitUnionEstimate {
        runs,
        density,
        points,
    })
}

/// Lower estimate of `β(x0)`: [`psi_estimate`] on the inverse relation.
pub fn beta_estimate(
    r: &SegmentRelation,
    x0: f64,
    steps: usize,
    seeds: &[u64],
    burn_in: f64,
) -> Result<LimitUnionEstimate> {
    psi_estimate(&r.inverse(), x0, steps, seeds, burn_in)
}
