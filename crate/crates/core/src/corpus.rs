//! Named example relations, each bundled with checkable facts.
//!
//! Several names share one relation and differ only in the facts they check.
//! `verify` runs every fact and reports failures as entries, never as errors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{classify, is_invariant, witness, InvarianceKind, MinimalityKind, Witness};
use crate::interval::IntervalSet;
use crate::numeric::{
    alpha_estimate, check_invariant_candidate, density, invariant_closure, omega_estimate,
    search_witness, simulate_backward_orbit, simulate_orbit, ClosureMode,
};
use crate::relation::{
    AnyRelation, FiniteRelation, OrbitPolicy, OrbitPrefix, Relation, Segment, SegmentRelation,
    VertexSet,
};

/// Deepest supported truncation of the dyadic part of `rene2`.
pub const MAX_DEPTH: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    /// Rotation number for `tistile`.
    pub lambda: f64,
    /// Truncation depth of the dyadic point pairs in `rene2`.
    pub depth: u32,
    pub steps: usize,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            lambda: (5f64.sqrt() - 1.0) / 2.0,
            depth: 10,
            steps: 10_000,
            epsilon: 1e-2,
            seed: 0,
        }
    }
}

impl Params {
    fn check(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda {} outside (0, 1)",
                self.lambda
            )));
        }
        if !(1..=MAX_DEPTH).contains(&self.depth) {
            return Err(Error::InvalidParameter(format!(
                "depth {} outside 1..={MAX_DEPTH}",
                self.depth
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidParameter("steps must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon {}", self.epsilon)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Example {
    #[serde(rename = "ex1")]
    Ex1,
    #[serde(rename = "goranH")]
    GoranH,
    #[serde(rename = "ex2")]
    Ex2,
    #[serde(rename = "omegaPLUS")]
    OmegaPlus,
    #[serde(rename = "ex22")]
    Ex22,
    #[serde(rename = "bluy")]
    Bluy,
    #[serde(rename = "ex22-inverse")]
    Ex22Inverse,
    #[serde(rename = "tistile")]
    Tistile,
    #[serde(rename = "rene2")]
    Rene2,
    #[serde(rename = "star3")]
    Star3,
}

impl Example {
    pub const ALL: [Example; 10] = [
        Example::Ex1,
        Example::GoranH,
        Example::Ex2,
        Example::OmegaPlus,
        Example::Ex22,
        Example::Bluy,
        Example::Ex22Inverse,
        Example::Tistile,
        Example::Rene2,
        Example::Star3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Example::Ex1 => "ex1",
            Example::GoranH => "goranH",
            Example::Ex2 => "ex2",
            Example::OmegaPlus => "omegaPLUS",
            Example::Ex22 => "ex22",
            Example::Bluy => "bluy",
            Example::Ex22Inverse => "ex22-inverse",
            Example::Tistile => "tistile",
            Example::Rene2 => "rene2",
            Example::Star3 => "star3",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Example::Ex1 => "cross at 1/2: {1/2} is 1-invariant, not inf-invariant",
            Example::GoranH => "cross at 1/2: inf-minimal, not 1-minimal",
            Example::Ex2 => "cross at 1/2: 2plus-minimal, not 1plus-minimal",
            Example::OmegaPlus => "cross at 1/2: 2omega-minimal, not 1omega-minimal",
            Example::Ex22 => "t/2 + 1/2 plus a vertical at 1: inf-minimal, not 3plus-minimal",
            Example::Bluy => "same relation: not inf-backward minimal",
            Example::Ex22Inverse => "inverse of ex22: inf-backward minimal, not inf-minimal",
            Example::Tistile => "rotation by lambda: no vertical or horizontal piece, 1-minimal",
            Example::Rene2 => {
                "diagonal, horizontal at 1/2 and dyadic point pairs: 2plus, not 2minus"
            }
            Example::Star3 => "finite star on three points",
        }
    }
}

impl std::str::FromStr for Example {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Example::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

pub fn list() -> Vec<&'static str> {
    Example::ALL.iter().map(|e| e.name()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedExample {
    pub example: Example,
    pub params: Params,
    pub relation: AnyRelation,
    /// Descriptions of the facts [`verify`] checks, in order.
    pub expected: Vec<&'static str>,
    pub notes: Vec<String>,
}

impl NamedExample {
    pub fn name(&self) -> &'static str {
        self.example.name()
    }

    fn segments(&self) -> &SegmentRelation {
        match &self.relation {
            AnyRelation::Segments(g) => g,
            AnyRelation::Finite(_) => unreachable!("{} is a segment example", self.name()),
        }
    }

    fn finite(&self) -> &FiniteRelation {
        match &self.relation {
            AnyRelation::Finite(g) => g,
            AnyRelation::Segments(_) => unreachable!("{} is a finite example", self.name()),
        }
    }
}

fn seg(x1: f64, y1: f64, x2: f64, y2: f64) -> Segment {
    Segment::new(x1, y1, x2, y2).expect("corpus coordinates lie in the unit square")
}

pub fn cross() -> SegmentRelation {
    SegmentRelation::from_segments(vec![seg(0.0, 0.5, 1.0, 0.5), seg(0.5, 0.0, 0.5, 1.0)])
        .expect("nonempty")
}

pub fn ex22() -> SegmentRelation {
    SegmentRelation::from_segments(vec![seg(0.0, 0.5, 1.0, 1.0), seg(1.0, 0.0, 1.0, 1.0)])
        .expect("nonempty")
}

pub fn tistile(lambda: f64) -> SegmentRelation {
    SegmentRelation::from_segments(vec![
        seg(0.0, lambda, 1.0 - lambda, 1.0),
        seg(1.0 - lambda, 0.0, 1.0, lambda),
    ])
    .expect("nonempty")
}

/// The dyadic point pairs `d ↦ d ∓ 2^-(n+1)` for `d = k/2^n`, `k` odd, `n ≤ depth`.
pub fn dyadic_pairs(depth: u32) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for n in 1..=depth {
        let scale = (1u64 << n) as f64;
        for k in (1..(1u64 << n)).step_by(2) {
            let d = k as f64 / scale;
            out.push((d, (2 * k - 1) as f64 / (2.0 * scale)));
            out.push((d, (2 * k + 1) as f64 / (2.0 * scale)));
        }
    }
    out
}

pub fn rene2(depth: u32) -> SegmentRelation {
    let mut segments = vec![seg(0.0, 0.5, 1.0, 0.5), seg(0.0, 0.0, 1.0, 1.0)];
    segments.extend(
        dyadic_pairs(depth)
            .into_iter()
            .map(|(x, y)| seg(x, y, x, y)),
    );
    SegmentRelation::from_segments(segments).expect("nonempty")
}

pub fn star3() -> FiniteRelation {
    FiniteRelation::new(3, [(0, 1), (1, 1), (2, 1), (1, 0), (1, 2)]).expect("valid star")
}

/// `{1 - 2^-k : 0 ≤ k ≤ 60}`, with 1 adjoined when `closed`.
pub fn geometric_set(closed: bool) -> IntervalSet {
    let pts = (0..=60).map(|k| 1.0 - 0.5f64.powi(k));
    if closed {
        IntervalSet::from_points(pts.chain([1.0]))
    } else {
        IntervalSet::from_points(pts)
    }
}

pub fn build(name: &str, params: &Params) -> Result<NamedExample> {
    let example: Example = name.parse()?;
    params.check()?;
    let relation = match example {
        Example::Ex1 | Example::GoranH | Example::Ex2 | Example::OmegaPlus => cross().into(),
        Example::Ex22 | Example::Bluy => ex22().into(),
        Example::Ex22Inverse => ex22().inverse().into(),
        Example::Tistile => tistile(params.lambda).into(),
        Example::Rene2 => rene2(params.depth).into(),
        Example::Star3 => star3().into(),
    };
    let mut notes = Vec::new();
    if example == Example::Rene2 {
        notes.push(format!(
            "dyadic pairs truncated at depth {}; orbit density is certified only at resolution 2^-{}",
            params.depth,
            params.depth - 1
        ));
    }
    if matches!(example, Example::Tistile | Example::Rene2) {
        notes.push("minimality of the untruncated relation is outside numeric reach; density is the reported diagnostic".into());
    }
    Ok(NamedExample {
        example,
        params: *params,
        relation,
        expected: facts(example).iter().map(|f| f.0).collect(),
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactResult {
    pub fact: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub example: Example,
    pub params: Params,
    pub facts: Vec<FactResult>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.facts.iter().all(|f| f.passed)
    }
}

/// Runs every fact of the example. Errors inside a check become failed entries.
pub fn verify(ex: &NamedExample) -> VerifyReport {
    let facts = facts(ex.example)
        .iter()
        .map(|&(fact, check)| match check(ex) {
            Ok((passed, detail)) => FactResult {
                fact,
                passed,
                detail,
            },
            Err(e) => FactResult {
                fact,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect();
    VerifyReport {
        example: ex.example,
        params: ex.params,
        facts,
        notes: ex.notes.clone(),
    }
}

type Check = fn(&NamedExample) -> Result<(bool, String)>;

fn facts(e: Example) -> &'static [(&'static str, Check)] {
    match e {
        Example::Ex1 => &[
            ("{1/2} is forward 1-invariant", centre_one_invariant),
            (
                "{1/2} is not forward inf-invariant",
                centre_not_inf_invariant,
            ),
        ],
        Example::GoranH => &[
            ("witness {1/2} refutes 1-minimality", centre_witness),
            (
                "outer closure floods from 100 starts",
                outer_floods_everywhere,
            ),
            ("no library set refutes inf-minimality", no_inf_witness),
        ],
        Example::Ex2 => &[
            ("greedy orbit of 0.3 is dense (2000 steps)", greedy_dense),
            ("constant orbit at 1/2 is not dense", constant_not_dense),
        ],
        Example::OmegaPlus => &[
            ("greedy orbit tail is dense (5000 steps)", greedy_tail_dense),
            ("constant orbit has omega estimate {1/2}", constant_omega),
        ],
        Example::Ex22 => &[
            (
                "inner closure of {0} is the geometric set",
                inner_is_geometric,
            ),
            ("inner closure of {0} has max_gap >= 0.2", inner_not_dense),
            ("outer closure of {0} floods at 1e-3", outer_floods_ex22),
        ],
        Example::Bluy => &[
            (
                "geometric set is backward inf-invariant",
                geometric_backward_invariant,
            ),
            ("geometric set is proper", geometric_proper),
        ],
        Example::Ex22Inverse => &[
            (
                "geometric set is forward inf-invariant",
                geometric_forward_invariant,
            ),
            (
                "backward outer closure of {0} floods at 1e-3",
                backward_outer_floods,
            ),
        ],
        Example::Tistile => &[
            (
                "forward orbit of 0 is the rotation by lambda",
                rotation_forward,
            ),
            (
                "backward orbit of 0 is the rotation by -lambda",
                rotation_backward,
            ),
            ("forward orbit of 0 is dense", rotation_forward_dense),
            ("backward orbit of 0 is dense", rotation_backward_dense),
        ],
        Example::Rene2 => &[
            ("predecessors(1) = {1}", rene2_predecessors),
            (
                "every backward orbit of 1 is constant",
                rene2_backward_constant,
            ),
            ("alpha estimate at 1 is {1}", rene2_alpha),
            (
                "greedy forward orbit of 0 has max_gap <= 2^-7 (5000 steps)",
                rene2_greedy,
            ),
        ],
        Example::Star3 => &[
            ("{1} is forward 1-invariant, not inf-invariant", star_centre),
            ("exactly the inf, 2 and 3 kinds hold", star_flags),
            ("witness against 1-minimality is {1}", star_witness),
        ],
    }
}

fn gap_detail(g: f64) -> String {
    format!("max_gap {g:.3e}")
}

fn centre_one_invariant(ex: &NamedExample) -> Result<(bool, String)> {
    let c = check_invariant_candidate(
        ex.segments(),
        &IntervalSet::point(0.5),
        InvarianceKind::Forward1,
    )?;
    Ok((c.holds, format!("{c:?}")))
}

fn centre_not_inf_invariant(ex: &NamedExample) -> Result<(bool, String)> {
    let c = check_invariant_candidate(
        ex.segments(),
        &IntervalSet::point(0.5),
        InvarianceKind::ForwardInf,
    )?;
    Ok((!c.holds, format!("violation {:?}", c.violation)))
}

fn centre_witness(ex: &NamedExample) -> Result<(bool, String)> {
    let s = search_witness(ex.segments(), MinimalityKind::One)?;
    Ok((
        s.witness == Some(IntervalSet::point(0.5)),
        format!("witness {:?}", s.witness),
    ))
}

fn outer_floods_everywhere(ex: &NamedExample) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let s0 = IntervalSet::point(k as f64 / 99.0);
        let res = invariant_closure(ex.segments(), &s0, ClosureMode::Outer, 1e-3, 100)?;
        worst = worst.max(res.set.max_gap());
    }
    Ok((worst < ex.params.epsilon, gap_detail(worst)))
}

fn no_inf_witness(ex: &NamedExample) -> Result<(bool, String)> {
    let s = search_witness(ex.segments(), MinimalityKind::Inf)?;
    Ok((
        s.witness.is_none(),
        format!("{} candidates tried", s.candidates_tried),
    ))
}

fn greedy_dense(ex: &NamedExample) -> Result<(bool, String)> {
    let run = simulate_orbit(
        ex.segments(),
        0.3,
        2000,
        OrbitPolicy::Greedy,
        ex.params.seed,
    )?;
    let g = density(run.orbit.points())?.max_gap;
    Ok((!run.truncated && g < ex.params.epsilon, gap_detail(g)))
}

fn constant_orbit(ex: &NamedExample, len: usize) -> Result<OrbitPrefix<f64>> {
    OrbitPrefix::new(ex.segments(), vec![0.5; len])
}

fn constant_not_dense(ex: &NamedExample) -> Result<(bool, String)> {
    let orbit = constant_orbit(ex, 2000)?;
    let g = density(orbit.points())?.max_gap;
    Ok((g == 0.5, gap_detail(g)))
}

fn greedy_tail_dense(ex: &NamedExample) -> Result<(bool, String)> {
    let run = simulate_orbit(
        ex.segments(),
        0.3,
        5000,
        OrbitPolicy::Greedy,
        ex.params.seed,
    )?;
    let g = density(&omega_estimate(run.orbit.points(), 0.5)?)?.max_gap;
    Ok((g < ex.params.epsilon, gap_detail(g)))
}

fn constant_omega(ex: &NamedExample) -> Result<(bool, String)> {
    let tail = omega_estimate(constant_orbit(ex, 2000)?.points(), 0.5)?;
    let g = density(&tail)?.max_gap;
    Ok((tail.iter().all(|&x| x == 0.5) && g == 0.5, gap_detail(g)))
}

fn inner_closure_ex22(ex: &NamedExample) -> Result<IntervalSet> {
    Ok(invariant_closure(
        ex.segments(),
        &IntervalSet::point(0.0),
        ClosureMode::Inner,
        0.0,
        60,
    )?
    .set)
}

fn inner_is_geometric(ex: &NamedExample) -> Result<(bool, String)> {
    let d = inner_closure_ex22(ex)?.hausdorff(&geometric_set(false));
    Ok((d < 1e-9, format!("hausdorff {d:.3e}")))
}

fn inner_not_dense(ex: &NamedExample) -> Result<(bool, String)> {
    let g = inner_closure_ex22(ex)?.max_gap();
    Ok((g >= 0.2, gap_detail(g)))
}

fn outer_floods(g: &SegmentRelation) -> Result<(bool, String)> {
    let res = invariant_closure(g, &IntervalSet::point(0.0), ClosureMode::Outer, 1e-3, 1000)?;
    let gap = res.set.max_gap();
    Ok((
        res.converged && gap < 1e-3,
        format!("{} after {} iterations", gap_detail(gap), res.iterations),
    ))
}

fn outer_floods_ex22(ex: &NamedExample) -> Result<(bool, String)> {
    outer_floods(ex.segments())
}

fn backward_outer_floods(ex: &NamedExample) -> Result<(bool, String)> {
    outer_floods(&ex.segments().inverse())
}

fn geometric_backward_invariant(ex: &NamedExample) -> Result<(bool, String)> {
    let c = check_invariant_candidate(
        ex.segments(),
        &geometric_set(true).union(&IntervalSet::point(0.0)),
        InvarianceKind::BackwardInf,
    )?;
    Ok((c.holds, format!("{c:?}")))
}

fn geometric_proper(_: &NamedExample) -> Result<(bool, String)> {
    let a = geometric_set(true);
    Ok((!a.is_empty() && a.max_gap() >= 0.2, gap_detail(a.max_gap())))
}

fn geometric_forward_invariant(ex: &NamedExample) -> Result<(bool, String)> {
    let c = check_invariant_candidate(
        ex.segments(),
        &geometric_set(true),
        InvarianceKind::ForwardInf,
    )?;
    Ok((c.holds, format!("{c:?}")))
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

// Largest deviation from k ↦ frac(x0 + k·shift), measured on the circle.
fn rotation_error(points: &[f64], shift: f64) -> f64 {
    points
        .iter()
        .enumerate()
        .map(|(k, &x)| circle_distance(x, (k as f64 * shift).rem_euclid(1.0)))
        .fold(0.0, f64::max)
}

fn rotation_run(ex: &NamedExample, backward: bool) -> Result<Vec<f64>> {
    let p = &ex.params;
    let run = if backward {
        simulate_backward_orbit(ex.segments(), 0.0, p.steps, OrbitPolicy::First, p.seed)?
    } else {
        simulate_orbit(ex.segments(), 0.0, p.steps, OrbitPolicy::First, p.seed)?
    };
    if run.truncated {
        return Err(Error::DeadEnd {
            at: format!("{}", run.orbit.last()),
        });
    }
    Ok(run.orbit.into_points())
}

fn rotation_forward(ex: &NamedExample) -> Result<(bool, String)> {
    let e = rotation_error(&rotation_run(ex, false)?, ex.params.lambda);
    Ok((e < 1e-9, format!("pointwise error {e:.3e}")))
}

fn rotation_backward(ex: &NamedExample) -> Result<(bool, String)> {
    let e = rotation_error(&rotation_run(ex, true)?, -ex.params.lambda);
    Ok((e < 1e-9, format!("pointwise error {e:.3e}")))
}

fn rotation_forward_dense(ex: &NamedExample) -> Result<(bool, String)> {
    let g = density(&rotation_run(ex, false)?)?.max_gap;
    Ok((g < ex.params.epsilon, gap_detail(g)))
}

fn rotation_backward_dense(ex: &NamedExample) -> Result<(bool, String)> {
    let g = density(&rotation_run(ex, true)?)?.max_gap;
    Ok((g < ex.params.epsilon, gap_detail(g)))
}

fn rene2_predecessors(ex: &NamedExample) -> Result<(bool, String)> {
    let p = ex.segments().predecessors(1.0)?;
    Ok((p == IntervalSet::point(1.0), format!("{:?}", p.intervals())))
}

fn rene2_backward_constant(ex: &NamedExample) -> Result<(bool, String)> {
    let g = ex.segments();
    let mut ok = true;
    for policy in [OrbitPolicy::First, OrbitPolicy::Random, OrbitPolicy::Greedy] {
        let run = simulate_backward_orbit(g, 1.0, 1000, policy, ex.params.seed)?;
        ok &= !run.truncated && run.orbit.points().iter().all(|&x| x == 1.0);
    }
    Ok((ok, "first, random and greedy policies".into()))
}

fn rene2_alpha(ex: &NamedExample) -> Result<(bool, String)> {
    let run = simulate_backward_orbit(
        ex.segments(),
        1.0,
        1000,
        OrbitPolicy::Random,
        ex.params.seed,
    )?;
    let tail = alpha_estimate(run.orbit.points(), 0.5)?;
    let g = density(&tail)?.max_gap;
    // the sentinel at 0 makes the gap of {1} the whole interval
    Ok((tail.iter().all(|&x| x == 1.0) && g == 1.0, gap_detail(g)))
}

fn rene2_greedy(ex: &NamedExample) -> Result<(bool, String)> {
    let run = simulate_orbit(
        ex.segments(),
        0.0,
        5000,
        OrbitPolicy::Greedy,
        ex.params.seed,
    )?;
    let g = density(run.orbit.points())?.max_gap;
    Ok((!run.truncated && g <= 2f64.powi(-7), gap_detail(g)))
}

fn star_centre(ex: &NamedExample) -> Result<(bool, String)> {
    let a = VertexSet::singleton(1);
    let one = is_invariant(ex.finite(), a, InvarianceKind::Forward1)?;
    let inf = is_invariant(ex.finite(), a, InvarianceKind::ForwardInf)?;
    Ok((one && !inf, format!("forward-1 {one}, forward-inf {inf}")))
}

fn star_flags(ex: &NamedExample) -> Result<(bool, String)> {
    use MinimalityKind::*;
    let report = classify(ex.finite());
    let expected = [
        Inf, InfBack, TwoPlus, ThreePlus, TwoMinus, ThreeMinus, TwoOmega, ThreeOmega, TwoAlpha,
        ThreeAlpha,
    ];
    let ok = MinimalityKind::ALL
        .into_iter()
        .all(|k| report.flags[k] == expected.contains(&k));
    let held: Vec<&str> = report
        .flags
        .iter()
        .filter(|(_, b)| *b)
        .map(|(k, _)| k.name())
        .collect();
    Ok((ok, held.join(",")))
}

fn star_witness(ex: &NamedExample) -> Result<(bool, String)> {
    let w = witness(ex.finite(), MinimalityKind::One);
    let ok = w
        == Some(Witness::Subset {
            points: VertexSet::singleton(1),
        });
    Ok((ok, format!("{w:?}")))
}
