//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use crdyn_core::audit::{
    functional_collapse, probe, run_audit, AuditConfig, AuditReport, ProbePair, COLLAPSE_NOTICE,
};
use crdyn_core::corpus::{cross, ex22, geometric_set, rene2, star3, tistile};
use crdyn_core::numeric::{
    density, invariant_closure, omega_estimate, search_witness, simulate_backward_orbit,
    simulate_orbit, ClosureMode,
};
use crdyn_core::{IntervalSet, MinimalityKind, OrbitPolicy, OrbitPrefix, Relation};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:.2?}, limit {limit:?}"))
}

fn tally(report: &AuditReport, checks: &[&str]) -> Result<u64, String> {
    let mut checked = 0;
    for &name in checks {
        let t = report
            .checks
            .get(name)
            .ok_or(format!("check {name} never ran"))?;
        ensure(
            t.violations == 0,
            format!(
                "{name}: {} violations, first {:?}",
                t.violations,
                report.violations.first()
            ),
        )?;
        checked += t.checked;
    }
    Ok(checked)
}

fn oracle_agreement(report: &AuditReport, took: Duration) -> Outcome {
    ensure(
        report.exhaustive_instances == 527,
        format!("{} exhaustive instances", report.exhaustive_instances),
    )?;
    ensure(
        report.random_instances >= 10_000,
        format!("{} random instances", report.random_instances),
    )?;
    tally(report, &["oracle-agreement"])?;
    ensure(
        took < Duration::from_secs(60),
        format!("audit took {took:.2?}"),
    )?;
    Ok(format!(
        "{} + {} instances, 16 kinds each, 0 mismatches, {took:.2?}",
        report.exhaustive_instances, report.random_instances
    ))
}

fn lattice(report: &AuditReport) -> Outcome {
    let checks = [
        "inf-invariant-is-1-invariant",
        "1-implies-inf",
        "1back-implies-infback",
        "forward-chain",
        "omega-matches-plus",
        "backward-chain",
        "minus-matches-plus",
        "alpha-matches-minus",
        "full-projections",
        "full-projections-backward",
        "limit-ordering",
        "shift-minimal-implies-1",
    ];
    let n = tally(report, &checks)?;
    Ok(format!(
        "{} checks over {} rules, 0 violations",
        n,
        checks.len()
    ))
}

fn conjugacy(report: &AuditReport) -> Outcome {
    ensure(
        report.conjugacy_pairs >= 1000,
        format!("{} pairs", report.conjugacy_pairs),
    )?;
    let pairs = tally(report, &["conjugacy"])?;
    // 527 relations on at most three points times their permutations
    let subsets = tally(report, &["subset-transport"])?;
    ensure(
        subsets == 1 + 15 * 2 + 511 * 6,
        format!("{subsets} subset-transport cases"),
    )?;
    Ok(format!(
        "{pairs} permuted pairs and {subsets} exhaustive subset cases, 0 violations"
    ))
}

fn ex22_separation() -> Outcome {
    let start = Instant::now();
    let g = ex22();
    let inner = invariant_closure(&g, &IntervalSet::point(0.0), ClosureMode::Inner, 0.0, 60)
        .map_err(|e| e.to_string())?;
    let expected = IntervalSet::from_points((0..=60).map(|k| 1.0 - 0.5f64.powi(k)));
    let d = inner.set.hausdorff(&expected);
    ensure(
        d < 1e-9,
        format!("inner closure at Hausdorff {d:e} from the geometric set"),
    )?;
    ensure(
        inner.set.hausdorff(&geometric_set(false)) < 1e-9,
        "corpus geometric set differs",
    )?;
    let inner_gap = inner.set.max_gap();
    ensure(inner_gap >= 0.2, format!("inner max_gap {inner_gap}"))?;
    let outer = invariant_closure(&g, &IntervalSet::point(0.0), ClosureMode::Outer, 1e-3, 1000)
        .map_err(|e| e.to_string())?;
    ensure(outer.converged, "outer closure did not converge")?;
    let outer_gap = outer.set.max_gap();
    ensure(outer_gap < 1e-3, format!("outer max_gap {outer_gap}"))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "inner hausdorff {d:.1e}, inner gap {inner_gap}, outer gap {outer_gap:.1e} after {} iterations, {:.2?}",
        outer.iterations,
        start.elapsed()
    ))
}

fn tistile_rotation() -> Outcome {
    let start = Instant::now();
    let lambda = (5f64.sqrt() - 1.0) / 2.0;
    let g = tistile(lambda);
    let mut worst_err: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for (backward, shift) in [(false, lambda), (true, -lambda)] {
        let run = if backward {
            simulate_backward_orbit(&g, 0.0, 10_000, OrbitPolicy::First, 0)
        } else {
            simulate_orbit(&g, 0.0, 10_000, OrbitPolicy::First, 0)
        }
        .map_err(|e| e.to_string())?;
        ensure(
            !run.truncated && run.orbit.len() == 10_001,
            "orbit cut short",
        )?;
        for (k, &x) in run.orbit.points().iter().enumerate() {
            let exact = (k as f64 * shift).rem_euclid(1.0);
            let d = (x - exact).abs();
            worst_err = worst_err.max(d.min(1.0 - d));
        }
        worst_gap = worst_gap.max(
            density(run.orbit.points())
                .map_err(|e| e.to_string())?
                .max_gap,
        );
    }
    ensure(worst_err < 1e-9, format!("pointwise error {worst_err:e}"))?;
    ensure(worst_gap < 1e-2, format!("max_gap {worst_gap}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "pointwise error {worst_err:.1e}, max_gap {worst_gap:.2e}, {:.2?}",
        start.elapsed()
    ))
}

fn ex1_family() -> Outcome {
    let g = cross();
    let w = search_witness(&g, MinimalityKind::One).map_err(|e| e.to_string())?;
    ensure(
        w.witness == Some(IntervalSet::point(0.5)),
        format!("witness {:?}", w.witness),
    )?;
    let run = simulate_orbit(&g, 0.3, 2000, OrbitPolicy::Greedy, 0).map_err(|e| e.to_string())?;
    ensure(!run.truncated, "greedy orbit cut short")?;
    let gap = density(run.orbit.points())
        .map_err(|e| e.to_string())?
        .max_gap;
    ensure(gap < 1e-2, format!("greedy max_gap {gap}"))?;
    let constant = OrbitPrefix::new(&g, vec![0.5; 2001]).map_err(|e| e.to_string())?;
    let tail = omega_estimate(constant.points(), 0.5).map_err(|e| e.to_string())?;
    ensure(tail.iter().all(|&x| x == 0.5), "constant tail left {1/2}")?;
    let tail_gap = density(&tail).map_err(|e| e.to_string())?.max_gap;
    ensure(tail_gap == 0.5, format!("constant tail max_gap {tail_gap}"))?;
    Ok(format!(
        "witness {{1/2}}, greedy max_gap {gap:.2e}, omega estimate {{1/2}} with max_gap {tail_gap}"
    ))
}

fn rene2_depth_ten() -> Outcome {
    let g = rene2(10);
    let pred = g.predecessors(1.0).map_err(|e| e.to_string())?;
    ensure(
        pred == IntervalSet::point(1.0),
        format!("predecessors(1) = {:?}", pred.intervals()),
    )?;
    for policy in [OrbitPolicy::First, OrbitPolicy::Random, OrbitPolicy::Greedy] {
        for seed in 0..5 {
            let run =
                simulate_backward_orbit(&g, 1.0, 1000, policy, seed).map_err(|e| e.to_string())?;
            ensure(
                !run.truncated && run.orbit.points().iter().all(|&x| x == 1.0),
                format!("{} backward orbit left 1", policy.name()),
            )?;
        }
    }
    let run = simulate_orbit(&g, 0.0, 5000, OrbitPolicy::Greedy, 0).map_err(|e| e.to_string())?;
    ensure(!run.truncated, "greedy orbit cut short")?;
    let gap = density(run.orbit.points())
        .map_err(|e| e.to_string())?
        .max_gap;
    ensure(gap <= 2f64.powi(-7), format!("greedy max_gap {gap}"))?;
    Ok(format!(
        "predecessors(1) = {{1}}, backward orbits constant, greedy max_gap {gap:.2e}"
    ))
}

fn functional() -> Outcome {
    let r = functional_collapse(4).map_err(|e| e.to_string())?;
    ensure(r.maps == 256, format!("{} maps", r.maps))?;
    ensure(
        r.violations.is_empty(),
        format!("violations {:?}", r.violations),
    )?;
    ensure(
        r.single_cycles == 6,
        format!("{} single cycles", r.single_cycles),
    )?;
    Ok("256 self-maps, flags constant and equal to single-cycle-ness (6 cycles)".into())
}

fn open_problem_probe() -> Outcome {
    let cfg = AuditConfig::default();
    let open = probe(&cfg, &ProbePair::OPEN, false).map_err(|e| e.to_string())?;
    for f in &open.findings {
        ensure(
            f.count == 0,
            format!(
                "{} without {}: {:?}",
                f.pair.holds.name(),
                f.pair.fails.name(),
                f.witnesses.first()
            ),
        )?;
    }
    ensure(
        open.findings.len() == 3 && open.notice == COLLAPSE_NOTICE,
        "collapse notice missing",
    )?;
    let sanity = probe(&cfg, &[ProbePair::SANITY], false).map_err(|e| e.to_string())?;
    let found = &sanity.findings[0];
    ensure(found.count > 0, "sanity pair found nothing")?;
    ensure(
        found.witnesses.contains(&star3().encode()),
        "star not among sanity witnesses",
    )?;
    Ok(format!(
        "0 witnesses for 3 open pairs over {} instances, notice emitted, sanity pair {} witnesses",
        open.instances, found.count
    ))
}

fn main() {
    let start = Instant::now();
    let audit = run_audit(&AuditConfig::default());
    let took = start.elapsed();

    let from_audit = |f: &dyn Fn(&AuditReport) -> Outcome| -> Outcome {
        match &audit {
            Ok(r) => f(r),
            Err(e) => Err(format!("audit failed: {e}")),
        }
    };
    let results: Vec<(&str, Outcome)> = vec![
        (
            "1 oracle agreement",
            from_audit(&|r| oracle_agreement(r, took)),
        ),
        ("2 theorem lattice", from_audit(&lattice)),
        ("3 conjugacy invariance", from_audit(&conjugacy)),
        ("4 ex22 separation", ex22_separation()),
        ("5 tistile rotation", tistile_rotation()),
        ("6 ex1 family", ex1_family()),
        ("7 rene2 depth 10", rene2_depth_ten()),
        ("8 functional collapse", functional()),
        ("9 open-problem probe", open_problem_probe()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
