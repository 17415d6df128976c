//! Cross-checks of the finite deciders against the brute-force oracle and
//! against the implication lattice between the sixteen notions.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conjugacy::{check_conjugacy_finite, subset_transport_violations};
use crate::error::{Error, Result};
use crate::finite::{
    decide_minimal_fast, inf_invariant, is_shift_minimal, one_invariant, oracle_flags, Flags,
    MinimalityKind, ORBIT_ORACLE_CAP,
};
use crate::relation::FiniteRelation;

/// Violations kept verbatim in a report; the tallies count all of them.
pub const MAX_REPORTED: usize = 50;

/// A stand-in for [`decide_minimal_fast`], for exercising the audit itself.
pub type Decider = fn(&FiniteRelation, MinimalityKind) -> bool;

#[derive(Debug, Clone, Serialize)]
pub struct AuditConfig {
    pub n_max: usize,
    pub exhaustive_n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Random (relation, permutation) pairs for the conjugacy check.
    pub conjugacy_pairs: usize,
    pub conjugacy_n_max: usize,
    #[serde(skip)]
    pub fast: Decider,
}

fn default_fast(g: &FiniteRelation, k: MinimalityKind) -> bool {
    decide_minimal_fast(g, k)
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            n_max: 7,
            exhaustive_n: 3,
            samples: 10_000,
            seed: 0,
            conjugacy_pairs: 1000,
            conjugacy_n_max: 6,
            fast: default_fast,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=self.n_max).contains(&self.exhaustive_n) || self.n_max > ORBIT_ORACLE_CAP {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= exhaustive_n ({}) <= n_max ({}) <= {ORBIT_ORACLE_CAP}",
                self.exhaustive_n, self.n_max
            )));
        }
        if self.exhaustive_n > 4 {
            return Err(Error::CapExceeded {
                what: "exhaustive enumeration",
                requested: self.exhaustive_n as u128,
                cap: 4,
            });
        }
        if !(1..=ORBIT_ORACLE_CAP).contains(&self.conjugacy_n_max) {
            return Err(Error::InvalidParameter(format!(
                "conjugacy_n_max {}",
                self.conjugacy_n_max
            )));
        }
        Ok(())
    }
}

/// Every nonempty relation on `n` points, in increasing bit order.
pub fn all_relations(n: usize) -> impl Iterator<Item = FiniteRelation> {
    let bits = n * n;
    let mask = (1u64 << n) - 1;
    (1u64..(1u64 << bits)).map(move |code| {
        let rows = (0..n).map(|i| (code >> (i * n)) & mask).collect();
        FiniteRelation::from_rows(n, rows).expect("nonempty")
    })
}

/// A random nonempty relation on `n` points with a random edge density.
pub fn random_relation(n: usize, rng: &mut ChaCha8Rng) -> FiniteRelation {
    loop {
        let p: f64 = rng.random_range(0.05..0.7);
        let rows: Vec<u64> = (0..n)
            .map(|_| {
                (0..n)
                    .filter(|_| rng.random_bool(p))
                    .fold(0u64, |r, j| r | 1 << j)
            })
            .collect();
        if let Ok(g) = FiniteRelation::from_rows(n, rows) {
            return g;
        }
    }
}

/// The exhaustive instances followed by the seeded random ones.
pub fn instances(cfg: &AuditConfig) -> Vec<FiniteRelation> {
    let mut out: Vec<FiniteRelation> = (1..=cfg.exhaustive_n).flat_map(all_relations).collect();
    if cfg.n_max > cfg.exhaustive_n {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.samples {
            let n = rng.random_range(cfg.exhaustive_n + 1..=cfg.n_max);
            out.push(random_relation(n, &mut rng));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub instance: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub violations: u64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AuditReport {
    pub exhaustive_instances: usize,
    pub random_instances: usize,
    pub conjugacy_pairs: usize,
    pub checks: BTreeMap<&'static str, Tally>,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn total_violations(&self) -> u64 {
        self.checks.values().map(|t| t.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    fn record(
        &mut self,
        check: &'static str,
        ok: bool,
        g: &FiniteRelation,
        detail: impl FnOnce() -> String,
    ) {
        let t = self.checks.entry(check).or_default();
        t.checked += 1;
        if !ok {
            t.violations += 1;
            if self.violations.len() < MAX_REPORTED {
                self.violations.push(Violation {
                    check,
                    instance: g.encode(),
                    detail: detail(),
                });
            }
        }
    }
}

/// An implication or equivalence between flags.
struct Rule {
    name: &'static str,
    holds: fn(&Flags) -> bool,
}

fn implies(a: bool, b: bool) -> bool {
    !a || b
}

const RULES: &[Rule] = {
    use MinimalityKind::*;
    &[
        Rule {
            name: "1-implies-inf",
            holds: |f| implies(f[One], f[Inf]),
        },
        Rule {
            name: "1back-implies-infback",
            holds: |f| implies(f[OneBack], f[InfBack]),
        },
        Rule {
            name: "forward-chain",
            holds: |f| {
                f[One] == f[OnePlus]
                    && implies(f[OnePlus], f[TwoPlus])
                    && implies(f[TwoPlus], f[ThreePlus])
                    && implies(f[ThreePlus], f[Inf])
            },
        },
        Rule {
            name: "omega-matches-plus",
            holds: |f| {
                f[OneOmega] == f[OnePlus]
                    && f[TwoOmega] == f[TwoPlus]
                    && implies(f[ThreeOmega], f[ThreePlus])
            },
        },
        Rule {
            name: "backward-chain",
            holds: |f| {
                f[OneBack] == f[OneMinus]
                    && implies(f[OneMinus], f[TwoMinus])
                    && implies(f[TwoMinus], f[ThreeMinus])
                    && implies(f[ThreeMinus], f[InfBack])
            },
        },
        Rule {
            name: "minus-matches-plus",
            holds: |f| f[OneMinus] == f[OnePlus] && f[OneBack] == f[One],
        },
        Rule {
            name: "alpha-matches-minus",
            holds: |f| {
                f[OneAlpha] == f[OneMinus]
                    && f[TwoAlpha] == f[TwoMinus]
                    && implies(f[ThreeAlpha], f[ThreeMinus])
            },
        },
        Rule {
            name: "limit-ordering",
            holds: |f| {
                implies(f[OneOmega], f[TwoOmega])
                    && implies(f[TwoOmega], f[ThreeOmega])
                    && implies(f[OneAlpha], f[TwoAlpha])
                    && implies(f[TwoAlpha], f[ThreeAlpha])
            },
        },
        Rule {
            name: "finite-collapse",
            holds: |f| {
                let fwd = [TwoPlus, ThreePlus, TwoOmega, ThreeOmega, Inf];
                let bwd = [TwoMinus, ThreeMinus, TwoAlpha, ThreeAlpha, InfBack];
                fwd.iter().all(|&k| f[k] == f[Inf]) && bwd.iter().all(|&k| f[k] == f[InfBack])
            },
        },
    ]
};

const SURJECTIVE_FORWARD: [MinimalityKind; 5] = {
    use MinimalityKind::*;
    [One, Inf, OnePlus, TwoPlus, ThreePlus]
};

/// Whether the functional graph of a self-map is one cycle through every point.
pub fn is_single_cycle(g: &FiniteRelation) -> bool {
    let n = g.size();
    if !g.is_functional() || g.predecessor_rows().contains(&0) {
        return false;
    }
    let mut v = 0;
    for step in 1..=n {
        v = g.succ_set(v).first().expect("functional");
        if v == 0 {
            return step == n;
        }
    }
    false
}

fn check_instance(
    g: &FiniteRelation,
    cfg: &AuditConfig,
    report: &mut AuditReport,
) -> Result<Flags> {
    let oracle = oracle_flags(g)?;
    let fast = Flags::from_fn(|k| (cfg.fast)(g, k));
    report.record("oracle-agreement", oracle == fast, g, || {
        let kinds: Vec<&str> = oracle.differences(&fast).iter().map(|k| k.name()).collect();
        format!("fast and oracle differ on {}", kinds.join(","))
    });

    let n = g.size();
    let (succ, pred) = (g.successor_rows(), g.predecessor_rows());
    let nested = (0..1u64 << n).all(|a| {
        implies(inf_invariant(succ, a), one_invariant(succ, a))
            && implies(inf_invariant(pred, a), one_invariant(pred, a))
    });
    report.record("inf-invariant-is-1-invariant", nested, g, || {
        "an inf-invariant subset is not 1-invariant".into()
    });

    for rule in RULES {
        report.record(rule.name, (rule.holds)(&oracle), g, || {
            format!("flags {}", flag_string(&oracle))
        });
    }

    let p1 = succ.iter().all(|&r| r != 0);
    let p2 = pred.iter().all(|&r| r != 0);
    let fwd_any = SURJECTIVE_FORWARD.iter().any(|&k| oracle[k]);
    let bwd_any = SURJECTIVE_FORWARD.iter().any(|&k| oracle[k.mirrored()]);
    report.record("full-projections", implies(fwd_any, p1 && p2), g, || {
        format!("p1_full {p1}, p2_full {p2}")
    });
    report.record(
        "full-projections-backward",
        implies(bwd_any, p1 && p2),
        g,
        || format!("p1_full {p1}, p2_full {p2}"),
    );

    if p1 && p2 {
        let shift = is_shift_minimal(g)?;
        report.record(
            "shift-minimal-implies-1",
            implies(shift, oracle[MinimalityKind::One]),
            g,
            || "shift-minimal but not 1-minimal".into(),
        );
    }

    if g.is_functional() {
        let cycle = is_single_cycle(g);
        report.record(
            "functional-collapse",
            oracle.all_equal() && oracle[MinimalityKind::One] == cycle,
            g,
            || format!("single cycle {cycle}, flags {}", flag_string(&oracle)),
        );
    }
    Ok(oracle)
}

fn flag_string(f: &Flags) -> String {
    f.iter().map(|(_, b)| if b { '1' } else { '0' }).collect()
}

/// Oracle agreement, the implication lattice and conjugacy invariance.
pub fn run_audit(cfg: &AuditConfig) -> Result<AuditReport> {
    cfg.validate()?;
    let mut report = AuditReport::default();
    let all = instances(cfg);
    report.exhaustive_instances = (1..=cfg.exhaustive_n)
        .map(|n| (1usize << (n * n)) - 1)
        .sum();
    report.random_instances = all.len() - report.exhaustive_instances;
    for g in &all {
        check_instance(g, cfg, &mut report)?;
    }

    // permutations of random relations
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    for _ in 0..cfg.conjugacy_pairs {
        let n = rng.random_range(1..=cfg.conjugacy_n_max);
        let g = random_relation(n, &mut rng);
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(&mut rng);
        let rep = check_conjugacy_finite(&g, &map)?;
        report.record("conjugacy", rep.holds(), &g, || {
            let kinds: Vec<&str> = rep.disagreements().iter().map(|k| k.name()).collect();
            format!("permutation {map:?} changes {}", kinds.join(","))
        });
    }
    report.conjugacy_pairs = cfg.conjugacy_pairs;

    // subset transport over every relation and permutation on at most three points
    for n in 1..=cfg.exhaustive_n.min(3) {
        let perms = permutations(n);
        for g in all_relations(n) {
            for map in &perms {
                let bad = subset_transport_violations(&g, map)?;
                report.record("subset-transport", bad.is_empty(), &g, || {
                    format!("permutation {map:?}, first failure {:?}", bad.first())
                });
            }
        }
    }
    Ok(report)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let v = left.remove(i);
            prefix.push(v);
            go(prefix, left, out);
            prefix.pop();
            left.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Per-instance result of the self-map sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CollapseReport {
    pub n: usize,
    pub maps: usize,
    /// Maps whose flags are not all equal, or not equal to single-cycle-ness.
    pub violations: Vec<String>,
    pub single_cycles: usize,
}

/// Classifies the graph of every self-map of `n` points.
pub fn functional_collapse(n: usize) -> Result<CollapseReport> {
    if n == 0 || n > 6 {
        return Err(Error::InvalidParameter(format!(
            "functional sweep needs 1 <= n <= 6, got {n}"
        )));
    }
    let total = n.pow(n as u32);
    let mut violations = Vec::new();
    let mut single_cycles = 0;
    for code in 0..total {
        let map: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
        let g = FiniteRelation::functional(&map)?;
        let flags = oracle_flags(&g)?;
        let cycle = is_single_cycle(&g);
        single_cycles += usize::from(cycle);
        if !(flags.all_equal() && flags[MinimalityKind::One] == cycle) {
            violations.push(g.encode());
        }
    }
    Ok(CollapseReport {
        n,
        maps: total,
        violations,
        single_cycles,
    })
}

/// A pair of notions where the first is known to hold and the second to fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProbePair {
    pub holds: MinimalityKind,
    pub fails: MinimalityKind,
}

impl ProbePair {
    pub const OPEN: [ProbePair; 3] = {
        use MinimalityKind::*;
        [
            ProbePair {
                holds: ThreePlus,
                fails: TwoPlus,
            },
            ProbePair {
                holds: ThreeOmega,
                fails: TwoOmega,
            },
            ProbePair {
                holds: ThreeMinus,
                fails: TwoMinus,
            },
        ]
    };

    pub const SANITY: ProbePair = ProbePair {
        holds: MinimalityKind::TwoPlus,
        fails: MinimalityKind::OnePlus,
    };
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeFinding {
    pub pair: ProbePair,
    pub count: usize,
    /// Smallest witnesses first, at most [`MAX_REPORTED`].
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub instances: usize,
    pub functional_only: bool,
    pub findings: Vec<ProbeFinding>,
    pub notice: &'static str,
}

impl ProbeReport {
    pub fn total_witnesses(&self) -> usize {
        self.findings.iter().map(|f| f.count).sum()
    }
}

pub const COLLAPSE_NOTICE: &str = "On a finite carrier the notions 2plus, 3plus, 2omega, 3omega and inf \
all coincide with strong connectivity (backward twins likewise), so a finite relation can never separate \
a 3-kind from its 2-kind. Zero findings for those pairs are forced by finiteness and carry no information \
about infinite compact spaces.";

/// Searches the audit instances for relations that satisfy `holds` and fail `fails`.
pub fn probe(cfg: &AuditConfig, pairs: &[ProbePair], functional_only: bool) -> Result<ProbeReport> {
    cfg.validate()?;
    let all: Vec<FiniteRelation> = instances(cfg)
        .into_iter()
        .filter(|g| !functional_only || g.is_functional())
        .collect();
    let mut findings: Vec<ProbeFinding> = pairs
        .iter()
        .map(|&pair| ProbeFinding {
            pair,
            count: 0,
            witnesses: Vec::new(),
        })
        .collect();
    for g in &all {
        let flags = oracle_flags(g)?;
        for f in &mut findings {
            if flags[f.pair.holds] && !flags[f.pair.fails] {
                f.count += 1;
                if f.witnesses.len() < MAX_REPORTED {
                    f.witnesses.push(g.encode());
                }
            }
        }
    }
    Ok(ProbeReport {
        instances: all.len(),
        functional_only,
        findings,
        notice: COLLAPSE_NOTICE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> AuditConfig {
        AuditConfig {
            n_max: 5,
            samples: 300,
            conjugacy_pairs: 100,
            ..AuditConfig::default()
        }
    }

    #[test]
    fn exhaustive_count() {
        let total: usize = (1..=3).map(|n| all_relations(n).count()).sum();
        assert_eq!(total, 527);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn small_audit_is_clean_and_deterministic() {
        let a = run_audit(&small()).unwrap();
        assert!(a.passed(), "{:?}", a.violations);
        assert_eq!(a.exhaustive_instances, 527);
        assert_eq!(a.random_instances, 300);
        let b = run_audit(&small()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn corrupted_decider_is_caught() {
        fn broken(g: &FiniteRelation, k: MinimalityKind) -> bool {
            let honest = decide_minimal_fast(g, k);
            if g.size() == 2 && k == MinimalityKind::TwoPlus {
                !honest
            } else {
                honest
            }
        }
        let cfg = AuditConfig {
            fast: broken,
            samples: 0,
            n_max: 3,
            conjugacy_pairs: 0,
            ..AuditConfig::default()
        };
        let r = run_audit(&cfg).unwrap();
        assert_eq!(r.checks["oracle-agreement"].violations, 15);
        let v = &r.violations[0];
        assert_eq!(v.check, "oracle-agreement");
        assert_eq!(v.instance, "n=2:0-0");
        assert!(v.detail.contains("2plus"));
    }

    #[test]
    fn self_maps_on_four_points_collapse() {
        let r = functional_collapse(4).unwrap();
        assert_eq!(r.maps, 256);
        assert!(r.violations.is_empty());
        // (n-1)! cyclic permutations
        assert_eq!(r.single_cycles, 6);
    }

    #[test]
    fn probes() {
        let cfg = small();
        let open = probe(&cfg, &ProbePair::OPEN, false).unwrap();
        assert_eq!(open.total_witnesses(), 0);
        let sanity = probe(&cfg, &[ProbePair::SANITY], false).unwrap();
        assert!(sanity.findings[0]
            .witnesses
            .contains(&crate::corpus::star3().encode()));
        let functional = probe(&cfg, &ProbePair::OPEN, true).unwrap();
        assert_eq!(functional.total_witnesses(), 0);
    }

    #[test]
    fn config_bounds() {
        let bad = AuditConfig {
            n_max: 9,
            ..AuditConfig::default()
        };
        assert!(run_audit(&bad).is_err());
        let bad = AuditConfig {
            exhaustive_n: 4,
            n_max: 3,
            ..AuditConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
