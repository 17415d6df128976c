use std::fmt::Write as _;
use std::io::{Read, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crdyn_core::audit::{probe, run_audit, AuditConfig, ProbePair};
use crdyn_core::conjugacy::{
    check_conjugacy_finite, check_conjugacy_segments, transport, Homeomorphism,
};
use crdyn_core::corpus::{self, Params};
use crdyn_core::finite::witness;
use crdyn_core::numeric::{
    density, diagnose, invariant_closure, search_witness, simulate_backward_orbit, simulate_orbit,
    ClosureMode, DiagnosticConfig,
};
use crdyn_core::relation::simulate;
use crdyn_core::{
    classify, AnyRelation, Direction, Error, IntervalSet, MinimalityKind, OrbitPolicy, Relation,
};

const EXIT_PARSE: u8 = 2;
const EXIT_CONSTRAINT: u8 = 3;
const EXIT_VIOLATIONS: u8 = 4;

#[derive(Parser)]
#[command(
    name = "crdyn",
    version,
    about = "Invariance and minimality of closed relations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Relation file in JSON, or `-` for standard input.
    #[arg(long, conflicts_with = "example")]
    input: Option<PathBuf>,
    /// A built-in example instead of a file (see `corpus list`).
    #[arg(long)]
    example: Option<String>,
    #[arg(long, default_value_t = 10)]
    depth: u32,
}

#[derive(Args)]
struct Run {
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value = "first")]
    policy: OrbitPolicy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "forward")]
    direction: Direction,
    /// Start point: a vertex for finite relations, a coordinate in [0, 1] for segments.
    #[arg(long, default_value = "0")]
    x0: String,
}

#[derive(Args)]
struct Search {
    #[arg(long, default_value_t = 7)]
    n_max: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    exhaustive_n: usize,
}

impl Search {
    fn config(&self) -> AuditConfig {
        AuditConfig {
            n_max: self.n_max,
            exhaustive_n: self.exhaustive_n,
            samples: self.samples,
            seed: self.seed,
            ..AuditConfig::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Plot {
    Geometry,
    Orbit,
    Closure,
}

#[derive(Subcommand)]
enum Command {
    /// Sixteen-flag report (finite) or resolution-bounded diagnostic (segments).
    Classify {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 1e-2)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Simulates one orbit prefix and reports its density.
    Orbit {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        run: Run,
    },
    /// A proper nonempty invariant set refuting one kind, if any is found.
    Witness {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        kind: MinimalityKind,
    },
    /// Checks the fast deciders and the implication lattice; exits 4 on violations.
    Audit {
        #[command(flatten)]
        search: Search,
        #[arg(long, default_value_t = 1000)]
        conjugacy_pairs: usize,
    },
    /// Searches the audit instances for a kind holding while a weaker-indexed one fails.
    Probe {
        #[command(flatten)]
        search: Search,
        /// Only functional relations.
        #[arg(long)]
        functional: bool,
        /// Pairs `holds:fails`, e.g. `2plus:1plus`; defaults to the three 3-vs-2 pairs.
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<ProbePair>,
    },
    /// Transports a relation along a homeomorphism file.
    Conjugate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        map: PathBuf,
        /// Also classify both relations and compare; exits 4 on disagreement.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
    /// Built-in examples.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// CSV rows behind a plot.
    EmitPlot {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "geometry")]
        what: Plot,
        #[command(flatten)]
        run: Run,
        #[arg(long, default_value = "inner")]
        mode: ClosureMode,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
}

#[derive(Args)]
struct CorpusParams {
    #[arg(long, default_value_t = 10)]
    depth: u32,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value_t = 1e-2)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl CorpusParams {
    fn params(&self) -> Params {
        Params {
            depth: self.depth,
            steps: self.steps,
            epsilon: self.epsilon,
            seed: self.seed,
            ..Params::default()
        }
    }
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    /// The relation file of one example.
    Dump {
        name: String,
        #[command(flatten)]
        params: CorpusParams,
    },
    /// Checks the recorded facts of one example, or of all; exits 4 on failure.
    Verify {
        name: Option<String>,
        #[command(flatten)]
        params: CorpusParams,
    },
}

fn parse_pair(s: &str) -> Result<ProbePair, String> {
    let (a, b) = s.split_once(':').ok_or("expected `holds:fails`")?;
    Ok(ProbePair {
        holds: a.parse().map_err(|e: Error| e.to_string())?,
        fails: b.parse().map_err(|e: Error| e.to_string())?,
    })
}

enum Failure {
    Input(String),
    Core(Error),
    Violations(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<String, Failure>;

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn load(source: &Source) -> Result<AnyRelation, Failure> {
    match (&source.input, &source.example) {
        (_, Some(name)) => {
            let params = Params {
                depth: source.depth,
                ..Params::default()
            };
            Ok(corpus::build(name, &params)?.relation)
        }
        (Some(path), None) => {
            let text = read_text(path)?;
            Ok(AnyRelation::from_json(&text)?)
        }
        (None, None) => Err(Failure::Input(
            "one of --input or --example is required".into(),
        )),
    }
}

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn parse_vertex(s: &str) -> Result<usize, Failure> {
    s.parse()
        .map_err(|_| Failure::Input(format!("`{s}` is not a vertex")))
}

fn parse_coordinate(s: &str) -> Result<f64, Failure> {
    s.parse()
        .map_err(|_| Failure::Input(format!("`{s}` is not a coordinate")))
}

fn cmd_classify(source: &Source, steps: usize, epsilon: f64, seed: u64) -> Outcome {
    Ok(match load(source)? {
        AnyRelation::Finite(g) => to_json(&classify(&g)),
        AnyRelation::Segments(g) => {
            let config = DiagnosticConfig {
                steps,
                epsilon,
                seed,
                ..DiagnosticConfig::default()
            };
            to_json(&diagnose(&g, &config)?)
        }
    })
}

fn orbit_points(g: &AnyRelation, run: &Run) -> Result<(Vec<f64>, bool), Failure> {
    let backward = run.direction == Direction::Backward;
    match g {
        AnyRelation::Finite(g) => {
            let x0 = parse_vertex(&run.x0)?;
            let sim = if backward {
                simulate(&g.inverse(), x0, run.steps, run.policy, run.seed)?
            } else {
                simulate(g, x0, run.steps, run.policy, run.seed)?
            };
            Ok((
                sim.orbit.points().iter().map(|&v| v as f64).collect(),
                sim.truncated,
            ))
        }
        AnyRelation::Segments(g) => {
            let x0 = parse_coordinate(&run.x0)?;
            let sim = if backward {
                simulate_backward_orbit(g, x0, run.steps, run.policy, run.seed)?
            } else {
                simulate_orbit(g, x0, run.steps, run.policy, run.seed)?
            };
            Ok((sim.orbit.into_points(), sim.truncated))
        }
    }
}

fn cmd_orbit(source: &Source, run: &Run) -> Outcome {
    let g = load(source)?;
    let (points, truncated) = orbit_points(&g, run)?;
    let gap = match g {
        AnyRelation::Segments(_) => Some(density(&points)?),
        AnyRelation::Finite(_) => None,
    };
    Ok(to_json(&json!({
        "direction": run.direction,
        "policy": run.policy,
        "seed": run.seed,
        "truncated": truncated,
        "density": gap,
        "orbit": points,
    })))
}

fn cmd_witness(source: &Source, kind: MinimalityKind) -> Outcome {
    let report = match load(source)? {
        AnyRelation::Finite(g) => match witness(&g, kind) {
            Some(w) => json!({ "kind": kind, "witness": w }),
            None => json!({ "kind": kind, "witness": null, "notice": "none found" }),
        },
        AnyRelation::Segments(g) => {
            let s = search_witness(&g, kind)?;
            let mut v = serde_json::to_value(&s).expect("search serializes");
            if s.witness.is_none() {
                v["notice"] = json!(format!(
                    "none found among {} candidates",
                    s.candidates_tried
                ));
            }
            v
        }
    };
    Ok(to_json(&report))
}

fn cmd_audit(search: &Search, conjugacy_pairs: usize) -> Outcome {
    let config = AuditConfig {
        conjugacy_pairs,
        ..search.config()
    };
    let report = run_audit(&config)?;
    let text = to_json(&json!({ "config": config, "report": report }));
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Violations(text))
    }
}

fn cmd_probe(search: &Search, functional: bool, pairs: &[ProbePair]) -> Outcome {
    let pairs = if pairs.is_empty() {
        &ProbePair::OPEN[..]
    } else {
        pairs
    };
    let config = search.config();
    Ok(to_json(&json!({
        "config": config,
        "report": probe(&config, pairs, functional)?,
    })))
}

fn cmd_conjugate(source: &Source, map: &PathBuf, check: bool, steps: usize) -> Outcome {
    let g = load(source)?;
    let phi = Homeomorphism::from_json(&read_text(map)?)?;
    let image = transport(&g, &phi)?;
    if !check {
        return Ok(image.to_json());
    }
    let (agree, report) = match (&g, &phi) {
        (AnyRelation::Finite(g), Homeomorphism::Permutation(p)) => {
            let r = check_conjugacy_finite(g, p)?;
            (
                r.holds(),
                serde_json::to_value(&r).expect("report serializes"),
            )
        }
        (AnyRelation::Segments(g), Homeomorphism::Pl(f)) => {
            let config = DiagnosticConfig {
                steps,
                ..DiagnosticConfig::default()
            };
            let r = check_conjugacy_segments(g, f, &config)?;
            (
                r.holds(),
                serde_json::to_value(&r).expect("report serializes"),
            )
        }
        _ => return Err(Error::BackendMismatch.into()),
    };
    let text = to_json(&json!({ "relation": image, "check": report }));
    if agree {
        Ok(text)
    } else {
        Err(Failure::Violations(text))
    }
}

fn cmd_corpus(action: &CorpusAction) -> Outcome {
    match action {
        CorpusAction::List => {
            let mut out = String::new();
            for e in corpus::Example::ALL {
                writeln!(out, "{:<13} {}", e.name(), e.summary()).unwrap();
            }
            Ok(out.trim_end().to_string())
        }
        CorpusAction::Dump { name, params } => Ok(to_json(&corpus::build(name, &params.params())?)),
        CorpusAction::Verify { name, params } => {
            let names = match name {
                Some(n) => vec![n.as_str()],
                None => corpus::list(),
            };
            let mut reports = Vec::new();
            for n in names {
                reports.push(corpus::verify(&corpus::build(n, &params.params())?));
            }
            let text = to_json(&reports);
            if reports.iter().all(|r| r.all_passed()) {
                Ok(text)
            } else {
                Err(Failure::Violations(text))
            }
        }
    }
}

fn cmd_emit_plot(
    source: &Source,
    what: Plot,
    run: &Run,
    mode: ClosureMode,
    epsilon: f64,
) -> Outcome {
    let g = load(source)?;
    let mut out = String::new();
    match what {
        Plot::Geometry => match &g {
            AnyRelation::Finite(g) => {
                out.push_str("x,y\n");
                for (x, y) in g.edges() {
                    writeln!(out, "{x},{y}").unwrap();
                }
            }
            AnyRelation::Segments(g) => {
                out.push_str("segment,x,y\n");
                for (i, s) in g.segments().iter().enumerate() {
                    let [x1, y1, x2, y2] = s.as_array();
                    writeln!(out, "{i},{x1},{y1}\n{i},{x2},{y2}").unwrap();
                }
            }
        },
        Plot::Orbit => {
            out.push_str("step,x\n");
            for (k, x) in orbit_points(&g, run)?.0.iter().enumerate() {
                writeln!(out, "{k},{x}").unwrap();
            }
        }
        Plot::Closure => {
            let AnyRelation::Segments(g) = &g else {
                return Err(Failure::Core(Error::BackendMismatch));
            };
            let g = match run.direction {
                Direction::Forward => g.clone(),
                Direction::Backward => g.inverse(),
            };
            let s0 = IntervalSet::point(parse_coordinate(&run.x0)?);
            let res = invariant_closure(&g, &s0, mode, epsilon, run.steps)?;
            out.push_str("left,right\n");
            for (a, b) in res.set.intervals() {
                writeln!(out, "{a},{b}").unwrap();
            }
        }
    }
    Ok(out.trim_end().to_string())
}

// A closed pipe downstream is not an error worth a panic.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Classify {
            source,
            steps,
            epsilon,
            seed,
        } => cmd_classify(source, *steps, *epsilon, *seed),
        Command::Orbit { source, run } => cmd_orbit(source, run),
        Command::Witness { source, kind } => cmd_witness(source, *kind),
        Command::Audit {
            search,
            conjugacy_pairs,
        } => cmd_audit(search, *conjugacy_pairs),
        Command::Probe {
            search,
            functional,
            pairs,
        } => cmd_probe(search, *functional, pairs),
        Command::Conjugate {
            source,
            map,
            check,
            steps,
        } => cmd_conjugate(source, map, *check, *steps),
        Command::Corpus { action } => cmd_corpus(action),
        Command::EmitPlot {
            source,
            what,
            run,
            mode,
            epsilon,
        } => cmd_emit_plot(source, *what, run, *mode, *epsilon),
    };
    match outcome {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(Failure::Violations(text)) => {
            emit(&text);
            ExitCode::from(EXIT_VIOLATIONS)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            let parse = e.is_parse() || matches!(e, Error::UnknownExample(_));
            ExitCode::from(if parse { EXIT_PARSE } else { EXIT_CONSTRAINT })
        }
    }
}
