//! The `mmetric` command line.
//!
//! Every subcommand produces a [`RunReport`]. Exit codes: 0 when the
//! requested property holds, 1 when a violation, refutation or non-fixed-point
//! termination is found, 2 for usage and input errors.

pub mod document;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mmetric::axioms::{axiom_report, classify, Mode};
use mmetric::caristi::{ekeland_point, CaristiInstance, Termination, Variant};
use mmetric::convergence::{
    cauchy_verdict, continuity_check, convergence_verdict, limit_set, ContinuityMode,
    ContinuityQuery, LimitMode, ParametricSpace, Sampling, SequenceSpec,
};
use mmetric::explorer::{
    find_separating_example, probe_claim, random_space, SearchBudget, Verdict,
};
use mmetric::topology::{ball_set, separation_report, Ball, BallKind};
use mmetric::{generate_topology, PointMap, Rational, TopologyKind};
use sha2::{Digest, Sha256};

pub use document::{parse_space_file, DocumentError, SpaceDocument};
pub use report::{render, Findings, RunReport, EXIT_FINDING, EXIT_INPUT, EXIT_PASS};

#[derive(Debug, Parser)]
#[command(
    name = "mmetric",
    version,
    about = "Exact checks on finite metric, partial metric and M-metric spaces"
)]
pub struct Cli {
    /// Emit the report as one JSON object on standard output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for searches and probes.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Step budget for Caristi walks.
    #[arg(long, global = true, default_value_t = 1000)]
    pub max_steps: usize,
    /// Class that `classify` must confirm: metric, partial or m_metric.
    #[arg(long, global = true)]
    pub expect: Option<Mode>,
    /// Convergence tolerance.
    #[arg(long, global = true)]
    pub tol: Option<Rational>,
    /// First sampled index N for convergence checks (samples N, 2N, 4N, 8N).
    #[arg(long, global = true)]
    pub tail_n: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership in each class; exits 0 only if the `--expect` class holds.
    Classify { file: PathBuf },
    /// Every violation of one axiom system.
    Report {
        file: PathBuf,
        #[arg(long, default_value = "m_metric")]
        mode: Mode,
        /// Print at most this many violations.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Balls around one or all centers.
    Balls {
        file: PathBuf,
        #[arg(long)]
        eps: Rational,
        #[arg(long)]
        center: Option<String>,
        #[arg(long, default_value = "m_open")]
        kind: BallKind,
    },
    /// The topology generated by open balls, with separation checks.
    Topology {
        file: PathBuf,
        #[arg(long, default_value = "m_open")]
        kind: TopologyKind,
    },
    /// Convergence of a sequence in the space max{x, y} on [0, ∞).
    Converge {
        /// Sequence such as `1 + 1/n^2`, `3`, `2 - 1/n`.
        #[arg(long)]
        seq: SequenceSpec,
        /// Candidate limit; with `--mode` gives a single verdict.
        #[arg(long)]
        to: Option<Rational>,
        #[arg(long, default_value = "usual")]
        mode: LimitMode,
        /// Comma-separated candidates for limit sets.
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<Rational>,
    },
    /// Continuity of the document's `T` at a point.
    Continuity {
        file: PathBuf,
        #[arg(long)]
        point: Option<String>,
        /// uu, su, us or ss; all four when omitted.
        #[arg(long)]
        mode: Option<ContinuityMode>,
    },
    /// Caristi-type conditions, walks and fixed points.
    Caristi {
        #[command(subcommand)]
        action: CaristiAction,
    },
    /// Search for a point with strictly positive Ekeland margins.
    Ekeland { file: PathBuf },
    /// Seeded search for an example of a class, or a separating example.
    Search {
        /// separating, metric, partial or m_metric.
        #[arg(long, default_value = "separating")]
        target: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a registered claim.
    Probe {
        claim: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum CaristiAction {
    /// The condition at every point.
    Check(CaristiArgs),
    /// The dominated-set walk from a start point.
    Iterate {
        #[command(flatten)]
        instance: CaristiArgs,
        #[arg(long)]
        start: String,
    },
    /// Points fixed by `T`.
    FixedPoints(CaristiArgs),
    /// Hypothesis and conclusion of the fixed point theorem.
    Theorem(CaristiArgs),
}

#[derive(Debug, Args)]
pub struct CaristiArgs {
    pub file: PathBuf,
    /// Overrides the document's variant.
    #[arg(long)]
    pub variant: Option<Variant>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 10_000)]
    pub max_candidates: u64,
    #[arg(long, default_value_t = 3)]
    pub size: usize,
    #[arg(long, default_value_t = 0)]
    pub lo: i64,
    #[arg(long, default_value_t = 10)]
    pub hi: i64,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: Option<RunReport>,
    pub stdout: String,
    pub stderr: String,
    pub exit_code: u8,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Classify { .. } => "classify",
        Command::Report { .. } => "report",
        Command::Balls { .. } => "balls",
        Command::Topology { .. } => "topology",
        Command::Converge { .. } => "converge",
        Command::Continuity { .. } => "continuity",
        Command::Caristi { action } => match action {
            CaristiAction::Check(_) => "caristi check",
            CaristiAction::Iterate { .. } => "caristi iterate",
            CaristiAction::FixedPoints(_) => "caristi fixed-points",
            CaristiAction::Theorem(_) => "caristi theorem",
        },
        Command::Ekeland { .. } => "ekeland",
        Command::Search { .. } => "search",
        Command::Probe { .. } => "probe",
    }
}

fn input_file(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Classify { file }
        | Command::Report { file, .. }
        | Command::Balls { file, .. }
        | Command::Topology { file, .. }
        | Command::Continuity { file, .. }
        | Command::Ekeland { file } => Some(file),
        Command::Caristi { action } => Some(match action {
            CaristiAction::Check(a) | CaristiAction::FixedPoints(a) | CaristiAction::Theorem(a) => {
                &a.file
            }
            CaristiAction::Iterate { instance, .. } => &instance.file,
        }),
        Command::Converge { .. } | Command::Search { .. } | Command::Probe { .. } => None,
    }
}

/// Digest of the arguments (minus `--json`) followed by the input file bytes.
fn digest(args: &[OsString], file: Option<&[u8]>) -> String {
    let mut h = Sha256::new();
    for a in args.iter().skip(1).filter(|a| a.as_os_str() != "--json") {
        h.update(a.to_string_lossy().as_bytes());
        h.update([0]);
    }
    if let Some(bytes) = file {
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

fn load(path: &Path) -> Result<(SpaceDocument, Vec<u8>), Failure> {
    Ok(parse_space_file(path)?)
}

fn instance(doc: SpaceDocument, variant: Option<Variant>) -> Result<CaristiInstance, Failure> {
    let variant = variant.or(doc.variant).ok_or_else(|| {
        Failure("no variant: add \"variant\" to the document or pass --variant".into())
    })?;
    let phi = doc
        .phi
        .ok_or_else(|| Failure("the document has no \"phi\"".into()))?;
    let map = doc
        .map_t
        .ok_or_else(|| Failure("the document has no \"T\"".into()))?;
    Ok(CaristiInstance::new(doc.space, map, phi, variant)?)
}

fn sampling(cli: &Cli) -> Result<Sampling, Failure> {
    let default = Sampling::default();
    Ok(Sampling::new(
        cli.tail_n.unwrap_or(default.tail_n),
        cli.tol.clone().unwrap_or(default.tol),
    )?)
}

fn budget(cli: &Cli, b: &BudgetArgs) -> Result<SearchBudget, Failure> {
    Ok(SearchBudget::new(
        b.max_candidates,
        cli.seed.unwrap_or(0),
        b.size,
        (b.lo, b.hi),
    )?)
}

/// Runs one parsed command, returning findings, exit code and file bytes.
fn execute(cli: &Cli) -> Result<(Findings, u8, Option<Vec<u8>>), Failure> {
    let exit = |ok: bool| if ok { EXIT_PASS } else { EXIT_FINDING };
    Ok(match &cli.command {
        Command::Classify { file } => {
            let (doc, bytes) = load(file)?;
            let expected = cli.expect.unwrap_or(Mode::Metric);
            let classification = classify(&doc.space);
            let code = exit(classification.satisfies(expected));
            (
                Findings::Classification {
                    expected,
                    classification,
                },
                code,
                Some(bytes),
            )
        }
        Command::Report { file, mode, limit } => {
            let (doc, bytes) = load(file)?;
            let mut violations = axiom_report(&doc.space, *mode);
            let total = violations.len();
            if let Some(limit) = limit {
                violations.truncate(*limit);
            }
            (
                Findings::AxiomReport {
                    mode: *mode,
                    total,
                    violations,
                },
                exit(total == 0),
                Some(bytes),
            )
        }
        Command::Balls {
            file,
            eps,
            center,
            kind,
        } => {
            let (doc, bytes) = load(file)?;
            if !eps.is_positive() {
                return Err(Failure(format!("radius must be positive, got {eps}")));
            }
            let space = &doc.space;
            let centers = match center {
                Some(c) => vec![space.index_of(c)?],
                None => (0..space.len()).collect(),
            };
            let balls = centers
                .into_iter()
                .map(|x| Ball {
                    center: space.label(x).to_owned(),
                    epsilon: eps.clone(),
                    kind: *kind,
                    members: space.labels_of(ball_set(space, *kind, x, eps)),
                })
                .collect();
            (Findings::Balls { balls }, EXIT_PASS, Some(bytes))
        }
        Command::Topology { file, kind } => {
            let (doc, bytes) = load(file)?;
            let topology = generate_topology(&doc.space, *kind)?;
            let separation = separation_report(&topology);
            let code = exit(separation.hausdorff);
            (
                Findings::Topology {
                    discrete: topology.is_discrete(),
                    topology,
                    separation,
                },
                code,
                Some(bytes),
            )
        }
        Command::Converge {
            seq,
            to,
            mode,
            candidates,
        } => {
            let sampling = sampling(cli)?;
            let ps = ParametricSpace::MaxNonneg;
            match to {
                Some(x) => {
                    let verdict = convergence_verdict(ps, seq, x, *mode, &sampling)?;
                    let code = exit(verdict.holds);
                    (Findings::Convergence { verdict }, code, None)
                }
                None if candidates.is_empty() => {
                    return Err(Failure("give --to <limit> or --candidates <list>".into()));
                }
                None => {
                    let usual = limit_set(ps, seq, candidates, LimitMode::Usual, &sampling)?;
                    let symmetric =
                        limit_set(ps, seq, candidates, LimitMode::Symmetric, &sampling)?;
                    let cauchy = cauchy_verdict(ps, seq, &sampling)?;
                    let code = exit(cauchy.holds);
                    (
                        Findings::LimitSets {
                            candidates: candidates.clone(),
                            usual: usual.into_iter().collect(),
                            symmetric: symmetric.into_iter().collect(),
                            cauchy,
                        },
                        code,
                        None,
                    )
                }
            }
        }
        Command::Continuity { file, point, mode } => {
            let (doc, bytes) = load(file)?;
            let map: PointMap = doc
                .map_t
                .clone()
                .ok_or_else(|| Failure("the document has no \"T\"".into()))?;
            let points: Vec<String> = match point {
                Some(p) => vec![p.clone()],
                None => doc.space.labels().to_vec(),
            };
            let modes = mode.map_or(ContinuityMode::ALL.to_vec(), |m| vec![m]);
            let mut outcomes = Vec::new();
            for p in &points {
                for &m in &modes {
                    outcomes.push(continuity_check(&ContinuityQuery {
                        source: &doc.space,
                        target: &doc.space,
                        map: &map,
                        point: p,
                        mode: m,
                    })?);
                }
            }
            let code = exit(outcomes.iter().all(|o| o.holds));
            (Findings::Continuity { outcomes }, code, Some(bytes))
        }
        Command::Caristi { action } => match action {
            CaristiAction::Check(a) => {
                let (doc, bytes) = load(&a.file)?;
                let inst = instance(doc, a.variant)?;
                let checks = inst.condition_report();
                let code = exit(checks.iter().all(|c| c.holds));
                (
                    Findings::Conditions {
                        variant: inst.variant(),
                        checks,
                    },
                    code,
                    Some(bytes),
                )
            }
            CaristiAction::Iterate { instance: a, start } => {
                let (doc, bytes) = load(&a.file)?;
                let inst = instance(doc, a.variant)?;
                let trace = inst.iterate(start, cli.max_steps)?;
                let code = exit(trace.terminated == Termination::FixedPoint);
                (
                    Findings::Trace {
                        variant: inst.variant(),
                        trace,
                    },
                    code,
                    Some(bytes),
                )
            }
            CaristiAction::FixedPoints(a) => {
                let (doc, bytes) = load(&a.file)?;
                let inst = instance(doc, a.variant)?;
                let points = inst.fixed_points();
                let code = exit(!points.is_empty());
                (Findings::FixedPoints { points }, code, Some(bytes))
            }
            CaristiAction::Theorem(a) => {
                let (doc, bytes) = load(&a.file)?;
                let check = instance(doc, a.variant)?.theorem_check();
                let code = exit(check.hypothesis_holds && check.conclusion_holds);
                (Findings::Theorem { check }, code, Some(bytes))
            }
        },
        Command::Ekeland { file } => {
            let (doc, bytes) = load(file)?;
            let phi = doc
                .phi
                .ok_or_else(|| Failure("the document has no \"phi\"".into()))?;
            let certificate = ekeland_point(&doc.space, &phi)?;
            let code = exit(certificate.strict);
            (Findings::Ekeland { certificate }, code, Some(bytes))
        }
        Command::Search { target, budget: b } => {
            let budget = budget(cli, b)?;
            let (space, violation) = if target == "separating" {
                match find_separating_example(&budget) {
                    Ok(found) => (Some(found.space), Some(found.violation)),
                    Err(mmetric::explorer::ExplorerError::ExhaustedBudget { .. }) => (None, None),
                    Err(e) => return Err(e.into()),
                }
            } else {
                let mode: Mode = target.parse().map_err(Failure)?;
                match random_space(&budget, mode) {
                    Ok(space) => (Some(space), None),
                    Err(mmetric::explorer::ExplorerError::ExhaustedBudget { .. }) => (None, None),
                    Err(e) => return Err(e.into()),
                }
            };
            let code = exit(space.is_some());
            (
                Findings::Search {
                    target: target.clone(),
                    budget,
                    space,
                    violation,
                },
                code,
                None,
            )
        }
        Command::Probe { claim, budget: b } => {
            let budget = budget(cli, b)?;
            let result = probe_claim(claim, &budget)?;
            let code = exit(result.verdict != Verdict::Refuted);
            (Findings::Probe { result }, code, None)
        }
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            return Outcome {
                report: None,
                stdout: if e.use_stderr() {
                    String::new()
                } else {
                    text.clone()
                },
                stderr: if e.use_stderr() { text } else { String::new() },
                exit_code: code,
            };
        }
    };
    let command = command_name(&cli.command).to_owned();
    let (findings, exit_code, bytes, diagnostic) = match execute(&cli) {
        Ok((findings, code, bytes)) => (findings, code, bytes, None),
        Err(Failure(message)) => {
            let bytes =
                input_file(&cli.command).and_then(|p| std::fs::read(document::resolve(p)).ok());
            (
                Findings::InputError {
                    message: message.clone(),
                },
                EXIT_INPUT,
                bytes,
                Some(message),
            )
        }
    };
    let report = RunReport {
        command,
        inputs_digest: digest(&args, bytes.as_deref()),
        findings,
        exit_code,
    };
    let stdout = if cli.json {
        serde_json::to_string(&report).expect("reports serialize") + "\n"
    } else if diagnostic.is_some() {
        String::new()
    } else {
        render(&report)
    };
    let stderr = diagnostic
        .map(|m| format!("error: {m}\n"))
        .unwrap_or_default();
    Outcome {
        report: Some(report),
        stdout,
        stderr,
        exit_code,
    }
}
