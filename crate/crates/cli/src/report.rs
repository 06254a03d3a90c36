use std::fmt::Write as _;

use mmetric::axioms::{AxiomViolation, Mode, SpaceClassification};
use mmetric::caristi::{ConditionCheck, EkelandCertificate, IterationTrace, TheoremCheck, Variant};
use mmetric::convergence::{ContinuityOutcome, ConvergenceVerdict};
use mmetric::explorer::{ProbeEvidence, ProbeResult, SearchBudget};
use mmetric::topology::{Ball, SeparationReport};
use mmetric::{FiniteSpace, FiniteTopology, Rational};
use serde::{Deserialize, Serialize};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FINDING: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 (hex) of the arguments and input file.
    pub inputs_digest: String,
    pub findings: Findings,
    pub exit_code: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Findings {
    Classification {
        expected: Mode,
        classification: SpaceClassification,
    },
    AxiomReport {
        mode: Mode,
        total: usize,
        violations: Vec<AxiomViolation>,
    },
    Balls {
        balls: Vec<Ball>,
    },
    Topology {
        topology: FiniteTopology,
        discrete: bool,
        separation: SeparationReport,
    },
    Convergence {
        verdict: ConvergenceVerdict,
    },
    LimitSets {
        candidates: Vec<Rational>,
        usual: Vec<Rational>,
        symmetric: Vec<Rational>,
        cauchy: ConvergenceVerdict,
    },
    Continuity {
        outcomes: Vec<ContinuityOutcome>,
    },
    Conditions {
        variant: Variant,
        checks: Vec<ConditionCheck>,
    },
    Trace {
        variant: Variant,
        trace: IterationTrace,
    },
    FixedPoints {
        points: Vec<String>,
    },
    Theorem {
        check: TheoremCheck,
    },
    Ekeland {
        certificate: EkelandCertificate,
    },
    Search {
        target: String,
        budget: SearchBudget,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        space: Option<FiniteSpace>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        violation: Option<AxiomViolation>,
    },
    Probe {
        result: ProbeResult,
    },
    InputError {
        message: String,
    },
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list<T: ToString>(items: &[T]) -> String {
    format!(
        "{{{}}}",
        items
            .iter()
            .map(T::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn table(out: &mut String, space: &FiniteSpace) {
    let _ = writeln!(out, "  points: {}", space.labels().join(" "));
    for (label, row) in space.labels().iter().zip(space.table()) {
        let cells: Vec<String> = row.iter().map(Rational::to_string).collect();
        let _ = writeln!(out, "  {label}: {}", cells.join(" "));
    }
}

/// Plain-text rendering of a report.
pub fn render(report: &RunReport) -> String {
    let mut out = String::new();
    match &report.findings {
        Findings::Classification {
            expected,
            classification: c,
        } => {
            let _ = writeln!(out, "metric: {}", yes(c.is_metric));
            let _ = writeln!(out, "partial metric: {}", yes(c.is_partial));
            let _ = writeln!(out, "M-metric: {}", yes(c.is_m_metric));
            for (mode, vs) in [
                (Mode::Metric, &c.violations.metric),
                (Mode::Partial, &c.violations.partial),
                (Mode::MMetric, &c.violations.m_metric),
            ] {
                if let Some(first) = vs.first() {
                    let _ = writeln!(out, "{mode}: {} violation(s), first: {first}", vs.len());
                }
            }
            let _ = writeln!(
                out,
                "expected {expected}: {}",
                if c.satisfies(*expected) {
                    "holds"
                } else {
                    "fails"
                }
            );
        }
        Findings::AxiomReport {
            mode,
            total,
            violations,
        } => {
            let _ = writeln!(out, "{mode}: {total} violation(s)");
            for v in violations {
                let _ = writeln!(out, "  {v}");
            }
            if violations.len() < *total {
                let _ = writeln!(out, "  … {} more", total - violations.len());
            }
        }
        Findings::Balls { balls } => {
            for b in balls {
                let _ = writeln!(
                    out,
                    "{} ball at {} radius {}: {}",
                    b.kind,
                    b.center,
                    b.epsilon,
                    list(&b.members)
                );
            }
        }
        Findings::Topology {
            topology,
            discrete,
            separation,
        } => {
            let _ = writeln!(out, "open sets ({}): {topology}", topology.len());
            let _ = writeln!(out, "discrete: {}", yes(*discrete));
            let _ = writeln!(
                out,
                "T0: {}  T1: {}  Hausdorff: {}",
                yes(separation.t0),
                yes(separation.t1),
                yes(separation.hausdorff)
            );
            if let Some((x, y)) = &separation.witness {
                let _ = writeln!(out, "witness pair: ({x}, {y})");
            }
        }
        Findings::Convergence { verdict } => {
            let _ = writeln!(
                out,
                "{:?} convergence to {}: {} (tolerance {}, tail from n = {})",
                verdict.mode,
                verdict
                    .limit
                    .as_ref()
                    .map_or_else(|| "-".to_owned(), Rational::to_string),
                if verdict.holds { "holds" } else { "fails" },
                verdict.tolerance,
                verdict.tail_index
            );
            for r in &verdict.residuals {
                let _ = writeln!(out, "  n = {}: residual {}", r.n, r.value);
            }
        }
        Findings::LimitSets {
            candidates,
            usual,
            symmetric,
            cauchy,
        } => {
            let _ = writeln!(out, "candidates: {}", list(candidates));
            let _ = writeln!(out, "usual limits: {}", list(usual));
            let _ = writeln!(out, "symmetric limits: {}", list(symmetric));
            let _ = writeln!(out, "Cauchy: {}", yes(cauchy.holds));
        }
        Findings::Continuity { outcomes } => {
            for o in outcomes {
                let _ = write!(
                    out,
                    "{} at {}: {}",
                    o.mode,
                    o.point,
                    if o.holds {
                        "continuous"
                    } else {
                        "not continuous"
                    }
                );
                if let Some(w) = &o.witness {
                    let escapes: Vec<String> = w
                        .failures
                        .iter()
                        .map(|f| format!("δ={} → {}", f.delta, f.point))
                        .collect();
                    let _ = write!(out, " (ε = {}; {})", w.epsilon, escapes.join(", "));
                }
                out.push('\n');
            }
        }
        Findings::Conditions { variant, checks } => {
            let _ = writeln!(out, "{variant} condition:");
            for c in checks {
                let rel = if c.holds { "≤" } else { ">" };
                let _ = writeln!(
                    out,
                    "  x = {} (Tx = {}): {} {rel} {}",
                    c.point, c.image, c.lhs, c.rhs
                );
            }
        }
        Findings::Trace { variant, trace } => {
            let _ = writeln!(out, "{variant} walk: {}", trace.points.join(" → "));
            let phis: Vec<String> = trace.phi_values.iter().map(Rational::to_string).collect();
            let alphas: Vec<String> = trace.alpha_values.iter().map(Rational::to_string).collect();
            let _ = writeln!(out, "  φ: {}", phis.join(", "));
            let _ = writeln!(out, "  α: {}", alphas.join(", "));
            let _ = writeln!(
                out,
                "  terminated: {:?} after {} step(s)",
                trace.terminated, trace.steps
            );
        }
        Findings::FixedPoints { points } => {
            let _ = writeln!(out, "fixed points: {}", list(points));
        }
        Findings::Theorem { check } => {
            let _ = writeln!(
                out,
                "{} hypothesis: {}",
                check.variant,
                yes(check.hypothesis_holds)
            );
            let _ = writeln!(
                out,
                "conclusion (a fixed point exists): {}",
                yes(check.conclusion_holds)
            );
            let _ = writeln!(out, "hypotheses: {:?}", check.hypotheses);
            let _ = writeln!(out, "fixed points: {}", list(&check.fixed_points));
            if let Some(extra) = check.strong_extra {
                let _ = writeln!(
                    out,
                    "reachable fixed point with zero self-distance: {}",
                    yes(extra)
                );
            }
        }
        Findings::Ekeland { certificate: c } => {
            let _ = writeln!(
                out,
                "candidate z = {} ({})",
                c.point_z,
                if c.strict { "strict" } else { "not strict" }
            );
            for m in &c.margins {
                let _ = writeln!(out, "  x = {}: margin {}", m.point, m.value);
            }
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "  no strict inequality at x = {w}");
            }
        }
        Findings::Search {
            target,
            budget,
            space,
            violation,
        } => match space {
            Some(space) => {
                let _ = writeln!(out, "found {target} example:");
                table(&mut out, space);
                if let Some(v) = violation {
                    let _ = writeln!(out, "  {v}");
                }
            }
            None => {
                let _ = writeln!(
                    out,
                    "no {target} example within {} candidate(s)",
                    budget.max_candidates
                );
            }
        },
        Findings::Probe { result } => {
            let _ = writeln!(
                out,
                "{}: {:?} after {} candidate(s)",
                result.claim_id, result.verdict, result.candidates_examined
            );
            match &result.evidence {
                Some(ProbeEvidence::AxiomViolation { space, violation }) => {
                    table(&mut out, space);
                    let _ = writeln!(out, "  {violation}");
                }
                Some(ProbeEvidence::Satisfies { space, mode }) => {
                    table(&mut out, space);
                    let _ = writeln!(out, "  satisfies {mode}");
                }
                Some(ProbeEvidence::EkelandCounterexample {
                    space,
                    phi,
                    certificates,
                }) => {
                    table(&mut out, space);
                    let phis: Vec<String> = phi.iter().map(|(k, v)| format!("{k}: {v}")).collect();
                    let _ = writeln!(out, "  φ: {}", phis.join(", "));
                    for c in certificates {
                        let _ = writeln!(
                            out,
                            "  z = {}: no strict inequality at x = {}",
                            c.point_z,
                            c.witness.as_deref().unwrap_or("-")
                        );
                    }
                }
                Some(ProbeEvidence::CaristiCounterexample {
                    space, phi, map_t, ..
                }) => {
                    table(&mut out, space);
                    let phis: Vec<String> = phi.iter().map(|(k, v)| format!("{k}: {v}")).collect();
                    let maps: Vec<String> =
                        map_t.iter().map(|(k, v)| format!("{k} → {v}")).collect();
                    let _ = writeln!(out, "  φ: {}", phis.join(", "));
                    let _ = writeln!(out, "  T: {}", maps.join(", "));
                    let _ = writeln!(
                        out,
                        "  weak condition holds everywhere; T has no fixed point"
                    );
                }
                Some(ProbeEvidence::NonHausdorff { space, separation }) => {
                    table(&mut out, space);
                    if let Some((x, y)) = &separation.witness {
                        let _ = writeln!(out, "  points {x} and {y} cannot be separated");
                    }
                }
                None => {}
            }
        }
        Findings::InputError { message } => {
            let _ = writeln!(out, "error: {message}");
        }
    }
    out
}
