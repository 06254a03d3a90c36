//! Axiom checking for metric, partial metric and M-metric tables.
//!
//! Every check enumerates all ordered witness tuples, so a report is
//! exhaustive: an empty report is a proof that the axiom system holds on the
//! table. Violations carry both sides of the failed relation, evaluated
//! exactly.
//!
//! Triangle-type axioms use the witness convention `(start, end, via)`:
//!
//! | axiom        | lhs                          | rhs                                        |
//! |--------------|------------------------------|--------------------------------------------|
//! | MET-triangle | `d(s,e)`                     | `d(s,v) + d(v,e)`                          |
//! | P4           | `p(s,e) + p(v,v)`            | `p(s,v) + p(v,e)`                          |
//! | M4           | `m(s,e) - m_{s,e}`           | `(m(s,v) - m_{s,v}) + (m(v,e) - m_{v,e})`  |
//!
//! The separation axioms P1 and M1 (`p(x,x) = p(x,y) = p(y,y) ⟺ x = y`) are
//! checked in both directions. For a pair they are stated through the
//! *spread* `max{p(x,x), p(x,y), p(y,y)} - min{…}`: it must be positive when
//! `x ≠ y` and zero when `x = y`.

use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;
use crate::space::FiniteSpace;

/// Which axiom system to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Metric,
    Partial,
    MMetric,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Metric, Mode::Partial, Mode::MMetric];

    pub fn axioms(self) -> &'static [AxiomId] {
        use AxiomId::*;
        match self {
            Mode::Metric => &[MetSymmetry, MetIdentity, MetTriangle],
            Mode::Partial => &[P1, P2, P3, P4],
            Mode::MMetric => &[M1, M2, M3, M4],
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Mode::Metric => "d",
            Mode::Partial => "p",
            Mode::MMetric => "m",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Metric => "metric",
            Mode::Partial => "partial",
            Mode::MMetric => "m_metric",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "metric" => Ok(Mode::Metric),
            "partial" | "partial_metric" => Ok(Mode::Partial),
            "m_metric" | "m-metric" | "mmetric" => Ok(Mode::MMetric),
            other => Err(format!(
                "unknown axiom system `{other}` (expected metric, partial or m_metric)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomId {
    #[serde(rename = "MET-symmetry")]
    MetSymmetry,
    #[serde(rename = "MET-identity")]
    MetIdentity,
    #[serde(rename = "MET-triangle")]
    MetTriangle,
    P1,
    P2,
    P3,
    P4,
    M1,
    M2,
    M3,
    M4,
}

impl AxiomId {
    pub fn mode(self) -> Mode {
        use AxiomId::*;
        match self {
            MetSymmetry | MetIdentity | MetTriangle => Mode::Metric,
            P1 | P2 | P3 | P4 => Mode::Partial,
            M1 | M2 | M3 | M4 => Mode::MMetric,
        }
    }

    pub fn name(self) -> &'static str {
        use AxiomId::*;
        match self {
            MetSymmetry => "MET-symmetry",
            MetIdentity => "MET-identity",
            MetTriangle => "MET-triangle",
            P1 => "P1",
            P2 => "P2",
            P3 => "P3",
            P4 => "P4",
            M1 => "M1",
            M2 => "M2",
            M3 => "M3",
            M4 => "M4",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The relation an axiom requires between its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Eq,
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    fn negated_symbol(self) -> &'static str {
        match self {
            Relation::Le => ">",
            Relation::Eq => "≠",
            Relation::Gt => "≤",
        }
    }
}

/// One failed axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: AxiomId,
    pub witness: Vec<String>,
    pub lhs: Rational,
    pub rhs: Rational,
    /// The relation the axiom requires; it fails on `(lhs, rhs)`.
    pub relation: Relation,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.axiom.mode().symbol();
        let w = &self.witness;
        let (left, right) = match (self.axiom, w.as_slice()) {
            (AxiomId::MetSymmetry | AxiomId::P2 | AxiomId::M3, [x, y]) => {
                (format!("{s}({x},{y})"), format!("{s}({y},{x})"))
            }
            (AxiomId::MetIdentity, [x, y]) if x == y => (format!("d({x},{x})"), "0".to_owned()),
            (AxiomId::MetIdentity, [x, y]) => (format!("d({x},{y})"), "0".to_owned()),
            (AxiomId::P1 | AxiomId::M1, [x, y]) => (
                format!("spread{{{s}({x},{x}), {s}({x},{y}), {s}({y},{y})}}"),
                "0".to_owned(),
            ),
            (AxiomId::P3, [x, y]) => (format!("p({x},{x})"), format!("p({x},{y})")),
            (AxiomId::M2, [x, y]) => (format!("m_{{{x},{y}}}"), format!("m({x},{y})")),
            (AxiomId::MetTriangle, [a, b, v]) => {
                (format!("d({a},{b})"), format!("d({a},{v}) + d({v},{b})"))
            }
            (AxiomId::P4, [a, b, v]) => (
                format!("p({a},{b}) + p({v},{v})"),
                format!("p({a},{v}) + p({v},{b})"),
            ),
            (AxiomId::M4, [a, b, v]) => (
                format!("m({a},{b}) - m_{{{a},{b}}}"),
                format!("(m({a},{v}) - m_{{{a},{v}}}) + (m({v},{b}) - m_{{{v},{b}}})"),
            ),
            _ => ("lhs".to_owned(), "rhs".to_owned()),
        };
        let rhs = self.rhs.to_string();
        let right = if right == rhs {
            right
        } else {
            format!("{right} = {rhs}")
        };
        write!(
            f,
            "{} at ({}): {left} = {} {} {right}",
            self.axiom,
            w.join(","),
            self.lhs,
            self.relation.negated_symbol(),
        )
    }
}

/// Witness by carrier index, converted to labels only when reported.
#[derive(Debug, Clone)]
struct RawViolation {
    axiom: AxiomId,
    witness: Vec<usize>,
    lhs: Rational,
    rhs: Rational,
    relation: Relation,
}

impl RawViolation {
    fn labelled(self, space: &FiniteSpace) -> AxiomViolation {
        AxiomViolation {
            axiom: self.axiom,
            witness: self
                .witness
                .iter()
                .map(|&i| space.label(i).to_owned())
                .collect(),
            lhs: self.lhs,
            rhs: self.rhs,
            relation: self.relation,
        }
    }
}

/// Both sides of `axiom` at a witness given by carrier indices, together
/// with the required relation. Returns `None` for a witness of the wrong
/// arity.
pub fn instantiate(
    space: &FiniteSpace,
    axiom: AxiomId,
    witness: &[usize],
) -> Option<(Rational, Rational, Relation)> {
    use AxiomId::*;
    let d = |i: usize, j: usize| space.d(i, j).clone();
    let out = match (axiom, witness) {
        (MetSymmetry | P2 | M3, &[x, y]) => (d(x, y), d(y, x), Relation::Eq),
        (MetIdentity, &[x, y]) if x == y => (d(x, x), Rational::zero(), Relation::Eq),
        (MetIdentity, &[x, y]) => (d(x, y), Rational::zero(), Relation::Gt),
        (P1 | M1, &[x, y]) => {
            let vals = [space.d(x, x), space.d(x, y), space.d(y, y)];
            let hi = vals.iter().copied().max().expect("nonempty");
            let lo = vals.iter().copied().min().expect("nonempty");
            let rel = if x == y { Relation::Eq } else { Relation::Gt };
            (hi - lo, Rational::zero(), rel)
        }
        (P3, &[x, y]) => (d(x, x), d(x, y), Relation::Le),
        (M2, &[x, y]) => (space.self_min(x, y).clone(), d(x, y), Relation::Le),
        (MetTriangle, &[s, e, v]) => (d(s, e), d(s, v) + d(v, e), Relation::Le),
        (P4, &[s, e, v]) => (d(s, e) + d(v, v), d(s, v) + d(v, e), Relation::Le),
        (M4, &[s, e, v]) => (
            space.excess(s, e),
            space.excess(s, v) + space.excess(v, e),
            Relation::Le,
        ),
        _ => return None,
    };
    Some(out)
}

fn arity(axiom: AxiomId) -> usize {
    match axiom {
        AxiomId::MetTriangle | AxiomId::P4 | AxiomId::M4 => 3,
        _ => 2,
    }
}

fn for_each_violation<F>(space: &FiniteSpace, mode: Mode, mut f: F) -> ControlFlow<()>
where
    F: FnMut(RawViolation) -> ControlFlow<()>,
{
    let n = space.len();
    for &axiom in mode.axioms() {
        let mut check = |witness: Vec<usize>| {
            let (lhs, rhs, relation) = instantiate(space, axiom, &witness).expect("arity matches");
            if relation.holds(&lhs, &rhs) {
                ControlFlow::Continue(())
            } else {
                f(RawViolation {
                    axiom,
                    witness,
                    lhs,
                    rhs,
                    relation,
                })
            }
        };
        if arity(axiom) == 2 {
            for x in 0..n {
                for y in 0..n {
                    check(vec![x, y])?;
                }
            }
        } else {
            for s in 0..n {
                for e in 0..n {
                    for v in 0..n {
                        check(vec![s, e, v])?;
                    }
                }
            }
        }
    }
    ControlFlow::Continue(())
}

/// All violations of `mode`'s axioms, ordered by axiom and then by witness
/// tuple in carrier order.
pub fn axiom_report(space: &FiniteSpace, mode: Mode) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    let _ = for_each_violation(space, mode, |v| {
        out.push(v.labelled(space));
        ControlFlow::Continue(())
    });
    out
}

/// The first violation of `mode`, if any.
pub fn first_violation(space: &FiniteSpace, mode: Mode) -> Option<AxiomViolation> {
    let mut found = None;
    let _ = for_each_violation(space, mode, |v| {
        found = Some(v.labelled(space));
        ControlFlow::Break(())
    });
    found
}

/// Whether the table satisfies every axiom of `mode`.
pub fn satisfies(space: &FiniteSpace, mode: Mode) -> bool {
    first_violation(space, mode).is_none()
}

/// Violations grouped by axiom system.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassViolations {
    pub metric: Vec<AxiomViolation>,
    pub partial: Vec<AxiomViolation>,
    pub m_metric: Vec<AxiomViolation>,
}

/// Membership of a table in each of the three classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceClassification {
    pub is_metric: bool,
    pub is_partial: bool,
    pub is_m_metric: bool,
    pub violations: ClassViolations,
}

impl SpaceClassification {
    pub fn satisfies(&self, mode: Mode) -> bool {
        match mode {
            Mode::Metric => self.is_metric,
            Mode::Partial => self.is_partial,
            Mode::MMetric => self.is_m_metric,
        }
    }

    /// The strictest class the table belongs to.
    pub fn strictest(&self) -> Option<Mode> {
        Mode::ALL.into_iter().find(|&m| self.satisfies(m))
    }
}

/// Runs all three reports.
///
/// Metrics are partial metrics and partial metrics are M-metrics, so the
/// three flags are always nested.
pub fn classify(space: &FiniteSpace) -> SpaceClassification {
    let violations = ClassViolations {
        metric: axiom_report(space, Mode::Metric),
        partial: axiom_report(space, Mode::Partial),
        m_metric: axiom_report(space, Mode::MMetric),
    };
    let class = SpaceClassification {
        is_metric: violations.metric.is_empty(),
        is_partial: violations.partial.is_empty(),
        is_m_metric: violations.m_metric.is_empty(),
        violations,
    };
    assert!(
        (!class.is_metric || class.is_partial) && (!class.is_partial || class.is_m_metric),
        "class hierarchy broken on {space:?}"
    );
    class
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("not a partial metric: {0}")]
    NotPartialMetric(Box<AxiomViolation>),
}

/// `d_p(x,y) = 2p(x,y) - p(x,x) - p(y,y)`, the metric induced by a partial
/// metric.
pub fn induced_metric(space: &FiniteSpace) -> Result<FiniteSpace, AxiomError> {
    if let Some(v) = first_violation(space, Mode::Partial) {
        return Err(AxiomError::NotPartialMetric(Box::new(v)));
    }
    let two = Rational::from_integer(2);
    let metric = FiniteSpace::from_fn(space.labels(), |i, j| {
        &two * space.d(i, j) - space.d(i, i) - space.d(j, j)
    })
    .expect("a partial metric induces a nonnegative symmetric table");
    Ok(metric)
}
