//! Usual and symmetric convergence, Cauchy sequences, and the four
//! continuity types.
//!
//! Convergence on the infinite carrier `[0, ∞)` with `p(x,y) = max{x,y}` is a
//! semi-decision: a verdict samples the tail at `n ∈ {N, 2N, 4N, 8N}` and
//! compares exact residuals against a tolerance. Verdicts carry `N`, the
//! tolerance and the residuals, so a verdict is only ever certified up to
//! those parameters.
//!
//! Continuity between finite spaces is decided exactly. For a map
//! `f : (X,p) → (Y,ρ)` and a point `a`, writing `x ∈ B(a,δ)` for usual
//! membership and `x ∈ B(a,δ) ∧ a ∈ B(x,δ)` for symmetric membership:
//!
//! | mode | hypothesis on `x`  | conclusion on `f(x)` |
//! |------|--------------------|----------------------|
//! | uu   | usual              | usual                |
//! | su   | symmetric          | usual                |
//! | us   | usual              | symmetric            |
//! | ss   | symmetric          | symmetric            |
//!
//! so `us` is the strongest type and `su` the weakest. Radii are quantified
//! over representative values between critical thresholds, which is exact
//! because ball membership is a step function of the radius.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{ParseRationalError, Rational};
use crate::space::{FiniteSpace, PointMap, SpaceError};
use crate::topology::{ball_set, gap, representative_epsilons, BallKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvergenceError {
    #[error("{0} is outside the carrier [0, ∞)")]
    NegativeCarrierValue(Rational),
    #[error("sequence leaves the carrier: x_{index} = {value}")]
    CarrierViolation { index: u64, value: Rational },
    #[error("tail index must be at least 1")]
    ZeroTailIndex,
    #[error("tolerance must be positive, got {0}")]
    NonpositiveTolerance(Rational),
    #[error("bad sequence `{0}`: expected c, c + a/n or c + a/n^2")]
    BadSequence(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("map has {found} images but the source has {expected} points")]
    NonTotalMap { expected: usize, found: usize },
    #[error("map image index {0} is outside the target")]
    ImageOutOfRange(usize),
}

/// Built-in partial metric families on an infinite carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParametricSpace {
    /// `[0, ∞)` with `p(x,y) = max{x,y}`.
    #[default]
    MaxNonneg,
}

impl ParametricSpace {
    pub fn eval(self, x: &Rational, y: &Rational) -> Result<Rational, ConvergenceError> {
        for v in [x, y] {
            if v.is_negative() {
                return Err(ConvergenceError::NegativeCarrierValue(v.clone()));
            }
        }
        match self {
            ParametricSpace::MaxNonneg => Ok(Rational::max_of(x, y).clone()),
        }
    }
}

/// `c`, `c + a/n` or `c + a/n²`, for `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum SequenceRule {
    Constant { c: Rational },
    Harmonic { c: Rational, a: Rational },
    InverseSquare { c: Rational, a: Rational },
}

/// A sequence rule with an optional finite prefix `x_1, …, x_k` that
/// overrides the rule on those indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub rule: SequenceRule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefix: Vec<Rational>,
}

impl SequenceSpec {
    pub fn constant(c: Rational) -> Self {
        SequenceRule::Constant { c }.into()
    }

    pub fn harmonic(c: Rational, a: Rational) -> Self {
        SequenceRule::Harmonic { c, a }.into()
    }

    pub fn inverse_square(c: Rational, a: Rational) -> Self {
        SequenceRule::InverseSquare { c, a }.into()
    }

    pub fn with_prefix(mut self, prefix: Vec<Rational>) -> Self {
        self.prefix = prefix;
        self
    }

    /// `x_n` for `n ≥ 1`.
    pub fn term(&self, n: u64) -> Rational {
        assert!(n >= 1, "sequences are indexed from 1");
        if let Some(v) = self.prefix.get((n - 1) as usize) {
            return v.clone();
        }
        let n_q = Rational::from(n);
        match &self.rule {
            SequenceRule::Constant { c } => c.clone(),
            SequenceRule::Harmonic { c, a } => c + &(a / &n_q),
            SequenceRule::InverseSquare { c, a } => c + &(a / &(&n_q * &n_q)),
        }
    }

    fn carrier_term(&self, n: u64) -> Result<Rational, ConvergenceError> {
        let v = self.term(n);
        if v.is_negative() {
            return Err(ConvergenceError::CarrierViolation { index: n, value: v });
        }
        Ok(v)
    }
}

impl From<SequenceRule> for SequenceSpec {
    fn from(rule: SequenceRule) -> Self {
        SequenceSpec {
            rule,
            prefix: Vec::new(),
        }
    }
}

impl fmt::Display for SequenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceRule::Constant { c } => write!(f, "{c}"),
            SequenceRule::Harmonic { c, a } => write!(f, "{c} + {a}/n"),
            SequenceRule::InverseSquare { c, a } => write!(f, "{c} + {a}/n^2"),
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = ConvergenceError;

    /// Parses sums of a constant and at most one `a/n` or `a/n^2` term, such
    /// as `1 + 1/n^2`, `2 - 3/n`, `1/n` or `5/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConvergenceError::BadSequence(s.to_owned());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-')
                && i > 0
                && !matches!(compact.as_bytes()[i - 1], b'e' | b'E')
            {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut c = Rational::zero();
        let mut tail: Option<(u8, Rational)> = None;
        for term in terms {
            let (sign, body) = match term.as_bytes().first() {
                Some(b'-') => (-Rational::one(), &term[1..]),
                Some(b'+') => (Rational::one(), &term[1..]),
                _ => (Rational::one(), term),
            };
            let (power, coeff) = if let Some(coeff) = body.strip_suffix("/n^2") {
                (2, coeff)
            } else if let Some(coeff) = body.strip_suffix("/n") {
                (1, coeff)
            } else {
                (0, body)
            };
            let coeff = coeff.trim_start_matches('(').trim_end_matches(')');
            let value = sign * coeff.parse::<Rational>()?;
            match (power, &mut tail) {
                (0, _) => c += &value,
                (p, None) => tail = Some((p, value)),
                (p, Some((q, a))) if p == *q => *a += &value,
                _ => return Err(bad()),
            }
        }
        Ok(match tail {
            None => SequenceSpec::constant(c),
            Some((1, a)) => SequenceSpec::harmonic(c, a),
            Some((_, a)) => SequenceSpec::inverse_square(c, a),
        })
    }
}

/// Tail sampling parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub tail_n: u64,
    pub tol: Rational,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            tail_n: 10_000,
            tol: Rational::new(1, 1_000_000),
        }
    }
}

impl Sampling {
    pub fn new(tail_n: u64, tol: Rational) -> Result<Self, ConvergenceError> {
        let s = Sampling { tail_n, tol };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), ConvergenceError> {
        if self.tail_n == 0 {
            return Err(ConvergenceError::ZeroTailIndex);
        }
        if !self.tol.is_positive() {
            return Err(ConvergenceError::NonpositiveTolerance(self.tol.clone()));
        }
        Ok(())
    }

    /// `N, 2N, 4N, 8N`.
    pub fn indices(&self) -> [u64; 4] {
        let n = self.tail_n;
        [n, 2 * n, 4 * n, 8 * n]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictMode {
    Usual,
    Symmetric,
    Cauchy,
}

/// Which notion of convergence to a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitMode {
    Usual,
    Symmetric,
}

impl From<LimitMode> for VerdictMode {
    fn from(m: LimitMode) -> Self {
        match m {
            LimitMode::Usual => VerdictMode::Usual,
            LimitMode::Symmetric => VerdictMode::Symmetric,
        }
    }
}

impl FromStr for LimitMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "usual" | "u" => Ok(LimitMode::Usual),
            "symmetric" | "s" => Ok(LimitMode::Symmetric),
            other => Err(format!(
                "unknown convergence mode `{other}` (expected usual or symmetric)"
            )),
        }
    }
}

/// One sampled residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub n: u64,
    /// Second index for Cauchy pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub mode: VerdictMode,
    pub holds: bool,
    pub tail_index: u64,
    pub tolerance: Rational,
    /// The candidate limit, absent for Cauchy verdicts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<Rational>,
    pub residuals: Vec<Residual>,
}

/// Whether `x_n → x` in the given mode, certified on the sampled tail.
///
/// Usual: `|p(x_n,x) - p(x,x)| < tol` at every sample. Symmetric: also
/// `|p(x_n,x_n) - p(x,x)| < tol`. Each residual is the larger of the gaps
/// the mode inspects at that index.
pub fn convergence_verdict(
    ps: ParametricSpace,
    seq: &SequenceSpec,
    x: &Rational,
    mode: LimitMode,
    sampling: &Sampling,
) -> Result<ConvergenceVerdict, ConvergenceError> {
    sampling.validate()?;
    let pxx = ps.eval(x, x)?;
    let mut residuals = Vec::with_capacity(4);
    for n in sampling.indices() {
        let xn = seq.carrier_term(n)?;
        let mut value = (ps.eval(&xn, x)? - &pxx).abs();
        if mode == LimitMode::Symmetric {
            let own = (ps.eval(&xn, &xn)? - &pxx).abs();
            value = Rational::max_of(&value, &own).clone();
        }
        residuals.push(Residual { n, m: None, value });
    }
    Ok(ConvergenceVerdict {
        mode: mode.into(),
        holds: residuals.iter().all(|r| r.value < sampling.tol),
        tail_index: sampling.tail_n,
        tolerance: sampling.tol.clone(),
        limit: Some(x.clone()),
        residuals,
    })
}

/// Whether `p(x_n, x_m)` settles: the sampled values over all index pairs
/// (including `n = m`) spread by less than `tol`. Residuals are each
/// sampled value minus the smallest one.
pub fn cauchy_verdict(
    ps: ParametricSpace,
    seq: &SequenceSpec,
    sampling: &Sampling,
) -> Result<ConvergenceVerdict, ConvergenceError> {
    sampling.validate()?;
    let idx = sampling.indices();
    let terms = idx
        .iter()
        .map(|&n| seq.carrier_term(n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut values = Vec::new();
    for (a, &n) in idx.iter().enumerate() {
        for (b, &m) in idx.iter().enumerate().skip(a) {
            values.push((n, m, ps.eval(&terms[a], &terms[b])?));
        }
    }
    let lo = values
        .iter()
        .map(|(_, _, v)| v)
        .min()
        .expect("samples")
        .clone();
    let residuals: Vec<Residual> = values
        .into_iter()
        .map(|(n, m, v)| Residual {
            n,
            m: Some(m),
            value: v - &lo,
        })
        .collect();
    Ok(ConvergenceVerdict {
        mode: VerdictMode::Cauchy,
        holds: residuals.iter().all(|r| r.value < sampling.tol),
        tail_index: sampling.tail_n,
        tolerance: sampling.tol.clone(),
        limit: None,
        residuals,
    })
}

/// The candidates to which the sequence converges in `mode`. Negative
/// candidates are not carrier points and are never limits.
pub fn limit_set(
    ps: ParametricSpace,
    seq: &SequenceSpec,
    candidates: &[Rational],
    mode: LimitMode,
    sampling: &Sampling,
) -> Result<BTreeSet<Rational>, ConvergenceError> {
    let mut out = BTreeSet::new();
    for x in candidates.iter().filter(|x| !x.is_negative()) {
        if convergence_verdict(ps, seq, x, mode, sampling)?.holds {
            out.insert(x.clone());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuityMode {
    Uu,
    Su,
    Us,
    Ss,
}

impl ContinuityMode {
    pub const ALL: [ContinuityMode; 4] = [
        ContinuityMode::Uu,
        ContinuityMode::Su,
        ContinuityMode::Us,
        ContinuityMode::Ss,
    ];

    fn symmetric_hypothesis(self) -> bool {
        matches!(self, ContinuityMode::Su | ContinuityMode::Ss)
    }

    fn symmetric_conclusion(self) -> bool {
        matches!(self, ContinuityMode::Us | ContinuityMode::Ss)
    }
}

impl FromStr for ContinuityMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uu" => Ok(ContinuityMode::Uu),
            "su" => Ok(ContinuityMode::Su),
            "us" => Ok(ContinuityMode::Us),
            "ss" => Ok(ContinuityMode::Ss),
            other => Err(format!(
                "unknown continuity mode `{other}` (expected uu, su, us or ss)"
            )),
        }
    }
}

impl fmt::Display for ContinuityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContinuityMode::Uu => "uu",
            ContinuityMode::Su => "su",
            ContinuityMode::Us => "us",
            ContinuityMode::Ss => "ss",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ContinuityQuery<'a> {
    pub source: &'a FiniteSpace,
    pub target: &'a FiniteSpace,
    pub map: &'a PointMap,
    pub point: &'a str,
    pub mode: ContinuityMode,
}

/// A hypothesis point whose image escapes the target ball for one radius `δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaFailure {
    pub delta: Rational,
    pub point: String,
}

/// A radius `ε` for which no `δ` works, with one escaping point per `δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuityWitness {
    pub epsilon: Rational,
    pub failures: Vec<DeltaFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuityOutcome {
    pub mode: ContinuityMode,
    pub point: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ContinuityWitness>,
}

/// Thresholds for both `y ∈ B(c,r)` and `c ∈ B(y,r)` as `y` ranges over the space.
fn two_sided_thresholds(space: &FiniteSpace, c: usize) -> Vec<Rational> {
    (0..space.len())
        .flat_map(|y| {
            [
                gap(space, BallKind::POpen, c, y),
                gap(space, BallKind::POpen, y, c),
            ]
        })
        .collect()
}

/// Decides one of the four continuity types of `f` at `a`.
pub fn continuity_check(q: &ContinuityQuery<'_>) -> Result<ContinuityOutcome, ConvergenceError> {
    let (src, tgt, f) = (q.source, q.target, q.map);
    if f.len() != src.len() {
        return Err(ConvergenceError::NonTotalMap {
            expected: src.len(),
            found: f.len(),
        });
    }
    if let Some(&bad) = f.images().iter().find(|&&j| j >= tgt.len()) {
        return Err(ConvergenceError::ImageOutOfRange(bad));
    }
    let a = src.index_of(q.point)?;
    let fa = f.apply(a);

    let epsilons = representative_epsilons(&two_sided_thresholds(tgt, fa));
    let deltas = representative_epsilons(&two_sided_thresholds(src, a));

    for eps in &epsilons {
        let around_fa = ball_set(tgt, BallKind::POpen, fa, eps);
        let conclusion = |x: usize| {
            let fx = f.apply(x);
            around_fa.contains(fx)
                && (!q.mode.symmetric_conclusion()
                    || ball_set(tgt, BallKind::POpen, fx, eps).contains(fa))
        };
        let mut failures = Vec::with_capacity(deltas.len());
        for delta in &deltas {
            let around_a = ball_set(src, BallKind::POpen, a, delta);
            let escaping = around_a
                .iter()
                .filter(|&x| {
                    !q.mode.symmetric_hypothesis()
                        || ball_set(src, BallKind::POpen, x, delta).contains(a)
                })
                .find(|&x| !conclusion(x));
            match escaping {
                Some(x) => failures.push(DeltaFailure {
                    delta: delta.clone(),
                    point: src.label(x).to_owned(),
                }),
                None => break,
            }
        }
        if failures.len() == deltas.len() {
            return Ok(ContinuityOutcome {
                mode: q.mode,
                point: q.point.to_owned(),
                holds: false,
                witness: Some(ContinuityWitness {
                    epsilon: eps.clone(),
                    failures,
                }),
            });
        }
    }
    Ok(ContinuityOutcome {
        mode: q.mode,
        point: q.point.to_owned(),
        holds: true,
        witness: None,
    })
}
