//! Caristi-type fixed points and Ekeland-type points on finite M-metric
//! spaces.
//!
//! An instance is a space, a self map `T`, a nonnegative potential `φ` and a
//! condition variant:
//!
//! | variant    | condition at every `x`                          |
//! |------------|-------------------------------------------------|
//! | `m_weak`   | `m(x,Tx) ≤ m_{x,Tx} + φ(x) - φ(Tx)`             |
//! | `m_strong` | `m(x,Tx) ≤ φ(x) - φ(Tx)`                        |
//! | `p_weak`   | `p(x,Tx) ≤ p(x,x) + φ(x) - φ(Tx)`               |
//! | `p_strong` | `p(x,Tx) ≤ φ(x) - φ(Tx)`                        |
//!
//! The constructive argument walks through dominated sets
//! `S(x) = {z : m(x,z) ≤ m_{x,z} + φ(x) - φ(z)}` (with `p(x,x)` in place of
//! `m_{x,z}` for the `p_*` variants), choosing `x_{n+1} ∈ S(x_n)` with
//! `φ(x_{n+1}) ≤ α(x_n) + 1/n` where `α(x) = min φ(S(x))`.
//! [`CaristiInstance::iterate`] makes that walk deterministic: among
//! admissible candidates it takes the smallest `φ`, then the first point in
//! carrier order. The slack schedule starts at `n = 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{first_violation, AxiomViolation, Mode};
use crate::rational::Rational;
use crate::space::{FiniteSpace, PointMap, PointSet, Potential, SpaceError};
use crate::topology::{generate_topology, TopologyKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaristiError {
    #[error("space is not an M-metric: {0}")]
    NotMMetric(Box<AxiomViolation>),
    #[error("variant {variant} needs a partial metric: {violation}")]
    VariantSpaceMismatch {
        variant: Variant,
        violation: Box<AxiomViolation>,
    },
    #[error("self map has {found} images but the space has {expected} points")]
    MapSize { expected: usize, found: usize },
    #[error("self map sends a point to index {0}, outside the space")]
    ImageOutOfRange(usize),
    #[error("potential has {found} values but the space has {expected} points")]
    PotentialSize { expected: usize, found: usize },
    #[error("max_steps must be at least 1")]
    ZeroSteps,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    MWeak,
    MStrong,
    PWeak,
    PStrong,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::MWeak,
        Variant::MStrong,
        Variant::PWeak,
        Variant::PStrong,
    ];

    pub fn is_partial(self) -> bool {
        matches!(self, Variant::PWeak | Variant::PStrong)
    }

    pub fn is_strong(self) -> bool {
        matches!(self, Variant::MStrong | Variant::PStrong)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::MWeak => "m_weak",
            Variant::MStrong => "m_strong",
            Variant::PWeak => "p_weak",
            Variant::PStrong => "p_strong",
        })
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "m_weak" => Ok(Variant::MWeak),
            "m_strong" => Ok(Variant::MStrong),
            "p_weak" => Ok(Variant::PWeak),
            "p_strong" => Ok(Variant::PStrong),
            other => Err(format!(
                "unknown variant `{other}` (expected m_weak, m_strong, p_weak or p_strong)"
            )),
        }
    }
}

/// The condition evaluated at one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub point: String,
    pub image: String,
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominatedSet {
    pub base: String,
    /// Members in carrier order.
    pub members: Vec<String>,
    /// `min φ` over the members.
    pub alpha: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The walk stopped at a point fixed by `T`.
    FixedPoint,
    /// The walk stopped at a point that `T` moves.
    StabilizedNonFixed,
    /// `max_steps` selections were made without the walk stopping.
    StepBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub points: Vec<String>,
    pub phi_values: Vec<Rational>,
    /// `α(x_n)` for each point of the trace.
    pub alpha_values: Vec<Rational>,
    /// `φ` at the last point; the limit of the non-increasing `φ(x_n)`.
    pub phi_limit: Rational,
    pub terminated: Termination,
    /// Number of selections performed.
    pub steps: usize,
}

impl IterationTrace {
    pub fn last(&self) -> &str {
        self.points.last().expect("traces are nonempty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    /// The condition holds and the generated topology is discrete, so every
    /// potential is lower semicontinuous.
    FullyVerified,
    /// Lower semicontinuity of `φ` was not established.
    PartiallyVerified,
    /// The condition fails somewhere.
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub variant: Variant,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub hypotheses: HypothesisStatus,
    pub fixed_points: Vec<String>,
    /// Strong variants only: whether some fixed point reached by the walk has
    /// zero self-distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strong_extra: Option<bool>,
}

/// A space with a self map, a potential and a condition variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaristiInstance {
    space: FiniteSpace,
    map_t: PointMap,
    phi: Potential,
    variant: Variant,
}

impl CaristiInstance {
    pub fn new(
        space: FiniteSpace,
        map_t: PointMap,
        phi: Potential,
        variant: Variant,
    ) -> Result<Self, CaristiError> {
        let n = space.len();
        if map_t.len() != n {
            return Err(CaristiError::MapSize {
                expected: n,
                found: map_t.len(),
            });
        }
        if let Some(&bad) = map_t.images().iter().find(|&&j| j >= n) {
            return Err(CaristiError::ImageOutOfRange(bad));
        }
        if phi.values().len() != n {
            return Err(CaristiError::PotentialSize {
                expected: n,
                found: phi.values().len(),
            });
        }
        if let Some(v) = first_violation(&space, Mode::MMetric) {
            return Err(CaristiError::NotMMetric(Box::new(v)));
        }
        if variant.is_partial() {
            if let Some(v) = first_violation(&space, Mode::Partial) {
                return Err(CaristiError::VariantSpaceMismatch {
                    variant,
                    violation: Box::new(v),
                });
            }
        }
        Ok(CaristiInstance {
            space,
            map_t,
            phi,
            variant,
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn map_t(&self) -> &PointMap {
        &self.map_t
    }

    pub fn phi(&self) -> &Potential {
        &self.phi
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn with_variant(&self, variant: Variant) -> Result<Self, CaristiError> {
        CaristiInstance::new(
            self.space.clone(),
            self.map_t.clone(),
            self.phi.clone(),
            variant,
        )
    }

    /// Both sides of the variant's condition at carrier index `x`, moving to `z`.
    pub fn condition_sides(&self, x: usize, z: usize) -> (Rational, Rational) {
        let s = &self.space;
        let drop = self.phi.at(x) - self.phi.at(z);
        let rhs = match self.variant {
            Variant::MWeak => s.self_min(x, z) + drop,
            Variant::PWeak => s.d(x, x) + drop,
            Variant::MStrong | Variant::PStrong => drop,
        };
        (s.d(x, z).clone(), rhs)
    }

    /// The variant's condition at every point, in carrier order.
    pub fn condition_report(&self) -> Vec<ConditionCheck> {
        (0..self.space.len())
            .map(|x| {
                let tx = self.map_t.apply(x);
                let (lhs, rhs) = self.condition_sides(x, tx);
                ConditionCheck {
                    point: self.space.label(x).to_owned(),
                    image: self.space.label(tx).to_owned(),
                    holds: lhs <= rhs,
                    lhs,
                    rhs,
                }
            })
            .collect()
    }

    /// Whether `z ∈ S(x)`, by carrier index.
    pub fn dominates(&self, x: usize, z: usize) -> bool {
        let s = &self.space;
        let allowance = if self.variant.is_partial() {
            s.d(x, x)
        } else {
            s.self_min(x, z)
        };
        s.d(x, z) <= &(allowance + self.phi.at(x) - self.phi.at(z))
    }

    pub fn dominated_indices(&self, x: usize) -> PointSet {
        (0..self.space.len())
            .filter(|&z| self.dominates(x, z))
            .collect()
    }

    fn alpha_of(&self, members: PointSet) -> Rational {
        members
            .iter()
            .map(|z| self.phi.at(z))
            .min()
            .expect("x ∈ S(x)")
            .clone()
    }

    pub fn dominated_set(&self, x: &str) -> Result<DominatedSet, CaristiError> {
        let i = self.space.index_of(x)?;
        let members = self.dominated_indices(i);
        Ok(DominatedSet {
            base: x.to_owned(),
            members: self.space.labels_of(members),
            alpha: self.alpha_of(members),
        })
    }

    pub fn alpha(&self, x: &str) -> Result<Rational, CaristiError> {
        Ok(self.dominated_set(x)?.alpha)
    }

    /// Walks `x_1 = x0, x_{n+1} ∈ S(x_n)` with `φ(x_{n+1}) ≤ α(x_n) + 1/n`,
    /// stopping once the selection repeats the current point.
    pub fn iterate(&self, x0: &str, max_steps: usize) -> Result<IterationTrace, CaristiError> {
        if max_steps == 0 {
            return Err(CaristiError::ZeroSteps);
        }
        let mut current = self.space.index_of(x0)?;
        let mut path = vec![current];
        let mut alphas = Vec::new();
        let mut terminated = Termination::StepBudget;
        let mut steps = 0;
        for n in 1..=max_steps {
            let members = self.dominated_indices(current);
            let alpha = self.alpha_of(members);
            let bound = &alpha + Rational::recip_of(n as u64);
            let next = members
                .iter()
                .filter(|&z| self.phi.at(z) <= &bound)
                .min_by(|&a, &b| self.phi.at(a).cmp(self.phi.at(b)).then(a.cmp(&b)))
                .expect("x_n itself is admissible");
            alphas.push(alpha);
            steps = n;
            if next == current {
                terminated = if self.map_t.apply(current) == current {
                    Termination::FixedPoint
                } else {
                    Termination::StabilizedNonFixed
                };
                break;
            }
            path.push(next);
            current = next;
        }
        if alphas.len() < path.len() {
            alphas.push(self.alpha_of(self.dominated_indices(current)));
        }
        let phi_values: Vec<Rational> = path.iter().map(|&i| self.phi.at(i).clone()).collect();
        Ok(IterationTrace {
            points: path
                .iter()
                .map(|&i| self.space.label(i).to_owned())
                .collect(),
            phi_limit: phi_values.last().expect("nonempty").clone(),
            phi_values,
            alpha_values: alphas,
            terminated,
            steps,
        })
    }

    /// Points with `T(x) = x`, in carrier order.
    pub fn fixed_points(&self) -> Vec<String> {
        let fixed: PointSet = (0..self.space.len())
            .filter(|&i| self.map_t.apply(i) == i)
            .collect();
        self.space.labels_of(fixed)
    }

    /// Checks the fixed point theorem on this instance.
    ///
    /// For strong variants the hypothesis also requires some point with zero
    /// self-distance, and `strong_extra` reports whether a walk from some
    /// start ends at a fixed point with zero self-distance.
    pub fn theorem_check(&self) -> TheoremCheck {
        let n = self.space.len();
        let condition = self.condition_report().iter().all(|c| c.holds);
        let zero_self = self.space.zero_self_indices();
        let hypothesis_holds = condition && (!self.variant.is_strong() || !zero_self.is_empty());
        let fixed_points = self.fixed_points();

        let kind = if self.variant.is_partial() {
            TopologyKind::POpen
        } else {
            TopologyKind::MOpen
        };
        let hypotheses = if !hypothesis_holds {
            HypothesisStatus::Failed
        } else if generate_topology(&self.space, kind).is_ok_and(|t| t.is_discrete()) {
            HypothesisStatus::FullyVerified
        } else {
            HypothesisStatus::PartiallyVerified
        };

        let strong_extra = self.variant.is_strong().then(|| {
            (0..n).any(|start| {
                let trace = self
                    .iterate(self.space.label(start), n + 1)
                    .expect("start is a carrier point");
                trace.terminated == Termination::FixedPoint && {
                    let z = self.space.index_of(trace.last()).expect("trace point");
                    zero_self.contains(z)
                }
            })
        });

        TheoremCheck {
            variant: self.variant,
            hypothesis_holds,
            conclusion_holds: !fixed_points.is_empty(),
            hypotheses,
            fixed_points,
            strong_extra,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Margin {
    pub point: String,
    pub value: Rational,
}

/// A candidate `z` with margins `φ(x) + m(z,x) - m_{x,z} - φ(z)` for `x ≠ z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EkelandCertificate {
    pub point_z: String,
    /// All margins are strictly positive.
    pub strict: bool,
    pub margins: Vec<Margin>,
    /// First point with a nonpositive margin, when not strict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl EkelandCertificate {
    /// Recomputes every margin from the space and potential and checks the
    /// certificate's claims.
    pub fn verify(&self, space: &FiniteSpace, phi: &Potential) -> bool {
        let Ok(z) = space.index_of(&self.point_z) else {
            return false;
        };
        let fresh = margins(space, phi, z);
        let witness = fresh
            .iter()
            .find(|m| !m.value.is_positive())
            .map(|m| m.point.clone());
        fresh == self.margins && witness.is_none() == self.strict && witness == self.witness
    }
}

fn margins(space: &FiniteSpace, phi: &Potential, z: usize) -> Vec<Margin> {
    (0..space.len())
        .filter(|&x| x != z)
        .map(|x| Margin {
            point: space.label(x).to_owned(),
            value: phi.at(x) + space.excess(z, x) - phi.at(z),
        })
        .collect()
}

/// Searches for `z` with `φ(z) < φ(x) + m(z,x) - m_{x,z}` for every `x ≠ z`.
///
/// Minimizers of `φ` are tried first (in carrier order), then the remaining
/// points. When no point qualifies the first minimizer is returned with
/// `strict = false` and a witness.
pub fn ekeland_point(
    space: &FiniteSpace,
    phi: &Potential,
) -> Result<EkelandCertificate, CaristiError> {
    if phi.values().len() != space.len() {
        return Err(CaristiError::PotentialSize {
            expected: space.len(),
            found: phi.values().len(),
        });
    }
    if let Some(v) = first_violation(space, Mode::MMetric) {
        return Err(CaristiError::NotMMetric(Box::new(v)));
    }
    let min_phi = phi.values().iter().min().expect("nonempty space");
    let (minimizers, others): (Vec<usize>, Vec<usize>) =
        (0..space.len()).partition(|&i| phi.at(i) == min_phi);
    for &z in minimizers.iter().chain(&others) {
        let cert = ekeland_certificate(space, phi, z);
        if cert.strict {
            return Ok(cert);
        }
    }
    Ok(ekeland_certificate(space, phi, minimizers[0]))
}

/// The certificate for the candidate at carrier index `z`.
pub fn ekeland_certificate(space: &FiniteSpace, phi: &Potential, z: usize) -> EkelandCertificate {
    let margins = margins(space, phi, z);
    let witness = margins
        .iter()
        .find(|m| !m.value.is_positive())
        .map(|m| m.point.clone());
    EkelandCertificate {
        point_z: space.label(z).to_owned(),
        strict: witness.is_none(),
        margins,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::q;

    #[test]
    fn weak_condition_on_example_one() {
        let inst = catalog::example_one_instance();
        let report = inst.condition_report();
        assert!(report.iter().all(|c| c.holds));
        let at2 = &report[1];
        assert_eq!((at2.lhs.clone(), at2.rhs.clone()), (q(10), q(11)));
    }

    #[test]
    fn strong_condition_fails_on_example_one_at_4() {
        let inst = catalog::example_one_instance()
            .with_variant(Variant::MStrong)
            .unwrap();
        let report = inst.condition_report();
        let failing: Vec<_> = report.iter().filter(|c| !c.holds).collect();
        // Both fixed points of T have positive self-distance.
        assert_eq!(
            failing.iter().map(|c| c.point.as_str()).collect::<Vec<_>>(),
            ["1", "4"]
        );
        assert_eq!(
            (failing[1].lhs.clone(), failing[1].rhs.clone()),
            (q(3), q(0))
        );
    }

    #[test]
    fn strong_condition_on_example_two() {
        let report = catalog::example_two_instance().condition_report();
        assert!(report.iter().all(|c| c.holds));
        assert_eq!(
            (report[1].lhs.clone(), report[1].rhs.clone()),
            (q(10), q(10))
        );
    }

    #[test]
    fn partial_variant_needs_partial_space() {
        let err = catalog::example_one_instance()
            .with_variant(Variant::PWeak)
            .unwrap_err();
        assert!(matches!(err, CaristiError::VariantSpaceMismatch { .. }));
    }

    #[test]
    fn non_m_metric_is_rejected() {
        let space = catalog::three_point();
        let err = CaristiInstance::new(
            space.clone(),
            PointMap::identity(3),
            Potential::zero(3),
            Variant::MWeak,
        )
        .unwrap_err();
        assert!(matches!(err, CaristiError::NotMMetric(_)));
    }

    #[test]
    fn dominated_sets_in_example_two() {
        let inst = catalog::example_two_instance();
        let s2 = inst.dominated_set("2").unwrap();
        assert_eq!(s2.members, ["1", "2"]);
        assert_eq!(s2.alpha, q(10));
        let s1 = inst.dominated_set("1").unwrap();
        assert_eq!(s1.members, ["1"]);
        assert_eq!(s1.alpha, q(10));
        assert_eq!(inst.alpha("2").unwrap(), q(10));
    }

    #[test]
    fn alpha_in_example_one() {
        let inst = catalog::example_one_instance();
        assert_eq!(inst.alpha("3").unwrap(), q(10));
        for x in inst.space().labels() {
            let s = inst.dominated_set(x).unwrap();
            assert!(s.members.contains(x));
            assert!(&s.alpha <= inst.phi().at(inst.space().index_of(x).unwrap()));
        }
    }

    #[test]
    fn walk_from_2_in_example_two() {
        let trace = catalog::example_two_instance().iterate("2", 10).unwrap();
        assert_eq!(trace.points, ["2", "1"]);
        assert_eq!(trace.terminated, Termination::FixedPoint);
        assert_eq!(trace.phi_values, [q(20), q(10)]);
        assert_eq!(trace.alpha_values, [q(10), q(10)]);
        assert_eq!(trace.phi_limit, q(10));
        assert_eq!(trace.steps, 2);
    }

    #[test]
    fn walk_from_4_in_example_one_goes_to_1() {
        let trace = catalog::example_one_instance().iterate("4", 10).unwrap();
        assert_eq!(trace.points, ["4", "1"]);
        assert_eq!(trace.terminated, Termination::FixedPoint);
    }

    #[test]
    fn budget_exhaustion() {
        let trace = catalog::example_two_instance().iterate("2", 1).unwrap();
        assert_eq!(trace.points, ["2", "1"]);
        assert_eq!(trace.terminated, Termination::StepBudget);
        assert_eq!(trace.alpha_values.len(), 2);
        assert_eq!(
            catalog::example_two_instance().iterate("2", 0).unwrap_err(),
            CaristiError::ZeroSteps
        );
    }

    #[test]
    fn cycle_without_fixed_point_stabilizes_off_the_map() {
        // A 3-cycle on the discrete metric; the condition cannot hold everywhere.
        let space = FiniteSpace::from_fn(&["a", "b", "c"], |i, j| if i == j { q(0) } else { q(1) })
            .unwrap();
        let cycle = PointMap::from_indices(vec![1, 2, 0]);
        let inst = CaristiInstance::new(space, cycle, Potential::zero(3), Variant::MWeak).unwrap();
        assert!(inst.condition_report().iter().any(|c| !c.holds));
        assert!(inst.fixed_points().is_empty());
        let trace = inst.iterate("b", 10).unwrap();
        assert_eq!(trace.terminated, Termination::StabilizedNonFixed);
        assert_eq!(trace.points, ["b"]);
        let check = inst.theorem_check();
        assert!(!check.hypothesis_holds && !check.conclusion_holds);
    }

    #[test]
    fn fixed_points_of_examples() {
        assert_eq!(catalog::example_one_instance().fixed_points(), ["1", "4"]);
        assert_eq!(catalog::example_two_instance().fixed_points(), ["1", "4"]);
        let space = catalog::example_two();
        let id = CaristiInstance::new(
            space,
            PointMap::identity(4),
            Potential::zero(4),
            Variant::MWeak,
        )
        .unwrap();
        assert_eq!(id.fixed_points(), ["1", "2", "3", "4"]);
    }

    #[test]
    fn theorem_checks() {
        let one = catalog::example_one_instance().theorem_check();
        assert!(one.hypothesis_holds && one.conclusion_holds);
        assert_eq!(one.hypotheses, HypothesisStatus::FullyVerified);
        assert_eq!(one.strong_extra, None);

        let two = catalog::example_two_instance().theorem_check();
        assert!(two.hypothesis_holds && two.conclusion_holds);
        assert_eq!(two.strong_extra, Some(true));

        let single = FiniteSpace::parse(&["x"], &[vec!["0"]]).unwrap();
        let inst = CaristiInstance::new(
            single,
            PointMap::identity(1),
            Potential::zero(1),
            Variant::MWeak,
        )
        .unwrap();
        let c = inst.theorem_check();
        assert!(c.hypothesis_holds && c.conclusion_holds);
    }

    #[test]
    fn swap_on_flat_pair_meets_weak_condition_without_fixed_point() {
        let space = catalog::flat_pair();
        let swap = PointMap::from_indices(vec![1, 0]);
        let inst = CaristiInstance::new(space, swap, Potential::zero(2), Variant::MWeak).unwrap();
        let check = inst.theorem_check();
        assert!(check.hypothesis_holds);
        assert!(!check.conclusion_holds);
        assert_eq!(check.hypotheses, HypothesisStatus::PartiallyVerified);
        let trace = inst.iterate("b", 5).unwrap();
        assert_eq!(trace.points, ["b", "a"]);
        assert_eq!(trace.terminated, Termination::StabilizedNonFixed);
    }

    #[test]
    fn ekeland_on_example_two() {
        let space = catalog::example_two();
        let phi = catalog::ten_x(&space);
        let cert = ekeland_point(&space, &phi).unwrap();
        assert_eq!(cert.point_z, "1");
        assert!(cert.strict);
        let values: Vec<_> = cert.margins.iter().map(|m| m.value.clone()).collect();
        assert_eq!(values, [q(20), q(27), q(38)]);
        assert!(cert.verify(&space, &phi));
    }

    #[test]
    fn ekeland_singleton_is_vacuously_strict() {
        let single = FiniteSpace::parse(&["x"], &[vec!["4"]]).unwrap();
        let cert = ekeland_point(&single, &Potential::zero(1)).unwrap();
        assert!(cert.strict && cert.margins.is_empty());
    }

    #[test]
    fn ekeland_fails_strictly_on_flat_pair() {
        let space = catalog::flat_pair();
        let phi = Potential::zero(2);
        let cert = ekeland_point(&space, &phi).unwrap();
        assert!(!cert.strict);
        assert_eq!(cert.point_z, "a");
        assert_eq!(cert.witness.as_deref(), Some("b"));
        assert_eq!(cert.margins[0].value, q(0));
        assert!(cert.verify(&space, &phi));
    }
}
