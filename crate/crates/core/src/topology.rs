//! Balls, generated topologies and separation properties on finite spaces.
//!
//! Ball membership is a step function of the radius. Around a center `x`
//! every point `y` has a *gap* (`p(x,y) - p(x,x)` for p-balls, the excess
//! `m(x,y) - m_{x,y}` for M-balls) and `y` belongs to the open ball of radius
//! `ε` exactly when its gap is below `ε`. The gaps are the critical radii:
//! evaluating balls at every positive gap plus one radius beyond the largest
//! gap produces every distinct ball, so topologies are built exactly, without
//! sampling radii.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;
use crate::space::{FiniteSpace, PointSet, SpaceError};

/// Topologies are materialized as explicit families of open sets, which is
/// exponential in the carrier size in the worst case (discrete topology).
pub const MAX_TOPOLOGY_POINTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("radius must be positive, got {0}")]
    NonpositiveEpsilon(Rational),
    #[error(
        "carrier of {0} points is too large to enumerate open sets (limit {MAX_TOPOLOGY_POINTS})"
    )]
    CarrierTooLarge(usize),
    #[error("not a topology: {0}")]
    NotATopology(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallKind {
    /// `B_p(x,ε) = {y : p(x,y) < p(x,x) + ε}`
    POpen,
    /// `B_p[x,ε] = {y : p(x,y) ≤ p(x,x) + ε}`
    PClosed,
    /// `B_M(x,ε) = {y : m(x,y) < m_{x,y} + ε}`
    MOpen,
}

impl std::str::FromStr for BallKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p_open" | "p" => Ok(BallKind::POpen),
            "p_closed" => Ok(BallKind::PClosed),
            "m_open" | "m" => Ok(BallKind::MOpen),
            other => Err(format!(
                "unknown ball kind `{other}` (expected p_open, p_closed or m_open)"
            )),
        }
    }
}

impl fmt::Display for BallKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BallKind::POpen => "p_open",
            BallKind::PClosed => "p_closed",
            BallKind::MOpen => "m_open",
        })
    }
}

/// Ball families that generate a topology. Closed balls are not used as a base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyKind {
    POpen,
    MOpen,
}

impl From<TopologyKind> for BallKind {
    fn from(kind: TopologyKind) -> Self {
        match kind {
            TopologyKind::POpen => BallKind::POpen,
            TopologyKind::MOpen => BallKind::MOpen,
        }
    }
}

impl std::str::FromStr for TopologyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<BallKind>()? {
            BallKind::POpen => Ok(TopologyKind::POpen),
            BallKind::MOpen => Ok(TopologyKind::MOpen),
            BallKind::PClosed => Err("closed balls do not generate a topology".to_owned()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    pub center: String,
    pub epsilon: Rational,
    pub kind: BallKind,
    /// Members in carrier order.
    pub members: Vec<String>,
}

impl Ball {
    pub fn contains(&self, label: &str) -> bool {
        self.members.iter().any(|m| m == label)
    }
}

/// Gap of `y` around center `x` for the given ball kind.
pub fn gap(space: &FiniteSpace, kind: BallKind, x: usize, y: usize) -> Rational {
    match kind {
        BallKind::POpen | BallKind::PClosed => space.d(x, y) - space.d(x, x),
        BallKind::MOpen => space.excess(x, y),
    }
}

/// Ball around carrier index `x`. The radius is not checked.
pub fn ball_set(space: &FiniteSpace, kind: BallKind, x: usize, eps: &Rational) -> PointSet {
    (0..space.len())
        .filter(|&y| {
            let g = gap(space, kind, x, y);
            match kind {
                BallKind::PClosed => &g <= eps,
                BallKind::POpen | BallKind::MOpen => &g < eps,
            }
        })
        .collect()
}

fn ball(
    space: &FiniteSpace,
    kind: BallKind,
    x: &str,
    eps: &Rational,
) -> Result<Ball, TopologyError> {
    let i = space.index_of(x)?;
    if !eps.is_positive() {
        return Err(TopologyError::NonpositiveEpsilon(eps.clone()));
    }
    Ok(Ball {
        center: x.to_owned(),
        epsilon: eps.clone(),
        kind,
        members: space.labels_of(ball_set(space, kind, i, eps)),
    })
}

/// Open (`closed = false`) or closed p-ball.
pub fn p_ball(
    space: &FiniteSpace,
    x: &str,
    eps: &Rational,
    closed: bool,
) -> Result<Ball, TopologyError> {
    let kind = if closed {
        BallKind::PClosed
    } else {
        BallKind::POpen
    };
    ball(space, kind, x, eps)
}

/// Open M-ball. Equals `B_p(x,ε) ∩ {y : x ∈ B_p(y,ε)}`.
pub fn m_ball(space: &FiniteSpace, x: &str, eps: &Rational) -> Result<Ball, TopologyError> {
    let out = ball(space, BallKind::MOpen, x, eps)?;
    debug_assert_eq!(out.members, {
        let i = space.index_of(x)?;
        let forward = ball_set(space, BallKind::POpen, i, eps);
        let both: PointSet = forward
            .iter()
            .filter(|&y| ball_set(space, BallKind::POpen, y, eps).contains(i))
            .collect();
        space.labels_of(both)
    });
    Ok(out)
}

/// Sorted distinct gaps around `x`; ball membership only changes at these radii.
pub fn critical_epsilons(
    space: &FiniteSpace,
    x: &str,
    kind: BallKind,
) -> Result<Vec<Rational>, TopologyError> {
    let i = space.index_of(x)?;
    Ok(gaps_around(space, kind, i))
}

pub(crate) fn gaps_around(space: &FiniteSpace, kind: BallKind, x: usize) -> Vec<Rational> {
    let set: BTreeSet<Rational> = (0..space.len()).map(|y| gap(space, kind, x, y)).collect();
    set.into_iter().collect()
}

/// One radius from each interval on which ball membership is constant:
/// every positive threshold, plus one past the largest.
pub fn representative_epsilons<'a, I>(thresholds: I) -> Vec<Rational>
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut set: BTreeSet<Rational> = thresholds
        .into_iter()
        .filter(|t| t.is_positive())
        .cloned()
        .collect();
    let beyond = set
        .last()
        .map_or_else(Rational::one, |max| max + Rational::one());
    set.insert(beyond);
    set.into_iter().collect()
}

/// A topology on a finite carrier, as an explicit family of open sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    carrier: Vec<String>,
    opens: Vec<PointSet>,
}

impl FiniteTopology {
    /// Checks the topology axioms on an explicit family.
    pub fn from_opens(
        carrier: Vec<String>,
        opens: impl IntoIterator<Item = PointSet>,
    ) -> Result<Self, TopologyError> {
        let n = carrier.len();
        if n > MAX_TOPOLOGY_POINTS {
            return Err(TopologyError::CarrierTooLarge(n));
        }
        let full = PointSet::full(n);
        let set: BTreeSet<PointSet> = opens.into_iter().collect();
        if let Some(bad) = set.iter().find(|o| !o.is_subset(full)) {
            return Err(TopologyError::NotATopology(format!(
                "{bad:?} is not a subset of the carrier"
            )));
        }
        if !set.contains(&PointSet::EMPTY) {
            return Err(TopologyError::NotATopology("missing the empty set".into()));
        }
        if !set.contains(&full) {
            return Err(TopologyError::NotATopology("missing the carrier".into()));
        }
        for a in &set {
            for b in &set {
                if !set.contains(&a.union(*b)) || !set.contains(&a.intersection(*b)) {
                    return Err(TopologyError::NotATopology(format!(
                        "not closed under union and intersection at {a:?}, {b:?}"
                    )));
                }
            }
        }
        Ok(FiniteTopology {
            carrier,
            opens: set.into_iter().collect(),
        })
    }

    /// Topology generated by a family of subsets: all unions of finite
    /// intersections.
    pub fn generated_by(carrier: Vec<String>, subbase: &[PointSet]) -> Result<Self, TopologyError> {
        let n = carrier.len();
        if n > MAX_TOPOLOGY_POINTS {
            return Err(TopologyError::CarrierTooLarge(n));
        }
        let full = PointSet::full(n);
        // The smallest open neighbourhood of each point forms a base.
        let minimal: BTreeSet<PointSet> = (0..n)
            .map(|x| {
                subbase
                    .iter()
                    .filter(|s| s.contains(x))
                    .fold(full, |acc, s| acc.intersection(*s))
            })
            .collect();
        let mut opens: BTreeSet<PointSet> = BTreeSet::from([PointSet::EMPTY]);
        for u in &minimal {
            let extended: Vec<PointSet> = opens.iter().map(|o| o.union(*u)).collect();
            opens.extend(extended);
        }
        opens.insert(full);
        Ok(FiniteTopology {
            carrier,
            opens: opens.into_iter().collect(),
        })
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    /// Open sets in increasing bit-mask order.
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() == 1usize << self.carrier.len()
    }

    /// Smallest open set containing carrier index `x`.
    pub fn minimal_neighbourhood(&self, x: usize) -> PointSet {
        let full = PointSet::full(self.carrier.len());
        self.opens
            .iter()
            .filter(|o| o.contains(x))
            .fold(full, |acc, o| acc.intersection(*o))
    }

    pub fn labels_of(&self, set: PointSet) -> Vec<String> {
        set.iter().map(|i| self.carrier[i].clone()).collect()
    }
}

impl fmt::Display for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self
            .opens
            .iter()
            .map(|o| format!("{{{}}}", self.labels_of(*o).join(",")))
            .collect();
        write!(f, "{{{}}}", sets.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyRepr {
    carrier: Vec<String>,
    opens: Vec<Vec<String>>,
}

impl Serialize for FiniteTopology {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TopologyRepr {
            carrier: self.carrier.clone(),
            opens: self.opens.iter().map(|o| self.labels_of(*o)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteTopology {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = TopologyRepr::deserialize(deserializer)?;
        let mut opens = Vec::with_capacity(repr.opens.len());
        for open in &repr.opens {
            let mut set = PointSet::EMPTY;
            for label in open {
                let i = repr
                    .carrier
                    .iter()
                    .position(|c| c == label)
                    .ok_or_else(|| D::Error::custom(format!("unknown point `{label}`")))?;
                set.insert(i);
            }
            opens.push(set);
        }
        FiniteTopology::from_opens(repr.carrier, opens).map_err(D::Error::custom)
    }
}

/// Topology with the open balls of `kind` as a subbase, over every center and
/// every representative radius.
pub fn generate_topology(
    space: &FiniteSpace,
    kind: TopologyKind,
) -> Result<FiniteTopology, TopologyError> {
    if space.len() > MAX_TOPOLOGY_POINTS {
        return Err(TopologyError::CarrierTooLarge(space.len()));
    }
    let kind = BallKind::from(kind);
    let mut base = Vec::new();
    for x in 0..space.len() {
        for eps in representative_epsilons(&gaps_around(space, kind, x)) {
            base.push(ball_set(space, kind, x, &eps));
        }
    }
    FiniteTopology::generated_by(space.labels().to_vec(), &base)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub t0: bool,
    pub t1: bool,
    pub hausdorff: bool,
    /// First pair (in carrier order) violating the weakest failed property.
    pub witness: Option<(String, String)>,
}

/// T0, T1 and Hausdorff checks.
///
/// In a finite topology every point has a smallest open neighbourhood `U_x`,
/// so for `x ≠ y`: some open set holds `x` but not `y` iff `y ∉ U_x`, and
/// disjoint neighbourhoods exist iff `U_x ∩ U_y = ∅`.
pub fn separation_report(top: &FiniteTopology) -> SeparationReport {
    let n = top.carrier().len();
    let hoods: Vec<PointSet> = (0..n).map(|x| top.minimal_neighbourhood(x)).collect();
    let mut t0_fail = None;
    let mut t1_fail = None;
    let mut t2_fail = None;
    for x in 0..n {
        for y in x + 1..n {
            let x_sees_y = hoods[x].contains(y);
            let y_sees_x = hoods[y].contains(x);
            if x_sees_y && y_sees_x {
                t0_fail.get_or_insert((x, y));
            }
            if x_sees_y || y_sees_x {
                t1_fail.get_or_insert((x, y));
            }
            if !hoods[x].intersection(hoods[y]).is_empty() {
                t2_fail.get_or_insert((x, y));
            }
        }
    }
    let witness = t0_fail.or(t1_fail).or(t2_fail).map(|(x, y)| {
        let c = top.carrier();
        (c[x].clone(), c[y].clone())
    });
    let report = SeparationReport {
        t0: t0_fail.is_none(),
        t1: t1_fail.is_none(),
        hausdorff: t2_fail.is_none(),
        witness,
    };
    debug_assert!((!report.hausdorff || report.t1) && (!report.t1 || report.t0));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::q;

    #[test]
    fn p_balls_in_max_family() {
        let space = catalog::max_restriction(&[1, 2, 3]);
        let open = p_ball(&space, "2", &q((1, 2)), false).unwrap();
        assert_eq!(open.members, ["1", "2"]);
        let closed = p_ball(&space, "2", &q(1), true).unwrap();
        assert_eq!(closed.members, ["1", "2", "3"]);
        let open_one = p_ball(&space, "2", &q(1), false).unwrap();
        assert_eq!(open_one.members, ["1", "2"]);
    }

    #[test]
    fn ball_errors() {
        let space = catalog::example_one();
        assert!(matches!(
            m_ball(&space, "1", &q(0)),
            Err(TopologyError::NonpositiveEpsilon(_))
        ));
        assert!(matches!(
            p_ball(&space, "9", &q(1), false),
            Err(TopologyError::Space(SpaceError::UnknownLabel(_)))
        ));
    }

    #[test]
    fn m_balls_in_example_one() {
        let space = catalog::example_one();
        assert_eq!(m_ball(&space, "1", &q((1, 10))).unwrap().members, ["1"]);
        assert_eq!(m_ball(&space, "3", &q((1, 10))).unwrap().members, ["3"]);
        assert_eq!(
            m_ball(&space, "1", &q((13, 2))).unwrap().members,
            ["1", "3"]
        );
    }

    #[test]
    fn critical_radii() {
        let one = catalog::example_one();
        assert_eq!(
            critical_epsilons(&one, "1", BallKind::MOpen).unwrap(),
            [q(0), q(6), q(7), q(9)]
        );
        let two = catalog::example_two();
        assert_eq!(
            critical_epsilons(&two, "4", BallKind::MOpen).unwrap(),
            [q(0), q(5), q(6), q(8)]
        );
        let single = FiniteSpace::parse(&["x"], &[vec!["3"]]).unwrap();
        for kind in [BallKind::POpen, BallKind::PClosed, BallKind::MOpen] {
            assert_eq!(critical_epsilons(&single, "x", kind).unwrap(), [q(0)]);
        }
    }

    #[test]
    fn representative_radii_cover_each_interval() {
        assert_eq!(
            representative_epsilons(&[q(0), q(6), q(7), q(9)]),
            [q(6), q(7), q(9), q(10)]
        );
        assert_eq!(representative_epsilons(&[q(0)]), [q(1)]);
        assert_eq!(representative_epsilons(&[q(-2), q(1)]), [q(1), q(2)]);
    }

    #[test]
    fn example_one_topology_is_discrete() {
        let top = generate_topology(&catalog::example_one(), TopologyKind::MOpen).unwrap();
        assert_eq!(top.len(), 16);
        assert!(top.is_discrete());
        let sep = separation_report(&top);
        assert_eq!(
            sep,
            SeparationReport {
                t0: true,
                t1: true,
                hausdorff: true,
                witness: None
            }
        );
    }

    #[test]
    fn singleton_topology() {
        let single = FiniteSpace::parse(&["x"], &[vec!["2"]]).unwrap();
        for kind in [TopologyKind::POpen, TopologyKind::MOpen] {
            let top = generate_topology(&single, kind).unwrap();
            assert_eq!(top.opens(), [PointSet::EMPTY, PointSet::singleton(0)]);
        }
    }

    #[test]
    fn sierpinski_from_max_pair() {
        let space = catalog::max_restriction(&[1, 2]);
        let top = generate_topology(&space, TopologyKind::POpen).unwrap();
        assert_eq!(top.to_string(), "{{}, {1}, {1,2}}");
        let sep = separation_report(&top);
        assert_eq!(
            sep,
            SeparationReport {
                t0: true,
                t1: false,
                hausdorff: false,
                witness: Some(("1".into(), "2".into()))
            }
        );
    }

    #[test]
    fn indiscrete_pair() {
        let top = FiniteTopology::from_opens(
            vec!["1".into(), "2".into()],
            [PointSet::EMPTY, PointSet::full(2)],
        )
        .unwrap();
        let sep = separation_report(&top);
        assert!(!sep.t0 && !sep.t1 && !sep.hausdorff);
        assert_eq!(sep.witness, Some(("1".into(), "2".into())));
    }

    #[test]
    fn from_opens_rejects_non_topologies() {
        let carrier = vec!["1".to_owned(), "2".to_owned(), "3".to_owned()];
        let a = PointSet::from_bits(0b011);
        let b = PointSet::from_bits(0b110);
        let err = FiniteTopology::from_opens(carrier, [PointSet::EMPTY, a, b, PointSet::full(3)])
            .unwrap_err();
        assert!(matches!(err, TopologyError::NotATopology(_)));
    }

    #[test]
    fn topology_serde_round_trip() {
        let top =
            generate_topology(&catalog::max_restriction(&[1, 2, 3]), TopologyKind::POpen).unwrap();
        let json = serde_json::to_string(&top).unwrap();
        let back: FiniteTopology = serde_json::from_str(&json).unwrap();
        assert_eq!(back, top);
    }
}
