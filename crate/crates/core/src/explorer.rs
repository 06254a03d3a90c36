//! Seeded search over small integer-grid tables.
//!
//! Candidate `k` for size `n` is a symmetric table whose upper triangle
//! (`d(1,1), d(1,2), …, d(n,n)`, row-major) is drawn from the inclusive grid
//! `value_range`. When the whole grid has at most `max_candidates` tables it
//! is enumerated in lexicographic order of that entry list, so an exhausted
//! search is a proof of absence. Otherwise candidate `k` is sampled with
//! ChaCha8 seeded by `seed` on stream `k`; any other implementation of ChaCha8
//! reproduces the same tables.
//!
//! Generated points are labelled `a`, `b`, `c`, …

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{axiom_report, instantiate, satisfies, AxiomId, AxiomViolation, Mode};
use crate::caristi::{
    ekeland_certificate, CaristiInstance, ConditionCheck, EkelandCertificate, Variant,
};
use crate::catalog;
use crate::rational::Rational;
use crate::space::{FiniteSpace, PointMap, Potential, MAX_POINTS};
use crate::topology::{generate_topology, separation_report, SeparationReport, TopologyKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplorerError {
    #[error("invalid search budget: {0}")]
    InvalidBudget(String),
    #[error("search budget exhausted after {examined} candidates")]
    ExhaustedBudget { examined: u64 },
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_candidates: u64,
    pub seed: u64,
    pub size_n: usize,
    /// Inclusive bounds for table entries.
    pub value_range: (i64, i64),
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_candidates: 10_000,
            seed: 0,
            size_n: 3,
            value_range: (0, 10),
        }
    }
}

impl SearchBudget {
    pub fn new(
        max_candidates: u64,
        seed: u64,
        size_n: usize,
        value_range: (i64, i64),
    ) -> Result<Self, ExplorerError> {
        let budget = SearchBudget {
            max_candidates,
            seed,
            size_n,
            value_range,
        };
        budget.validate()?;
        Ok(budget)
    }

    pub fn validate(&self) -> Result<(), ExplorerError> {
        let (lo, hi) = self.value_range;
        let problem = if self.max_candidates == 0 {
            "max_candidates must be at least 1".to_owned()
        } else if self.size_n < 2 {
            "size_n must be at least 2".to_owned()
        } else if self.size_n > MAX_POINTS {
            format!("size_n must be at most {MAX_POINTS}")
        } else if lo < 0 {
            "table entries must be nonnegative".to_owned()
        } else if lo > hi {
            format!("empty value range [{lo}, {hi}]")
        } else {
            return Ok(());
        };
        Err(ExplorerError::InvalidBudget(problem))
    }

    /// Number of distinct tables of size `n` on the grid, if it fits in a `u64`.
    pub fn grid_size(&self, n: usize) -> Option<u64> {
        let radix = u64::try_from(self.value_range.1 - self.value_range.0 + 1).ok()?;
        let entries = u32::try_from(n * (n + 1) / 2).ok()?;
        radix.checked_pow(entries)
    }

    /// Whether candidates of size `n` enumerate the whole grid.
    pub fn is_exhaustive(&self, n: usize) -> bool {
        self.grid_size(n).is_some_and(|g| g <= self.max_candidates)
    }

    /// How many candidates of size `n` a search examines at most.
    pub fn candidate_count(&self, n: usize) -> u64 {
        match self.grid_size(n) {
            Some(g) if g <= self.max_candidates => g,
            _ => self.max_candidates,
        }
    }
}

fn point_label(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("x{i}")
    }
}

fn candidate_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Upper-triangle index of `(i, j)` with `i ≤ j`.
fn tri(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + j
}

fn build_table(n: usize, entries: &[i64]) -> FiniteSpace {
    let labels: Vec<String> = (0..n).map(point_label).collect();
    FiniteSpace::from_fn(&labels, |i, j| {
        let (i, j) = (i.min(j), i.max(j));
        Rational::from_integer(entries[tri(n, i, j)])
    })
    .expect("grid tables are valid")
}

/// Candidate `k` of size `n` under `budget`.
pub fn candidate_space(budget: &SearchBudget, n: usize, k: u64) -> FiniteSpace {
    let (lo, hi) = budget.value_range;
    let len = n * (n + 1) / 2;
    let entries: Vec<i64> = if budget.is_exhaustive(n) {
        let radix = (hi - lo + 1) as u64;
        let mut digits = vec![lo; len];
        let mut rest = k;
        for slot in digits.iter_mut().rev() {
            *slot = lo + (rest % radix) as i64;
            rest /= radix;
        }
        digits
    } else {
        let mut rng = candidate_rng(budget.seed, k);
        (0..len).map(|_| rng.random_range(lo..=hi)).collect()
    };
    build_table(n, &entries)
}

/// First candidate (of size `size_n`) that satisfies `target`'s axioms.
pub fn random_space(budget: &SearchBudget, target: Mode) -> Result<FiniteSpace, ExplorerError> {
    budget.validate()?;
    let n = budget.size_n;
    let count = budget.candidate_count(n);
    (0..count)
        .map(|k| candidate_space(budget, n, k))
        .find(|s| satisfies(s, target))
        .ok_or(ExplorerError::ExhaustedBudget { examined: count })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingExample {
    pub space: FiniteSpace,
    /// A P4 violation of the M-metric `space`.
    pub violation: AxiomViolation,
    pub candidates_examined: u64,
}

/// The first P4 violation of an M-metric table, if the table is an M-metric
/// and not a partial metric.
pub fn separating_violation(space: &FiniteSpace) -> Option<AxiomViolation> {
    if !satisfies(space, Mode::MMetric) {
        return None;
    }
    axiom_report(space, Mode::Partial)
        .into_iter()
        .find(|v| v.axiom == AxiomId::P4)
}

/// Searches sizes `2..=size_n` in order for an M-metric that is not a
/// partial metric, returning it with a P4 witness.
pub fn find_separating_example(budget: &SearchBudget) -> Result<SeparatingExample, ExplorerError> {
    budget.validate()?;
    let mut examined = 0;
    for n in 2..=budget.size_n {
        for k in 0..budget.candidate_count(n) {
            examined += 1;
            let space = candidate_space(budget, n, k);
            if let Some(violation) = separating_violation(&space) {
                return Ok(SeparatingExample {
                    space,
                    violation,
                    candidates_examined: examined,
                });
            }
        }
    }
    Err(ExplorerError::ExhaustedBudget { examined })
}

/// A seeded instance for `variant`: the first suitable candidate table of
/// size `size_n`, a potential drawn from `[0, hi]` and a self map that picks,
/// at each point, a uniformly random image satisfying the condition (the
/// point itself when none does).
pub fn random_caristi_instance(
    budget: &SearchBudget,
    variant: Variant,
) -> Result<CaristiInstance, ExplorerError> {
    budget.validate()?;
    let mode = if variant.is_partial() {
        Mode::Partial
    } else {
        Mode::MMetric
    };
    let n = budget.size_n;
    let count = budget.candidate_count(n);
    let (k, space) = (0..count)
        .map(|k| (k, candidate_space(budget, n, k)))
        .find(|(_, s)| satisfies(s, mode))
        .ok_or(ExplorerError::ExhaustedBudget { examined: count })?;

    let mut rng = candidate_rng(budget.seed ^ 0x5eed_f00d_cafe_d00d, k);
    let hi = budget.value_range.1;
    let phi = Potential::from_fn(&space, |_| Rational::from_integer(rng.random_range(0..=hi)))
        .expect("nonnegative");
    let probe = CaristiInstance::new(space.clone(), PointMap::identity(n), phi.clone(), variant)
        .expect("space passed the variant's axioms");
    let images = (0..n)
        .map(|x| {
            let admissible: Vec<usize> = (0..n)
                .filter(|&z| {
                    let (lhs, rhs) = probe.condition_sides(x, z);
                    lhs <= rhs
                })
                .collect();
            if admissible.is_empty() {
                x
            } else {
                admissible[rng.random_range(0..admissible.len())]
            }
        })
        .collect();
    Ok(
        CaristiInstance::new(space, PointMap::from_indices(images), phi, variant)
            .expect("validated above"),
    )
}

pub const CLAIM_THREE_POINT_M_METRIC: &str = "sec1-example-is-m-metric";
pub const CLAIM_EKELAND_STRICT: &str = "ekeland-strict-holds-on-finite";
pub const CLAIM_NON_HAUSDORFF: &str = "m-topology-non-hausdorff-exists";
pub const CLAIM_CARISTI_WEAK: &str = "caristi-weak-holds-on-finite";

/// Registered claim identifiers.
pub const CLAIMS: [&str; 4] = [
    CLAIM_THREE_POINT_M_METRIC,
    CLAIM_EKELAND_STRICT,
    CLAIM_NON_HAUSDORFF,
    CLAIM_CARISTI_WEAK,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Confirmed,
    Refuted,
    ExhaustedBudget,
}

/// Machine-checkable support for a probe verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbeEvidence {
    /// `space` fails an axiom at the recorded witness.
    AxiomViolation {
        space: FiniteSpace,
        violation: AxiomViolation,
    },
    /// `space` satisfies every axiom of `mode`.
    Satisfies { space: FiniteSpace, mode: Mode },
    /// An M-metric and potential where no point has a strict certificate;
    /// one certificate per point, in carrier order.
    EkelandCounterexample {
        space: FiniteSpace,
        phi: BTreeMap<String, Rational>,
        certificates: Vec<EkelandCertificate>,
    },
    /// An instance satisfying the weak condition at every point whose map
    /// has no fixed point.
    CaristiCounterexample {
        space: FiniteSpace,
        phi: BTreeMap<String, Rational>,
        map_t: BTreeMap<String, String>,
        conditions: Vec<ConditionCheck>,
    },
    /// An M-metric whose generated topology is not Hausdorff.
    NonHausdorff {
        space: FiniteSpace,
        separation: SeparationReport,
    },
}

impl ProbeEvidence {
    /// Recomputes the evidence from scratch.
    pub fn verify(&self) -> bool {
        match self {
            ProbeEvidence::AxiomViolation { space, violation } => {
                let Ok(witness) = violation
                    .witness
                    .iter()
                    .map(|l| space.index_of(l))
                    .collect::<Result<Vec<_>, _>>()
                else {
                    return false;
                };
                match instantiate(space, violation.axiom, &witness) {
                    Some((lhs, rhs, rel)) => {
                        lhs == violation.lhs
                            && rhs == violation.rhs
                            && rel == violation.relation
                            && !rel.holds(&lhs, &rhs)
                    }
                    None => false,
                }
            }
            ProbeEvidence::Satisfies { space, mode } => satisfies(space, *mode),
            ProbeEvidence::EkelandCounterexample {
                space,
                phi,
                certificates,
            } => {
                let Ok(phi) =
                    Potential::from_pairs(space, phi.iter().map(|(l, v)| (l.as_str(), v.clone())))
                else {
                    return false;
                };
                satisfies(space, Mode::MMetric)
                    && certificates.len() == space.len()
                    && certificates.iter().enumerate().all(|(z, c)| {
                        c.point_z == space.label(z) && !c.strict && c.verify(space, &phi)
                    })
            }
            ProbeEvidence::CaristiCounterexample {
                space,
                phi,
                map_t,
                conditions,
            } => {
                let Ok(phi) =
                    Potential::from_pairs(space, phi.iter().map(|(l, v)| (l.as_str(), v.clone())))
                else {
                    return false;
                };
                let Ok(map) = PointMap::from_map(space, space, map_t) else {
                    return false;
                };
                let Ok(inst) = CaristiInstance::new(space.clone(), map, phi, Variant::MWeak) else {
                    return false;
                };
                &inst.condition_report() == conditions
                    && conditions.iter().all(|c| c.holds)
                    && inst.fixed_points().is_empty()
            }
            ProbeEvidence::NonHausdorff { space, separation } => {
                satisfies(space, Mode::MMetric)
                    && !separation.hausdorff
                    && generate_topology(space, TopologyKind::MOpen)
                        .is_ok_and(|top| &separation_report(&top) == separation)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub claim_id: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<ProbeEvidence>,
    pub candidates_examined: u64,
}

/// Runs a registered claim against exact evaluation or a seeded search.
pub fn probe_claim(claim_id: &str, budget: &SearchBudget) -> Result<ProbeResult, ExplorerError> {
    budget.validate()?;
    let (verdict, evidence, candidates_examined) = match claim_id {
        CLAIM_THREE_POINT_M_METRIC => {
            let space = catalog::three_point();
            match axiom_report(&space, Mode::MMetric).into_iter().next() {
                Some(violation) => (
                    Verdict::Refuted,
                    Some(ProbeEvidence::AxiomViolation { space, violation }),
                    1,
                ),
                None => (
                    Verdict::Confirmed,
                    Some(ProbeEvidence::Satisfies {
                        space,
                        mode: Mode::MMetric,
                    }),
                    1,
                ),
            }
        }
        CLAIM_EKELAND_STRICT => search(budget, |space, k| {
            let zero = Potential::zero(space.len());
            let mut rng = candidate_rng(budget.seed ^ 0x0e4e_1a4d, k);
            let hi = budget.value_range.1;
            let drawn =
                Potential::from_fn(space, |_| Rational::from_integer(rng.random_range(0..=hi)))
                    .expect("nonnegative");
            [zero, drawn].into_iter().find_map(|phi| {
                let certificates: Vec<EkelandCertificate> = (0..space.len())
                    .map(|z| ekeland_certificate(space, &phi, z))
                    .collect();
                certificates.iter().all(|c| !c.strict).then(|| {
                    ProbeEvidence::EkelandCounterexample {
                        space: space.clone(),
                        phi: phi.to_labels(space),
                        certificates,
                    }
                })
            })
        })
        .map_or_else(
            |examined| (Verdict::ExhaustedBudget, None, examined),
            |(evidence, examined)| (Verdict::Refuted, Some(evidence), examined),
        ),
        CLAIM_NON_HAUSDORFF => search(budget, |space, _| {
            let top = generate_topology(space, TopologyKind::MOpen).ok()?;
            let separation = separation_report(&top);
            (!separation.hausdorff).then(|| ProbeEvidence::NonHausdorff {
                space: space.clone(),
                separation,
            })
        })
        .map_or_else(
            |examined| (Verdict::ExhaustedBudget, None, examined),
            |(evidence, examined)| (Verdict::Confirmed, Some(evidence), examined),
        ),
        CLAIM_CARISTI_WEAK => search(budget, |space, _| {
            let n = space.len();
            let phi = Potential::zero(n);
            fixed_point_free_maps(n).find_map(|map| {
                let inst =
                    CaristiInstance::new(space.clone(), map, phi.clone(), Variant::MWeak).ok()?;
                let conditions = inst.condition_report();
                conditions
                    .iter()
                    .all(|c| c.holds)
                    .then(|| ProbeEvidence::CaristiCounterexample {
                        space: space.clone(),
                        phi: phi.to_labels(space),
                        map_t: inst.map_t().to_labels(space, space),
                        conditions,
                    })
            })
        })
        .map_or_else(
            |examined| (Verdict::ExhaustedBudget, None, examined),
            |(evidence, examined)| (Verdict::Refuted, Some(evidence), examined),
        ),
        other => return Err(ExplorerError::UnknownClaim(other.to_owned())),
    };
    Ok(ProbeResult {
        claim_id: claim_id.to_owned(),
        verdict,
        evidence,
        candidates_examined,
    })
}

/// Self maps of an `n`-point set without fixed points, in lexicographic
/// order of their image lists.
fn fixed_point_free_maps(n: usize) -> impl Iterator<Item = PointMap> {
    let total = (n as u64).pow(n as u32);
    (0..total).filter_map(move |mut code| {
        let mut images = vec![0; n];
        for slot in images.iter_mut().rev() {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        images
            .iter()
            .enumerate()
            .all(|(i, &j)| i != j)
            .then(|| PointMap::from_indices(images))
    })
}

/// Walks M-metric candidates of sizes `2..=size_n`, returning the first hit
/// with the number of candidates examined, or that number on exhaustion.
fn search<F>(budget: &SearchBudget, mut hit: F) -> Result<(ProbeEvidence, u64), u64>
where
    F: FnMut(&FiniteSpace, u64) -> Option<ProbeEvidence>,
{
    let mut examined = 0;
    for n in 2..=budget.size_n {
        for k in 0..budget.candidate_count(n) {
            examined += 1;
            let space = candidate_space(budget, n, k);
            if !satisfies(&space, Mode::MMetric) {
                continue;
            }
            if let Some(evidence) = hit(&space, k) {
                return Ok((evidence, examined));
            }
        }
    }
    Err(examined)
}
