//! Shared test support: brute-force oracles written straight from the
//! definitions, seeded instance generators, and a property runner that
//! replays and persists failing instances under `tests/regressions/`.

#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use mmetric::caristi::{CaristiInstance, Termination, Variant};
use mmetric::convergence::{continuity_check, ContinuityMode, ContinuityQuery};
use mmetric::explorer::{candidate_space, random_caristi_instance, random_space, SearchBudget};
use mmetric::{FiniteSpace, Mode, PointMap, PointSet, Potential, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const INSTANCES: u64 = 1000;

// ---------------------------------------------------------------- oracles

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn oracle_is_metric(s: &FiniteSpace) -> bool {
    let n = s.len();
    let d = |i: usize, j: usize| s.d(i, j).clone();
    for x in 0..n {
        for y in 0..n {
            if (d(x, y) == r(0)) != (x == y) || d(x, y) != d(y, x) {
                return false;
            }
            for z in 0..n {
                if d(x, y) > d(x, z) + d(z, y) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn oracle_is_partial(s: &FiniteSpace) -> bool {
    let n = s.len();
    let p = |i: usize, j: usize| s.d(i, j).clone();
    for x in 0..n {
        for y in 0..n {
            let all_equal = p(x, x) == p(x, y) && p(x, y) == p(y, y);
            if all_equal != (x == y) || p(x, x) > p(x, y) || p(x, y) != p(y, x) {
                return false;
            }
            for z in 0..n {
                if p(x, y) > p(x, z) + p(z, y) - p(z, z) {
                    return false;
                }
            }
        }
    }
    true
}

fn lower(s: &FiniteSpace, x: usize, y: usize) -> Rational {
    let (a, b) = (s.d(x, x).clone(), s.d(y, y).clone());
    if a < b {
        a
    } else {
        b
    }
}

pub fn oracle_is_m_metric(s: &FiniteSpace) -> bool {
    let n = s.len();
    let m = |i: usize, j: usize| s.d(i, j).clone();
    let e = |i: usize, j: usize| m(i, j) - lower(s, i, j);
    for x in 0..n {
        for y in 0..n {
            let all_equal = m(x, x) == m(x, y) && m(x, y) == m(y, y);
            if all_equal != (x == y) || lower(s, x, y) > m(x, y) || m(x, y) != m(y, x) {
                return false;
            }
            for z in 0..n {
                if e(x, y) > e(x, z) + e(z, y) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn oracle_satisfies(s: &FiniteSpace, mode: Mode) -> bool {
    match mode {
        Mode::Metric => oracle_is_metric(s),
        Mode::Partial => oracle_is_partial(s),
        Mode::MMetric => oracle_is_m_metric(s),
    }
}

/// `S(x)` straight from its definition.
pub fn oracle_dominated(inst: &CaristiInstance, x: usize) -> Vec<usize> {
    let s = inst.space();
    let phi = |i: usize| inst.phi().at(i).clone();
    (0..s.len())
        .filter(|&z| {
            let allowance = match inst.variant() {
                Variant::PWeak | Variant::PStrong => s.d(x, x).clone(),
                Variant::MWeak | Variant::MStrong => lower(s, x, z),
            };
            s.d(x, z).clone() <= allowance + phi(x) - phi(z)
        })
        .collect()
}

/// Radii `k/4` for `k = 1..=4(max entry + 2)`: on an integer table every
/// ball of any radius appears for one of these.
pub fn quarter_grid(spaces: &[&FiniteSpace]) -> Vec<Rational> {
    let top = spaces
        .iter()
        .flat_map(|s| s.table().iter().flatten())
        .max()
        .cloned()
        .unwrap_or_else(|| r(0));
    let mut out = Vec::new();
    let mut k = 1;
    loop {
        let eps = Rational::new(k, 4);
        if eps > top.clone() + r(2) {
            break;
        }
        out.push(eps);
        k += 1;
    }
    out
}

/// Open p-ball `{y : p(x,y) < p(x,x) + ε}`.
pub fn oracle_p_ball(s: &FiniteSpace, x: usize, eps: &Rational) -> u64 {
    (0..s.len())
        .filter(|&y| s.d(x, y) < &(s.d(x, x).clone() + eps.clone()))
        .fold(0, |acc, y| acc | 1 << y)
}

/// Open m-ball `{y : m(x,y) - m_{x,y} < ε}`.
pub fn oracle_m_ball(s: &FiniteSpace, x: usize, eps: &Rational) -> u64 {
    (0..s.len())
        .filter(|&y| s.d(x, y).clone() - lower(s, x, y) < eps.clone())
        .fold(0, |acc, y| acc | 1 << y)
}

/// The topology generated by a family of subsets of an `n`-point set: close
/// under pairwise intersections and unions until nothing changes.
pub fn oracle_generate(n: usize, subbase: &[u64]) -> Vec<u64> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut opens: std::collections::BTreeSet<u64> = subbase.iter().copied().collect();
    opens.insert(0);
    opens.insert(full);
    loop {
        let current: Vec<u64> = opens.iter().copied().collect();
        let before = opens.len();
        for &a in &current {
            for &b in &current {
                opens.insert(a & b);
                opens.insert(a | b);
            }
        }
        if opens.len() == before {
            return opens.into_iter().collect();
        }
    }
}

/// `(t0, t1, hausdorff)` by trying every pair of open sets.
pub fn oracle_separation(n: usize, opens: &[u64]) -> (bool, bool, bool) {
    let (mut t0, mut t1, mut t2) = (true, true, true);
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let (bx, by) = (1u64 << x, 1u64 << y);
            let x_not_y = opens.iter().any(|&u| u & bx != 0 && u & by == 0);
            let y_not_x = opens.iter().any(|&u| u & by != 0 && u & bx == 0);
            if !x_not_y && !y_not_x {
                t0 = false;
            }
            if !x_not_y {
                t1 = false;
            }
            let disjoint = opens
                .iter()
                .any(|&u| u & bx != 0 && opens.iter().any(|&v| v & by != 0 && u & v == 0));
            if !disjoint {
                t2 = false;
            }
        }
    }
    (t0, t1, t2)
}

/// ε-δ continuity over a quarter grid of radii with open p-balls.
pub fn oracle_continuity(
    src: &FiniteSpace,
    tgt: &FiniteSpace,
    f: &[usize],
    a: usize,
    mode: ContinuityMode,
) -> bool {
    let grid = quarter_grid(&[src, tgt]);
    let sym_hyp = matches!(mode, ContinuityMode::Su | ContinuityMode::Ss);
    let sym_con = matches!(mode, ContinuityMode::Us | ContinuityMode::Ss);
    let balls = |s: &FiniteSpace, r: &Rational| -> Vec<u64> {
        (0..s.len()).map(|x| oracle_p_ball(s, x, r)).collect()
    };
    let src_balls: Vec<Vec<u64>> = grid.iter().map(|d| balls(src, d)).collect();
    let tgt_balls: Vec<Vec<u64>> = grid.iter().map(|e| balls(tgt, e)).collect();
    let fa = f[a];
    tgt_balls.iter().all(|tb| {
        src_balls.iter().any(|sb| {
            (0..src.len()).all(|x| {
                let mut near = sb[a] >> x & 1 == 1;
                if sym_hyp {
                    near &= sb[x] >> a & 1 == 1;
                }
                let mut close = tb[fa] >> f[x] & 1 == 1;
                if sym_con {
                    close &= tb[f[x]] >> fa & 1 == 1;
                }
                !near || close
            })
        })
    })
}

// ------------------------------------------------------------- instances

pub fn budget(seed: u64, size_n: usize, hi: i64) -> SearchBudget {
    SearchBudget::new(50_000, seed, size_n, (0, hi)).expect("valid budget")
}

fn size_for(seed: u64) -> usize {
    2 + (seed % 3) as usize
}

/// A table that is unfiltered, an M-metric, a partial metric or a metric
/// depending on `seed`.
pub fn table_case(seed: u64) -> TableCase {
    let n = size_for(seed);
    let space = match seed % 4 {
        0 => candidate_space(&budget(seed, n, 6), n, seed),
        1 => random_space(&budget(seed, n, 8), Mode::MMetric).expect("M-metric found"),
        2 => random_space(&budget(seed, n, 8), Mode::Partial).expect("partial metric found"),
        _ => random_space(&budget(seed, n, 3), Mode::Metric).expect("metric found"),
    };
    TableCase { space }
}

pub fn m_metric_case(seed: u64) -> TableCase {
    TableCase {
        space: random_space(&budget(seed, size_for(seed), 8), Mode::MMetric)
            .expect("M-metric found"),
    }
}

pub fn partial_case(seed: u64) -> TableCase {
    TableCase {
        space: random_space(&budget(seed, size_for(seed), 8), Mode::Partial)
            .expect("partial metric found"),
    }
}

pub fn caristi_case(seed: u64) -> CaristiCase {
    let variant = Variant::ALL[(seed % 4) as usize];
    let inst = random_caristi_instance(&budget(seed / 4, size_for(seed / 4), 6), variant)
        .expect("instance found");
    CaristiCase::from_instance(&inst)
}

pub fn continuity_case(seed: u64) -> ContinuityCase {
    let source = random_space(&budget(seed, size_for(seed), 6), Mode::Partial)
        .expect("partial metric found");
    let target = random_space(
        &budget(seed ^ 0xabcdef, size_for(seed / 3), 6),
        Mode::Partial,
    )
    .expect("partial metric found");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let map = (0..source.len())
        .map(|_| rng.random_range(0..target.len()))
        .collect();
    ContinuityCase {
        source,
        target,
        map,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableCase {
    pub space: FiniteSpace,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaristiCase {
    pub space: FiniteSpace,
    pub map: Vec<usize>,
    pub phi: Vec<Rational>,
    pub variant: Variant,
}

impl CaristiCase {
    pub fn from_instance(inst: &CaristiInstance) -> Self {
        CaristiCase {
            space: inst.space().clone(),
            map: inst.map_t().images().to_vec(),
            phi: inst.phi().values().to_vec(),
            variant: inst.variant(),
        }
    }

    pub fn instance(&self) -> CaristiInstance {
        let phi = Potential::from_values(&self.space, self.phi.clone()).expect("valid potential");
        CaristiInstance::new(
            self.space.clone(),
            PointMap::from_indices(self.map.clone()),
            phi,
            self.variant,
        )
        .expect("valid instance")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuityCase {
    pub source: FiniteSpace,
    pub target: FiniteSpace,
    pub map: Vec<usize>,
}

impl ContinuityCase {
    pub fn holds(&self, a: usize, mode: ContinuityMode) -> bool {
        let map = PointMap::from_indices(self.map.clone());
        continuity_check(&ContinuityQuery {
            source: &self.source,
            target: &self.target,
            map: &map,
            point: self.source.label(a),
            mode,
        })
        .expect("valid query")
        .holds
    }
}

// -------------------------------------------------------------- runner

fn regressions_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("regressions")
}

/// Replays every stored `<name>-*.json` instance, then checks `count` seeded
/// instances. Failing generated instances are written to the regressions
/// directory. Returns the number of instances checked or the failures.
pub fn run_property<I, G, C>(
    name: &str,
    count: u64,
    generate: G,
    check: C,
) -> Result<u64, Vec<String>>
where
    I: Serialize + DeserializeOwned,
    G: Fn(u64) -> I,
    C: Fn(&I) -> Result<(), String>,
{
    let dir = regressions_dir();
    let mut failures = Vec::new();
    let mut checked = 0;

    let mut stored: Vec<PathBuf> = fs::read_dir(&dir)
        .into_iter()
        .flatten()
        .flatten()
        .map(|e| e.path())
        .filter(|p| {
            p.file_name()
                .and_then(|f| f.to_str())
                .is_some_and(|f| f.starts_with(&format!("{name}-")) && f.ends_with(".json"))
        })
        .collect();
    stored.sort();
    for path in stored {
        let text = fs::read_to_string(&path).expect("readable fixture");
        let instance: I =
            serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        checked += 1;
        if let Err(msg) = check(&instance) {
            failures.push(format!("{}: {msg}", path.display()));
        }
    }

    for seed in 0..count {
        let instance = generate(seed);
        checked += 1;
        if let Err(msg) = check(&instance) {
            fs::create_dir_all(&dir).expect("regressions directory");
            let path = dir.join(format!("{name}-seed{seed}.json"));
            let json = serde_json::to_string_pretty(&instance).expect("serializable instance");
            fs::write(&path, json + "\n").expect("writable fixture");
            failures.push(format!("seed {seed} (saved to {}): {msg}", path.display()));
        }
    }

    if failures.is_empty() {
        Ok(checked)
    } else {
        Err(failures)
    }
}

// ------------------------------------------------------------ properties

pub fn check_hierarchy(case: &TableCase) -> Result<(), String> {
    let s = &case.space;
    let class = mmetric::classify(s);
    for mode in Mode::ALL {
        if class.satisfies(mode) != oracle_satisfies(s, mode) {
            return Err(format!(
                "{mode} membership disagrees with the oracle on {s:?}"
            ));
        }
    }
    if (class.is_metric && !class.is_partial) || (class.is_partial && !class.is_m_metric) {
        return Err(format!("hierarchy broken on {s:?}"));
    }
    Ok(())
}

pub fn check_ball_decomposition(case: &TableCase) -> Result<(), String> {
    use mmetric::topology::{ball_set, critical_epsilons, BallKind};
    let s = &case.space;
    for x in 0..s.len() {
        let mut radii = quarter_grid(&[s]);
        radii.extend(critical_epsilons(s, s.label(x), BallKind::MOpen).map_err(|e| e.to_string())?);
        for eps in radii.iter().filter(|e| e.is_positive()) {
            let m = ball_set(s, BallKind::MOpen, x, eps);
            let forward = ball_set(s, BallKind::POpen, x, eps);
            let backward: PointSet = (0..s.len())
                .filter(|&y| ball_set(s, BallKind::POpen, y, eps).contains(x))
                .collect();
            if m != forward.intersection(backward) {
                return Err(format!(
                    "B_M({}, {eps}) = {m:?} but B_p ∩ B_p⁻¹ = {:?}",
                    s.label(x),
                    forward.intersection(backward)
                ));
            }
            if m.bits() != oracle_m_ball(s, x, eps) || forward.bits() != oracle_p_ball(s, x, eps) {
                return Err(format!(
                    "ball at {} radius {eps} disagrees with the oracle",
                    s.label(x)
                ));
            }
        }
    }
    Ok(())
}

pub fn check_zero_distance(case: &TableCase) -> Result<(), String> {
    let s = &case.space;
    for x in 0..s.len() {
        for y in 0..s.len() {
            if x != y && s.d(x, y).is_zero() {
                return Err(format!(
                    "p({},{}) = 0 for distinct points",
                    s.label(x),
                    s.label(y)
                ));
            }
        }
    }
    Ok(())
}

pub fn check_dominated_sets(case: &CaristiCase) -> Result<(), String> {
    let inst = case.instance();
    let s = inst.space();
    for x in 0..s.len() {
        let expected = oracle_dominated(&inst, x);
        let got = inst.dominated_set(s.label(x)).map_err(|e| e.to_string())?;
        let expected_labels: Vec<String> =
            expected.iter().map(|&i| s.label(i).to_owned()).collect();
        if got.members != expected_labels {
            return Err(format!(
                "S({}) = {:?}, oracle {:?}",
                s.label(x),
                got.members,
                expected_labels
            ));
        }
        let alpha = expected
            .iter()
            .map(|&z| inst.phi().at(z))
            .min()
            .expect("x ∈ S(x)");
        if &got.alpha != alpha {
            return Err(format!("α({}) = {}, oracle {alpha}", s.label(x), got.alpha));
        }
    }
    Ok(())
}

/// Descent, slack and telescoping along every walk, plus termination.
pub fn check_iteration(case: &CaristiCase) -> Result<(), String> {
    let inst = case.instance();
    let s = inst.space();
    let n = s.len();
    let partial = matches!(inst.variant(), Variant::PWeak | Variant::PStrong);
    // The per-step quantity bounded by the drop in φ.
    let step = |a: usize, b: usize| -> Rational {
        if partial {
            s.d(a, b).clone() - s.d(a, a).clone()
        } else {
            s.excess(a, b)
        }
    };
    let check = inst.theorem_check();
    for start in 0..n {
        let trace = inst.iterate(s.label(start), n).map_err(|e| e.to_string())?;
        if trace.terminated == Termination::StepBudget {
            return Err(format!(
                "walk from {} did not stop within {n} steps",
                s.label(start)
            ));
        }
        let idx: Vec<usize> = trace
            .points
            .iter()
            .map(|l| s.index_of(l).expect("label"))
            .collect();
        if trace.alpha_values.len() != idx.len() || trace.phi_values.len() != idx.len() {
            return Err("trace vectors have mismatched lengths".into());
        }
        let mut sum = Rational::zero();
        for k in 0..idx.len() - 1 {
            let (a, b) = (idx[k], idx[k + 1]);
            let bound = trace.alpha_values[k].clone() + Rational::recip_of(k as u64 + 1);
            let drop = inst.phi().at(a).clone() - inst.phi().at(b).clone();
            let st = step(a, b);
            if !oracle_dominated(&inst, a).contains(&b) {
                return Err(format!("x_{} ∉ S(x_{})", k + 2, k + 1));
            }
            if !(trace.alpha_values[k] <= trace.phi_values[k + 1]
                && trace.phi_values[k + 1] <= bound)
            {
                return Err(format!("slack bound broken at step {}", k + 1));
            }
            if trace.phi_values[k + 1] > trace.phi_values[k] {
                return Err(format!("φ increased at step {}", k + 1));
            }
            if !(Rational::zero() <= st && st <= drop) {
                return Err(format!("step bound broken at step {}", k + 1));
            }
            if trace.alpha_values[k + 1] < trace.alpha_values[k] {
                return Err(format!("α decreased at step {}", k + 1));
            }
            sum += &st;
            // Telescoped bound from x_1 to x_{k+2}.
            let total = inst.phi().at(idx[0]).clone() - inst.phi().at(b).clone();
            if sum > total || step(idx[0], b) > total {
                return Err(format!("telescoping bound broken at step {}", k + 1));
            }
        }
        if check.hypotheses == mmetric::caristi::HypothesisStatus::FullyVerified
            && trace.terminated != Termination::FixedPoint
        {
            return Err(format!(
                "walk from {} missed a fixed point on a discrete space",
                s.label(start)
            ));
        }
    }
    Ok(())
}

pub fn check_continuity_lattice(case: &ContinuityCase) -> Result<(), String> {
    use ContinuityMode::*;
    for a in 0..case.source.len() {
        let holds = |m| case.holds(a, m);
        let (uu, su, us, ss) = (holds(Uu), holds(Su), holds(Us), holds(Ss));
        for (mode, got) in [(Uu, uu), (Su, su), (Us, us), (Ss, ss)] {
            if got != oracle_continuity(&case.source, &case.target, &case.map, a, mode) {
                return Err(format!(
                    "{mode} at {} disagrees with the oracle",
                    case.source.label(a)
                ));
            }
        }
        let implied = (!us || ss) && (!ss || su) && (!us || uu) && (!uu || su);
        if !implied {
            return Err(format!(
                "lattice broken at {}: uu={uu} su={su} us={us} ss={ss}",
                case.source.label(a)
            ));
        }
    }
    Ok(())
}
