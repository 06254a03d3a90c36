//! Library results against brute force on small exhaustive grids.

mod common;

use common::*;
use mmetric::axioms::{axiom_report, instantiate, AxiomId};
use mmetric::explorer::{candidate_space, find_separating_example, SearchBudget};
use mmetric::topology::{ball_set, separation_report, BallKind, FiniteTopology};
use mmetric::{catalog, generate_topology, Mode, TopologyKind};

fn grid(n: usize, hi: i64) -> impl Iterator<Item = mmetric::FiniteSpace> {
    let budget = SearchBudget::new(u64::MAX, 0, n, (0, hi)).unwrap();
    assert!(budget.is_exhaustive(n));
    (0..budget.candidate_count(n)).map(move |k| candidate_space(&budget, n, k))
}

#[test]
fn axiom_reports_agree_with_oracle_on_small_grids() {
    for (n, hi) in [(2, 3), (3, 2)] {
        for space in grid(n, hi) {
            for mode in Mode::ALL {
                let report = axiom_report(&space, mode);
                assert_eq!(
                    report.is_empty(),
                    oracle_satisfies(&space, mode),
                    "{mode} on {space:?}"
                );
                for v in &report {
                    let idx: Vec<usize> = v
                        .witness
                        .iter()
                        .map(|l| space.index_of(l).unwrap())
                        .collect();
                    let (lhs, rhs, rel) = instantiate(&space, v.axiom, &idx).unwrap();
                    assert_eq!((&lhs, &rhs), (&v.lhs, &v.rhs));
                    assert!(!rel.holds(&lhs, &rhs));
                }
            }
        }
    }
}

#[test]
fn separation_agrees_with_open_set_search() {
    for (n, hi) in [(2, 3), (3, 2)] {
        for space in grid(n, hi) {
            if !oracle_is_m_metric(&space) {
                continue;
            }
            let radii = quarter_grid(&[&space]);
            for (kind, ball) in [
                (TopologyKind::MOpen, oracle_m_ball as fn(&_, _, &_) -> u64),
                (TopologyKind::POpen, oracle_p_ball),
            ] {
                let subbase: Vec<u64> = (0..n)
                    .flat_map(|x| radii.iter().map(move |e| (x, e)))
                    .map(|(x, e)| ball(&space, x, e))
                    .collect();
                let opens = oracle_generate(n, &subbase);
                let top = generate_topology(&space, kind).unwrap();
                let mut got: Vec<u64> = top.opens().iter().map(|s| s.bits()).collect();
                got.sort();
                assert_eq!(got, opens, "{kind:?} on {space:?}");
                let report = separation_report(&top);
                assert_eq!(
                    (report.t0, report.t1, report.hausdorff),
                    oracle_separation(n, &opens)
                );
            }
        }
    }
}

#[test]
fn m_topology_is_hausdorff_iff_excess_separates() {
    for space in grid(3, 2).filter(oracle_is_m_metric) {
        let top = generate_topology(&space, TopologyKind::MOpen).unwrap();
        let separated = (0..3).all(|x| (0..3).all(|y| x == y || space.excess(x, y).is_positive()));
        assert_eq!(separation_report(&top).hausdorff, separated);
    }
}

#[test]
fn generated_topologies_are_closed() {
    let space = catalog::example_two();
    for kind in [TopologyKind::MOpen, TopologyKind::POpen] {
        let top = generate_topology(&space, kind).unwrap();
        let again = FiniteTopology::from_opens(top.carrier().to_vec(), top.opens().iter().copied())
            .unwrap();
        assert_eq!(again, top);
        for x in 0..4 {
            assert!(top.is_open(ball_set(&space, BallKind::from(kind), x, &mmetric::q(1))));
        }
    }
}

#[test]
fn two_point_separating_examples_exist() {
    // An exhaustive scan of the 2-point grid: the first M-metric failing P4.
    let expected = grid(2, 5)
        .find(|s| {
            oracle_is_m_metric(s) && !oracle_is_partial(s) && {
                axiom_report(s, Mode::Partial)
                    .iter()
                    .any(|v| v.axiom == AxiomId::P4)
            }
        })
        .expect("a 2-point separating table");
    let found = find_separating_example(&SearchBudget::new(1_000, 0, 2, (0, 5)).unwrap()).unwrap();
    assert_eq!(found.space, expected);
}

#[test]
fn continuity_agrees_with_oracle_on_catalog_maps() {
    let space = catalog::max_restriction(&[1, 2, 3]);
    for images in [[0, 1, 2], [1, 0, 2], [2, 2, 2], [0, 0, 1], [2, 1, 0]] {
        let case = ContinuityCase {
            source: space.clone(),
            target: space.clone(),
            map: images.to_vec(),
        };
        check_continuity_lattice(&case).unwrap();
    }
}
