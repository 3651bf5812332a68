mod common;

use clustersync::arith::Permutation;
use clustersync::explore::{explore, ExploreConfig, Horizon, Outcome};
use clustersync::graph::build_exchange_graph;
use clustersync::period::{detect_periods, Member, ObjectKind};
use clustersync::seed::{CoeffKind, ExchangeMatrix};
use common::*;

fn closure_classes(b: &[Vec<i64>]) -> usize {
    let s = explore(&ExploreConfig::new(ExchangeMatrix::from_rows(b).unwrap(), Horizon::Closure)).unwrap();
    assert_eq!(s.outcome, Outcome::Closed);
    s.class_count()
}

fn perm(images: Vec<usize>) -> Permutation {
    Permutation::from_images(images).unwrap()
}

#[test]
fn oracle_agrees_with_itself_on_relabeling() {
    let s = OracleSeed::initial(&a2());
    let m = s.mutate(0).mutate(1);
    assert_eq!(m.mutate(1).mutate(0), s);
    assert_eq!(s.relabeling_from(&s), Some(vec![0, 1]));
}

#[test]
fn finite_type_counts_match_the_oracle() {
    let cases = [
        ("A2", a2(), 5),
        ("A3", a3(), 14),
        ("B2", b2(), 6),
        ("G2", g2(), 8),
        ("A4", rows([[0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1], [0, 0, -1, 0]]), 42),
        ("B3", rows([[0, 1, 0], [-1, 0, 1], [0, -2, 0]]), 20),
        ("D4", rows([[0, 1, 0, 0], [-1, 0, 1, 1], [0, -1, 0, 0], [0, -1, 0, 0]]), 50),
    ];
    for (name, b, expected) in cases {
        let oracle = count_unlabeled_seeds(&b, 1000).expect("finite type");
        assert_eq!(oracle, expected, "{name}: oracle");
        assert_eq!(closure_classes(&b), oracle, "{name}: exploration");
    }
}

#[test]
fn exchange_graph_vertices_match_the_oracle() {
    for b in [a2(), a3(), b2(), g2()] {
        let s = explore(&ExploreConfig::new(ExchangeMatrix::from_rows(&b).unwrap(), Horizon::Closure)).unwrap();
        let g = build_exchange_graph(&s);
        let n = b.len();
        assert_eq!(g.vertex_count(), count_unlabeled_seeds(&b, 1000).unwrap());
        // n-regular graph: n·V/2 edges.
        assert_eq!(g.edge_count(), n * g.vertex_count() / 2);
    }
}

#[test]
fn a2_minimal_period_matches_the_oracle() {
    let (word, sigma) = minimal_root_period(&a2(), 8).unwrap();
    assert_eq!(word, vec![0, 1, 0, 1, 0]);
    let s = explore(&ExploreConfig::new(ExchangeMatrix::from_rows(&a2()).unwrap(), Horizon::ClosureCycles)).unwrap();
    let periods = detect_periods(&s, Member::seeded(ObjectKind::Seed, CoeffKind::Trivial));
    let root: Vec<_> = periods.iter().filter(|p| p.start.is_empty() && !p.path.is_empty()).collect();
    let min = root.iter().map(|p| p.path.len()).min().unwrap();
    assert_eq!(min, word.len());
    let p = root.iter().find(|p| p.path == word).expect("core finds the oracle's period");
    assert_eq!(p.sigma, perm(sigma));
    assert_eq!(p.record().cycles, "(1 2)");
}

#[test]
fn b2_alternating_period_matches_the_oracle() {
    let (len, sigma) = alternating_period(&b2(), 0, 1, 20).unwrap();
    assert_eq!(len, 6);
    let s = explore(&ExploreConfig::new(ExchangeMatrix::from_rows(&b2()).unwrap(), Horizon::ClosureCycles)).unwrap();
    let periods = detect_periods(&s, Member::seeded(ObjectKind::Seed, CoeffKind::Trivial));
    let alternating = |w: &[usize]| w.first() == Some(&0) && w.windows(2).all(|p| p[0] != p[1]);
    let found = periods
        .iter()
        .filter(|p| p.start.is_empty() && alternating(&p.path))
        .min_by_key(|p| p.path.len())
        .unwrap();
    assert_eq!(found.path.len(), len);
    assert_eq!(found.sigma, perm(sigma));
}

#[test]
fn g2_alternating_period_matches_the_oracle() {
    let (len, sigma) = alternating_period(&g2(), 0, 1, 20).unwrap();
    let s = explore(&ExploreConfig::new(ExchangeMatrix::from_rows(&g2()).unwrap(), Horizon::ClosureCycles)).unwrap();
    let periods = detect_periods(&s, Member::seeded(ObjectKind::Seed, CoeffKind::Trivial));
    let found = periods
        .iter()
        .filter(|p| p.start.is_empty() && p.path.first() == Some(&0) && !p.path.is_empty())
        .min_by_key(|p| p.path.len())
        .unwrap();
    assert_eq!(found.path.len(), len);
    assert_eq!(found.sigma, perm(sigma));
}
