//! Exchange graphs of unlabeled seeds, their labeled variant, and the checks
//! relating clusters, seeds and Y-seeds on an explored set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::arith::Permutation;
use crate::check::CheckResult;
use crate::explore::{word_text, NodeStore, Outcome};
use crate::period::{equivalent, implies, Component, Member, ObjectKind, Relation};
use crate::seed::CoeffKind;

/// `μ_direction` of the seed at `from` is `σ` applied to the seed at `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    /// 1-based.
    pub direction: usize,
    pub sigma: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeGraph {
    /// Word of the first node of each class (1-based text, empty for the root).
    pub vertices: Vec<String>,
    /// Unordered adjacencies `(a, b)` with `a <= b`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Labeled variant: one arrow per vertex and direction that was explored.
    pub arrows: Vec<Arrow>,
    /// Whether every vertex has all of its neighbors in the explored set.
    pub complete: bool,
}

impl ExchangeGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn vertex_label(&self, v: usize) -> String {
        if self.vertices[v].is_empty() {
            "t0".to_string()
        } else {
            self.vertices[v].clone()
        }
    }

    /// Unlabeled graph in DOT.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph exchange {\n");
        for v in 0..self.vertices.len() {
            let _ = writeln!(s, "  v{v} [label=\"{}\"];", self.vertex_label(v));
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  v{a} -- v{b};");
        }
        s.push_str("}\n");
        s
    }

    /// Labeled graph in DOT: arrows carry the direction and the relabeling `σ`.
    pub fn to_labeled_dot(&self) -> String {
        let mut s = String::from("digraph labeled_exchange {\n");
        for v in 0..self.vertices.len() {
            let _ = writeln!(s, "  v{v} [label=\"{}\"];", self.vertex_label(v));
        }
        for a in &self.arrows {
            let _ = writeln!(s, "  v{} -> v{} [label=\"{} {}\"];", a.from, a.to, a.direction, a.sigma);
        }
        s.push_str("}\n");
        s
    }
}

/// The exchange graph on the store's classes of seeds.
pub fn build_exchange_graph(store: &NodeStore) -> ExchangeGraph {
    let c_rel = Relation::build(store, Member::primary(ObjectKind::C));
    build_with(store, &c_rel)
}

fn build_with(store: &NodeStore, c_rel: &Relation) -> ExchangeGraph {
    let vertices = store.class_reps.iter().map(|&r| word_text(&store.nodes[r].word)).collect();
    let mut edges = BTreeSet::new();
    let mut arrows: BTreeMap<(usize, usize), Arrow> = BTreeMap::new();
    let same_classes = (0..store.nodes.len()).all(|t| store.class_reps[store.class_of[t]] == c_rel.rep_of(t));
    for (t, node) in store.nodes.iter().enumerate().skip(1) {
        let p = node.parent.expect("non-root node has a parent");
        let k = node.last().expect("non-root node has a last direction");
        let (a, b) = (store.class_of[p], store.class_of[t]);
        edges.insert((a.min(b), a.max(b)));
        if !same_classes {
            continue;
        }
        // Σ_p = σ_p Σ_rep(a) and Σ_t = τ Σ_rep(b), so μ_{σ_p⁻¹(k)} Σ_rep(a) = σ_p⁻¹ τ Σ_rep(b).
        let sp = &c_rel.to_rep[p][0];
        let tau = &c_rel.to_rep[t][0];
        let dir = sp.inverse().apply(k);
        let sigma = sp.inverse().compose(tau);
        arrows.entry((a, dir)).or_insert(Arrow { from: a, to: b, direction: dir + 1, sigma: sigma.clone() });
        // The reverse arrow: μ_{τ⁻¹(k)} Σ_rep(b) = τ⁻¹ σ_p Σ_rep(a).
        let back = tau.inverse().apply(k);
        arrows.entry((b, back)).or_insert(Arrow { from: b, to: a, direction: back + 1, sigma: sigma.inverse() });
    }
    let n = store.n();
    let complete = store.outcome == Outcome::Closed
        || (0..store.class_count()).all(|v| (0..n).all(|k| arrows.contains_key(&(v, k))));
    ExchangeGraph { vertices, edges: edges.into_iter().collect(), arrows: arrows.into_values().collect(), complete }
}

/// Checks on the explored set:
///
/// * `canonical-key-soundness`: classes by canonical key are classes of seeds;
/// * `cluster-determines-seed`: equal unlabeled clusters give equal unlabeled seeds;
/// * `graph-independent-of-coefficients`: the classes do not depend on the coefficients;
/// * `adjacency-common-variables`: two classes are adjacent iff their clusters share exactly `n − 1` variables;
/// * `seed-yseed-periodicity` and `seed-yseed-finiteness`: with principal
///   coefficients, seeds and Y-seeds have the same periods, so one is finite iff the other is.
///
/// The adjacency check needs the full neighborhood of each class and is only
/// run when the graph is complete.
pub fn exchange_graph_checks(store: &NodeStore, graph: &ExchangeGraph) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let word = |t: usize| word_text(&store.nodes[t].word);
    let coeffs = store.config.coeffs.clone();
    let seed_kind = ObjectKind::Seed;
    let seeds: Vec<Relation> = coeffs.iter().map(|&c| Relation::build(store, Member::seeded(seed_kind, c))).collect();
    let xs: Vec<Relation> = coeffs.iter().map(|&c| Relation::build(store, Member::seeded(ObjectKind::X, c))).collect();

    let unsound = seeds.iter().find_map(|rel| {
        (0..store.nodes.len()).find(|&t| store.class_reps[store.class_of[t]] != rel.rep_of(t)).map(|t| {
            format!(
                "node {} has key class of {} but {} class of {}",
                word(t),
                word(store.class_reps[store.class_of[t]]),
                rel.member.label(),
                word(rel.rep_of(t))
            )
        })
    });
    out.push(CheckResult::expect("canonical-key-soundness", unsound.is_none(), || unsound.unwrap()));

    let w = xs.iter().zip(&seeds).find_map(|(x, s)| implies(x, s, store));
    out.push(CheckResult::expect("cluster-determines-seed", w.is_none(), || w.unwrap()));

    let w = seeds.windows(2).find_map(|p| {
        let same = (0..store.nodes.len()).all(|t| p[0].rep_of(t) == p[1].rep_of(t));
        (!same).then(|| format!("{} and {} give different classes", p[0].member.label(), p[1].member.label()))
    });
    out.push(CheckResult::expect("graph-independent-of-coefficients", w.is_none(), || w.unwrap()));

    if graph.complete {
        let w = adjacency_violation(store, graph, &xs[0]);
        out.push(CheckResult::expect("adjacency-common-variables", w.is_none(), || w.unwrap()));
    }

    if coeffs.contains(&CoeffKind::Principal) {
        let seed = Relation::build(store, Member::seeded(ObjectKind::Seed, CoeffKind::Principal));
        let yseed = Relation::build(store, Member::seeded(ObjectKind::Yseed, CoeffKind::Principal));
        let w = equivalent(&seed, &yseed, store);
        out.push(CheckResult::expect("seed-yseed-periodicity", w.is_none(), || w.unwrap()));
        // A class is new at the depth of its first node; the set is finite on
        // the explored horizon when the last full layer brought no new class.
        let closed = |rel: &Relation| rel.reps.iter().all(|&r| store.nodes[r].depth() < store.depth);
        let (a, b) = (closed(&seed), closed(&yseed));
        out.push(CheckResult::expect("seed-yseed-finiteness", a == b && seed.class_count() == yseed.class_count(), || {
            format!(
                "seeds: {} classes, closed={a}; Y-seeds: {} classes, closed={b}",
                seed.class_count(),
                yseed.class_count()
            )
        }));
    }
    out
}

fn adjacency_violation(store: &NodeStore, graph: &ExchangeGraph, xs: &Relation) -> Option<String> {
    let n = store.n();
    let reps = &store.class_reps;
    let clusters: Vec<&[Component]> = reps.iter().map(|&r| xs.objects[r].parts.as_slice()).collect();
    let fps: Vec<Vec<u64>> = clusters.iter().map(|c| c.iter().map(Component::fingerprint).collect()).collect();
    let adjacent: BTreeSet<(usize, usize)> = graph.edges.iter().cloned().collect();
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            let common = (0..n)
                .filter(|&i| (0..n).any(|j| fps[a][i] == fps[b][j] && clusters[a][i] == clusters[b][j]))
                .count();
            if adjacent.contains(&(a, b)) != (common == n - 1) {
                return Some(format!(
                    "classes {} and {}: adjacent={}, common variables={common}",
                    graph.vertex_label(a),
                    graph.vertex_label(b),
                    adjacent.contains(&(a, b))
                ));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::{explore, ExploreConfig, Horizon};
    use crate::seed::ExchangeMatrix;

    fn graph(rows: &[Vec<i64>], horizon: Horizon) -> (NodeStore, ExchangeGraph) {
        let mut cfg = ExploreConfig::new(ExchangeMatrix::from_rows(rows).unwrap(), horizon);
        cfg.coeffs = vec![CoeffKind::Trivial, CoeffKind::Principal];
        let s = explore(&cfg).unwrap();
        let g = build_exchange_graph(&s);
        (s, g)
    }

    #[test]
    fn a2_pentagon() {
        let (s, g) = graph(&[vec![0, 1], vec![-1, 0]], Horizon::Closure);
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 5));
        assert!(g.complete);
        assert_eq!(g.arrows.len(), 10);
        assert!(exchange_graph_checks(&s, &g).iter().all(|c| c.passed));
        assert_eq!(g.to_dot().matches(" -- ").count(), 5);
    }

    #[test]
    fn single_node() {
        let (_, g) = graph(&[vec![0, 1], vec![-1, 0]], Horizon::Depth(0));
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        assert!(!g.complete);
    }

    #[test]
    fn arrows_are_consistent_with_mutation() {
        let (s, g) = graph(&[vec![0, 2], vec![-1, 0]], Horizon::Closure);
        assert_eq!(g.vertex_count(), 6);
        for a in &g.arrows {
            let from = &s.nodes[s.class_reps[a.from]];
            let to = &s.nodes[s.class_reps[a.to]];
            let moved = from.fgc.mutate(a.direction - 1).unwrap();
            assert_eq!(moved.c(), &to.fgc.c().permute_columns(&a.sigma));
        }
    }
}
