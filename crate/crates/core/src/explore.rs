//! Breadth-first exploration of the n-regular tree.
//!
//! Nodes are identified by their reduced word from the root. Each node stores
//! the seeds for every requested coefficient choice, the FGC-seed, and any dual,
//! conjugate or companion patterns, all computed in lockstep.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{IntMatrix, LaurentPoly, RationalFn};
use crate::fgc::{conjugate_pair, Duality, FgcSeed, GcSeed};
use crate::gca::{DegreeR, GcaFgcSeed, GcaSeed, ZValues};
use crate::seed::{CoeffKind, ExchangeMatrix, PatternError, Seed};
use crate::semifield::SfElem;

/// How far to explore.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Horizon {
    /// Every node at depth at most `d`.
    Depth(usize),
    /// Stop after the first layer that adds no new class of seeds.
    Closure,
    /// Like `Closure`, then continue to depth `2L + 1`, where `L` is the last
    /// layer that added a class, so every minimal cycle through the root is seen.
    ClosureCycles,
}

#[derive(Clone, Debug)]
pub struct ExploreConfig {
    pub b: ExchangeMatrix,
    /// Degree for generalized patterns; `None` for ordinary ones.
    pub r: Option<DegreeR>,
    pub coeffs: Vec<CoeffKind>,
    pub z_values: Option<ZValues>,
    pub duals: Vec<Duality>,
    /// Diagonal of `R` for the conjugate pair `(RB, BR)`.
    pub conjugate: Option<Vec<BigInt>>,
    /// Carry the companion patterns of `RB` and `BR` (generalized patterns only).
    pub companions: bool,
    pub horizon: Horizon,
    pub max_nodes: usize,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl ExploreConfig {
    pub fn new(b: ExchangeMatrix, horizon: Horizon) -> Self {
        ExploreConfig {
            b,
            r: None,
            coeffs: vec![CoeffKind::Trivial],
            z_values: None,
            duals: Vec::new(),
            conjugate: None,
            companions: false,
            horizon,
            max_nodes: 100_000,
            jobs: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn is_generalized(&self) -> bool {
        self.r.is_some()
    }
}

/// A seed of an ordinary or a generalized pattern.
#[derive(Clone, Debug, PartialEq)]
pub enum SeedState {
    Ordinary(Seed),
    Generalized(GcaSeed),
}

impl SeedState {
    pub fn x(&self) -> &[RationalFn] {
        match self {
            SeedState::Ordinary(s) => &s.x,
            SeedState::Generalized(s) => &s.x,
        }
    }

    pub fn y(&self) -> &[SfElem] {
        match self {
            SeedState::Ordinary(s) => &s.y,
            SeedState::Generalized(s) => &s.y,
        }
    }

    pub fn z(&self) -> Option<&[Vec<SfElem>]> {
        match self {
            SeedState::Ordinary(_) => None,
            SeedState::Generalized(s) => Some(&s.z),
        }
    }

    pub fn b(&self) -> &IntMatrix {
        match self {
            SeedState::Ordinary(s) => s.b.b(),
            SeedState::Generalized(s) => s.b.b(),
        }
    }

    pub fn names(&self) -> Vec<String> {
        match self {
            SeedState::Ordinary(s) => s.names(),
            SeedState::Generalized(s) => s.names(),
        }
    }

    pub fn mutate(&self, k: usize) -> Result<Self, PatternError> {
        Ok(match self {
            SeedState::Ordinary(s) => SeedState::Ordinary(s.mutate(k)?),
            SeedState::Generalized(s) => SeedState::Generalized(s.mutate(k)?),
        })
    }
}

/// An FGC-seed of an ordinary or a generalized pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FgcState {
    Ordinary(FgcSeed),
    Generalized(GcaFgcSeed),
}

impl FgcState {
    pub fn f(&self) -> &[LaurentPoly] {
        match self {
            FgcState::Ordinary(s) => &s.f,
            FgcState::Generalized(s) => &s.f,
        }
    }

    pub fn g(&self) -> &IntMatrix {
        match self {
            FgcState::Ordinary(s) => &s.g,
            FgcState::Generalized(s) => &s.g,
        }
    }

    pub fn c(&self) -> &IntMatrix {
        match self {
            FgcState::Ordinary(s) => &s.c,
            FgcState::Generalized(s) => &s.c,
        }
    }

    pub fn bt(&self) -> &IntMatrix {
        match self {
            FgcState::Ordinary(s) => &s.bt,
            FgcState::Generalized(s) => &s.bt,
        }
    }

    pub fn mutate(&self, k: usize) -> Result<Self, PatternError> {
        Ok(match self {
            FgcState::Ordinary(s) => FgcState::Ordinary(s.mutate(k)?),
            FgcState::Generalized(s) => FgcState::Generalized(s.mutate(k)?),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    /// Reduced word from the root, 0-based directions.
    pub word: Vec<usize>,
    pub parent: Option<usize>,
    /// One seed per entry of `ExploreConfig::coeffs`.
    pub seeds: Vec<SeedState>,
    pub fgc: FgcState,
    /// One FGC-seed per entry of `ExploreConfig::duals`.
    pub duals: Vec<FgcSeed>,
    /// Patterns of `RB` and `BR` for the conjugate pair.
    pub conjugate: Option<(GcSeed, GcSeed)>,
    /// Left and right companions.
    pub companions: Option<(FgcSeed, FgcSeed)>,
    pub key: ClassKey,
}

impl Node {
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn last(&self) -> Option<usize> {
        self.word.last().copied()
    }

    pub(crate) fn root_of(config: &ExploreConfig) -> Result<Node, PatternError> {
        let b = &config.b;
        let seeds = match &config.r {
            None => config.coeffs.iter().map(|&c| SeedState::Ordinary(Seed::initial(b.clone(), c))).collect(),
            Some(r) => config
                .coeffs
                .iter()
                .map(|&c| {
                    GcaSeed::initial(b.clone(), r.clone(), c, config.z_values.as_ref()).map(SeedState::Generalized)
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let fgc = match &config.r {
            None => FgcState::Ordinary(FgcSeed::initial(b.b())),
            Some(r) => FgcState::Generalized(GcaFgcSeed::initial(b.b(), r)),
        };
        let duals = config.duals.iter().map(|d| FgcSeed::initial(&d.dual_matrix(b.b()))).collect();
        let conjugate = config.conjugate.as_ref().map(|r| {
            let (left, right) = conjugate_pair(b.b(), r);
            (GcSeed::initial(&left), GcSeed::initial(&right))
        });
        let companions = match (&config.r, config.companions) {
            (Some(r), true) => {
                let (left, right) = conjugate_pair(b.b(), &r.as_bigints());
                Some((FgcSeed::initial(&left), FgcSeed::initial(&right)))
            }
            _ => None,
        };
        let key = ClassKey::of(fgc.c(), fgc.bt());
        Ok(Node { word: Vec::new(), parent: None, seeds, fgc, duals, conjugate, companions, key })
    }

    pub(crate) fn child(&self, index: usize, k: usize) -> Result<Node, PatternError> {
        let seeds = self.seeds.iter().map(|s| s.mutate(k)).collect::<Result<Vec<_>, _>>()?;
        let fgc = self.fgc.mutate(k)?;
        let duals = self.duals.iter().map(|d| d.mutate(k)).collect::<Result<Vec<_>, _>>()?;
        let conjugate = match &self.conjugate {
            Some((l, r)) => Some((l.mutate(k)?, r.mutate(k)?)),
            None => None,
        };
        let companions = match &self.companions {
            Some((l, r)) => Some((l.mutate(k)?, r.mutate(k)?)),
            None => None,
        };
        let mut word = self.word.clone();
        word.push(k);
        let key = ClassKey::of(fgc.c(), fgc.bt());
        Ok(Node { word, parent: Some(index), seeds, fgc, duals, conjugate, companions, key })
    }
}

/// Canonical form of `(C, B)` under simultaneous relabeling: the columns of
/// `C` sorted, and `B` conjugated by the same permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey(Vec<BigInt>);

impl ClassKey {
    pub fn of(c: &IntMatrix, b: &IntMatrix) -> Self {
        let n = c.n();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| c.column(j));
        let mut out = Vec::with_capacity(2 * n * n);
        for &j in &order {
            out.extend(c.column(j));
        }
        for &i in &order {
            for &j in &order {
                out.push(b.get(i, j).clone());
            }
        }
        ClassKey(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// A full layer added no new class: the pattern is finite.
    Closed,
    /// The depth limit was reached; nothing is known beyond it.
    DepthLimit,
    /// The node cap stopped exploration before the horizon.
    Truncated,
}

/// Explored nodes in breadth-first order, with their classes of seeds.
#[derive(Clone, Debug)]
pub struct NodeStore {
    pub config: ExploreConfig,
    pub nodes: Vec<Node>,
    /// Class index of each node; classes are numbered in order of first appearance.
    pub class_of: Vec<usize>,
    /// First node of each class.
    pub class_reps: Vec<usize>,
    /// Deepest complete layer.
    pub depth: usize,
    pub outcome: Outcome,
    /// Last layer that added a class.
    pub last_new_layer: usize,
}

impl NodeStore {
    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    /// Index of the node with the given word, if stored.
    pub fn find(&self, word: &[usize]) -> Option<usize> {
        self.nodes.iter().position(|n| n.word == word)
    }

    /// Children in the tree, in the order they were stored.
    pub fn children(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().enumerate().skip(index + 1).filter(move |(_, n)| n.parent == Some(index)).map(|(i, _)| i)
    }
}

/// The user-facing form of a word: 1-based directions, concatenated when all
/// are single digits and comma-separated otherwise.
pub fn word_text(word: &[usize]) -> String {
    if word.iter().all(|&k| k < 9) {
        word.iter().map(|k| (k + 1).to_string()).collect()
    } else {
        word.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Runs the exploration described by `config`.
pub fn explore(config: &ExploreConfig) -> Result<NodeStore, PatternError> {
    if config.companions && config.r.is_none() {
        return Err(PatternError::Dimension("companion patterns need a degree R".into()));
    }
    if let Some(r) = &config.r {
        if r.n() != config.n() {
            return Err(PatternError::Dimension(format!("R has {} entries, B is {}x{}", r.n(), config.n(), config.n())));
        }
    }
    if let Some(r) = &config.conjugate {
        if r.len() != config.n() {
            return Err(PatternError::Dimension(format!("R has {} entries, B is {}x{}", r.len(), config.n(), config.n())));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| PatternError::Dimension(format!("thread pool: {e}")))?;
    pool.install(|| run(config))
}

fn run(config: &ExploreConfig) -> Result<NodeStore, PatternError> {
    let n = config.n();
    let root = Node::root_of(config)?;
    let mut classes: HashMap<ClassKey, usize> = HashMap::new();
    classes.insert(root.key.clone(), 0);
    let mut store = NodeStore {
        config: config.clone(),
        nodes: vec![root],
        class_of: vec![0],
        class_reps: vec![0],
        depth: 0,
        outcome: Outcome::DepthLimit,
        last_new_layer: 0,
    };
    let mut frontier = 0..1;
    let mut closed_at: Option<usize> = None;
    loop {
        let depth = store.depth;
        let target = match config.horizon {
            Horizon::Depth(d) => Some(d),
            Horizon::Closure => closed_at,
            Horizon::ClosureCycles => closed_at.map(|_| (2 * store.last_new_layer + 1).max(depth)),
        };
        if target.is_some_and(|t| depth >= t) {
            store.outcome = if closed_at.is_some() { Outcome::Closed } else { Outcome::DepthLimit };
            return Ok(store);
        }
        let jobs: Vec<(usize, usize)> = frontier
            .clone()
            .flat_map(|i| {
                let last = store.nodes[i].last();
                (0..n).filter(move |&k| Some(k) != last).map(move |k| (i, k))
            })
            .collect();
        if jobs.is_empty() {
            // Only possible for n = 1: the whole tree has been seen.
            store.outcome = Outcome::Closed;
            return Ok(store);
        }
        if store.nodes.len() + jobs.len() > config.max_nodes {
            store.outcome = Outcome::Truncated;
            return Ok(store);
        }
        let layer: Vec<Node> = jobs
            .par_iter()
            .map(|&(i, k)| store.nodes[i].child(i, k))
            .collect::<Result<Vec<_>, _>>()?;
        let start = store.nodes.len();
        let mut added = false;
        for node in layer {
            let next = classes.len();
            let class = *classes.entry(node.key.clone()).or_insert(next);
            if class == next {
                store.class_reps.push(store.nodes.len());
                added = true;
            }
            store.class_of.push(class);
            store.nodes.push(node);
        }
        store.depth = depth + 1;
        frontier = start..store.nodes.len();
        if added {
            store.last_new_layer = store.depth;
        } else if closed_at.is_none() {
            closed_at = Some(store.depth);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store(rows: &[Vec<i64>], horizon: Horizon) -> NodeStore {
        explore(&ExploreConfig::new(ExchangeMatrix::from_rows(rows).unwrap(), horizon)).unwrap()
    }

    #[test]
    fn depth_zero_is_the_root() {
        let s = store(&[vec![0, 1], vec![-1, 0]], Horizon::Depth(0));
        assert_eq!(s.nodes.len(), 1);
        assert_eq!(s.outcome, Outcome::DepthLimit);
    }

    #[test]
    fn markov_tree_count() {
        let s = store(&[vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]], Horizon::Depth(4));
        assert_eq!(s.nodes.len(), 1 + 3 + 6 + 12 + 24);
    }

    #[test]
    fn a2_closes_with_five_classes() {
        let s = store(&[vec![0, 1], vec![-1, 0]], Horizon::Closure);
        assert_eq!(s.outcome, Outcome::Closed);
        assert_eq!(s.class_count(), 5);
        let c = store(&[vec![0, 1], vec![-1, 0]], Horizon::ClosureCycles);
        assert_eq!(c.depth, 2 * c.last_new_layer + 1);
        assert_eq!(c.find(&[0, 1, 0, 1, 0]).map(|i| c.nodes[i].word.clone()), Some(vec![0, 1, 0, 1, 0]));
    }

    #[test]
    fn cap_truncates() {
        let mut cfg = ExploreConfig::new(ExchangeMatrix::from_rows(&[vec![0, 2], vec![-2, 0]]).unwrap(), Horizon::Closure);
        cfg.max_nodes = 10;
        let s = explore(&cfg).unwrap();
        assert_eq!(s.outcome, Outcome::Truncated);
        assert!(s.nodes.len() <= 10);
    }
}
