//! Objects compared up to relabeling, their match relations over a node
//! store, and σ-period records with replay.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{IntMatrix, LaurentPoly, Permutation, RationalFn};
use crate::explore::{word_text, ExploreConfig, Node, NodeStore, Outcome};
use crate::fgc::Duality;
use crate::gca::connecting_word;
use crate::run::reduce_word;
use crate::seed::{CoeffKind, PatternError};
use crate::semifield::SfElem;

/// One labeled slot of an object.
#[derive(Clone, Debug, PartialEq)]
pub enum Component {
    Rational(RationalFn),
    Coefficient(SfElem),
    Vector(Vec<BigInt>),
    Poly(LaurentPoly),
    Tuple(Vec<Component>),
}

impl Component {
    /// Equal components have equal fingerprints, up to an undefined evaluation
    /// (reported as `u64::MAX`), which only costs a missed candidate.
    pub fn fingerprint(&self) -> u64 {
        match self {
            Component::Rational(r) => r.fingerprint().map_or(u64::MAX, |f| f.value()),
            Component::Coefficient(e) => e.fingerprint().unwrap_or(u64::MAX),
            Component::Vector(v) => {
                let mut h = DefaultHasher::new();
                v.hash(&mut h);
                h.finish()
            }
            Component::Poly(p) => p.fingerprint().value(),
            Component::Tuple(parts) => {
                let mut h = DefaultHasher::new();
                for p in parts {
                    p.fingerprint().hash(&mut h);
                }
                h.finish()
            }
        }
    }
}

/// A labeled family of components, optionally with a matrix that a
/// relabeling conjugates (`B ↦ σB`).
#[derive(Clone, Debug, PartialEq)]
pub struct Object {
    pub parts: Vec<Component>,
    pub frame: Option<IntMatrix>,
}

impl Object {
    pub fn new(parts: Vec<Component>, frame: Option<IntMatrix>) -> Self {
        Object { parts, frame }
    }

    pub fn fingerprints(&self) -> Vec<u64> {
        self.parts.iter().map(Component::fingerprint).collect()
    }

    fn frame_matches(&self, other: &Object, sigma: &Permutation) -> bool {
        match (&self.frame, &other.frame) {
            (Some(a), Some(b)) => a == &b.permute_both(sigma),
            (None, None) => true,
            _ => false,
        }
    }

    /// Whether `self = σ other`.
    pub fn is_image(&self, other: &Object, sigma: &Permutation) -> bool {
        let n = self.parts.len();
        if other.parts.len() != n || sigma.len() != n {
            return false;
        }
        let inv = sigma.inverse();
        self.frame_matches(other, sigma) && (0..n).all(|i| self.parts[i] == other.parts[inv.apply(i)])
    }

    /// Every `σ` with `self = σ other`, in increasing order.
    pub fn matches(&self, other: &Object) -> Vec<Permutation> {
        self.matches_with(&self.fingerprints(), other, &other.fingerprints())
    }

    /// `matches` given the component fingerprints of both sides.
    pub fn matches_with(&self, fa: &[u64], other: &Object, fb: &[u64]) -> Vec<Permutation> {
        let n = self.parts.len();
        if other.parts.len() != n {
            return Vec::new();
        }
        // cand[i]: slots j of `other` that can sit at slot i, i.e. σ⁻¹(i) = j.
        let cand: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| fa[i] == fb[j]).collect()).collect();
        if cand.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        // Exact comparison is the expensive part: decide each pair once.
        let mut same: Vec<Option<bool>> = vec![None; n * n];
        let mut out = Vec::new();
        let mut inv = Vec::with_capacity(n);
        let mut used = vec![false; n];
        assign(&cand, &mut inv, &mut used, &mut |inv: &[usize]| {
            let sigma = Permutation::from_images(inv.to_vec()).expect("bijection").inverse();
            if !self.frame_matches(other, &sigma) {
                return;
            }
            let parts_ok = inv
                .iter()
                .enumerate()
                .all(|(i, &j)| *same[i * n + j].get_or_insert_with(|| self.parts[i] == other.parts[j]));
            if parts_ok {
                out.push(sigma);
            }
        });
        out.sort();
        out
    }
}

fn assign(cand: &[Vec<usize>], inv: &mut Vec<usize>, used: &mut [bool], emit: &mut dyn FnMut(&[usize])) {
    let i = inv.len();
    if i == cand.len() {
        emit(inv);
        return;
    }
    for &j in &cand[i] {
        if !used[j] {
            used[j] = true;
            inv.push(j);
            assign(cand, inv, used, emit);
            inv.pop();
            used[j] = false;
        }
    }
}

/// What is compared at each node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectKind {
    /// `(x, y, B)`, with `z` for generalized patterns.
    Seed,
    /// `(y, B)`, with `z` for generalized patterns.
    Yseed,
    X,
    Y,
    /// `z` alone (generalized patterns).
    Z,
    C,
    G,
    /// `(F, B_t)`.
    F,
    /// `(x, y, z, B)` of a generalized pattern.
    GcaSeed,
}

impl ObjectKind {
    pub fn name(self) -> &'static str {
        match self {
            ObjectKind::Seed => "seed",
            ObjectKind::Yseed => "yseed",
            ObjectKind::X => "x",
            ObjectKind::Y => "y",
            ObjectKind::Z => "z",
            ObjectKind::C => "C",
            ObjectKind::G => "G",
            ObjectKind::F => "F",
            ObjectKind::GcaSeed => "gca-seed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            ObjectKind::Seed,
            ObjectKind::Yseed,
            ObjectKind::X,
            ObjectKind::Y,
            ObjectKind::Z,
            ObjectKind::C,
            ObjectKind::G,
            ObjectKind::F,
            ObjectKind::GcaSeed,
        ]
        .into_iter()
        .find(|k| k.name().eq_ignore_ascii_case(s))
    }

    /// Whether the object lives on seeds and so needs a coefficient choice.
    pub fn uses_coefficients(self) -> bool {
        matches!(
            self,
            ObjectKind::Seed | ObjectKind::Yseed | ObjectKind::X | ObjectKind::Y | ObjectKind::Z | ObjectKind::GcaSeed
        )
    }
}

/// Which pattern of a node an object is read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Primary,
    Dual(Duality),
    /// Pattern of `RB` in a conjugate pair.
    ConjugateLeft,
    /// Pattern of `BR` in a conjugate pair.
    ConjugateRight,
    CompanionLeft,
    CompanionRight,
}

/// An object kind read from one pattern, for one coefficient choice where that applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Member {
    pub kind: ObjectKind,
    pub coeff: Option<CoeffKind>,
    pub source: Source,
}

impl Member {
    pub fn primary(kind: ObjectKind) -> Self {
        Member { kind, coeff: None, source: Source::Primary }
    }

    pub fn seeded(kind: ObjectKind, coeff: CoeffKind) -> Self {
        Member { kind, coeff: Some(coeff), source: Source::Primary }
    }

    pub fn from(kind: ObjectKind, source: Source) -> Self {
        Member { kind, coeff: None, source }
    }

    pub fn label(&self) -> String {
        let mut s = self.kind.name().to_string();
        if let Some(c) = self.coeff {
            s = format!("{s}[{}]", c.name());
        }
        match self.source {
            Source::Primary => s,
            Source::Dual(d) => format!("{s}[{}]", d.name()),
            Source::ConjugateLeft => format!("{s}[RB]"),
            Source::ConjugateRight => format!("{s}[BR]"),
            Source::CompanionLeft => format!("{s}[left-companion]"),
            Source::CompanionRight => format!("{s}[right-companion]"),
        }
    }

    /// Reads the object at `node`, which was built under `config`.
    pub fn extract(&self, config: &ExploreConfig, node: &Node) -> Object {
        let columns = |m: &IntMatrix| -> Object {
            Object::new((0..m.n()).map(|j| Component::Vector(m.column(j))).collect(), None)
        };
        let pick = |g: &IntMatrix, c: &IntMatrix| -> Object {
            match self.kind {
                ObjectKind::G => columns(g),
                _ => columns(c),
            }
        };
        match self.source {
            Source::Dual(d) => {
                let i = config.duals.iter().position(|&x| x == d).expect("dual pattern not carried");
                let s = &node.duals[i];
                return if self.kind == ObjectKind::F {
                    Object::new(s.f.iter().cloned().map(Component::Poly).collect(), Some(s.bt.clone()))
                } else {
                    pick(&s.g, &s.c)
                };
            }
            Source::ConjugateLeft | Source::ConjugateRight => {
                let (l, r) = node.conjugate.as_ref().expect("conjugate pair not carried");
                let s = if self.source == Source::ConjugateLeft { l } else { r };
                return pick(&s.g, &s.c);
            }
            Source::CompanionLeft | Source::CompanionRight => {
                let (l, r) = node.companions.as_ref().expect("companions not carried");
                let s = if self.source == Source::CompanionLeft { l } else { r };
                return if self.kind == ObjectKind::F {
                    Object::new(s.f.iter().cloned().map(Component::Poly).collect(), Some(s.bt.clone()))
                } else {
                    pick(&s.g, &s.c)
                };
            }
            Source::Primary => {}
        }
        let fgc = &node.fgc;
        match self.kind {
            ObjectKind::C => return columns(fgc.c()),
            ObjectKind::G => return columns(fgc.g()),
            ObjectKind::F => {
                return Object::new(fgc.f().iter().cloned().map(Component::Poly).collect(), Some(fgc.bt().clone()))
            }
            _ => {}
        }
        let coeff = self.coeff.unwrap_or(config.coeffs[0]);
        let i = config.coeffs.iter().position(|&c| c == coeff).expect("coefficient choice not carried");
        let s = &node.seeds[i];
        let n = s.x().len();
        let z = |i: usize| -> Component {
            Component::Tuple(s.z().map_or(Vec::new(), |z| z[i].iter().cloned().map(Component::Coefficient).collect()))
        };
        let parts: Vec<Component> = (0..n)
            .map(|i| match self.kind {
                ObjectKind::X => Component::Rational(s.x()[i].clone()),
                ObjectKind::Y => Component::Coefficient(s.y()[i].clone()),
                ObjectKind::Z => z(i),
                ObjectKind::Yseed => Component::Tuple(vec![Component::Coefficient(s.y()[i].clone()), z(i)]),
                _ => Component::Tuple(vec![
                    Component::Rational(s.x()[i].clone()),
                    Component::Coefficient(s.y()[i].clone()),
                    z(i),
                ]),
            })
            .collect();
        let frame = match self.kind {
            ObjectKind::Seed | ObjectKind::Yseed | ObjectKind::GcaSeed => Some(s.b().clone()),
            _ => None,
        };
        Object::new(parts, frame)
    }

    /// The smallest configuration that still carries this member.
    pub fn trimmed(&self, config: &ExploreConfig) -> ExploreConfig {
        let mut c = config.clone();
        c.coeffs = vec![self.coeff.unwrap_or(config.coeffs[0])];
        c.duals = match self.source {
            Source::Dual(d) => vec![d],
            _ => Vec::new(),
        };
        if !matches!(self.source, Source::ConjugateLeft | Source::ConjugateRight) {
            c.conjugate = None;
        }
        c.companions = matches!(self.source, Source::CompanionLeft | Source::CompanionRight);
        c
    }
}

/// How one member's objects match across the nodes of a store.
///
/// Matching up to relabeling is an equivalence relation compatible with
/// composing permutations, so it is recorded against the first node of each
/// class: `to_rep[t]` holds every `σ` with `O_t = σ O_rep`. A relation where
/// every object is the same constant tuple (trivial coefficients) is `total`:
/// every pair matches under every `σ`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub member: Member,
    pub total: bool,
    pub class_of: Vec<usize>,
    pub reps: Vec<usize>,
    pub to_rep: Vec<Vec<Permutation>>,
    pub objects: Vec<Object>,
}

impl Relation {
    pub fn build(store: &NodeStore, member: Member) -> Relation {
        let objects: Vec<Object> = store.nodes.par_iter().map(|node| member.extract(&store.config, node)).collect();
        let total = objects[0].frame.is_none()
            && objects.iter().all(|o| o.parts.iter().all(|p| p == &objects[0].parts[0]));
        let nodes = objects.len();
        if total {
            return Relation {
                member,
                total,
                class_of: vec![0; nodes],
                reps: vec![0],
                to_rep: vec![Vec::new(); nodes],
                objects,
            };
        }
        let prints: Vec<Vec<u64>> = objects.par_iter().map(Object::fingerprints).collect();
        let keys: Vec<Vec<u64>> = prints
            .iter()
            .map(|f| {
                let mut k = f.clone();
                k.sort_unstable();
                k
            })
            .collect();
        let mut groups: HashMap<&[u64], Vec<usize>> = HashMap::new();
        let mut class_of = vec![0; nodes];
        let mut reps: Vec<usize> = Vec::new();
        let mut to_rep: Vec<Vec<Permutation>> = vec![Vec::new(); nodes];
        for t in 0..nodes {
            let classes = groups.entry(&keys[t]).or_default();
            let found = classes.iter().find_map(|&c| {
                let r = reps[c];
                let m = objects[t].matches_with(&prints[t], &objects[r], &prints[r]);
                (!m.is_empty()).then_some((c, m))
            });
            match found {
                Some((c, m)) => {
                    class_of[t] = c;
                    to_rep[t] = m;
                }
                None => {
                    let c = reps.len();
                    reps.push(t);
                    classes.push(c);
                    class_of[t] = c;
                    to_rep[t] = objects[t].matches_with(&prints[t], &objects[t], &prints[t]);
                }
            }
        }
        Relation { member, total, class_of, reps, to_rep, objects }
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn rep_of(&self, t: usize) -> usize {
        self.reps[self.class_of[t]]
    }

    /// Number of unordered node pairs (distinct nodes) that match.
    pub fn matching_pairs(&self) -> usize {
        let mut sizes = vec![0usize; self.reps.len()];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes.iter().map(|s| s * s.saturating_sub(1) / 2).sum()
    }
}

/// `None` when `a` and `b` relate exactly the same node pairs under the same
/// permutations, otherwise a witness.
pub fn equivalent(a: &Relation, b: &Relation, store: &NodeStore) -> Option<String> {
    if a.total || b.total {
        return (a.total != b.total).then(|| {
            format!("{} total={} but {} total={}", a.member.label(), a.total, b.member.label(), b.total)
        });
    }
    for t in 0..a.objects.len() {
        let (ra, rb) = (a.rep_of(t), b.rep_of(t));
        if ra != rb || a.to_rep[t] != b.to_rep[t] {
            let word = |i: usize| word_text(&store.nodes[i].word);
            return Some(format!(
                "node {}: {} matches node {} via {:?}, {} matches node {} via {:?}",
                word(t),
                a.member.label(),
                word(ra),
                a.to_rep[t],
                b.member.label(),
                word(rb),
                b.to_rep[t]
            ));
        }
    }
    None
}

/// `None` when every match of `a` is a match of `b` under the same permutation.
pub fn implies(a: &Relation, b: &Relation, store: &NodeStore) -> Option<String> {
    if b.total {
        return None;
    }
    if a.total {
        return Some(format!("{} matches every pair but {} does not", a.member.label(), b.member.label()));
    }
    for t in 0..a.objects.len() {
        let r = a.rep_of(t);
        for sigma in &a.to_rep[t] {
            if !b.objects[t].is_image(&b.objects[r], sigma) {
                return Some(format!(
                    "nodes {} and {} match as {} via {sigma} but not as {}",
                    word_text(&store.nodes[t].word),
                    word_text(&store.nodes[r].word),
                    a.member.label(),
                    b.member.label()
                ));
            }
        }
    }
    None
}

/// `O_start = σ O_end`, where `end` is reached from `start` along `path`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodRecord {
    /// Word of the start node (1-based text).
    pub start: String,
    /// The connecting path (1-based text).
    pub word: String,
    pub sigma: Permutation,
    /// `sigma` in cycle notation.
    pub cycles: String,
    pub kind: String,
    pub length: usize,
}

/// A record together with the data needed to replay it.
#[derive(Clone, Debug)]
pub struct Period {
    pub start: Vec<usize>,
    pub path: Vec<usize>,
    pub sigma: Permutation,
    pub member: Member,
}

impl Period {
    pub fn record(&self) -> PeriodRecord {
        PeriodRecord {
            start: word_text(&self.start),
            word: word_text(&self.path),
            sigma: self.sigma.clone(),
            cycles: self.sigma.to_string(),
            kind: self.member.label(),
            length: self.path.len(),
        }
    }
}

/// All σ-periods of `member` in the store: for every node, the periods that
/// connect the first node of its class to it (including the empty path with
/// each stabilizing σ at that first node). Any other matching pair is the
/// composite of two of these.
pub fn detect_periods(store: &NodeStore, member: Member) -> Vec<Period> {
    let rel = Relation::build(store, member);
    let n = store.n();
    let mut out = Vec::new();
    for t in 0..store.nodes.len() {
        let r = rel.rep_of(t);
        let start = store.nodes[r].word.clone();
        let path = connecting_word(&start, &store.nodes[t].word);
        let sigmas = if rel.total { vec![Permutation::identity(n)] } else { rel.to_rep[t].iter().map(Permutation::inverse).collect() };
        // O_t = τ O_r, so O_r = τ⁻¹ O_t.
        for sigma in sigmas {
            out.push(Period { start: start.clone(), path: path.clone(), sigma, member });
        }
    }
    out.sort_by(|a, b| (&a.start, &a.path, &a.sigma).cmp(&(&b.start, &b.path, &b.sigma)));
    out
}

fn walk(config: &ExploreConfig, word: &[usize]) -> Result<Node, PatternError> {
    let mut node = Node::root_of(config)?;
    for &k in word {
        node = node.child(0, k)?;
    }
    Ok(node)
}

/// Recomputes the object from scratch at the start node and along the path,
/// and checks `O_start = σ O_end`.
pub fn replay(store: &NodeStore, p: &Period) -> Result<bool, PatternError> {
    let config = p.member.trimmed(&store.config);
    let start = walk(&config, &p.start)?;
    let mut end = start.clone();
    for &k in &p.path {
        end = end.child(0, k)?;
    }
    Ok(p.member.extract(&config, &start).is_image(&p.member.extract(&config, &end), &p.sigma))
}

/// Relabeling compatibility at a period: `μ_{σ(k)}` of the start equals `σ`
/// applied to `μ_k` of the end. Outside finite type only directions whose two
/// neighbors lie within the explored depth are tried, since one step past the
/// horizon can cost far more than the whole exploration. `None` when no
/// direction qualifies.
pub fn quotient_compatible(store: &NodeStore, p: &Period) -> Result<Option<bool>, PatternError> {
    let config = p.member.trimmed(&store.config);
    let end_word = reduce_word(&[p.start.clone(), p.path.clone()].concat());
    let within = |w: &[usize], k: usize| {
        store.outcome == Outcome::Closed || w.last() == Some(&k) || w.len() < store.depth
    };
    let dirs: Vec<usize> =
        (0..store.n()).filter(|&k| within(&p.start, p.sigma.apply(k)) && within(&end_word, k)).collect();
    if dirs.is_empty() {
        return Ok(None);
    }
    let start = walk(&config, &p.start)?;
    let end = walk(&config, &end_word)?;
    for k in dirs {
        let a = start.child(0, p.sigma.apply(k))?;
        let b = end.child(0, k)?;
        if !p.member.extract(&config, &a).is_image(&p.member.extract(&config, &b), &p.sigma) {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::{explore, Horizon};
    use crate::seed::ExchangeMatrix;

    fn store(rows: &[Vec<i64>], coeffs: Vec<CoeffKind>, horizon: Horizon) -> NodeStore {
        let mut cfg = ExploreConfig::new(ExchangeMatrix::from_rows(rows).unwrap(), horizon);
        cfg.coeffs = coeffs;
        explore(&cfg).unwrap()
    }

    #[test]
    fn a2_pentagon_period() {
        let s = store(&[vec![0, 1], vec![-1, 0]], vec![CoeffKind::Trivial], Horizon::ClosureCycles);
        let ps = detect_periods(&s, Member::seeded(ObjectKind::X, CoeffKind::Trivial));
        let root: Vec<&Period> = ps.iter().filter(|p| p.start.is_empty() && !p.path.is_empty()).collect();
        let p = root.iter().find(|p| p.path == vec![0, 1, 0, 1, 0]).expect("pentagon period");
        assert_eq!(p.sigma, Permutation::transposition(2, 0, 1));
        assert!(root.iter().all(|p| p.path.len() >= 5));
        assert!(ps.iter().any(|p| p.start.is_empty() && p.path.is_empty() && p.sigma.is_identity()));
        for p in &ps {
            assert!(replay(&s, p).unwrap());
            assert_eq!(quotient_compatible(&s, p).unwrap(), Some(true));
        }
    }

    #[test]
    fn trivial_y_is_total() {
        let s = store(&[vec![0, 1], vec![-1, 0]], vec![CoeffKind::Trivial], Horizon::Depth(2));
        let r = Relation::build(&s, Member::seeded(ObjectKind::Y, CoeffKind::Trivial));
        assert!(r.total);
        let x = Relation::build(&s, Member::seeded(ObjectKind::X, CoeffKind::Trivial));
        assert!(implies(&x, &r, &s).is_none());
        assert!(implies(&r, &x, &s).is_some());
    }

    #[test]
    fn c_g_x_relations_agree() {
        let s = store(&[vec![0, 2], vec![-1, 0]], vec![CoeffKind::Principal], Horizon::Closure);
        let c = Relation::build(&s, Member::primary(ObjectKind::C));
        let g = Relation::build(&s, Member::primary(ObjectKind::G));
        let x = Relation::build(&s, Member::seeded(ObjectKind::X, CoeffKind::Principal));
        let y = Relation::build(&s, Member::seeded(ObjectKind::Y, CoeffKind::Principal));
        assert_eq!(c.class_count(), 6);
        assert!(equivalent(&c, &g, &s).is_none());
        assert!(equivalent(&c, &x, &s).is_none());
        assert!(equivalent(&x, &y, &s).is_none());
    }
}
