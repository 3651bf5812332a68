//! Batch commands over parsed inputs, producing JSON reports and exit codes.
//!
//! Matrices are row-major JSON, directions and permutations are 1-based in
//! every input and report.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::IntMatrix;
use crate::check::CheckResult;
use crate::explore::{explore, word_text, ExploreConfig, FgcState, Horizon, Node, Outcome, SeedState};
use crate::gca::DegreeR;
use crate::graph::{build_exchange_graph, exchange_graph_checks, ExchangeGraph};
use crate::period::{detect_periods, replay, Member, ObjectKind, PeriodRecord};
use crate::seed::{CoeffKind, ExchangeMatrix, PatternError};
use crate::sync::{synchronicity_report, SyncReport};
use crate::verify::{expand_suites, section_configs, verify, Suite, VerifyOptions, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Cap on stored nodes when neither a flag nor the environment sets one.
pub const DEFAULT_MAX_NODES: usize = 100_000;

#[derive(Debug, Error)]
pub enum RunError {
    /// Bad input: exit code 2.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

impl RunError {
    /// Inputs are validated before any work starts, so every error is a usage error.
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Mutate,
    Trace,
    PeriodSearch,
    ExchangeGraph,
    Verify,
    Synchronicity,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub b: ExchangeMatrix,
    pub r: Option<DegreeR>,
    /// Empty means the command's default choice.
    pub coeffs: Vec<CoeffKind>,
    /// Object whose periods `period-search` reports; `x` by default.
    pub object: Option<ObjectKind>,
    /// 0-based reduced word.
    pub word: Vec<usize>,
    pub horizon: Horizon,
    pub suites: Vec<Suite>,
    pub max_nodes: usize,
    pub jobs: usize,
    /// Export the labeled exchange graph instead of the unlabeled one.
    pub labeled: bool,
}

impl RunConfig {
    pub fn new(command: Command, b: ExchangeMatrix) -> Self {
        RunConfig {
            command,
            b,
            r: None,
            coeffs: Vec::new(),
            object: None,
            word: Vec::new(),
            horizon: Horizon::Depth(4),
            suites: vec![Suite::All],
            max_nodes: DEFAULT_MAX_NODES,
            jobs: 0,
            labeled: false,
        }
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }
}

/// Parses a row-major JSON matrix and checks that it is skew-symmetrizable.
pub fn parse_matrix(text: &str) -> Result<ExchangeMatrix, RunError> {
    let m: IntMatrix = serde_json::from_str(text).map_err(|e| usage(format!("cannot read matrix {text:?}: {e}")))?;
    if m.n() == 0 {
        return Err(usage("the exchange matrix is empty"));
    }
    ExchangeMatrix::new(m).map_err(|e| usage(e.to_string()))
}

/// Parses `R` as a JSON list of positive integers, e.g. `[2,1]`.
pub fn parse_r(text: &str, n: usize) -> Result<DegreeR, RunError> {
    let v: Vec<usize> = serde_json::from_str(text).map_err(|e| usage(format!("cannot read R {text:?}: {e}")))?;
    if v.len() != n {
        return Err(usage(format!("R has {} entries, B is {n}x{n}", v.len())));
    }
    DegreeR::new(v).map_err(|e| usage(e.to_string()))
}

/// Parses a 1-based word: `121`, `1,2,1`, `1 2 1` or `[1,2,1]`. Without
/// separators each digit is a direction when `n < 10`. The result is 0-based
/// and must be reduced.
pub fn parse_word(text: &str, n: usize) -> Result<Vec<usize>, RunError> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']').trim();
    let tokens: Vec<&str> = if t.contains([',', ' ']) {
        t.split([',', ' ']).filter(|s| !s.is_empty()).collect()
    } else if n < 10 {
        t.split("").filter(|s| !s.is_empty()).collect()
    } else if t.is_empty() {
        Vec::new()
    } else {
        vec![t]
    };
    let mut word = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let k: usize = tok.parse().map_err(|_| usage(format!("word {text:?}: {tok:?} is not a direction")))?;
        if k == 0 || k > n {
            return Err(usage(format!("word {text:?}: direction {k} out of range 1..={n}")));
        }
        word.push(k - 1);
    }
    if let Some(i) = (1..word.len()).find(|&i| word[i] == word[i - 1]) {
        let reduced = reduce_word(&word);
        let shown = if reduced.is_empty() { "the empty word".to_string() } else { word_text(&reduced) };
        return Err(usage(format!(
            "word {text:?} is not reduced: direction {} repeats at position {}; mutation is an involution, \
             so the word normalizes to {shown}",
            word[i] + 1,
            i + 1
        )));
    }
    Ok(word)
}

/// Cancels adjacent repeated directions.
pub fn reduce_word(word: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(word.len());
    for &k in word {
        if out.last() == Some(&k) {
            out.pop();
        } else {
            out.push(k);
        }
    }
    out
}

/// A seed written out as text in the initial variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedView {
    pub coefficients: CoeffKind,
    pub variables: Vec<String>,
    pub x: Vec<String>,
    pub y: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z: Option<Vec<Vec<String>>>,
    pub b: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgcView {
    pub variables: Vec<String>,
    pub f: Vec<String>,
    pub g: IntMatrix,
    pub c: IntMatrix,
    pub b: IntMatrix,
}

/// Everything at one node of the tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeView {
    pub word: String,
    pub seeds: Vec<SeedView>,
    pub fgc: FgcView,
}

fn seed_view(coeff: CoeffKind, s: &SeedState) -> SeedView {
    let names = s.names();
    let n = s.x().len();
    let gens = &names[n..];
    SeedView {
        coefficients: coeff,
        x: s.x().iter().map(|v| v.to_text(&names)).collect(),
        y: s.y().iter().map(|v| v.to_text(gens)).collect(),
        z: s.z().map(|z| z.iter().map(|zi| zi.iter().map(|v| v.to_text(gens)).collect()).collect()),
        b: s.b().clone(),
        variables: names,
    }
}

fn fgc_view(f: &FgcState) -> FgcView {
    let names = match f {
        FgcState::Ordinary(s) => crate::arith::indexed_names("u", s.n()),
        FgcState::Generalized(s) => s.names(),
    };
    FgcView {
        f: f.f().iter().map(|p| p.to_text(&names)).collect(),
        g: f.g().clone(),
        c: f.c().clone(),
        b: f.bt().clone(),
        variables: names,
    }
}

fn node_view(config: &ExploreConfig, node: &Node) -> NodeView {
    NodeView {
        word: word_text(&node.word),
        seeds: config.coeffs.iter().zip(&node.seeds).map(|(&c, s)| seed_view(c, s)).collect(),
        fgc: fgc_view(&node.fgc),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutateReport {
    pub b: IntMatrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<DegreeR>,
    pub node: NodeView,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub b: IntMatrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<DegreeR>,
    /// The root and every prefix of the word.
    pub steps: Vec<NodeView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub b: IntMatrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<DegreeR>,
    pub object: String,
    pub nodes: usize,
    pub depth: usize,
    pub outcome: Outcome,
    pub periods: Vec<PeriodRecord>,
    /// Records whose replay from scratch failed; always empty unless something is broken.
    pub replay_failures: Vec<PeriodRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    pub b: IntMatrix,
    pub nodes: usize,
    pub depth: usize,
    pub outcome: Outcome,
    pub graph: ExchangeGraph,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncSection {
    pub suites: Vec<Suite>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<DegreeR>,
    pub coefficients: Vec<CoeffKind>,
    pub report: SyncReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynchronicityReport {
    pub b: IntMatrix,
    pub sections: Vec<SyncSection>,
}

/// The JSON artifact of one command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Mutate(MutateReport),
    Trace(TraceReport),
    PeriodSearch(PeriodReport),
    ExchangeGraph(GraphReport),
    Verify(VerifyReport),
    Synchronicity(SynchronicityReport),
}

impl Report {
    /// 1 for a CRITICAL failure, otherwise 3 when the node cap cut the run short.
    pub fn exit_code(&self) -> i32 {
        let (critical, truncated) = match self {
            Report::Mutate(_) | Report::Trace(_) => (false, false),
            Report::PeriodSearch(p) => (!p.replay_failures.is_empty(), p.outcome == Outcome::Truncated),
            Report::ExchangeGraph(g) => (g.checks.iter().any(|c| !c.passed), g.outcome == Outcome::Truncated),
            Report::Verify(v) => (!v.passed(), v.truncated),
            Report::Synchronicity(s) => (
                s.sections.iter().any(|x| x.report.critical_failures() > 0),
                s.sections.iter().any(|x| x.report.outcome == Outcome::Truncated),
            ),
        };
        if critical {
            EXIT_CRITICAL
        } else if truncated {
            EXIT_CAP
        } else {
            EXIT_OK
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// The report and, for `exchange-graph`, the DOT text.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Report,
    pub dot: Option<String>,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code()
    }
}

fn base_config(cfg: &RunConfig, coeffs: Vec<CoeffKind>) -> Result<ExploreConfig, RunError> {
    if let Some(r) = &cfg.r {
        if r.n() != cfg.n() {
            return Err(usage(format!("R has {} entries, B is {n}x{n}", r.n(), n = cfg.n())));
        }
    }
    let mut e = ExploreConfig::new(cfg.b.clone(), cfg.horizon);
    e.r = cfg.r.clone();
    e.coeffs = coeffs;
    e.max_nodes = cfg.max_nodes;
    e.jobs = cfg.jobs;
    Ok(e)
}

fn walk_views(cfg: &RunConfig) -> Result<Vec<NodeView>, RunError> {
    if cfg.word.len() + 1 > cfg.max_nodes {
        return Err(usage(format!("word of length {} exceeds the node cap {}", cfg.word.len(), cfg.max_nodes)));
    }
    let coeffs = if cfg.coeffs.is_empty() { vec![CoeffKind::Trivial] } else { cfg.coeffs.clone() };
    let e = base_config(cfg, coeffs)?;
    let mut node = Node::root_of(&e)?;
    let mut views = vec![node_view(&e, &node)];
    for &k in &cfg.word {
        node = node.child(0, k)?;
        views.push(node_view(&e, &node));
    }
    Ok(views)
}

/// Runs one command.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    if let Some(&k) = cfg.word.iter().find(|&&k| k >= cfg.n()) {
        return Err(usage(format!("direction {} out of range 1..={}", k + 1, cfg.n())));
    }
    if reduce_word(&cfg.word).len() != cfg.word.len() {
        return Err(usage("the word is not reduced"));
    }
    let b = cfg.b.b().clone();
    let r = cfg.r.clone();
    let report = match cfg.command {
        Command::Mutate => {
            let node = walk_views(cfg)?.pop().expect("the root is always present");
            Report::Mutate(MutateReport { b, r, node })
        }
        Command::Trace => Report::Trace(TraceReport { b, r, steps: walk_views(cfg)? }),
        Command::PeriodSearch => {
            let coeff = cfg.coeffs.first().copied().unwrap_or(CoeffKind::Trivial);
            let kind = cfg.object.unwrap_or(ObjectKind::X);
            let member = if kind.uses_coefficients() { Member::seeded(kind, coeff) } else { Member::primary(kind) };
            let mut e = base_config(cfg, vec![coeff])?;
            if e.horizon == Horizon::Closure {
                e.horizon = Horizon::ClosureCycles;
            }
            let store = explore(&e)?;
            let periods = detect_periods(&store, member);
            let mut replay_failures = Vec::new();
            for p in &periods {
                if !replay(&store, p)? {
                    replay_failures.push(p.record());
                }
            }
            Report::PeriodSearch(PeriodReport {
                b,
                r,
                object: member.label(),
                nodes: store.nodes.len(),
                depth: store.depth,
                outcome: store.outcome,
                periods: periods.iter().map(|p| p.record()).collect(),
                replay_failures,
            })
        }
        Command::ExchangeGraph => {
            let coeffs = if cfg.coeffs.is_empty() {
                vec![CoeffKind::Trivial, CoeffKind::Principal]
            } else {
                cfg.coeffs.clone()
            };
            let store = explore(&base_config(cfg, coeffs)?)?;
            let graph = build_exchange_graph(&store);
            let checks = exchange_graph_checks(&store, &graph);
            let dot = if cfg.labeled { graph.to_labeled_dot() } else { graph.to_dot() };
            return Ok(RunOutput {
                report: Report::ExchangeGraph(GraphReport {
                    b,
                    nodes: store.nodes.len(),
                    depth: store.depth,
                    outcome: store.outcome,
                    graph,
                    checks,
                }),
                dot: Some(dot),
            });
        }
        Command::Verify => Report::Verify(verify(&verify_options(cfg))?),
        Command::Synchronicity => {
            let mut sections = Vec::new();
            for (e, suites) in section_configs(&verify_options(cfg)) {
                let store = explore(&e)?;
                sections.push(SyncSection {
                    suites,
                    r: e.r.clone(),
                    coefficients: e.coeffs.clone(),
                    report: synchronicity_report(&store),
                });
            }
            Report::Synchronicity(SynchronicityReport { b, sections })
        }
    };
    Ok(RunOutput { report, dot: None })
}

fn verify_options(cfg: &RunConfig) -> VerifyOptions {
    VerifyOptions {
        b: cfg.b.clone(),
        r: cfg.r.clone(),
        coeffs: if cfg.coeffs.is_empty() { None } else { Some(cfg.coeffs.clone()) },
        suites: expand_suites(&cfg.suites),
        horizon: cfg.horizon,
        max_nodes: cfg.max_nodes,
        jobs: cfg.jobs,
    }
}
