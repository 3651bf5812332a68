//! Identity suites run over an exploration, collected into a report.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::IntMatrix;
use crate::check::{CheckResult, Severity};
use crate::explore::{explore, word_text, ExploreConfig, FgcState, Horizon, Node, NodeStore, Outcome, SeedState};
use crate::fgc::{
    check_chiral, check_conjugate, check_detrop, check_invariants, check_langlands, check_transposition,
    c_back_along, separation_x, separation_y, Duality,
};
use crate::gca::{
    check_gca_invariants, check_gca_pair, companion_check, degree_one_regression, gca_separation, rb_symmetrizer,
    DegreeR,
};
use crate::graph::{build_exchange_graph, exchange_graph_checks};
use crate::period::{detect_periods, quotient_compatible, replay, Member, ObjectKind, Relation};
use crate::seed::{CoeffKind, ExchangeMatrix, PatternError};
use crate::sync::{synchronicity_report, SyncReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Ca,
    Gca,
    Dualities,
    Conjugate,
    Companions,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Ca => "ca",
            Suite::Gca => "gca",
            Suite::Dualities => "dualities",
            Suite::Conjugate => "conjugate",
            Suite::Companions => "companions",
            Suite::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Suite::Ca, Suite::Gca, Suite::Dualities, Suite::Conjugate, Suite::Companions, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
    }

    fn is_generalized(self) -> bool {
        matches!(self, Suite::Gca | Suite::Companions)
    }
}

/// Expands `all` and removes duplicates.
pub fn expand_suites(suites: &[Suite]) -> Vec<Suite> {
    let mut out: Vec<Suite> = suites
        .iter()
        .flat_map(|&s| match s {
            Suite::All => vec![Suite::Ca, Suite::Gca, Suite::Dualities, Suite::Conjugate, Suite::Companions],
            s => vec![s],
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub b: ExchangeMatrix,
    /// Degree for the generalized suites and `R` for the conjugate pair;
    /// `diag(2, 1, …, 1)` when absent.
    pub r: Option<DegreeR>,
    /// Coefficient choices; every applicable one when absent.
    pub coeffs: Option<Vec<CoeffKind>>,
    pub suites: Vec<Suite>,
    pub horizon: Horizon,
    pub max_nodes: usize,
    pub jobs: usize,
}

pub fn default_r(n: usize) -> DegreeR {
    let mut r = vec![1; n];
    if n > 0 {
        r[0] = 2;
    }
    DegreeR::new(r).expect("positive degrees")
}

/// A failed identity at one node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    /// Word of the node (1-based, empty for the root), or a label for checks
    /// over the whole exploration.
    pub node: String,
    pub identity: String,
    pub status: String,
    pub severity: Severity,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySummary {
    pub identity: String,
    pub severity: Severity,
    pub checked: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub complete: bool,
}

/// Results for one exploration (ordinary or of degree `R`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub suites: Vec<Suite>,
    pub b: IntMatrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<DegreeR>,
    pub coefficients: Vec<CoeffKind>,
    pub nodes: usize,
    pub classes: usize,
    pub depth: usize,
    pub outcome: Outcome,
    pub summary: Vec<IdentitySummary>,
    pub findings: Vec<Finding>,
    pub synchronicity: SyncReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exchange_graph: Option<GraphSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub sections: Vec<Section>,
    pub critical_failures: usize,
    pub conjecture_failures: usize,
    pub truncated: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.critical_failures == 0
    }
}

/// The explorations behind `opts`: one for the ordinary suites and one for
/// the generalized ones, each with the suites it serves.
pub fn section_configs(opts: &VerifyOptions) -> Vec<(ExploreConfig, Vec<Suite>)> {
    let suites = expand_suites(&opts.suites);
    let n = opts.b.n();
    let r = opts.r.clone().unwrap_or_else(|| default_r(n));
    let ordinary: Vec<Suite> = suites.iter().cloned().filter(|s| !s.is_generalized()).collect();
    let generalized: Vec<Suite> = suites.iter().cloned().filter(|s| s.is_generalized()).collect();
    let mut out = Vec::new();
    if !ordinary.is_empty() {
        let mut cfg = ExploreConfig::new(opts.b.clone(), opts.horizon);
        cfg.coeffs = opts.coeffs.clone().unwrap_or_else(|| {
            if ordinary.contains(&Suite::Ca) {
                vec![CoeffKind::Trivial, CoeffKind::Principal, CoeffKind::Universal]
            } else {
                vec![CoeffKind::Trivial]
            }
        });
        if ordinary.contains(&Suite::Dualities) {
            cfg.duals = Duality::ALL.to_vec();
        }
        if ordinary.contains(&Suite::Conjugate) {
            cfg.conjugate = Some(r.as_bigints());
        }
        cfg.max_nodes = opts.max_nodes;
        cfg.jobs = opts.jobs;
        out.push((cfg, ordinary));
    }
    if !generalized.is_empty() {
        let mut cfg = ExploreConfig::new(opts.b.clone(), opts.horizon);
        cfg.r = Some(r);
        cfg.coeffs = opts.coeffs.clone().unwrap_or_else(|| {
            if generalized.contains(&Suite::Gca) {
                CoeffKind::ALL.to_vec()
            } else {
                vec![CoeffKind::Trivial]
            }
        });
        cfg.companions = generalized.contains(&Suite::Companions);
        cfg.max_nodes = opts.max_nodes;
        cfg.jobs = opts.jobs;
        out.push((cfg, generalized));
    }
    out
}

/// Runs the selected suites.
pub fn verify(opts: &VerifyOptions) -> Result<VerifyReport, PatternError> {
    let sections = section_configs(opts)
        .iter()
        .map(|(cfg, suites)| run_section(cfg, suites))
        .collect::<Result<Vec<_>, _>>()?;
    let count = |sev: Severity| -> usize {
        sections
            .iter()
            .map(|s| {
                s.findings.iter().filter(|f| f.severity == sev).count()
                    + s.synchronicity.claims.iter().filter(|c| !c.passed && c.severity == sev).count()
            })
            .sum()
    };
    Ok(VerifyReport {
        critical_failures: count(Severity::Critical),
        conjecture_failures: count(Severity::Conjecture),
        truncated: sections.iter().any(|s| s.outcome == Outcome::Truncated),
        sections,
    })
}

/// Explores once and runs `suites` on the result.
pub fn run_section(cfg: &ExploreConfig, suites: &[Suite]) -> Result<Section, PatternError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| PatternError::Dimension(format!("thread pool: {e}")))?;
    let store = explore(cfg)?;
    pool.install(|| section(&store, suites))
}

fn section(store: &NodeStore, suites: &[Suite]) -> Result<Section, PatternError> {
    let cfg = &store.config;
    let roots = Node::root_of(cfg)?;
    let g_rel = cfg.r.as_ref().map(|_| Relation::build(store, Member::primary(ObjectKind::G)));
    let per_node: Vec<Vec<CheckResult>> = (0..store.nodes.len())
        .into_par_iter()
        .map(|t| node_checks(store, &roots, t, suites, g_rel.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut labeled: Vec<(String, CheckResult)> = Vec::new();
    for (t, checks) in per_node.into_iter().enumerate() {
        let w = word_text(&store.nodes[t].word);
        labeled.extend(checks.into_iter().map(|c| (w.clone(), c)));
    }
    labeled.extend(period_checks(store)?.into_iter());
    let mut exchange_graph = None;
    if suites.contains(&Suite::Ca) {
        let graph = build_exchange_graph(store);
        labeled.extend(exchange_graph_checks(store, &graph).into_iter().map(|c| ("graph".to_string(), c)));
        exchange_graph =
            Some(GraphSummary { vertices: graph.vertex_count(), edges: graph.edge_count(), complete: graph.complete });
    }
    let synchronicity = synchronicity_report(store);
    let mut summary: BTreeMap<String, IdentitySummary> = BTreeMap::new();
    let mut findings = Vec::new();
    for (node, c) in labeled {
        let e = summary.entry(c.identity.clone()).or_insert(IdentitySummary {
            identity: c.identity.clone(),
            severity: c.severity,
            checked: 0,
            failed: 0,
        });
        e.checked += 1;
        if !c.passed {
            e.failed += 1;
            findings.push(Finding {
                node,
                identity: c.identity,
                status: "fail".to_string(),
                severity: c.severity,
                witness: c.witness,
            });
        }
    }
    findings.sort_by(|a, b| (&a.node, &a.identity, &a.witness).cmp(&(&b.node, &b.identity, &b.witness)));
    Ok(Section {
        suites: suites.to_vec(),
        b: cfg.b.b().clone(),
        r: cfg.r.clone(),
        coefficients: cfg.coeffs.clone(),
        nodes: store.nodes.len(),
        classes: store.class_count(),
        depth: store.depth,
        outcome: store.outcome,
        summary: summary.into_values().collect(),
        findings,
        synchronicity,
        exchange_graph,
    })
}

fn error_check(identity: &str, e: impl std::fmt::Display) -> CheckResult {
    CheckResult::fail(identity, format!("error: {e}"))
}

fn node_checks(
    store: &NodeStore,
    roots: &Node,
    t: usize,
    suites: &[Suite],
    g_rel: Option<&Relation>,
) -> Result<Vec<CheckResult>, PatternError> {
    let cfg = &store.config;
    let node = &store.nodes[t];
    let parent = node.parent.map(|p| &store.nodes[p]);
    let mut out = Vec::new();
    if let Some(p) = parent {
        let k = node.last().expect("non-root");
        let fgc_ok = node.fgc.mutate(k)? == p.fgc;
        let seeds_ok = node.seeds.iter().zip(&p.seeds).all(|(a, b)| a.mutate(k).map(|m| &m == b).unwrap_or(false));
        out.push(CheckResult::expect("involution", fgc_ok && seeds_ok, || {
            format!("mutating back along {} does not return to the parent", k + 1)
        }));
    }
    match (&node.fgc, &cfg.r) {
        (FgcState::Ordinary(g), None) => {
            if suites.contains(&Suite::Ca) {
                out.extend(check_invariants(g, cfg.b.d()));
                out.push(check_detrop(g));
                for (s, s0) in node.seeds.iter().zip(&roots.seeds) {
                    let (SeedState::Ordinary(s), SeedState::Ordinary(s0)) = (s, s0) else { continue };
                    let c = s.semifield.name();
                    let xid = format!("separation-x[{c}]");
                    out.push(match separation_x(g, s0) {
                        Ok(xs) => CheckResult::expect(&xid, xs == s.x, || {
                            let names = s.names();
                            format!("direct x1={} separated x1={}", s.x[0].to_text(&names), xs[0].to_text(&names))
                        }),
                        Err(e) => error_check(&xid, e),
                    });
                    let yid = format!("separation-y[{c}]");
                    out.push(match separation_y(g, s0) {
                        Ok(ys) => CheckResult::expect(&yid, ys == s.y, || format!("direct y={:?} separated y={ys:?}", s.y)),
                        Err(e) => error_check(&yid, e),
                    });
                }
            }
            if suites.contains(&Suite::Dualities) {
                for (&d, dual) in cfg.duals.iter().zip(&node.duals) {
                    out.push(match d {
                        Duality::Transposition => check_transposition(&c_back_along(&g.bt, &node.word)?, &dual.g),
                        Duality::Chiral => check_chiral(g, dual),
                        Duality::Langlands => check_langlands(&g.gc(), &dual.gc()),
                    });
                }
            }
            if suites.contains(&Suite::Conjugate) {
                if let (Some((l, r)), Some(rv)) = (&node.conjugate, &cfg.conjugate) {
                    out.push(check_conjugate(l, r, rv));
                }
            }
        }
        (FgcState::Generalized(g), Some(r)) => {
            if suites.contains(&Suite::Gca) {
                out.extend(check_gca_invariants(g, &rb_symmetrizer(cfg.b.b(), r)?));
                for (s, s0) in node.seeds.iter().zip(&roots.seeds) {
                    let (SeedState::Generalized(s), SeedState::Generalized(s0)) = (s, s0) else { continue };
                    let id = format!("gca-separation[{}]", s.semifield.name());
                    out.push(match gca_separation(g, s0) {
                        Ok((xs, ys)) => CheckResult::expect(&id, xs == s.x && ys == s.y, || {
                            format!("x match={} y match={}", xs == s.x, ys == s.y)
                        }),
                        Err(e) => error_check(&id, e),
                    });
                }
                if let Some(rel) = g_rel {
                    let rep = rel.rep_of(t);
                    if rep != t {
                        // G_t = τ G_rep, so G_rep = τ⁻¹ G_t.
                        let FgcState::Generalized(g1) = &store.nodes[rep].fgc else { unreachable!() };
                        for tau in &rel.to_rep[t] {
                            out.extend(check_gca_pair(g1, g, &tau.inverse(), &store.nodes[rep].word, &node.word));
                        }
                    }
                }
                if node.depth() == store.depth {
                    for &c in &cfg.coeffs {
                        let ok = degree_one_regression(&cfg.b, c, &node.word)?;
                        out.push(CheckResult::expect(&format!("degree-one-regression[{}]", c.name()), ok, || {
                            "R = I disagrees with the ordinary pattern".to_string()
                        }));
                    }
                }
            }
            if suites.contains(&Suite::Companions) {
                if let Some((l, rr)) = &node.companions {
                    out.extend(companion_check(g, l, rr));
                }
            }
        }
        _ => unreachable!("pattern kind matches the configuration"),
    }
    Ok(out)
}

/// Replays every period of the seeds of the first coefficient choice and spot-checks
/// that relabeling commutes with mutation there.
fn period_checks(store: &NodeStore) -> Result<Vec<(String, CheckResult)>, PatternError> {
    let cfg = &store.config;
    let coeff = if cfg.coeffs.contains(&CoeffKind::Trivial) { CoeffKind::Trivial } else { cfg.coeffs[0] };
    let member = Member::seeded(ObjectKind::Seed, coeff);
    let periods = detect_periods(store, member);
    let results: Vec<Result<(String, Vec<CheckResult>), PatternError>> = periods
        .par_iter()
        .filter(|p| !p.path.is_empty())
        .map(|p| {
            let w = word_text(&p.start);
            let rec = p.record();
            let ok = replay(store, p)?;
            let mut checks =
                vec![CheckResult::expect("period-replay", ok, || format!("path {} sigma {}", rec.word, rec.sigma))];
            if let Some(q) = quotient_compatible(store, p)? {
                checks.push(CheckResult::expect("quotient-compatibility", q, || {
                    format!("path {} sigma {}", rec.word, rec.sigma)
                }));
            }
            Ok((w, checks))
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        let (w, cs) = r?;
        out.extend(cs.into_iter().map(|c| (w.clone(), c)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(rows: &[Vec<i64>], suites: Vec<Suite>, horizon: Horizon) -> VerifyOptions {
        VerifyOptions {
            b: ExchangeMatrix::from_rows(rows).unwrap(),
            r: None,
            coeffs: None,
            suites,
            horizon,
            max_nodes: 100_000,
            jobs: 0,
        }
    }

    #[test]
    fn a2_all_suites_pass() {
        let rep = verify(&opts(&[vec![0, 1], vec![-1, 0]], vec![Suite::All], Horizon::Closure)).unwrap();
        assert!(rep.passed(), "{}", serde_json::to_string_pretty(&rep).unwrap());
        assert_eq!(rep.conjecture_failures, 0);
        assert_eq!(rep.sections.len(), 2);
        assert_eq!(rep.sections[0].exchange_graph.as_ref().unwrap().vertices, 5);
    }
}
