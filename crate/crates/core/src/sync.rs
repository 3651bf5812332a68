//! Synchronicity: comparing the periods of different objects that share a
//! B-pattern, over every pair of explored nodes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::Permutation;
use crate::check::Severity;
use crate::explore::{word_text, NodeStore, Outcome};
use crate::fgc::{conjugate_pair, Duality};
use crate::period::{equivalent, implies, Member, ObjectKind, Relation, Source};
use crate::seed::{skew_symmetrizer, CoeffKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    /// Both objects match on the same node pairs under the same permutations.
    Equivalent,
    /// Every match of the first object is a match of the second.
    Implies,
    /// Every permutation found satisfies a property.
    Property,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub claim: String,
    pub kind: ClaimKind,
    pub severity: Severity,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberSummary {
    pub member: String,
    pub classes: usize,
    /// Unordered pairs of distinct nodes whose objects match.
    pub matching_pairs: usize,
    /// Every pair matches under every permutation (constant objects).
    pub total: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncReport {
    pub nodes: usize,
    pub depth: usize,
    pub outcome: Outcome,
    pub members: Vec<MemberSummary>,
    pub claims: Vec<Claim>,
}

impl SyncReport {
    pub fn critical_failures(&self) -> usize {
        self.claims.iter().filter(|c| !c.passed && c.severity == Severity::Critical).count()
    }
}

struct Relations<'a> {
    store: &'a NodeStore,
    cache: BTreeMap<Member, Relation>,
    claims: Vec<Claim>,
}

impl<'a> Relations<'a> {
    fn get(&mut self, m: Member) -> &Relation {
        let store = self.store;
        self.cache.entry(m).or_insert_with(|| Relation::build(store, m))
    }

    fn ensure(&mut self, ms: &[Member]) {
        for &m in ms {
            self.get(m);
        }
    }

    fn push(&mut self, claim: String, kind: ClaimKind, severity: Severity, witness: Option<String>) {
        self.claims.push(Claim { claim, kind, severity, passed: witness.is_none(), witness });
    }

    fn equivalent(&mut self, a: Member, b: Member, severity: Severity) {
        self.ensure(&[a, b]);
        let w = equivalent(&self.cache[&a], &self.cache[&b], self.store);
        self.push(format!("{} <=> {}", a.label(), b.label()), ClaimKind::Equivalent, severity, w);
    }

    fn implies(&mut self, a: Member, b: Member, severity: Severity) {
        self.ensure(&[a, b]);
        let w = implies(&self.cache[&a], &self.cache[&b], self.store);
        self.push(format!("{} => {}", a.label(), b.label()), ClaimKind::Implies, severity, w);
    }

    /// Every permutation relating two nodes under `m` satisfies `ok`.
    fn property(&mut self, name: &str, m: Member, ok: impl Fn(&Permutation) -> bool) {
        let store = self.store;
        let rel = self.get(m);
        let w = if rel.total {
            None
        } else {
            (0..rel.objects.len()).find_map(|t| {
                rel.to_rep[t].iter().find(|s| !ok(s)).map(|s| {
                    format!(
                        "nodes {} and {} match as {} via {s}",
                        word_text(&store.nodes[t].word),
                        word_text(&store.nodes[rel.rep_of(t)].word),
                        m.label()
                    )
                })
            })
        };
        self.push(format!("{name} ({})", m.label()), ClaimKind::Property, Severity::Critical, w);
    }
}

fn d_compatible(d: &[BigInt], sigma: &Permutation) -> bool {
    (0..d.len()).all(|i| d[sigma.apply(i)] == d[i])
}

/// Compares the periods of every object the store carries.
///
/// Ordinary patterns: `C`, `G`, `x` and seeds synchronize for every coefficient
/// choice, `x` forces `y`, and for coefficients covering the principal pattern
/// `y` forces everything. `C` forces the F-polynomials and `B`, every
/// permutation found is compatible with `D`, and dual and conjugate patterns
/// have the periods of the original.
///
/// Generalized patterns: `G` and `C` synchronize and force the seeds,
/// permutations are strongly compatible with `R`, and the companions share the
/// periods. `x` forcing `G` rests on the positivity conjecture unless the
/// coefficients cover the principal pattern; `y` forcing `G` holds whenever
/// they cover the Y-principal pattern.
pub fn synchronicity_report(store: &NodeStore) -> SyncReport {
    let mut rel = Relations { store, cache: BTreeMap::new(), claims: Vec::new() };
    let config = &store.config;
    let c = Member::primary(ObjectKind::C);
    let g = Member::primary(ObjectKind::G);
    let f = Member::primary(ObjectKind::F);
    let d = config.b.d().to_vec();
    match &config.r {
        None => {
            rel.equivalent(c, g, Severity::Critical);
            for &k in &config.coeffs {
                let x = Member::seeded(ObjectKind::X, k);
                let y = Member::seeded(ObjectKind::Y, k);
                rel.equivalent(c, x, Severity::Critical);
                rel.implies(x, y, Severity::Critical);
                rel.equivalent(x, Member::seeded(ObjectKind::Seed, k), Severity::Critical);
                if matches!(k, CoeffKind::Principal | CoeffKind::Universal | CoeffKind::YPrincipal) {
                    rel.implies(y, x, Severity::Critical);
                    rel.equivalent(x, Member::seeded(ObjectKind::Yseed, k), Severity::Critical);
                }
            }
            rel.implies(c, f, Severity::Critical);
            rel.property("compatible with D", c, |s| d_compatible(&d, s));
            for &dual in &config.duals {
                let cd = Member::from(ObjectKind::C, Source::Dual(dual));
                rel.equivalent(c, cd, Severity::Critical);
                rel.equivalent(cd, Member::from(ObjectKind::G, Source::Dual(dual)), Severity::Critical);
                if dual == Duality::Chiral {
                    rel.implies(c, Member::from(ObjectKind::F, Source::Dual(dual)), Severity::Critical);
                }
            }
            if let Some(r) = &config.conjugate {
                let left = Member::from(ObjectKind::C, Source::ConjugateLeft);
                let right = Member::from(ObjectKind::C, Source::ConjugateRight);
                rel.equivalent(left, right, Severity::Critical);
                rel.equivalent(
                    Member::from(ObjectKind::G, Source::ConjugateLeft),
                    Member::from(ObjectKind::G, Source::ConjugateRight),
                    Severity::Critical,
                );
                rel.property("compatible with R", left, |s| d_compatible(r, s));
                let (rb, _) = conjugate_pair(config.b.b(), r);
                if let Ok(d_rb) = skew_symmetrizer(&rb) {
                    rel.property("compatible with D", left, |s| d_compatible(&d_rb, s));
                }
            }
        }
        Some(r) => {
            rel.equivalent(g, c, Severity::Critical);
            for &k in &config.coeffs {
                let x = Member::seeded(ObjectKind::X, k);
                let y = Member::seeded(ObjectKind::Y, k);
                rel.implies(g, Member::seeded(ObjectKind::Seed, k), Severity::Critical);
                let covers_principal =
                    k == CoeffKind::Principal || (k == CoeffKind::Universal && config.z_values.is_none());
                let sev = if covers_principal { Severity::Critical } else { Severity::Conjecture };
                rel.implies(x, g, sev);
                if k != CoeffKind::Trivial {
                    rel.implies(y, g, Severity::Critical);
                }
            }
            rel.implies(g, f, Severity::Critical);
            let r = r.clone();
            rel.property("strongly compatible with R", g, |s| r.strongly_compatible(s));
            rel.property("compatible with D", g, |s| d_compatible(&d, s));
            if config.companions {
                let lc = Member::from(ObjectKind::C, Source::CompanionLeft);
                let rc = Member::from(ObjectKind::C, Source::CompanionRight);
                rel.equivalent(g, lc, Severity::Critical);
                rel.equivalent(g, rc, Severity::Critical);
                rel.equivalent(Member::from(ObjectKind::G, Source::CompanionLeft), lc, Severity::Critical);
                rel.equivalent(Member::from(ObjectKind::G, Source::CompanionRight), rc, Severity::Critical);
            }
        }
    }
    let members = rel
        .cache
        .values()
        .map(|r| MemberSummary {
            member: r.member.label(),
            classes: r.class_count(),
            matching_pairs: if r.total { store.nodes.len() * (store.nodes.len() - 1) / 2 } else { r.matching_pairs() },
            total: r.total,
        })
        .collect();
    SyncReport { nodes: store.nodes.len(), depth: store.depth, outcome: store.outcome, members, claims: rel.claims }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::{explore, ExploreConfig, Horizon};
    use crate::gca::DegreeR;
    use crate::seed::ExchangeMatrix;

    #[test]
    fn a2_all_members_agree() {
        let mut cfg = ExploreConfig::new(ExchangeMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap(), Horizon::Closure);
        cfg.coeffs = vec![CoeffKind::Trivial, CoeffKind::Principal, CoeffKind::Universal];
        cfg.duals = Duality::ALL.to_vec();
        cfg.conjugate = Some(vec![BigInt::from(2), BigInt::from(1)]);
        let s = explore(&cfg).unwrap();
        let rep = synchronicity_report(&s);
        assert!(rep.claims.iter().all(|c| c.passed), "{:?}", rep.claims.iter().find(|c| !c.passed));
        let y_trivial = rep.members.iter().find(|m| m.member == "y[trivial]").unwrap();
        assert!(y_trivial.total);
    }

    #[test]
    fn gca_matches_companions() {
        let mut cfg = ExploreConfig::new(ExchangeMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap(), Horizon::Closure);
        cfg.r = Some(DegreeR::new(vec![2, 1]).unwrap());
        cfg.coeffs = CoeffKind::ALL.to_vec();
        cfg.companions = true;
        let s = explore(&cfg).unwrap();
        let rep = synchronicity_report(&s);
        assert!(rep.claims.iter().all(|c| c.passed), "{:?}", rep.claims.iter().find(|c| !c.passed));
    }
}
