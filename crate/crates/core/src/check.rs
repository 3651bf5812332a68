//! Outcomes of identity checks.

use serde::{Deserialize, Serialize};

/// How a failed check should be read.
///
/// `Critical` marks an identity that is a theorem; `Conjecture` marks one that
/// rests on an open conjecture, so a failure is a finding rather than a bug.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Critical,
    Conjecture,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub identity: String,
    pub passed: bool,
    pub severity: Severity,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(identity: &str) -> Self {
        CheckResult { identity: identity.to_string(), passed: true, severity: Severity::Critical, witness: None }
    }

    pub fn fail(identity: &str, witness: impl Into<String>) -> Self {
        CheckResult {
            identity: identity.to_string(),
            passed: false,
            severity: Severity::Critical,
            witness: Some(witness.into()),
        }
    }

    /// Pass when `ok`, otherwise fail with a lazily built witness.
    pub fn expect(identity: &str, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(identity)
        } else {
            Self::fail(identity, witness())
        }
    }

    pub fn conjecture(mut self) -> Self {
        self.severity = Severity::Conjecture;
        self
    }
}
