//! JSON report emitted by every command.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use totalpos::lcp::{LcpSolutionSet, SolvabilityStatus};
use totalpos::{Class, Rational, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Class>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Set when a `true` verdict proves the property but `false` proves nothing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub input_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lcp: Option<LcpReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated: Option<Generated>,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, method: &str, input: &[u8]) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            method: method.to_string(),
            class: None,
            k: None,
            label: None,
            input_digest: digest(input),
            verdict: None,
            lcp: None,
            comparison: None,
            generated: None,
            timing: Timing::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// `sha256:` followed by the hex digest.
pub fn digest(input: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(input)))
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcpReport {
    pub status: SolvabilityStatus,
    /// Solutions that are alone on their complementary support. Such a point
    /// may also be a vertex of a family.
    pub solutions: Vec<Vec<String>>,
    /// 1-based complementary supports carrying infinitely many solutions.
    pub infinite_supports: Vec<Vec<usize>>,
    pub families: Vec<FamilyReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub support: Vec<usize>,
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
}

impl LcpReport {
    pub fn from_set(set: &LcpSolutionSet) -> Self {
        LcpReport {
            status: set.status(),
            solutions: set.points.iter().map(|p| strings(&p.x)).collect(),
            infinite_supports: set
                .infinite_supports()
                .iter()
                .map(|s| one_based(s))
                .collect(),
            families: set
                .families
                .iter()
                .map(|f| FamilyReport {
                    support: one_based(&f.support),
                    vertices: f.vertices.iter().map(|v| strings(v)).collect(),
                    rays: f.rays.iter().map(|v| strings(v)).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: String,
    pub class: Class,
    pub k: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub agreement: bool,
    pub results: Vec<MethodResult>,
    /// Human-readable description of each disagreement.
    pub disagreements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generated {
    pub kind: String,
    pub n: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub matrix: Vec<Vec<String>>,
    /// What was verified exactly before the matrix was written.
    pub verified: String,
}
