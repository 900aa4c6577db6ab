//! JSON certificates for stages and the master certificate chaining them.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// A mismatch makes the stage fail.
    Required,
    /// A mismatch is recorded but does not affect the verdict.
    Warning,
    /// Reported quantity without an independent expectation.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: Value,
    pub expected: Value,
    pub citation: String,
    pub matched: bool,
    pub severity: Severity,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub nodes: u64,
    pub candidates: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub count: u64,
    /// Configurations in the text format of `NMSet::to_text`.
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub value: u64,
    pub citation: String,
}

/// A printed configuration mapped onto a class representative by `transform`
/// (images of the unit vectors, as hex columns).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equivalence {
    pub printed: String,
    pub witness_index: usize,
    pub witness: String,
    pub transform: Vec<String>,
}

/// Independent re-search of a seeded random selection of subtrees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub rate: f64,
    pub seed: u64,
    pub subtrees_total: u64,
    pub subtrees: Vec<u64>,
    pub nodes: u64,
    /// Solutions found by the independent route in the sampled subtrees.
    pub found: u64,
    /// Solutions found by the main route in the same subtrees.
    pub expected_found: u64,
    /// Configurations the re-search needs besides the fixtures: known class
    /// representatives, or the sampled systems themselves.
    #[serde(default)]
    pub reference: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub stage_id: String,
    pub description: String,
    pub input_fingerprint: String,
    pub search_space: SearchSpace,
    pub outcome: Outcome,
    pub expected: Expected,
    pub checks: Vec<Check>,
    pub equivalences: Vec<Equivalence>,
    pub sample: Option<SampleRecord>,
    pub warnings: Vec<String>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub wall_time_ms: u64,
}

impl Certificate {
    pub fn new(stage_id: &str, description: &str, expected: u64, citation: &str) -> Certificate {
        Certificate {
            stage_id: stage_id.to_string(),
            description: description.to_string(),
            input_fingerprint: String::new(),
            search_space: SearchSpace::default(),
            outcome: Outcome::default(),
            expected: Expected { value: expected, citation: citation.to_string() },
            checks: Vec::new(),
            equivalences: Vec::new(),
            sample: None,
            warnings: Vec::new(),
            matched: false,
            wall_time_ms: 0,
        }
    }

    pub fn check(&mut self, name: &str, observed: impl Serialize, expected: impl Serialize, citation: &str, severity: Severity) -> bool {
        let observed = serde_json::to_value(observed).expect("serializable");
        let expected = serde_json::to_value(expected).expect("serializable");
        let matched = observed == expected;
        if !matched {
            let msg = format!("{name}: observed {observed}, expected {expected}");
            match severity {
                Severity::Required => log::error!("{}: {msg}", self.stage_id),
                Severity::Warning => {
                    log::warn!("{}: {msg}", self.stage_id);
                    self.warnings.push(msg);
                }
                Severity::Info => {}
            }
        }
        self.checks.push(Check { name: name.to_string(), observed, expected, citation: citation.to_string(), matched, severity });
        matched
    }

    /// Records a quantity without an expectation.
    pub fn info(&mut self, name: &str, observed: impl Serialize) {
        self.check(name, &observed, &observed, "", Severity::Info);
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The verdict: headline count as expected, every required check matched and the
    /// sampled re-search agreeing with the main route.
    pub fn verdict(&self) -> bool {
        self.outcome.count == self.expected.value
            && self.checks.iter().all(|c| c.matched || c.severity != Severity::Required)
            && self.sample.as_ref().is_none_or(|s| s.found == s.expected_found)
    }

    pub fn finalize(&mut self) {
        self.matched = self.verdict();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }

    /// SHA-256 of the JSON with the wall time zeroed, so reruns give equal digests.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.wall_time_ms = 0;
        sha256_hex(serde_json::to_string(&c).expect("serializable").as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Fingerprint of normalized inputs, order-sensitive.
pub fn fingerprint<S: AsRef<str>>(parts: &[S]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_ref().as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRef {
    pub stage_id: String,
    pub digest: String,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasterCertificate {
    pub statement: String,
    pub stages: Vec<StageRef>,
    pub holds: bool,
    pub wall_time_ms: u64,
}

impl MasterCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<MasterCertificate> {
        Ok(serde_json::from_str(text)?)
    }
}
