//! Independent checking of certificates: internal consistency, witnesses,
//! equivalence maps, input fingerprints and the sampled re-search.

use stabcert_core::code::LineSystem;
use stabcert_core::nmset::{check_strength3, NMSet};
use stabcert_core::quantum::{hyperplane_parity, quantum_condition};

use crate::certificate::{Certificate, MasterCertificate, Severity};
use crate::fixtures;
use crate::run::STATEMENT;
use crate::stages::{input_fingerprint, parse_transform, resample, RunOptions, StageId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Repeat the recorded sampled re-search.
    pub resample: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { resample: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn valid(&self) -> bool {
        self.failures.is_empty()
    }

    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }
}

pub fn check_certificate(cert: &Certificate) -> bool {
    check_report(cert, &CheckOptions::default()).valid()
}

pub fn check_report(cert: &Certificate, opts: &CheckOptions) -> CheckReport {
    let mut r = CheckReport::default();
    let id: StageId = match cert.stage_id.parse() {
        Ok(id) => id,
        Err(e) => {
            r.failures.push(e.to_string());
            return r;
        }
    };
    consistency(cert, id, &mut r);
    witnesses(cert, id, &mut r);
    equivalences(cert, id, &mut r);
    sample(cert, id, opts, &mut r);
    r
}

fn consistency(cert: &Certificate, id: StageId, r: &mut CheckReport) {
    r.require(cert.expected.value == id.expected_count(), || {
        format!("expected value {} differs from the stage expectation {}", cert.expected.value, id.expected_count())
    });
    for c in &cert.checks {
        r.require(c.matched == (c.observed == c.expected), || format!("check {:?} has an inconsistent match flag", c.name));
        if c.severity == Severity::Warning && !c.matched {
            r.require(cert.warnings.iter().any(|w| w.starts_with(&c.name)), || format!("check {:?} lacks its warning", c.name));
        }
    }
    r.require(cert.matched == cert.verdict(), || format!("match = {} but the recorded outcome gives {}", cert.matched, cert.verdict()));
    r.require(cert.sample.is_some(), || "no sampled re-search recorded".into());
}

fn parse_set(text: &str) -> Option<NMSet> {
    NMSet::parse_text(text).ok()
}

fn witnesses(cert: &Certificate, id: StageId, r: &mut CheckReport) {
    let count = cert.outcome.count;
    let ws = &cert.outcome.witnesses;
    match id {
        StageId::P => r.require(ws.is_empty(), || "unexpected witnesses".into()),
        StageId::W5 => {
            let mut passing = 0;
            for (i, w) in ws.iter().enumerate() {
                match parse_set(w) {
                    Some(s) if s.n_lines() == 7 && s.n_points() == 6 && check_strength3(&s) => {
                        passing += hyperplane_parity(&s.points(), 7, 7) as u64;
                    }
                    _ => r.failures.push(format!("witness {i} is not a (7,6)-set of strength 3")),
                }
            }
            r.require(passing == 0 || count > 0, || "a witness passes the parity test but the count is 0".into());
        }
        StageId::W4a | StageId::W4b | StageId::W4c | StageId::S | StageId::F => {
            for (i, w) in ws.iter().enumerate() {
                let ok = LineSystem::parse_text(w).is_ok_and(|ls| {
                    ls.lines.len() == 13 && check_strength3(&NMSet::from_lines(8, ls.lines.clone())) && quantum_condition(&ls)
                });
                r.require(ok, || format!("witness {i} is not a quantum (13,0)-set of strength 3"));
            }
        }
    }
    if id != StageId::W5 {
        r.require(ws.len() as u64 <= count && (count == 0) == ws.is_empty(), || {
            format!("{} witnesses for count {count}", ws.len())
        });
    }
}

fn equivalences(cert: &Certificate, id: StageId, r: &mut CheckReport) {
    for eq in &cert.equivalences {
        let Some(fx) = fixtures::ALL.iter().find(|f| f.name == eq.printed) else {
            r.failures.push(format!("unknown printed configuration {:?}", eq.printed));
            continue;
        };
        // The printed layout may carry vanishing rows beyond the stage's space.
        let t = parse_transform(&eq.transform);
        let printed = t.as_ref().and_then(|t| fx.parse_in(t.dim()).ok());
        let ok = match (printed, t, parse_set(&eq.witness)) {
            (Some(printed), Some(t), Some(w)) => w.ambient_dim() == t.dim() && printed.map(&t).same_objects(&w),
            _ => false,
        };
        r.require(ok, || format!("the map for {} does not reach its witness", eq.printed));
        if id == StageId::W4c {
            let reference = cert.sample.as_ref().map(|s| s.reference.as_slice()).unwrap_or_default();
            r.require(reference.get(eq.witness_index) == Some(&eq.witness), || {
                format!("{} maps to a configuration outside the classes", eq.printed)
            });
        }
    }
}

fn sample(cert: &Certificate, id: StageId, opts: &CheckOptions, r: &mut CheckReport) {
    let Some(rec) = &cert.sample else { return };
    let run_opts = RunOptions { sample_rate: rec.rate, seed: rec.seed };
    match input_fingerprint(id, &run_opts) {
        Ok(fp) => r.require(fp == cert.input_fingerprint, || "input fingerprint differs".into()),
        Err(e) => r.failures.push(e.to_string()),
    }
    if matches!(id, StageId::S | StageId::F) {
        let fixture = if id == StageId::S { fixtures::SECUNDUM_LINES } else { fixtures::HYPERPLANE_LINES };
        let lines = fixture.parse_in(7).ok();
        let ok = rec.reference.len() == rec.subtrees.len()
            && rec.reference.iter().all(|t| {
                parse_set(t).is_some_and(|s| lines.as_ref().is_some_and(|l| NMSet::from_lines(7, s.lines().to_vec()).same_objects(l)))
            });
        r.require(ok, || "sampled systems do not extend the stage codelines".into());
    }
    if opts.resample {
        match resample(id, rec) {
            Ok(again) => r.require(&again == rec, || {
                format!(
                    "re-search gives nodes {}, found {}, expected {} against recorded {}, {}, {}",
                    again.nodes, again.found, again.expected_found, rec.nodes, rec.found, rec.expected_found
                )
            }),
            Err(e) => r.failures.push(format!("re-search failed: {e}")),
        }
    }
}

/// A master certificate is valid when it lists every stage once, its references
/// match the given stage certificates, and `holds` is the conjunction of the stage
/// verdicts.
pub fn check_master(master: &MasterCertificate, stages: &[Certificate]) -> CheckReport {
    let mut r = CheckReport::default();
    r.require(master.statement == STATEMENT, || "unexpected statement".into());
    let listed: Vec<&str> = master.stages.iter().map(|s| s.stage_id.as_str()).collect();
    let all: Vec<&str> = StageId::ALL.iter().map(|s| s.as_str()).collect();
    r.require(listed == all, || format!("stages {listed:?} instead of {all:?}"));
    for s in &master.stages {
        match stages.iter().find(|c| c.stage_id == s.stage_id) {
            Some(c) => {
                r.require(c.digest() == s.digest, || format!("digest of stage {} differs", s.stage_id));
                r.require(c.matched == s.matched, || format!("match flag of stage {} differs", s.stage_id));
            }
            None => r.failures.push(format!("certificate of stage {} missing", s.stage_id)),
        }
    }
    let all_match = master.stages.iter().all(|s| s.matched);
    r.require(master.holds == (all_match && listed == all), || "holds is not the conjunction of the stage verdicts".into());
    r
}
