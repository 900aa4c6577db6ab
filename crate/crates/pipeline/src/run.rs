//! Running stages in dependency order, the master certificate and certificate files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::certificate::{Certificate, MasterCertificate, StageRef};
use crate::error::Result;
use crate::stages::{run_stage, RunOptions, StageId};

pub const STATEMENT: &str = "There is no [[13,5,4]] quantum stabilizer code";

/// Stages in execution order with their dependency edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagePlan {
    pub stages: Vec<StageId>,
}

impl StagePlan {
    pub fn all() -> StagePlan {
        StagePlan { stages: StageId::ALL.to_vec() }
    }

    /// The selected stages only, in plan order. Each stage is self-contained, so
    /// dependencies are not pulled in.
    pub fn only(selected: &[StageId]) -> StagePlan {
        StagePlan { stages: StageId::ALL.into_iter().filter(|s| selected.contains(s)).collect() }
    }

    /// Edges `(dependency, stage)` among the planned stages.
    pub fn edges(&self) -> Vec<(StageId, StageId)> {
        self.stages
            .iter()
            .flat_map(|&s| s.dependencies().iter().filter(|d| self.stages.contains(d)).map(move |&d| (d, s)))
            .collect()
    }

    /// Every dependency comes before the stage depending on it.
    pub fn is_ordered(&self) -> bool {
        let pos = |s: StageId| self.stages.iter().position(|&t| t == s);
        self.edges().iter().all(|&(d, s)| pos(d) < pos(s))
    }
}

pub fn verify(plan: &StagePlan, opts: &RunOptions) -> Result<Vec<Certificate>> {
    plan.stages.iter().map(|&s| run_stage(s, opts)).collect()
}

pub fn master(certs: &[Certificate], wall_time_ms: u64) -> MasterCertificate {
    let stages: Vec<StageRef> =
        certs.iter().map(|c| StageRef { stage_id: c.stage_id.clone(), digest: c.digest(), matched: c.matched }).collect();
    let complete = StageId::ALL.iter().all(|id| stages.iter().any(|s| s.stage_id == id.as_str()));
    let holds = complete && stages.iter().all(|s| s.matched);
    MasterCertificate { statement: STATEMENT.to_string(), stages, holds, wall_time_ms }
}

/// Runs every stage and chains the results.
pub fn verify_all(opts: &RunOptions) -> Result<(MasterCertificate, Vec<Certificate>)> {
    let start = Instant::now();
    let certs = verify(&StagePlan::all(), opts)?;
    let m = master(&certs, start.elapsed().as_millis() as u64);
    log::info!("master: holds = {}", m.holds);
    Ok((m, certs))
}

pub fn certificate_path(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("stage_{id}.json"))
}

/// Writes `stage_<id>.json` per certificate and `master.json` when given.
pub fn write_certificates(dir: &Path, certs: &[Certificate], master: Option<&MasterCertificate>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for c in certs {
        let path = certificate_path(dir, &c.stage_id);
        fs::write(&path, c.to_json())?;
        written.push(path);
    }
    if let Some(m) = master {
        let path = dir.join("master.json");
        fs::write(&path, m.to_json())?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_is_acyclic_and_ordered() {
        assert!(StagePlan::all().is_ordered());
        assert_eq!(StagePlan::only(&[StageId::F, StageId::W4c]).stages, vec![StageId::W4c, StageId::F]);
        assert!(StagePlan::only(&[StageId::F]).edges().is_empty());
    }

    #[test]
    fn master_needs_every_stage() {
        let mut c = Certificate::new("P", "", 0, "");
        c.finalize();
        let m = master(&[c], 0);
        assert!(!m.holds);
        assert_eq!(m.stages.len(), 1);
    }
}
