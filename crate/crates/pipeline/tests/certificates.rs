use std::sync::OnceLock;

use stabcert_pipeline::check::{check_certificate, check_report, CheckOptions};
use stabcert_pipeline::run::{master, StagePlan};
use stabcert_pipeline::{run_stage, Certificate, RunOptions, StageId};

const QUICK: CheckOptions = CheckOptions { resample: false };

fn families() -> &'static Certificate {
    static CERT: OnceLock<Certificate> = OnceLock::new();
    CERT.get_or_init(|| run_stage(StageId::W4c, &RunOptions::default()).unwrap())
}

fn weight3() -> &'static Certificate {
    static CERT: OnceLock<Certificate> = OnceLock::new();
    CERT.get_or_init(|| run_stage(StageId::W4a, &RunOptions::default()).unwrap())
}

#[test]
fn untouched_family_certificate_checks() {
    let c = families();
    assert!(c.matched);
    assert_eq!(c.outcome.count, 0);
    assert_eq!(c.equivalences.len(), 4);
    assert!(check_certificate(c));
}

#[test]
fn json_round_trip_keeps_validity() {
    let c = Certificate::from_json(&weight3().to_json()).unwrap();
    assert_eq!(&c, weight3());
    assert!(check_certificate(&c));
}

#[test]
fn corrupted_equivalence_is_rejected() {
    let mut c = families().clone();
    let col = &mut c.equivalences[0].transform[0];
    *col = if col == "01" { "02".into() } else { "01".into() };
    assert!(!check_report(&c, &QUICK).valid());

    let mut c = families().clone();
    c.equivalences[1].witness = c.equivalences[2].witness.clone();
    c.equivalences[1].witness_index = c.equivalences[2].witness_index;
    let same = c.equivalences[1] == families().equivalences[1];
    assert!(same || !check_report(&c, &QUICK).valid());
}

#[test]
fn invalid_witness_is_rejected() {
    let mut c = weight3().clone();
    c.outcome.count = 1;
    c.outcome.witnesses.push(stabcert_pipeline::fixtures::HYPEROVAL.text.to_string());
    assert!(!check_report(&c, &QUICK).valid());
}

#[test]
fn count_differing_from_expectation_cannot_match() {
    let mut c = weight3().clone();
    c.outcome.count = 3;
    assert!(c.matched);
    assert!(!check_report(&c, &QUICK).valid());

    let mut c = weight3().clone();
    c.expected.value = 5;
    assert!(!check_report(&c, &QUICK).valid());
}

#[test]
fn flipped_check_is_rejected() {
    let mut c = weight3().clone();
    let i = c.checks.iter().position(|x| x.matched && x.observed.is_u64()).unwrap();
    c.checks[i].observed = serde_json::json!(c.checks[i].observed.as_u64().unwrap() + 1);
    assert!(!check_report(&c, &QUICK).valid());
}

#[test]
fn tampered_sample_fails_the_re_search() {
    let mut c = weight3().clone();
    let s = c.sample.as_mut().unwrap();
    s.nodes += 1;
    let report = check_report(&c, &CheckOptions::default());
    assert!(report.failures.iter().any(|f| f.contains("re-search")));
}

#[test]
fn reruns_and_worker_counts_give_identical_certificates() {
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let one = pool(1).install(|| run_stage(StageId::W4a, &RunOptions::default()).unwrap());
    let three = pool(3).install(|| run_stage(StageId::W4a, &RunOptions::default()).unwrap());
    assert_eq!(one.digest(), weight3().digest());
    assert_eq!(three.digest(), weight3().digest());
}

#[test]
fn master_holds_only_for_a_full_matching_run() {
    let plan = StagePlan::all();
    assert!(plan.is_ordered());
    let partial = master(&[weight3().clone(), families().clone()], 0);
    assert!(!partial.holds);
}
