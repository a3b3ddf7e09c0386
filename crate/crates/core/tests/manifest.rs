use std::collections::BTreeSet;

use catenoid::verify::{run, VerifyOptions, GROUPS};

#[test]
fn every_criterion_reports_once() {
    let report = run(&VerifyOptions::default()).unwrap();
    let criteria: BTreeSet<u8> = report.checks.iter().map(|c| c.criterion).collect();
    assert_eq!(criteria, (1..=12).collect());
    for c in &report.checks {
        assert_eq!(c.group, GROUPS[c.criterion as usize - 1]);
    }
    let keys: Vec<(&str, &str)> = report.checks.iter().map(|c| (c.group.as_str(), c.name.as_str())).collect();
    let unique: BTreeSet<_> = keys.iter().collect();
    assert_eq!(unique.len(), keys.len(), "duplicate check names");
    assert_eq!(report.passed, report.checks.iter().all(|c| c.passed));
}

#[test]
fn small_grid_still_has_every_group() {
    let report = run(&VerifyOptions { m_max: 6, ..VerifyOptions::default() }).unwrap();
    assert!(report.checks.len() >= 25);
    assert_eq!(report.checks.iter().map(|c| c.criterion).collect::<BTreeSet<_>>().len(), 12);
}

#[test]
fn filtered_run_is_one_group() {
    let report = run(&VerifyOptions { only: Some("appendix-b".into()), ..VerifyOptions::default() }).unwrap();
    assert!(!report.checks.is_empty());
    assert!(report.checks.iter().all(|c| c.criterion == 1));
}

#[test]
fn manifest_round_trips() {
    let report = run(&VerifyOptions { only: Some("kernels".into()), ..VerifyOptions::default() }).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    let back: catenoid::verify::VerifyReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}
