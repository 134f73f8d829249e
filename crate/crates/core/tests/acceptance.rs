use std::io::Write;

use ghlab::acceptance::{run_criterion, CriterionOutcome, CRITERIA};

/// Goes straight to the process stdout so the lines show without `--nocapture`.
fn report(o: &CriterionOutcome) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{o}").expect("stdout is writable");
}

#[test]
fn acceptance_criteria() {
    let outcomes: Vec<_> = CRITERIA.iter().map(|&(id, _)| run_criterion(id, false)).collect();
    outcomes.iter().for_each(report);
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn every_injected_fault_is_caught() {
    for &(id, name) in &CRITERIA {
        let o = run_criterion(id, true);
        report(&o);
        assert!(!o.passed, "criterion {id} ({name}) passed with its fault injected");
    }
}
