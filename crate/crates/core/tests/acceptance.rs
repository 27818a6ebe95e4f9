//! One line per acceptance criterion, each with its runtime budget.

use std::time::{Duration, Instant};

use legpath_core::report_io::{emit_report, ReportFormat};
use legpath_core::suite::{run_criterion, CRITERIA, DEFAULT_SEED};

fn budget(id: u8) -> Duration {
    match id {
        1 | 2 => Duration::from_secs(30),
        4 | 6 => Duration::from_secs(120),
        7 | 8 => Duration::from_secs(60),
        // 9 reruns the whole suite twice.
        9 => Duration::from_secs(600),
        _ => Duration::from_secs(30),
    }
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for (id, title) in CRITERIA {
        let start = Instant::now();
        let report = run_criterion(id, DEFAULT_SEED).unwrap_or_else(|e| panic!("criterion {id}: {e}"));
        let elapsed = start.elapsed();
        let ok = report.passed() && elapsed <= budget(id);
        println!(
            "criterion {id} ({title}): {} [{} checks, tolerance 0, {:.2}s of {}s]",
            if ok { "PASS" } else { "FAIL" },
            report.checks.len(),
            elapsed.as_secs_f64(),
            budget(id).as_secs()
        );
        if !ok {
            print!("{}", emit_report(&report, ReportFormat::Text));
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
