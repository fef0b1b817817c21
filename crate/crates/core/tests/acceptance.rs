//! Acceptance gate: one line per criterion, nonzero exit on any FAIL.
//!
//! `HJOINTS_ACCEPTANCE=3,9` restricts the run; `HJOINTS_ACCEPTANCE_VERBOSE=1`
//! prints every check.

use std::process::ExitCode;

use hjoints::report::Status;
use hjoints::suite::{run_criterion, SuiteOptions, NUM_CRITERIA};

fn main() -> ExitCode {
    let ids: Vec<usize> = match std::env::var("HJOINTS_ACCEPTANCE") {
        Ok(s) if !s.trim().is_empty() => s.split(',').filter_map(|x| x.trim().parse().ok()).collect(),
        _ => (1..=NUM_CRITERIA).collect(),
    };
    let verbose = std::env::var_os("HJOINTS_ACCEPTANCE_VERBOSE").is_some();
    let opts = SuiteOptions::default();
    let mut failed = 0;
    for id in ids {
        let out = match run_criterion(id, &opts) {
            Ok(o) => o,
            Err(e) => {
                println!("criterion {id:>2}  FAIL  {e}");
                failed += 1;
                continue;
            }
        };
        let status = out.status();
        println!("criterion {:>2}  {:<11}  {:<44} {:>8.2}s  ({} checks)", id, status.as_str(), out.title, out.seconds, out.checks.len());
        for c in &out.checks {
            if verbose || c.status == Status::Fail || c.status == Status::Unconverged || (out.stretch && c.status == Status::Info) {
                let slack = c.slack.map(|s| format!(" slack {s:.3e}")).unwrap_or_default();
                println!("    {} {}{} {}", c.status.as_str(), c.name, slack, c.detail.as_deref().unwrap_or(""));
            }
        }
        if !out.passed() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    } else {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    }
}
