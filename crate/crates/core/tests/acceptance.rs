//! Prints one PASS/FAIL line per acceptance criterion and fails the run if
//! any criterion fails.

use std::process::ExitCode;

use pdo_core::selftest::{self, SelftestConfig};

fn main() -> ExitCode {
    let outcomes = selftest::run_all(&SelftestConfig::default());
    let mut failed = 0;
    for o in &outcomes {
        let mark = if o.passed { "PASS" } else { "FAIL" };
        println!("{mark} criterion {}: {}", o.id, o.title);
        if !o.passed {
            println!("    {}", o.detail);
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        outcomes.len() - failed,
        outcomes.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
