//! Acceptance criteria 1 to 9, one line each.

use std::process::ExitCode;

use pseudoshift_cli::selftest::{run_selftest, DEFAULT_SEED};

fn main() -> ExitCode {
    let result = run_selftest(DEFAULT_SEED);
    for line in result.lines() {
        println!("{line}");
    }
    let failed = result.criteria.iter().filter(|c| !c.pass).count();
    println!("acceptance: {} passed, {failed} failed", result.criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
