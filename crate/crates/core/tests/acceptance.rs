//! Runs the nine battery criteria and prints one line per criterion.

use std::process::ExitCode;

use hwembed::selftest::run_criterion;
use hwembed::Settings;

fn main() -> ExitCode {
    let settings = Settings::default();
    let mut failed = Vec::new();
    for id in 1..=9 {
        let report = run_criterion(id, &settings);
        println!("{report}");
        for f in report.failures.iter().take(5) {
            println!("    {f}");
        }
        if !report.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
