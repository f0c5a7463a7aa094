//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. `ACCEPTANCE_ONLY=3,7` restricts the run.

use std::process::ExitCode;
use std::time::Instant;

use oddtors::suite::{criterion, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let mut failed = 0;
    let total = Instant::now();
    for n in 1..=CRITERIA.len() {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        let start = Instant::now();
        let out = criterion(n, DEFAULT_SEED).expect("criterion exists");
        let verdict = if out.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {} ({:.1}s)", n, out.title, start.elapsed().as_secs_f64());
        if !out.passed || verbose {
            for d in &out.details {
                println!("       {d}");
            }
        }
        if !out.passed {
            failed += 1;
        }
    }
    println!("acceptance: {failed} failing, {:.1}s total", total.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
