//! One line per acceptance criterion. `GQUOT_PROFILE=deep` adds the level-5 enumerations.

use std::process::ExitCode;
use std::time::Instant;

use gquot::report::{criterion, Profile, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let profile = Profile::from_env();
    let mut failed = 0;
    for (i, title) in CRITERIA.iter().enumerate() {
        let id = i + 1;
        let t = Instant::now();
        let checks = criterion(id, profile, DEFAULT_SEED);
        let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        let verdict = if bad.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:2} {verdict}  {title} ({} checks, {:.1} s)",
            checks.len(),
            t.elapsed().as_secs_f64()
        );
        for c in &bad {
            println!("    {}: expected {}, computed {}", c.name, c.expected, c.computed);
        }
        failed += !bad.is_empty() as usize;
    }
    println!("{} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
