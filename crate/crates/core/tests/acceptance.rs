//! Acceptance grid: one status line per criterion, all checks exact. Runs
//! without the libtest harness so the lines always reach the output.

use std::process::ExitCode;
use std::thread;

use pgroup_witness::groups::Limits;
use pgroup_witness::selftest::{self, CriterionResult};

const SEED: u64 = 0;

fn main() -> ExitCode {
    let limits = Limits::default();
    let criteria: [&(dyn Fn() -> CriterionResult + Sync); 8] = [
        &|| selftest::metacyclic_grid(&limits),
        &|| selftest::unipotent_grid(&limits),
        &|| selftest::obstruction_sweep(SEED, &limits),
        &|| selftest::valuation_identity(SEED),
        &|| selftest::power_exponent_solving(),
        &|| selftest::polynomial_suite(SEED),
        &|| selftest::congruence(SEED, &limits),
        &|| selftest::cross_cutting(&limits),
    ];
    let results: Vec<CriterionResult> = thread::scope(|s| {
        let handles: Vec<_> = criteria.iter().map(|c| s.spawn(c)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion panicked"))
            .collect()
    });
    let mut failed = 0;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "[{status}] criterion {}: {} ({} checks)",
            r.id, r.title, r.checks
        );
        for f in r.failures.iter().take(20) {
            println!("    {f}");
        }
        failed += usize::from(!r.passed);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
