//! Run the library's verification suite programmatically and inspect it.
//!
//! The suite executes every module's invariants — quadrature closed forms,
//! basis orthogonality, translation eigenfunction identities,
//! self-adjointness, modulus structure, solver certificates, operator
//! normalization, report determinism — with pinned tolerances, and returns
//! one named check per invariant.
//!
//! Run with `cargo run --example verification_suite`.

use approxlab::theorems::{verify_suite, VerifyConfig};

fn main() -> approxlab::Result<()> {
    let report = verify_suite(&VerifyConfig::default())?;
    let passed = report.checks.iter().filter(|c| c.passed).count();
    println!("{passed} of {} checks passed", report.checks.len());

    // The widest observed margins tell you where the numerics are tightest.
    let mut worst: Vec<&approxlab::theorems::Check> = report.checks.iter().collect();
    worst.sort_by(|a, b| b.observed.abs().total_cmp(&a.observed.abs()));
    println!("largest observed residuals:");
    for check in worst.iter().take(5) {
        println!("  {:<40} {:.3e}", check.name, check.observed);
    }

    // Reports serialize and re-verify: the audit recomputes every derived
    // number from the stored series and fails on any mismatch.
    let json = serde_json::to_string(&report)?;
    let restored: approxlab::theorems::ExperimentReport = serde_json::from_str(&json)?;
    restored.audit()?;
    println!("round-tripped report audits clean ({} bytes of JSON)", json.len());
    Ok(())
}
