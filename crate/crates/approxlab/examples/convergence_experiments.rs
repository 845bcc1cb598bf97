//! The three rate experiments end to end: direct, inverse, equivalence.
//!
//! Each experiment compares measured best-approximation errors against the
//! modulus of smoothness on a geometric degree grid and reduces the
//! comparison to named checks (constant stability, slope agreement). The
//! reports audit themselves: every derived number re-derives from the
//! stored series.
//!
//! Run with `cargo run --example convergence_experiments` (about a minute:
//! the direct experiment solves sup-norm problems degree by degree).

use approxlab::registry;
use approxlab::space::{NormSpec, PExponent};
use approxlab::theorems::{
    direct_experiment, equivalence_experiment, inverse_experiment, Verdict,
};

fn main() -> approxlab::Result<()> {
    let ns = [8, 12, 16, 24, 32];

    // Direct estimate: E_n(f) <= C omega_r(f, 1/n), here for |x| in the
    // weighted sup norm where the kink pins the rate at exactly 1/n.
    let abs = registry::resolve("abs")?;
    let sup = NormSpec::new(PExponent::Infinity, 1.0)?;
    let report = direct_experiment(&abs, &sup, 1, &ns)?;
    print_summary("direct, |x|, p = inf, alpha = 1", &report.slopes, report.verdict);
    report.audit()?;

    // Inverse estimate: omega_r(f, 1/n) <= C n^(-2r) sum nu^(2r-1) E_nu.
    let l2 = NormSpec::new(PExponent::finite(2.0)?, 1.0)?;
    let kink = registry::resolve("abspow:mu=1.5")?;
    let report = inverse_experiment(&kink, &l2, 1, &ns)?;
    print_summary("inverse, |x|^1.5, p = 2, alpha = 1", &report.slopes, report.verdict);
    report.audit()?;

    // Equivalence: the decay exponents fitted from E_n and from the modulus
    // agree for functions inside the scale class.
    let report = equivalence_experiment(&abs, &l2, 1, &ns)?;
    print_summary("equivalence, |x|, p = 2, alpha = 1", &report.slopes, report.verdict);
    println!("  lambda gap = {:.4}", report.empirical_constants["lambda_gap"]);
    report.audit()?;
    Ok(())
}

fn print_summary(
    label: &str,
    slopes: &std::collections::BTreeMap<String, f64>,
    verdict: Verdict,
) {
    println!("{label}:");
    for (k, v) in slopes {
        println!("  {k} = {v:+.4}");
    }
    println!("  verdict: {verdict:?}");
}
