//! Jackson-type smoothing operators: degree bounds, normalization, and
//! convergence.
//!
//! The operator family is built from powered Fejer-type kernels in the
//! translation's angle variable. The operator with parameters `(q, m, r)`
//! produces a polynomial of degree at most `(q + 2)(m - 1)`; its iterate
//! order `r` controls which modulus order bounds the error.
//!
//! Run with `cargo run --example jackson_operator`.

use approxlab::jackson::{choose_parameters, JacksonOperator};
use approxlab::space::{weighted_norm, NormSpec, PExponent};
use approxlab::{registry, FunctionHandle};

fn main() -> approxlab::Result<()> {
    // Kernel normalization constants have closed forms at small orders.
    let op = JacksonOperator::new(1, 1, 1)?;
    println!("gamma(1, 1) = {:.15} (expect 4/3 = {:.15})", op.gamma(), 4.0 / 3.0);
    let op = JacksonOperator::new(1, 2, 1)?;
    println!("gamma(1, 2) = {:.15} (expect 256/15 = {:.15})", op.gamma(), 256.0 / 15.0);

    // Degree bound: the averaged-difference multipliers beta_k lock at -1
    // beyond (q + 2)(m - 1), so the approximant factors 1 - (-beta_k)^r
    // vanish there and the output has at most that degree.
    let op = JacksonOperator::new(1, 4, 1)?;
    let exp = registry::resolve("exp")?;
    let factors = op.coefficient_factors(op.degree_bound() + 3)?;
    println!(
        "q = 1, m = 4: degree bound {} — approximant factors beyond it: {:?}",
        op.degree_bound(),
        &factors[op.degree_bound() + 1..],
    );

    // Convergence of the derived approximant (for odd r the approximant is
    // the operator output itself).
    let spec = NormSpec::new(PExponent::finite(2.0)?, 1.0)?;
    println!("approximation error for exp, q = 1, r = 1:");
    for m in [2usize, 4, 8, 16] {
        let op = JacksonOperator::new(1, m, 1)?;
        let approx = op.apply(&exp.handle)?;
        let fh = exp.handle.clone();
        let diff = FunctionHandle::from_fn(move |x| fh.eval(x) - approx.eval(x));
        let err = weighted_norm(&diff, &spec)?;
        println!("  m = {m:>2} (degree <= {:>2}): error = {err:.6e}", op.degree_bound());
    }

    // Parameter selection: given a target polynomial degree n and operator
    // order lambda, pick (q, m) with (q + 2)(m - 1) <= n.
    let (q, m) = choose_parameters(2.0, 24)?;
    println!("choose_parameters(lambda = 2, n = 24) = (q = {q}, m = {m})");
    Ok(())
}
