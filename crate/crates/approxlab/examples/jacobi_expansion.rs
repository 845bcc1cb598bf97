//! The normalized Jacobi basis and spectral analysis/synthesis.
//!
//! The basis used throughout is the `(2, 2)` Jacobi family normalized by
//! `P_k(1) = 1`. This example prints a few values and squared norms, then
//! expands a smooth function and reports the round-trip error and the
//! coefficient decay.
//!
//! Run with `cargo run --example jacobi_expansion`.

use approxlab::jacobi::SpectralFunction;
use approxlab::quadrature;
use approxlab::JacobiBasis;

fn main() -> approxlab::Result<()> {
    let basis = JacobiBasis::shared(2.0, 2.0, 8)?;

    // Normalization: every basis polynomial equals 1 at x = 1.
    println!("values at x = 1: {:?}", basis.values(1.0));

    // Squared norms h_k against the (2,2) weight; they decay like k^-5.
    println!("squared norms:");
    for k in 0..=4 {
        println!("  h_{k} = {:.12e}", basis.norm_sq(k)?);
    }

    // At x = 0 odd entries vanish by symmetry.
    let at_zero = basis.values(0.0);
    let odd: Vec<f64> = at_zero.iter().skip(1).step_by(2).copied().collect();
    println!("odd entries at x = 0: {odd:?}");

    // Analyze exp(x) to degree 24 and synthesize it back.
    let rule = quadrature::gauss_rule(2.0, 2.0, 64)?;
    let sf = SpectralFunction::analyze(|x: f64| x.exp(), 24, &rule)?;
    let mut worst = 0.0f64;
    for i in 0..=100 {
        let x = -0.99 + 1.98 * i as f64 / 100.0;
        worst = worst.max((sf.eval(x) - x.exp()).abs());
    }
    println!("exp round-trip sup error on [-0.99, 0.99]: {worst:.3e}");

    // Smooth functions have super-algebraically decaying coefficients.
    println!("leading coefficients of exp:");
    for (k, c) in sf.coeffs().iter().enumerate().take(8) {
        println!("  c_{k} = {c:+.12e}");
    }
    Ok(())
}
