//! Gauss-Jacobi quadrature: build rules, verify exactness, and show the
//! closed-form total mass.
//!
//! Run with `cargo run --example quadrature_basics`.

use approxlab::quadrature;
use approxlab::special;

fn main() -> approxlab::Result<()> {
    // A 12-point rule for the weight (1-x)^2 (1+x)^2 integrates polynomials
    // up to degree 23 exactly.
    let rule = quadrature::gauss_rule(2.0, 2.0, 12)?;
    println!("nodes ({}):", rule.nodes().len());
    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
        println!("  x = {x:+.12}   w = {w:.12e}");
    }

    // Total mass: integral of (1-x)^a (1+x)^b over [-1, 1] equals
    // 2^(a+b+1) B(a+1, b+1).
    let mass = rule.total_mass();
    let exact = 2f64.powf(5.0) * special::beta(3.0, 3.0);
    println!("total mass      = {mass:.15}");
    println!("closed form     = {exact:.15}");
    println!("difference      = {:.3e}", (mass - exact).abs());

    // Exactness on a monomial of degree 23 (the highest this rule handles).
    let measured = rule.integrate(|x| x.powi(23) + x.powi(10));
    let reference = exact_moment(10);
    println!("degree-23 + degree-10 integral = {measured:.15} (odd part vanishes)");
    println!("degree-10 moment residual      = {:.3e}", (measured - reference).abs());

    // Chebyshev-Gauss rules (a = b = -1/2) have equal weights pi/n and
    // cosine nodes; they drive the translation kernels.
    let cheb = quadrature::chebyshev_gauss(8)?;
    let spread = cheb.weights().iter().fold((f64::MAX, f64::MIN), |(lo, hi), &w| {
        (lo.min(w), hi.max(w))
    });
    println!(
        "chebyshev-gauss: first weight {:.12} (pi/8 = {:.12}), weight spread {:.2e}",
        cheb.weights()[0],
        std::f64::consts::PI / 8.0,
        spread.1 - spread.0,
    );
    Ok(())
}

/// Even moment of the weight via the beta function:
/// `int x^(2m) (1-x^2)^2 dx = B(m + 1/2, 3)` after substituting `x^2 = t`.
fn exact_moment(degree: u32) -> f64 {
    assert!(degree % 2 == 0);
    let m = f64::from(degree / 2);
    special::beta(m + 0.5, 3.0)
}
