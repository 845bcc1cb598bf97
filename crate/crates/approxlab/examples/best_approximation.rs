//! Best polynomial approximation in weighted `L_p` with solver certificates.
//!
//! Three solvers cover the exponent range: an exact projection at `p = 2`,
//! IRLS for other finite `p`, and Lawson's multiplicative-weight iteration
//! for the sup norm, certified post hoc by counting near-equioscillation
//! extrema (an optimal degree-(n-1) error curve alternates at least n + 1
//! times).
//!
//! Run with `cargo run --example best_approximation`.

use approxlab::best_approx::{
    best_approx, en_sequence, equioscillation_certificate, residual_orthogonality,
};
use approxlab::space::{NormSpec, PExponent};
use approxlab::registry;

fn main() -> approxlab::Result<()> {
    let exp = registry::resolve("exp")?;

    // p = 2: the projection is exact and the residual is orthogonal to the
    // approximation space.
    let l2 = NormSpec::new(PExponent::finite(2.0)?, 1.0)?;
    let result = best_approx(&exp.handle, 6, &l2)?;
    let ortho = residual_orthogonality(&exp.handle, &result, &l2)?;
    println!("p = 2, n = 6: E = {:.6e}, residual orthogonality {:.2e}", result.error, ortho);

    // p = infinity: Lawson, certified by the equioscillation count.
    let sup = NormSpec::new(PExponent::Infinity, 0.0)?;
    let result = best_approx(&exp.handle, 8, &sup)?;
    let cert = equioscillation_certificate(&exp.handle, &result, &sup, 0.01)?;
    println!(
        "p = inf, n = 8: E = {:.6e}, converged = {}, alternations = {} (need >= 9), pass = {}",
        result.error, result.converged, cert.alternations, cert.pass
    );

    // A classical sanity anchor: the best constant approximation to x on
    // [-1, 1] in the unweighted sup norm is 0, with error exactly 1.
    let x = registry::resolve("x")?;
    let result = best_approx(&x.handle, 1, &sup)?;
    println!("best constant for x: coeffs = {:?}, error = {:.10}", result.coeffs, result.error);

    // Error sequences: |x| converges at an algebraic rate fixed by the kink,
    // exp faster than any power.
    let abs = registry::resolve("abs")?;
    let scaling = en_sequence(&abs.handle, 24, &sup)?;
    println!("E_n(|x|) in the sup norm: fitted slope {:.3}", scaling.fitted_slope);
    for &(n, e) in scaling.pairs.iter().take(6) {
        println!("  n = {n:>2}: E = {e:.8e}");
    }
    Ok(())
}
