//! Generalized differences and the modulus of smoothness.
//!
//! The modulus `omega_r(f, delta)` takes a supremum of `||D_{t_1..t_r} f||`
//! over angle steps `t_j <= delta`. Its decay order as `delta -> 0`
//! classifies the smoothness of `f`: kinks give fractional orders, smooth
//! functions saturate at `delta^(2r)`.
//!
//! Run with `cargo run --example smoothness_modulus`.

use approxlab::smoothness::{self, Backend};
use approxlab::space::{NormSpec, PExponent};
use approxlab::{registry, FunctionHandle};

fn main() -> approxlab::Result<()> {
    // Closed form: for P_1 in the sup norm without weight,
    // omega_1(P_1, delta) = 1 - cos^3(delta).
    let sup = NormSpec::new(PExponent::Infinity, 0.0)?;
    let p1 = registry::resolve("pjac:k=1")?;
    for delta in [0.25, 0.7, 1.2] {
        let report = smoothness::modulus(&p1.handle, 1, delta, &sup, Backend::Auto)?;
        let exact = 1.0 - delta.cos().powi(3);
        println!(
            "omega_1(P_1, {delta:.2}) = {:.10}   closed form {:.10}   diff {:.1e}",
            report.value,
            exact,
            (report.value - exact).abs()
        );
    }

    // Decay order of omega_1(|x|, delta) in the weighted L_2 norm: the kink
    // of |x| at the origin gives the fractional order 3/2.
    let l2 = NormSpec::new(PExponent::finite(2.0)?, 1.0)?;
    let abs = FunctionHandle::from_fn(f64::abs);
    println!("omega_1(|x|, 1/n) in L_2, weight exponent 1:");
    let mut last: Option<f64> = None;
    for n in [4.0f64, 8.0, 16.0, 32.0] {
        let report = smoothness::modulus(&abs, 1, 1.0 / n, &l2, Backend::Auto)?;
        let slope = last.map(|prev| (report.value / prev).log2()).unwrap_or(f64::NAN);
        println!("  delta = 1/{n:>2}: omega = {:.8e}   local order {:.3}", report.value, -slope);
        last = Some(report.value);
    }

    // A second-order modulus of a smooth function decays like delta^4
    // (saturation at 2r): rates beyond that are invisible to omega_2.
    let exp = registry::resolve("exp")?;
    let mut last = None;
    println!("omega_2(exp, 1/n) in L_2 (saturates at order 4):");
    for n in [2.0f64, 4.0, 8.0] {
        let report = smoothness::modulus(&exp.handle, 2, 1.0 / n, &l2, Backend::Auto)?;
        let slope = last.map(|prev: f64| (report.value / prev).log2()).unwrap_or(f64::NAN);
        println!("  delta = 1/{n:>2}: omega = {:.8e}   local order {:.3}", report.value, -slope);
        last = Some(report.value);
    }
    Ok(())
}
