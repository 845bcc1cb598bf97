//! The generalized translation family and its spectral identities.
//!
//! Three kernels make up the family: the full translation `T_y` (an exact
//! rank-one multiplier in the basis), and two auxiliary asymmetric kernels
//! `T_{1;y}`, `T_{2;y}`. The second auxiliary kernel acts on every basis
//! polynomial as multiplication by its own value at `y`:
//!
//! ```text
//! T_{2;y} P_nu (x) = P_nu(x) P_nu(y),
//! ```
//!
//! which this example demonstrates with both backends, together with the
//! normalization identities and the multiplier table.
//!
//! Run with `cargo run --example translation_identities`.

use approxlab::jacobi::SpectralFunction;
use approxlab::quadrature;
use approxlab::translation::{self, Variant};
use approxlab::{JacobiBasis, MultiplierTable};

fn main() -> approxlab::Result<()> {
    let y = 0.31;
    let basis = JacobiBasis::shared(2.0, 2.0, 16)?;

    // Eigenfunction identity for the second auxiliary kernel, direct
    // quadrature backend.
    println!("T_2;y P_nu(x) vs P_nu(x) P_nu(y) at y = {y}:");
    for nu in 0..=4 {
        let b = basis.clone();
        let x = 0.57;
        let lhs = translation::translate_direct(
            &move |t| b.eval(nu, t).expect("degree in range"),
            Variant::Aux2,
            y,
            x,
            translation::DEFAULT_Z_ORDER,
        )?;
        let rhs = basis.eval(nu, x)? * basis.eval(nu, y)?;
        println!("  nu = {nu}:  {lhs:+.14}  vs  {rhs:+.14}  (diff {:.2e})", (lhs - rhs).abs());
    }

    // Normalization: the full kernel reproduces constants; the first
    // auxiliary kernel maps 1 to (3y^2 - 1)/2.
    let one_full =
        translation::translate_direct(&|_| 1.0, Variant::Full, y, 0.2, translation::DEFAULT_Z_ORDER)?;
    let one_aux1 =
        translation::translate_direct(&|_| 1.0, Variant::Aux1, y, 0.2, translation::DEFAULT_Z_ORDER)?;
    println!("T_y 1      = {one_full:.15} (expect 1)");
    println!("T_1;y 1    = {one_aux1:.15} (expect {:.15})", 1.5 * y * y - 0.5);

    // The spectral backend applies the same operators as diagonal
    // multipliers on coefficients.
    let rule = quadrature::gauss_rule(2.0, 2.0, 64)?;
    let sf = SpectralFunction::analyze(|x: f64| (2.0 * x).sin(), 20, &rule)?;
    let translated = translation::translate_spectral(&sf, Variant::Full, y)?;
    let direct = translation::translate_direct(
        &|x: f64| (2.0 * x).sin(),
        Variant::Full,
        y,
        0.57,
        translation::DEFAULT_Z_ORDER,
    )?;
    println!("spectral vs direct at x = 0.57: {:+.14} vs {:+.14}", translated.eval(0.57), direct);

    // Multiplier table: R_0(y) = 1 and R_1(y) = y^3 for the full kernel.
    let table = MultiplierTable::shared(y, 8)?;
    let r = table.multipliers(Variant::Full);
    println!("R_0(y) = {:+.15} (expect 1)", r[0]);
    println!("R_1(y) = {:+.15} (expect y^3 = {:+.15})", r[1], y.powi(3));
    Ok(())
}
