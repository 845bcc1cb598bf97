//! Jackson-type smoothing operators built from powers of the Fejér kernel
//! averaged against the generalized translation.
//!
//! For naturals `q, m` the kernel is
//! `K_{q,m}(t) = (sin(m t / 2) / sin(t / 2))^{2(q+2)}`, normalized by
//! `gamma_{q,m} = integral_0^pi K_{q,m}(t) sin^3 t dt`. The order-`r`
//! operator averages the generalized difference:
//!
//! ```text
//! Q(x) = gamma^{-r} int...int (Delta_{t_1..t_r} f(x) - (-1)^r f(x))
//!             prod_s K_{q,m}(t_s) sin^3 t_s dt_s ,
//! ```
//!
//! and the approximant applied to `f` is `(-1)^{r+1} Q(x)`, an algebraic
//! polynomial of degree at most `(q+2)(m-1)`. On the orthogonal basis the
//! operator is diagonal: with
//! `beta_k = gamma^{-1} int_0^pi (R_k(cos t) - 1) K_{q,m}(t) sin^3 t dt`
//! (the averaged difference multiplier), the approximant scales the `k`-th
//! coefficient by `1 - (-beta_k)^r`, and `beta_k = -1` exactly beyond the
//! degree bound, which is what truncates the expansion.
//!
//! Two evaluation routes are provided: a spectral route through the
//! multipliers, and a literal nested-quadrature route that evaluates the
//! defining integral; agreement of the two is a strong end-to-end check.

use crate::error::{Error, Result};
use crate::jacobi::{JacobiBasis, SpectralFunction};
use crate::quadrature;
use crate::smoothness::{self, Backend};
use crate::space::FunctionHandle;
use crate::translation;

/// Largest difference order the literal nested-quadrature route evaluates;
/// each additional order multiplies the cost by the full tensor grid.
pub const MAX_DIRECT_ORDER: usize = 2;

/// Evaluate `K_{q,m}(t) = (sin(mt/2)/sin(t/2))^{2(q+2)}` for `t` in
/// `[0, pi]`, using the sinc form `m * sinc(mt/2) / sinc(t/2)` so the
/// removable singularity at `t = 0` (value `m^{2(q+2)}`) is exact.
pub fn kernel_value(q: usize, m: usize, t: f64) -> Result<f64> {
    validate_qm(q, m)?;
    if !(0.0..=std::f64::consts::PI + 1e-12).contains(&t) {
        return Err(Error::Domain(format!("kernel argument t = {t} outside [0, pi]")));
    }
    fn sinc(u: f64) -> f64 {
        if u.abs() < 1e-8 {
            1.0 - u * u / 6.0
        } else {
            u.sin() / u
        }
    }
    let ratio = m as f64 * sinc(m as f64 * t / 2.0) / sinc(t / 2.0);
    Ok(ratio.powi(2 * (q as i32 + 2)))
}

fn validate_qm(q: usize, m: usize) -> Result<()> {
    if q == 0 || m == 0 {
        return Err(Error::Domain("kernel parameters q and m must be natural numbers".into()));
    }
    if (q + 2) * m > 512 {
        return Err(Error::Range(format!(
            "kernel parameters (q, m) = ({q}, {m}) exceed the supported degree budget"
        )));
    }
    Ok(())
}

/// The moment `int_0^pi t^j K_{q,m}(t) sin^3 t dt`, evaluated with the
/// substitution `t = pi u^2` so the node density matches the kernel's
/// concentration near `t = 0`.
pub fn kernel_moment(q: usize, m: usize, j: usize) -> Result<f64> {
    validate_qm(q, m)?;
    let rule = quadrature::gauss_legendre(512)?;
    let mut acc = 0.0;
    for (&u01, &w01) in rule.nodes().iter().zip(rule.weights()) {
        // Map the symmetric rule on (-1, 1) to u in (0, 1).
        let u = 0.5 * (u01 + 1.0);
        let w = 0.5 * w01;
        let t = std::f64::consts::PI * u * u;
        let jac = 2.0 * std::f64::consts::PI * u;
        let k = kernel_value(q, m, t)?;
        acc += w * jac * t.powi(j as i32) * k * t.sin().powi(3);
    }
    Ok(acc)
}

/// A Jackson-type operator with fixed kernel parameters and difference
/// order.
#[derive(Debug, Clone)]
pub struct JacksonOperator {
    q: usize,
    m: usize,
    r: usize,
    gamma: f64,
    degree_bound: usize,
}

impl JacksonOperator {
    /// Build the operator, computing the kernel normalization exactly via
    /// Gauss-Legendre quadrature in `y = cos t` (the integrand is a
    /// polynomial there).
    pub fn new(q: usize, m: usize, r: usize) -> Result<Self> {
        validate_qm(q, m)?;
        if r == 0 {
            return Err(Error::Domain("difference order r must be at least 1".into()));
        }
        let degree_bound = (q + 2) * (m - 1);
        let rule = y_rule(degree_bound, 0)?;
        let mut gamma = 0.0;
        for (&y, &w) in rule.nodes().iter().zip(rule.weights()) {
            let t = y.acos();
            gamma += w * kernel_value(q, m, t)? * (1.0 - y * y);
        }
        Ok(Self { q, m, r, gamma, degree_bound })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Degree bound `(q+2)(m-1)` of the produced polynomial.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Kernel normalization `gamma_{q,m}`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Averaged difference multipliers `beta_k` for `k = 0..=n_max`,
    /// computed numerically (no shortcut is taken beyond the degree bound,
    /// so the expected `beta_k = -1` there is measurable, not asserted).
    pub fn multipliers(&self, n_max: usize) -> Result<Vec<f64>> {
        let rule = y_rule(self.degree_bound, n_max)?;
        let legendre = JacobiBasis::shared(0.0, 0.0, n_max + 2)?;
        let jac22 = JacobiBasis::shared(2.0, 2.0, n_max)?;
        let mut acc = vec![0.0; n_max + 1];
        let mut leg_row = vec![0.0; n_max + 3];
        let mut jac_row = vec![0.0; n_max + 1];
        for (&y, &w) in rule.nodes().iter().zip(rule.weights()) {
            let t = y.acos();
            let k = kernel_value(self.q, self.m, t)?;
            let omy2 = 1.0 - y * y;
            let common = w * k * omy2;
            legendre.eval_all(y, &mut leg_row);
            jac22.eval_all(y, &mut jac_row);
            for n in 0..=n_max {
                // Translation eigenvalue of the full operator at y.
                let rn = leg_row[n + 2] + 1.5 * omy2 * jac_row[n];
                acc[n] += common * (rn - 1.0);
            }
        }
        for v in &mut acc {
            *v /= self.gamma;
        }
        Ok(acc)
    }

    /// Coefficient scaling factors `1 - (-beta_k)^r` of the approximant for
    /// `k = 0..=n_max`.
    pub fn coefficient_factors(&self, n_max: usize) -> Result<Vec<f64>> {
        let beta = self.multipliers(n_max)?;
        Ok(beta.iter().map(|&b| 1.0 - (-b).powi(self.r as i32)).collect())
    }

    /// Apply the operator through the spectral route: the approximant
    /// `(-1)^{r+1} Q` as a polynomial of degree at most the bound.
    ///
    /// Spectral inputs use their stored coefficients; pointwise inputs are
    /// first expanded to the degree bound.
    pub fn apply(&self, f: &FunctionHandle) -> Result<SpectralFunction> {
        let d = self.degree_bound;
        let coeffs_in: Vec<f64> = match f.spectral() {
            Some(sf) => {
                let mut c = sf.coeffs().to_vec();
                c.truncate(d + 1);
                c.resize(d + 1, 0.0);
                c
            }
            None => {
                let order = (2 * (d + 1)).max(128);
                let rule = quadrature::gauss_rule(2.0, 2.0, order)?;
                let fh = f.clone();
                let sf = SpectralFunction::analyze(move |x| fh.eval(x), d, &rule)?;
                sf.coeffs().to_vec()
            }
        };
        let factors = self.coefficient_factors(d)?;
        let coeffs: Vec<f64> =
            coeffs_in.iter().zip(&factors).map(|(c, s)| c * s).collect();
        let basis = JacobiBasis::shared(2.0, 2.0, d)?;
        SpectralFunction::from_coeffs(basis, coeffs)
    }

    /// Evaluate the approximant at one point by literal nested quadrature
    /// of the defining integral: a tensor Gauss-Legendre grid in the angles
    /// `t_s` with the generalized difference evaluated by direct kernel
    /// quadrature inside. Supported for `r <= 2`; the cost grows by a
    /// factor of the full tensor grid per extra order.
    pub fn apply_direct(
        &self,
        f: &FunctionHandle,
        x: f64,
        t_order: usize,
        z_order: usize,
    ) -> Result<f64> {
        if self.r > MAX_DIRECT_ORDER {
            return Err(Error::Unsupported(format!(
                "literal quadrature of the order-{} operator is not supported (max {})",
                self.r, MAX_DIRECT_ORDER
            )));
        }
        if t_order < 8 {
            return Err(Error::Range(format!("angle quadrature order {t_order} below minimum 8")));
        }
        let rule = quadrature::gauss_legendre(t_order)?;
        // Map the rule from (-1, 1) onto (0, pi).
        let half_pi = 0.5 * std::f64::consts::PI;
        let ts: Vec<f64> = rule.nodes().iter().map(|&u| half_pi * (u + 1.0)).collect();
        let ws: Vec<f64> = rule.weights().iter().map(|&w| half_pi * w).collect();
        let kw: Vec<f64> = ts
            .iter()
            .map(|&t| kernel_value(self.q, self.m, t).map(|k| k * t.sin().powi(3)))
            .collect::<Result<_>>()?;

        let fx = f.eval(x);
        let sign = if self.r % 2 == 0 { 1.0 } else { -1.0 };
        let mut acc = 0.0;
        let mut idx = vec![0usize; self.r];
        loop {
            let angles: Vec<f64> = idx.iter().map(|&i| ts[i]).collect();
            let diff = smoothness::difference(
                f,
                &angles,
                Backend::Direct { z_order },
            )?;
            let mut contrib = diff.eval(x) - sign * fx;
            for &i in &idx {
                contrib *= ws[i] * kw[i];
            }
            acc += contrib;
            // Advance the tensor multi-index.
            let mut axis = 0;
            loop {
                if axis == self.r {
                    let q_val = acc / self.gamma.powi(self.r as i32);
                    return Ok(-sign * q_val);
                }
                idx[axis] += 1;
                if idx[axis] < ts.len() {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
        }
    }
}

/// Gauss-Legendre rule in `y = cos t` exact for every integrand this module
/// produces: the kernel is a polynomial of degree `d` in `y`, the
/// translation eigenvalues add `n_max + 2`, and `sin^3 t dt = (1 - y^2) dy`
/// adds two more.
fn y_rule(degree_bound: usize, n_max: usize) -> Result<std::sync::Arc<quadrature::QuadratureRule>> {
    let order = (4 * (degree_bound + 4)).max((degree_bound + n_max) / 2 + 8);
    quadrature::gauss_legendre(order)
}

/// Kernel parameters for approximating at rate `n^{-lambda}`: the smallest
/// `q` with `2q > lambda`, and the largest `m` keeping the degree bound
/// below `n`, i.e. `m = floor((n-1)/(q+2)) + 1`.
pub fn choose_parameters(lambda: f64, n: usize) -> Result<(usize, usize)> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("decay rate lambda = {lambda} must be positive")));
    }
    if n == 0 {
        return Err(Error::Domain("degree bound n must be at least 1".into()));
    }
    let q = ((lambda / 2.0).floor() as usize) + 1;
    let m = (n - 1) / (q + 2) + 1;
    Ok((q, m))
}

/// Iterated full-kernel translation average of `f` along the angle grid —
/// exposed for experiments that need the raw smoothing average rather than
/// the polynomial approximant.
pub fn translation_average(
    f: &SpectralFunction,
    y: f64,
    times: usize,
) -> Result<SpectralFunction> {
    let ys = vec![y; times];
    translation::iterated_spectral(f, translation::Variant::Full, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn jack(q: usize, m: usize, r: usize) -> JacksonOperator {
        JacksonOperator::new(q, m, r).unwrap()
    }

    #[test]
    fn kernel_at_zero_is_m_to_the_2q_plus_4() {
        for (q, m) in [(1usize, 2usize), (1, 5), (2, 3), (3, 2)] {
            let expect = (m as f64).powi(2 * (q as i32 + 2));
            assert_abs_diff_eq!(kernel_value(q, m, 0.0).unwrap(), expect, epsilon = 1e-9 * expect);
            // Continuity across the removable singularity.
            let near = kernel_value(q, m, 1e-8).unwrap();
            assert!((near - expect).abs() <= 1e-6 * expect);
        }
    }

    #[test]
    fn kernel_is_nonnegative_on_the_interval() {
        for i in 0..=200 {
            let t = std::f64::consts::PI * i as f64 / 200.0;
            assert!(kernel_value(2, 4, t).unwrap() >= 0.0);
        }
    }

    #[test]
    fn normalization_matches_closed_forms() {
        // m = 1 makes the kernel constant 1, so gamma = int sin^3 = 4/3.
        for q in 1..=3 {
            let op = jack(q, 1, 1);
            assert_abs_diff_eq!(op.gamma(), 4.0 / 3.0, epsilon = 1e-13);
            assert_eq!(op.degree_bound(), 0);
        }
        // q = 1, m = 2: K = (2 cos(t/2))^6, and the beta integral reduces to
        // gamma = 1024 * B(2, 5) = 256/15.
        let op = jack(1, 2, 1);
        assert_abs_diff_eq!(op.gamma(), 256.0 / 15.0, epsilon = 1e-11);
    }

    #[test]
    fn moment_route_reproduces_the_normalization() {
        for (q, m) in [(1usize, 1usize), (1, 4), (2, 3)] {
            let op = jack(q, m, 1);
            let m0 = kernel_moment(q, m, 0).unwrap();
            assert!(
                (m0 - op.gamma()).abs() <= 1e-8 * op.gamma(),
                "moment {m0} vs gamma {}",
                op.gamma()
            );
        }
    }

    #[test]
    fn first_moment_of_the_normalized_kernel_halves_with_m() {
        let q = 1;
        let mu = |m: usize| {
            let op = jack(q, m, 1);
            kernel_moment(q, m, 1).unwrap() / op.gamma()
        };
        let ratio = mu(8) / mu(16);
        assert!((1.6..=2.6).contains(&ratio), "first-moment ratio {ratio}");
    }

    #[test]
    fn multipliers_vanish_at_zero_and_hit_minus_one_beyond_the_bound() {
        let op = jack(1, 3, 1);
        assert_eq!(op.degree_bound(), 6);
        let beta = op.multipliers(16).unwrap();
        assert_abs_diff_eq!(beta[0], 0.0, epsilon = 1e-14);
        for (k, &b) in beta.iter().enumerate() {
            assert!((-2.0 - 1e-12..=1e-12).contains(&b), "beta_{k} = {b} out of range");
            if k > 6 {
                assert_abs_diff_eq!(b, -1.0, epsilon = 1e-12);
            }
        }
        // Inside the bound the multipliers must not all sit at -1.
        assert!(beta[1] > -0.9, "beta_1 = {} should be near 0 for a smoothing kernel", beta[1]);
    }

    #[test]
    fn constants_are_reproduced_exactly() {
        for r in 1..=3 {
            let op = jack(1, 3, r);
            let basis = JacobiBasis::shared(2.0, 2.0, 4).unwrap();
            let f = SpectralFunction::from_coeffs(basis, vec![2.5, 0.0, 0.0, 0.0, 0.0]).unwrap();
            let out = op.apply(&FunctionHandle::Spectral(f)).unwrap();
            assert_abs_diff_eq!(out.coeffs()[0], 2.5, epsilon = 1e-12);
            for &c in &out.coeffs()[1..] {
                assert_abs_diff_eq!(c, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn spectral_application_scales_single_modes() {
        let op = jack(1, 3, 2);
        let factors = op.coefficient_factors(6).unwrap();
        let basis = JacobiBasis::shared(2.0, 2.0, 6).unwrap();
        let mut coeffs = vec![0.0; 7];
        coeffs[4] = -1.25;
        let f = SpectralFunction::from_coeffs(basis, coeffs).unwrap();
        let out = op.apply(&FunctionHandle::Spectral(f)).unwrap();
        assert_abs_diff_eq!(out.coeffs()[4], -1.25 * factors[4], epsilon = 1e-12);
    }

    #[test]
    fn direct_and_spectral_routes_agree() {
        let f = FunctionHandle::from_fn(f64::exp);
        for (m, r) in [(2usize, 1usize), (2, 2), (3, 1)] {
            let op = jack(1, m, r);
            let spectral = op.apply(&f).unwrap();
            for &x in &[-0.9, -0.3, 0.0, 0.5, 0.8] {
                let direct = op.apply_direct(&f, x, 32, 64).unwrap();
                assert!(
                    (direct - spectral.eval(x)).abs() <= 1e-7,
                    "(m, r) = ({m}, {r}), x = {x}: direct {direct} vs spectral {}",
                    spectral.eval(x)
                );
            }
        }
    }

    #[test]
    fn direct_route_rejects_high_orders_and_tiny_grids() {
        let op = jack(1, 2, 3);
        let f = FunctionHandle::from_fn(f64::exp);
        assert!(matches!(op.apply_direct(&f, 0.0, 32, 64), Err(Error::Unsupported(_))));
        let op = jack(1, 2, 1);
        assert!(matches!(op.apply_direct(&f, 0.0, 4, 64), Err(Error::Range(_))));
    }

    #[test]
    fn approximation_error_decreases_with_m() {
        let f = FunctionHandle::from_fn(|x: f64| (1.5 * x).cos());
        let errs: Vec<f64> = [4usize, 8, 16]
            .iter()
            .map(|&m| {
                let out = jack(1, m, 1).apply(&f).unwrap();
                let mut worst = 0.0f64;
                for i in 0..=200 {
                    let x = -1.0 + 2.0 * i as f64 / 200.0;
                    worst = worst.max((f.eval(x) - out.eval(x)).abs());
                }
                worst
            })
            .collect();
        assert!(errs[1] < 0.5 * errs[0], "errors {errs:?}");
        assert!(errs[2] < 0.5 * errs[1], "errors {errs:?}");
    }

    #[test]
    fn parameter_choice_respects_rate_and_degree() {
        assert_eq!(choose_parameters(1.0, 13).unwrap(), (1, 5));
        assert_eq!(choose_parameters(4.5, 13).unwrap(), (3, 3));
        assert_eq!(choose_parameters(0.5, 1).unwrap(), (1, 1));
        for lambda in [0.5, 1.0, 2.0, 3.5] {
            for n in [1usize, 5, 16, 48] {
                let (q, m) = choose_parameters(lambda, n).unwrap();
                assert!(2.0 * q as f64 > lambda);
                assert!((q + 2) * (m - 1) <= n.saturating_sub(1), "degree bound exceeded");
            }
        }
        assert!(matches!(choose_parameters(-1.0, 5), Err(Error::Domain(_))));
        assert!(matches!(choose_parameters(1.0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(JacksonOperator::new(0, 2, 1), Err(Error::Domain(_))));
        assert!(matches!(JacksonOperator::new(1, 0, 1), Err(Error::Domain(_))));
        assert!(matches!(JacksonOperator::new(1, 2, 0), Err(Error::Domain(_))));
        assert!(matches!(JacksonOperator::new(1, 400, 1), Err(Error::Range(_))));
        assert!(matches!(kernel_value(1, 2, 4.0), Err(Error::Domain(_))));
    }
}
