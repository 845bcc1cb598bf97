//! Generalized finite differences and the generalized modulus of smoothness.
//!
//! The difference of order `r` composes the translation family with the
//! identity removed, one independent angle step per level:
//!
//! ```text
//! D_{t}        f = T_{cos t} f - f,
//! D_{t_1..t_r} f = D_{t_r}( D_{t_1..t_{r-1}} f ).
//! ```
//!
//! The modulus of smoothness is the supremum of the weighted norm of that
//! difference over all step vectors in `[0, delta]^r`:
//!
//! ```text
//! omega_r(f, delta) = sup_{|t_j| <= delta} || D_{t_1..t_r} f ||_{p, alpha}.
//! ```
//!
//! Steps are even in each `t_j` (the translation depends on `t` only through
//! `cos t`), so the supremum over `t_j >= 0` loses nothing; the implementation
//! searches a 9-point-per-axis grid on the box and then refines twice around
//! the incumbent with a factor-4 box shrink, keeping the best value seen.
//!
//! Two backends mirror the translation module: spectral (exact multiplier
//! products `prod_j (R_k(cos t_j) - 1)` on the coefficients) and direct
//! (nested quadrature, capped at order 3). [`Backend::Auto`] picks spectral
//! for spectral handles and direct for pointwise handles, so band-limiting is
//! never applied silently to a function that was not given as a series.

use crate::error::{Error, Result};
use crate::jacobi::SpectralFunction;
use crate::quadrature;
use crate::space::{
    validate_window, weighted_norm, FunctionHandle, NormSpec, PExponent, TheoremWindow,
    WindowStatus,
};
use crate::translation::{self, MultiplierTable, Variant, MAX_DIRECT_ORDER};

/// Grid points per axis in each modulus search round.
pub const GRID_POINTS_PER_AXIS: usize = 9;

/// Refinement rounds after the initial full-box scan.
pub const REFINEMENT_ROUNDS: usize = 2;

/// Box-shrink factor between refinement rounds.
const SHRINK: f64 = 4.0;

/// Cap on the automatically scaled norm-quadrature order inside the modulus
/// search. Steps below roughly `4 pi / 4096` are not resolvable and the
/// report carries a warning.
pub const MAX_NORM_QUAD_ORDER: usize = 4096;

/// How a difference (and the modulus built on it) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Backend {
    /// Spectral for spectral handles, direct for pointwise handles.
    Auto,
    /// Band-limit to degree `n_max` (analyzing pointwise handles first) and
    /// apply exact multiplier products.
    Spectral { n_max: usize },
    /// Nested direct quadrature with the given `z` order (order capped at
    /// [`MAX_DIRECT_ORDER`]).
    Direct { z_order: usize },
}

impl Backend {
    fn resolve(self, f: &FunctionHandle) -> Backend {
        match (self, f) {
            (Backend::Auto, FunctionHandle::Spectral(sf)) => {
                Backend::Spectral { n_max: sf.basis().max_degree() }
            }
            (Backend::Auto, FunctionHandle::Pointwise(_)) => {
                Backend::Direct { z_order: translation::DEFAULT_Z_ORDER }
            }
            (other, _) => other,
        }
    }
}

/// Per-degree multipliers of the order-`r` difference: entry `k` is
/// `prod_j (R_k(cos t_j) - 1)`.
pub fn difference_multipliers(ts: &[f64], n_max: usize) -> Result<Vec<f64>> {
    let mut out = vec![1.0; n_max + 1];
    for &t in ts {
        let table = MultiplierTable::shared(t.cos(), n_max)?;
        let full = table.multipliers(Variant::Full);
        for (k, v) in out.iter_mut().enumerate() {
            *v *= full[k] - 1.0;
        }
    }
    Ok(out)
}

fn spectral_difference(sf: &SpectralFunction, ts: &[f64]) -> Result<SpectralFunction> {
    let mult = difference_multipliers(ts, sf.basis().max_degree())?;
    Ok(sf.map_coeffs(|k, c| c * mult[k]))
}

fn direct_difference_value(
    f: &dyn Fn(f64) -> f64,
    ts: &[f64],
    x: f64,
    rule: &quadrature::QuadratureRule,
) -> f64 {
    match ts.split_last() {
        None => f(x),
        Some((&t, rest)) => {
            let inner = |xx: f64| direct_difference_value(f, rest, xx, rule);
            let pi = std::f64::consts::PI;
            let y = t.cos();
            let omx2 = 1.0 - x * x;
            let omy2 = 1.0 - y * y;
            let up = omx2.max(0.0).sqrt();
            let vp = omy2.max(0.0).sqrt();
            let mut acc = 0.0;
            for (&z, &w) in rule.nodes().iter().zip(rule.weights()) {
                let omz2 = 1.0 - z * z;
                let r = x * y - z * up * vp;
                let kernel = (1.0 - r * r - 2.0 * omy2 * omz2) / (pi * omx2)
                    + 4.0 / pi * omy2 * omz2 * omz2;
                acc += w * kernel * inner(r);
            }
            acc - inner(x)
        }
    }
}

/// Form the generalized difference `D_{t_1..t_r} f` as a new function handle.
///
/// The spectral path returns a spectral handle (exact for band-limited `f`);
/// the direct path returns a pointwise handle wrapping nested quadrature,
/// valid strictly inside `(-1, 1)`.
pub fn difference(f: &FunctionHandle, ts: &[f64], backend: Backend) -> Result<FunctionHandle> {
    if ts.is_empty() {
        return Err(Error::Domain("difference order r must be at least 1".into()));
    }
    match backend.resolve(f) {
        Backend::Auto => unreachable!("resolve never returns Auto"),
        Backend::Spectral { n_max } => {
            let sf = match f {
                FunctionHandle::Spectral(sf) if sf.basis().max_degree() == n_max => sf.clone(),
                _ => {
                    let order = (2 * n_max).max(128);
                    let rule = quadrature::gauss_rule(2.0, 2.0, order)?;
                    let fh = f.clone();
                    SpectralFunction::analyze(move |x| fh.eval(x), n_max, &rule)?
                }
            };
            Ok(FunctionHandle::Spectral(spectral_difference(&sf, ts)?))
        }
        Backend::Direct { z_order } => {
            if ts.len() > MAX_DIRECT_ORDER {
                return Err(Error::Unsupported(format!(
                    "direct-backend difference of order {} exceeds the cap {MAX_DIRECT_ORDER}; \
                     use the spectral backend",
                    ts.len()
                )));
            }
            if z_order < translation::MIN_Z_ORDER {
                return Err(Error::Range(format!(
                    "z quadrature order {z_order} below the minimum {}",
                    translation::MIN_Z_ORDER
                )));
            }
            let rule = quadrature::chebyshev_gauss(z_order)?;
            let fh = f.clone();
            let ts: Vec<f64> = ts.to_vec();
            Ok(FunctionHandle::from_fn(move |x| {
                direct_difference_value(&|s| fh.eval(s), &ts, x, &rule)
            }))
        }
    }
}

/// Result of a modulus-of-smoothness search.
#[derive(Debug, Clone)]
pub struct ModulusReport {
    /// Difference order.
    pub r: usize,
    /// Step bound `delta`.
    pub delta: f64,
    /// The modulus value: the largest weighted norm found.
    pub value: f64,
    /// The step vector attaining it (on ties, the first in the
    /// deterministic lexicographic sweep order is kept).
    pub argmax: Vec<f64>,
    /// Number of step vectors whose norm was evaluated.
    pub points_evaluated: usize,
    /// Non-fatal notes, e.g. `(p, alpha)` outside the translation-boundedness
    /// window.
    pub warnings: Vec<String>,
}

fn axis_grid(lo: f64, hi: f64) -> Vec<f64> {
    let m = GRID_POINTS_PER_AXIS;
    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
}

/// Compute the generalized modulus of smoothness `omega_r(f, delta)` in the
/// norm described by `spec`.
///
/// The search scans `[0, min(delta, pi)]^r` on a 9-point-per-axis grid, then
/// runs [`REFINEMENT_ROUNDS`] refinement rounds with a factor-4 box shrink
/// centered on the incumbent (clipped to the original box), keeping the best
/// value seen. Ties prefer the lexicographically smallest step vector, so the
/// result is deterministic.
pub fn modulus(
    f: &FunctionHandle,
    r: usize,
    delta: f64,
    spec: &NormSpec,
    backend: Backend,
) -> Result<ModulusReport> {
    if r == 0 {
        return Err(Error::Domain("modulus order r must be at least 1".into()));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("delta must be positive and finite, got {delta}")));
    }
    let mut warnings = Vec::new();
    if let WindowStatus::Outside(reason) = validate_window(spec.p(), spec.alpha(), TheoremWindow::Inverse)
    {
        warnings.push(format!(
            "translation boundedness is not guaranteed here ({reason}); \
             modulus values may not be stable"
        ));
    }
    let resolved = backend.resolve(f);

    // Pre-resolve the difference input once so repeated step vectors do not
    // re-analyze a pointwise handle.
    let base: FunctionHandle = match resolved {
        Backend::Spectral { n_max } => match f {
            FunctionHandle::Spectral(sf) if sf.basis().max_degree() == n_max => f.clone(),
            _ => {
                let order = (2 * n_max).max(128);
                let rule = quadrature::gauss_rule(2.0, 2.0, order)?;
                let fh = f.clone();
                FunctionHandle::Spectral(SpectralFunction::analyze(
                    move |x| fh.eval(x),
                    n_max,
                    &rule,
                )?)
            }
        },
        _ => f.clone(),
    };

    let hi = delta.min(std::f64::consts::PI);

    // A difference with step t concentrates around any kink of `f` in a zone
    // of width ~t, while the Gauss nodes of the finite-p norm rule are
    // spaced ~pi/N near the center of the interval: the rule must grow like
    // 1/delta or it integrates past the zone and underestimates the modulus.
    // Orders are rounded up to multiples of 64 to keep the rule cache small.
    // A spectral backend band-limits the difference instead, so its
    // resolution scale is the degree, not the step.
    let norm_spec = match (spec.p(), resolved) {
        (PExponent::Finite(_), Backend::Spectral { n_max }) => {
            let needed = 2 * n_max;
            if needed > spec.quad_order() {
                spec.clone().with_quad_order(needed)?
            } else {
                spec.clone()
            }
        }
        (PExponent::Finite(_), _) => {
            let raw = (4.0 * std::f64::consts::PI / hi).ceil() as usize;
            let mut needed = raw.div_ceil(64) * 64;
            if needed > MAX_NORM_QUAD_ORDER {
                warnings.push(format!(
                    "step {delta:.3e} is below the resolvable scale of the norm \
                     quadrature (order capped at {MAX_NORM_QUAD_ORDER})"
                ));
                needed = MAX_NORM_QUAD_ORDER;
            }
            if needed > spec.quad_order() {
                spec.clone().with_quad_order(needed)?
            } else {
                spec.clone()
            }
        }
        (PExponent::Infinity, _) => spec.clone(),
    };

    let mut best_value = f64::NEG_INFINITY;
    let mut best_t = vec![0.0; r];
    let mut evaluated = 0usize;

    let evaluate = |ts: &[f64]| -> Result<f64> {
        let diff = difference(&base, ts, resolved)?;
        weighted_norm(&diff, &norm_spec)
    };

    let mut centers = vec![0.0; r];
    let mut width = hi;
    for round in 0..=REFINEMENT_ROUNDS {
        let axes: Vec<Vec<f64>> = (0..r)
            .map(|j| {
                if round == 0 {
                    axis_grid(0.0, hi)
                } else {
                    let half = width / 2.0;
                    let lo = (centers[j] - half).max(0.0);
                    let hi_j = (centers[j] + half).min(hi);
                    axis_grid(lo, hi_j)
                }
            })
            .collect();
        // Lexicographic sweep of the tensor grid.
        let mut idx = vec![0usize; r];
        loop {
            let ts: Vec<f64> = (0..r).map(|j| axes[j][idx[j]]).collect();
            let v = evaluate(&ts)?;
            evaluated += 1;
            if v > best_value {
                best_value = v;
                best_t = ts;
            }
            // Advance the multi-index, last axis fastest.
            let mut j = r;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < axes[j].len() {
                    break;
                }
                idx[j] = 0;
                if j == 0 {
                    break;
                }
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
        centers.copy_from_slice(&best_t);
        width /= SHRINK;
    }

    Ok(ModulusReport {
        r,
        delta,
        value: best_value,
        argmax: best_t,
        points_evaluated: evaluated,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::JacobiBasis;
    use crate::space::PExponent;
    use approx::assert_abs_diff_eq;

    fn spectral_from(coeffs: Vec<f64>) -> FunctionHandle {
        let basis = JacobiBasis::shared(2.0, 2.0, coeffs.len() - 1).unwrap();
        FunctionHandle::Spectral(SpectralFunction::from_coeffs(basis, coeffs).unwrap())
    }

    fn norm22(alpha: f64) -> NormSpec {
        NormSpec::new(PExponent::finite(2.0).unwrap(), alpha).unwrap()
    }

    #[test]
    fn difference_of_a_constant_vanishes() {
        let c = spectral_from(vec![3.5]);
        let d = difference(&c, &[0.7], Backend::Auto).unwrap();
        assert!(d.eval(0.3).abs() <= 1e-13);
        let cp = FunctionHandle::from_fn(|_| 3.5);
        let dd = difference(&cp, &[0.7], Backend::Auto).unwrap();
        assert!(dd.eval(0.3).abs() <= 1e-13);
        let w = modulus(&c, 1, 0.9, &norm22(1.0), Backend::Auto).unwrap();
        assert!(w.value <= 1e-12);
    }

    #[test]
    fn spectral_difference_scales_by_multiplier_minus_one() {
        let mut coeffs = vec![0.0; 9];
        coeffs[4] = 2.0;
        let f = spectral_from(coeffs);
        let t = 0.8f64;
        let d = difference(&f, &[t], Backend::Auto).unwrap();
        let table = MultiplierTable::shared(t.cos(), 8).unwrap();
        let expect = 2.0 * (table.multipliers(Variant::Full)[4] - 1.0);
        match d {
            FunctionHandle::Spectral(sf) => {
                assert_abs_diff_eq!(sf.coeffs()[4], expect, epsilon = 1e-14);
                for (k, c) in sf.coeffs().iter().enumerate() {
                    if k != 4 {
                        assert_eq!(*c, 0.0);
                    }
                }
            }
            FunctionHandle::Pointwise(_) => panic!("expected spectral difference"),
        }
    }

    #[test]
    fn direct_and_spectral_differences_agree_for_exp() {
        let rule = quadrature::gauss_rule(2.0, 2.0, 96).unwrap();
        let sf = FunctionHandle::Spectral(
            SpectralFunction::analyze(f64::exp, 48, &rule).unwrap(),
        );
        let pw = FunctionHandle::from_fn(f64::exp);
        for ts in [vec![0.6], vec![0.9, 0.35]] {
            let ds = difference(&sf, &ts, Backend::Auto).unwrap();
            let dd = difference(&pw, &ts, Backend::Auto).unwrap();
            for &x in &[-0.85, -0.3, 0.2, 0.75] {
                assert_abs_diff_eq!(ds.eval(x), dd.eval(x), epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn modulus_of_the_degree_one_polynomial_follows_the_cosine_cube_law() {
        // D_t applied to the degree-1 basis polynomial x gives
        // x (cos^3 t - 1), whose unweighted sup norm is 1 - cos^3 t,
        // increasing in t; hence omega_1(delta) = 1 - cos^3(delta).
        let f = spectral_from(vec![0.0, 1.0]);
        let spec = NormSpec::new(PExponent::Infinity, 0.0).unwrap();
        for &delta in &[0.2f64, 0.7, 1.5] {
            let w = modulus(&f, 1, delta, &spec, Backend::Auto).unwrap();
            let law = 1.0 - delta.cos().powi(3);
            assert_abs_diff_eq!(w.value, law, epsilon = 1e-4);
            assert!(w.value <= law + 1e-12, "sup-grid modulus cannot overshoot");
            assert_abs_diff_eq!(w.argmax[0], delta, epsilon = 1e-12);
        }
    }

    #[test]
    fn modulus_is_monotone_in_delta() {
        let rule = quadrature::gauss_rule(2.0, 2.0, 96).unwrap();
        let f = FunctionHandle::Spectral(
            SpectralFunction::analyze(f64::exp, 48, &rule).unwrap(),
        );
        let spec = norm22(1.0);
        let mut prev = 0.0;
        for &delta in &[0.15f64, 0.3, 0.6, 1.2] {
            let w = modulus(&f, 1, delta, &spec, Backend::Auto).unwrap();
            assert!(
                w.value + 1e-12 >= prev,
                "modulus decreased: {} after {prev}",
                w.value
            );
            prev = w.value;
        }
    }

    #[test]
    fn refinement_locates_an_interior_maximum() {
        // A single high mode: the objective |R_k(cos t) - 1| peaks strictly
        // inside [0, pi] for delta = pi, so refinement must move off the
        // coarse grid.
        let mut coeffs = vec![0.0; 7];
        coeffs[6] = 1.0;
        let f = spectral_from(coeffs);
        let spec = norm22(1.0);
        let w = modulus(&f, 1, std::f64::consts::PI, &spec, Backend::Auto).unwrap();
        assert!(w.argmax[0] > 0.0 && w.argmax[0] < std::f64::consts::PI);
        // The incumbent must beat every coarse grid value strictly inside.
        for i in 0..GRID_POINTS_PER_AXIS {
            let t = std::f64::consts::PI * i as f64 / (GRID_POINTS_PER_AXIS - 1) as f64;
            let d = difference(&f, &[t], Backend::Auto).unwrap();
            let v = weighted_norm(&d, &spec).unwrap();
            assert!(w.value + 1e-15 >= v);
        }
        assert_eq!(w.points_evaluated, 27);
    }

    #[test]
    fn out_of_window_parameters_warn_but_compute() {
        let f = spectral_from(vec![0.0, 1.0, 0.5]);
        let w = modulus(&f, 1, 0.5, &norm22(0.0), Backend::Auto).unwrap();
        assert!(!w.warnings.is_empty());
        assert!(w.value.is_finite());
        let ok = modulus(&f, 1, 0.5, &norm22(1.0), Backend::Auto).unwrap();
        assert!(ok.warnings.is_empty());
    }

    #[test]
    fn argument_validation() {
        let f = spectral_from(vec![0.0, 1.0]);
        assert!(matches!(
            modulus(&f, 0, 0.5, &norm22(1.0), Backend::Auto),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            modulus(&f, 1, 0.0, &norm22(1.0), Backend::Auto),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            difference(&f, &[], Backend::Auto),
            Err(Error::Domain(_))
        ));
        let pw = FunctionHandle::from_fn(f64::exp);
        assert!(matches!(
            difference(&pw, &[0.1, 0.2, 0.3, 0.4], Backend::Auto),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn pointwise_handles_default_to_the_direct_backend() {
        let pw = FunctionHandle::from_fn(|x: f64| x * x);
        let d = difference(&pw, &[0.5], Backend::Auto).unwrap();
        assert!(matches!(d, FunctionHandle::Pointwise(_)));
        // Explicit spectral backend on a pointwise handle band-limits first.
        let ds = difference(&pw, &[0.5], Backend::Spectral { n_max: 16 }).unwrap();
        assert!(matches!(ds, FunctionHandle::Spectral(_)));
        for &x in &[-0.6, 0.1, 0.8] {
            assert_abs_diff_eq!(d.eval(x), ds.eval(x), epsilon = 1e-10);
        }
    }
}
