//! Weighted Lebesgue norms `||f||_{p,alpha} = || f(x) (1-x^2)^alpha ||_p`
//! on `(-1, 1)`, and the parameter windows in which the direct and inverse
//! approximation theorems are valid.
//!
//! Finite-`p` norms are computed with a Gauss-Jacobi rule whose weight
//! exponents are `(p alpha, p alpha)`, so the quadrature weight *is* the
//! norm weight and the integrand reduces to `|f|^p`. The `p = infinity`
//! norm is the maximum of `|f(x)| (1-x^2)^alpha` over a Chebyshev-distributed
//! grid that approaches, but never touches, the endpoints.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jacobi::SpectralFunction;
use crate::quadrature;

/// The integrability exponent `p` in `[1, infinity]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    /// Finite `p >= 1`.
    Finite(f64),
    /// The essential-supremum norm.
    Infinity,
}

impl PExponent {
    /// Parse `"inf"`/`"infinity"` or a finite number.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "oo" => Ok(PExponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Usage(format!("cannot parse p from {text:?}")))?;
                PExponent::finite(p)
            }
        }
    }

    /// A finite exponent, validated to be `>= 1`.
    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::Domain(format!("p must satisfy 1 <= p < infinity, got {p}")));
        }
        Ok(PExponent::Finite(p))
    }

    /// `1/p`, with `1/infinity = 0`.
    pub fn reciprocal(&self) -> f64 {
        match self {
            PExponent::Finite(p) => 1.0 / p,
            PExponent::Infinity => 0.0,
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Specification of a weighted norm `|| f (1-x^2)^alpha ||_p`, together with
/// the discretization used to evaluate it.
#[derive(Debug, Clone)]
pub struct NormSpec {
    p: PExponent,
    alpha: f64,
    quad_order: usize,
    sup_grid: usize,
}

impl NormSpec {
    /// Create a norm with the default discretization (128-point quadrature
    /// for finite `p`, 4097-point sup-grid for `p = infinity`).
    pub fn new(p: PExponent, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
        }
        if let PExponent::Finite(pf) = p {
            if pf * alpha <= -1.0 {
                return Err(Error::Domain(format!(
                    "p * alpha = {} <= -1: the weight (1-x^2)^(p alpha) is not integrable",
                    pf * alpha
                )));
            }
        }
        Ok(NormSpec { p, alpha, quad_order: 128, sup_grid: 4097 })
    }

    /// Override the quadrature order used for finite `p` (minimum 32).
    pub fn with_quad_order(mut self, order: usize) -> Result<Self> {
        if order < 32 {
            return Err(Error::Range(format!("quadrature order {order} below minimum 32")));
        }
        self.quad_order = order;
        Ok(self)
    }

    /// Override the sup-grid size used for `p = infinity` (minimum 257).
    pub fn with_sup_grid(mut self, size: usize) -> Result<Self> {
        if size < 257 {
            return Err(Error::Range(format!("sup-grid size {size} below minimum 257")));
        }
        self.sup_grid = size;
        Ok(self)
    }

    pub fn p(&self) -> PExponent {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }

    pub fn sup_grid(&self) -> usize {
        self.sup_grid
    }
}

/// A function on `(-1, 1)`: either an opaque pointwise evaluator or a
/// spectral representation (which operators can treat exactly).
#[derive(Clone)]
pub enum FunctionHandle {
    /// Pointwise evaluator.
    Pointwise(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Finite Fourier-Jacobi expansion in the `(2, 2)` basis.
    Spectral(SpectralFunction),
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionHandle::Pointwise(_) => f.write_str("FunctionHandle::Pointwise"),
            FunctionHandle::Spectral(sf) => {
                write!(f, "FunctionHandle::Spectral(degree {})", sf.degree())
            }
        }
    }
}

impl FunctionHandle {
    /// Wrap a closure.
    pub fn from_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        FunctionHandle::Pointwise(Arc::new(f))
    }

    /// Wrap a spectral representation.
    pub fn from_spectral(sf: SpectralFunction) -> Self {
        FunctionHandle::Spectral(sf)
    }

    /// Evaluate at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FunctionHandle::Pointwise(f) => f(x),
            FunctionHandle::Spectral(sf) => sf.eval(x),
        }
    }

    /// The spectral representation, if this handle carries one.
    pub fn spectral(&self) -> Option<&SpectralFunction> {
        match self {
            FunctionHandle::Spectral(sf) => Some(sf),
            FunctionHandle::Pointwise(_) => None,
        }
    }
}

/// Chebyshev-distributed grid of `m` points strictly inside `(-1, 1)`,
/// ascending: `x_i = cos(pi i / (m+1))`, `i = m..1`.
pub fn chebyshev_grid(m: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    (1..=m)
        .rev()
        .map(|i| (pi * i as f64 / (m + 1) as f64).cos())
        .collect()
}

/// Compute `|| f (1-x^2)^alpha ||_p` according to `spec`.
pub fn weighted_norm(f: &FunctionHandle, spec: &NormSpec) -> Result<f64> {
    match spec.p {
        PExponent::Finite(p) => {
            let rule = quadrature::gauss_rule(p * spec.alpha, p * spec.alpha, spec.quad_order)?;
            let mut acc = 0.0;
            for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                let v = f.eval(*x);
                if v.is_nan() {
                    return Err(Error::Domain(format!("function evaluated to NaN at x = {x}")));
                }
                let av = v.abs();
                acc += w
                    * if p == 2.0 {
                        av * av
                    } else if p == 1.0 {
                        av
                    } else {
                        av.powf(p)
                    };
            }
            Ok(acc.powf(1.0 / p))
        }
        PExponent::Infinity => {
            let mut best = 0.0f64;
            let pi = std::f64::consts::PI;
            let m = spec.sup_grid;
            for i in 1..=m {
                let x = (pi * i as f64 / (m + 1) as f64).cos();
                let v = f.eval(x);
                if v.is_nan() {
                    return Err(Error::Domain(format!("function evaluated to NaN at x = {x}")));
                }
                let w = if spec.alpha == 0.0 {
                    1.0
                } else if spec.alpha == 1.0 {
                    1.0 - x * x
                } else {
                    (1.0 - x * x).powf(spec.alpha)
                };
                let val = v.abs() * w;
                if val > best {
                    best = val;
                }
            }
            Ok(best)
        }
    }
}

/// Which theorem's parameter window to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremWindow {
    /// The direct (Jackson-type) estimate: `alpha <= 2` for `p = 1`,
    /// `alpha < 3 - 1/p` for `1 < p <= infinity`.
    Direct,
    /// The inverse estimate and the boundedness of the translation
    /// operators: `1/2 < alpha <= 1` for `p = 1`,
    /// `1 - 1/(2p) < alpha < 3/2 - 1/(2p)` for `1 < p < infinity`,
    /// `1 <= alpha < 3/2` for `p = infinity`.
    Inverse,
}

/// Result of a window check: rejection carries a human-readable reason and
/// is a value, not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowStatus {
    InWindow,
    Outside(String),
}

impl WindowStatus {
    pub fn is_in_window(&self) -> bool {
        matches!(self, WindowStatus::InWindow)
    }
}

/// Check whether `(p, alpha)` lies in the stated theorem window.
pub fn validate_window(p: PExponent, alpha: f64, window: TheoremWindow) -> WindowStatus {
    let reject = |lo: &str| WindowStatus::Outside(lo.to_string());
    match window {
        TheoremWindow::Direct => match p {
            PExponent::Finite(pf) if pf == 1.0 => {
                if alpha <= 2.0 {
                    WindowStatus::InWindow
                } else {
                    reject(&format!("direct window for p = 1 requires alpha <= 2, got {alpha}"))
                }
            }
            PExponent::Finite(pf) => {
                let hi = 3.0 - 1.0 / pf;
                if alpha < hi {
                    WindowStatus::InWindow
                } else {
                    reject(&format!(
                        "direct window for p = {pf} requires alpha < {hi}, got {alpha}"
                    ))
                }
            }
            PExponent::Infinity => {
                if alpha < 3.0 {
                    WindowStatus::InWindow
                } else {
                    reject(&format!(
                        "direct window for p = infinity requires alpha < 3, got {alpha}"
                    ))
                }
            }
        },
        TheoremWindow::Inverse => match p {
            PExponent::Finite(pf) if pf == 1.0 => {
                if 0.5 < alpha && alpha <= 1.0 {
                    WindowStatus::InWindow
                } else {
                    reject(&format!(
                        "inverse window for p = 1 requires 1/2 < alpha <= 1, got {alpha}"
                    ))
                }
            }
            PExponent::Finite(pf) => {
                let lo = 1.0 - 1.0 / (2.0 * pf);
                let hi = 1.5 - 1.0 / (2.0 * pf);
                if lo < alpha && alpha < hi {
                    WindowStatus::InWindow
                } else {
                    reject(&format!(
                        "inverse window for p = {pf} requires {lo} < alpha < {hi}, got {alpha}"
                    ))
                }
            }
            PExponent::Infinity => {
                if (1.0..1.5).contains(&alpha) {
                    WindowStatus::InWindow
                } else {
                    reject(&format!(
                        "inverse window for p = infinity requires 1 <= alpha < 3/2, got {alpha}"
                    ))
                }
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn one() -> FunctionHandle {
        FunctionHandle::from_fn(|_| 1.0)
    }

    fn ident() -> FunctionHandle {
        FunctionHandle::from_fn(|x| x)
    }

    #[test]
    fn l2_norm_of_constants() {
        let spec = NormSpec::new(PExponent::finite(2.0).unwrap(), 0.0).unwrap();
        assert_abs_diff_eq!(
            weighted_norm(&one(), &spec).unwrap(),
            2.0f64.sqrt(),
            epsilon = 1e-13
        );
        let spec = NormSpec::new(PExponent::finite(2.0).unwrap(), 1.0).unwrap();
        assert_abs_diff_eq!(
            weighted_norm(&one(), &spec).unwrap(),
            (16.0 / 15.0f64).sqrt(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn sup_norm_of_identity_close_to_one() {
        let spec = NormSpec::new(PExponent::Infinity, 0.0).unwrap();
        let norm = weighted_norm(&ident(), &spec).unwrap();
        assert!((norm - 1.0).abs() <= 1e-6, "norm = {norm}");
        assert!(norm < 1.0, "sup grid must not touch the endpoints");
    }

    #[test]
    fn homogeneity_and_triangle_inequality() {
        let f = FunctionHandle::from_fn(f64::exp);
        let g = FunctionHandle::from_fn(|x: f64| (3.0 * x).sin());
        let sum = FunctionHandle::from_fn(|x: f64| x.exp() + (3.0 * x).sin());
        let scaled = FunctionHandle::from_fn(|x: f64| -2.5 * x.exp());
        for spec in [
            NormSpec::new(PExponent::finite(2.0).unwrap(), 1.0).unwrap(),
            NormSpec::new(PExponent::finite(1.0).unwrap(), 0.7).unwrap(),
            NormSpec::new(PExponent::finite(3.5).unwrap(), 0.4).unwrap(),
            NormSpec::new(PExponent::Infinity, 1.0).unwrap(),
        ] {
            let nf = weighted_norm(&f, &spec).unwrap();
            let ng = weighted_norm(&g, &spec).unwrap();
            let nsum = weighted_norm(&sum, &spec).unwrap();
            let nscaled = weighted_norm(&scaled, &spec).unwrap();
            assert!((nscaled - 2.5 * nf).abs() <= 1e-12 * nscaled);
            assert!(nsum <= nf + ng + 1e-10);
        }
    }

    #[test]
    fn sup_norm_monotone_in_alpha_on_the_same_grid() {
        let f = FunctionHandle::from_fn(f64::exp);
        let lo = NormSpec::new(PExponent::Infinity, 0.5).unwrap();
        let hi = NormSpec::new(PExponent::Infinity, 1.0).unwrap();
        assert!(weighted_norm(&f, &hi).unwrap() <= weighted_norm(&f, &lo).unwrap());
    }

    #[test]
    fn sup_norm_stable_under_grid_refinement() {
        let f = FunctionHandle::from_fn(f64::exp);
        let coarse = NormSpec::new(PExponent::Infinity, 1.0).unwrap();
        let fine = coarse.clone().with_sup_grid(8193).unwrap();
        let a = weighted_norm(&f, &coarse).unwrap();
        let b = weighted_norm(&f, &fine).unwrap();
        assert!((a - b).abs() <= 1e-6 * b, "coarse {a} vs fine {b}");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(PExponent::finite(0.5), Err(Error::Domain(_))));
        assert!(matches!(
            NormSpec::new(PExponent::finite(2.0).unwrap(), -0.6),
            Err(Error::Domain(_))
        ));
        let spec = NormSpec::new(PExponent::finite(2.0).unwrap(), 1.0).unwrap();
        assert!(matches!(spec.clone().with_quad_order(8), Err(Error::Range(_))));
        assert!(matches!(spec.with_sup_grid(100), Err(Error::Range(_))));
    }

    #[test]
    fn window_checks_match_the_stated_intervals() {
        use PExponent::Infinity;
        let p2 = PExponent::finite(2.0).unwrap();
        let p1 = PExponent::finite(1.0).unwrap();
        assert!(validate_window(p2, 1.0, TheoremWindow::Inverse).is_in_window());
        assert!(!validate_window(Infinity, 0.5, TheoremWindow::Inverse).is_in_window());
        assert!(validate_window(Infinity, 1.0, TheoremWindow::Inverse).is_in_window());
        assert!(!validate_window(Infinity, 1.5, TheoremWindow::Inverse).is_in_window());
        assert!(validate_window(p1, 0.6, TheoremWindow::Inverse).is_in_window());
        assert!(!validate_window(p1, 0.5, TheoremWindow::Inverse).is_in_window());
        assert!(!validate_window(p2, 2.6, TheoremWindow::Direct).is_in_window());
        assert!(validate_window(p2, 2.4, TheoremWindow::Direct).is_in_window());
        assert!(validate_window(p1, 2.0, TheoremWindow::Direct).is_in_window());
        assert!(!validate_window(p1, 2.1, TheoremWindow::Direct).is_in_window());
        assert!(validate_window(Infinity, 2.9, TheoremWindow::Direct).is_in_window());
        assert!(!validate_window(Infinity, 3.0, TheoremWindow::Direct).is_in_window());
    }

    #[test]
    fn chebyshev_grid_is_ascending_and_interior() {
        let grid = chebyshev_grid(257);
        assert_eq!(grid.len(), 257);
        for w in grid.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(grid[0] > -1.0 && grid[256] < 1.0);
    }
}
