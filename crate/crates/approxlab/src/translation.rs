//! Generalized translation operators on `[-1, 1]`.
//!
//! The central object is the asymmetric generalized translation
//!
//! ```text
//! T_y(f, x) = 1/(pi (1-x^2)) * Integral_{-1}^{1} W(x, y, z) f(R) dz/sqrt(1-z^2),
//! R = x y - z sqrt(1-x^2) sqrt(1-y^2),
//! W = 1 - R^2 - 2(1-y^2)(1-z^2) + 4(1-x^2)(1-y^2)(1-z^2)^2,
//! ```
//!
//! together with two auxiliary operators sharing the same orbit `R`:
//! `T_{1;y}` drops the last kernel term, and `T_{2;y}` uses the plain kernel
//! `(8/(3 pi)) (1-z^2)^2` without the `1/(1-x^2)` prefactor. The kernels
//! decompose pointwise so that `T_y = T_{1;y} + (3/2)(1-y^2) T_{2;y}` holds
//! exactly, which ties the three eigenvalue families together.
//!
//! All three operators are diagonal in the Jacobi `(2,2)` basis normalized at
//! `x = 1`: `T_{2;y}` has eigenvalues `P_k(y)` (the basis itself), `T_{1;y}`
//! has eigenvalues `Ptilde_k(y)`, and the full operator has
//! `R_k(y) = Ptilde_k(y) + (3/2)(1-y^2) P_k(y)`, with `R_0 = 1` and
//! `R_1(y) = y^3`. [`MultiplierTable`] computes all three eigenvalue families
//! by quadrature (never from assumed closed forms), which the tests then pin
//! against the known anchors.
//!
//! Two evaluation backends are provided: a direct quadrature backend
//! ([`translate_direct`], [`iterated_direct`]) that works for arbitrary
//! pointwise functions, and a spectral multiplier backend
//! ([`translate_spectral`]) that is exact for band-limited functions.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use crate::error::{Error, Result};
use crate::jacobi::{JacobiBasis, SpectralFunction};
use crate::quadrature::{self, QuadratureRule};

/// Which member of the translation family to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// The full translation `T_y` (eigenvalues `R_k(y)`).
    Full,
    /// The first auxiliary operator `T_{1;y}` (eigenvalues `Ptilde_k(y)`).
    Aux1,
    /// The second auxiliary operator `T_{2;y}` (eigenvalues `P_k(y)`).
    Aux2,
}

impl Variant {
    /// Stable lowercase label used in reports and CLI arguments.
    pub fn label(&self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::Aux1 => "aux1",
            Variant::Aux2 => "aux2",
        }
    }

    /// Parse a label produced by [`Variant::label`].
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "full" | "t" => Ok(Variant::Full),
            "aux1" | "t1" => Ok(Variant::Aux1),
            "aux2" | "t2" => Ok(Variant::Aux2),
            other => Err(Error::Usage(format!(
                "unknown translation variant {other:?} (expected full, aux1, or aux2)"
            ))),
        }
    }
}

/// Default and minimum number of Chebyshev-Gauss nodes for the direct
/// backend's `z` integral. The integrand is a polynomial in `z` of degree
/// `k + 4` when `f` is a degree-`k` polynomial, so 64 nodes integrate every
/// band-limited case of interest exactly.
pub const DEFAULT_Z_ORDER: usize = 64;

/// Minimum accepted `z` order for the direct backend.
pub const MIN_Z_ORDER: usize = 64;

/// Deepest direct-backend nesting; beyond this the cost grows as
/// `z_order^r` and the spectral backend must be used.
pub const MAX_DIRECT_ORDER: usize = 3;

/// Endpoint margin used by experiment drivers when building evaluation grids
/// for the direct backend: the kernel division by `1 - x^2` amplifies
/// catastrophic cancellation as `|x| -> 1`, so grids stay inside
/// `|x| <= 1 - ENDPOINT_MARGIN`.
pub const ENDPOINT_MARGIN: f64 = 1e-6;

/// The orbit point `R = x y - z sqrt(1-x^2) sqrt(1-y^2)`.
///
/// By the elementary square identities
/// `1 - R^2 = (x sqrt(1-y^2) + y z sqrt(1-x^2))^2 + (1-x^2)(1-z^2)`
/// and its `x <-> y` mirror, `R` always stays in `[-1, 1]`.
pub fn orbit(x: f64, y: f64, z: f64) -> f64 {
    x * y - z * (1.0 - x * x).max(0.0).sqrt() * (1.0 - y * y).max(0.0).sqrt()
}

fn validate_y(y: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!("translation parameter y = {y} outside [-1, 1]")));
    }
    Ok(())
}

fn validate_x(variant: Variant, x: f64) -> Result<()> {
    match variant {
        Variant::Aux2 => {
            if !(-1.0..=1.0).contains(&x) {
                return Err(Error::Domain(format!("evaluation point x = {x} outside [-1, 1]")));
            }
        }
        Variant::Full | Variant::Aux1 => {
            if !(x > -1.0 && x < 1.0) {
                return Err(Error::Domain(format!(
                    "evaluation point x = {x} outside (-1, 1): the {} kernel divides by 1 - x^2",
                    variant.label()
                )));
            }
        }
    }
    Ok(())
}

fn validate_z_order(z_order: usize) -> Result<()> {
    if z_order < MIN_Z_ORDER {
        return Err(Error::Range(format!(
            "z quadrature order {z_order} below the minimum {MIN_Z_ORDER}"
        )));
    }
    Ok(())
}

/// Kernel density of the requested operator with respect to the Chebyshev
/// measure `dz/sqrt(1-z^2)`, i.e. the factor multiplying `f(R)` under the
/// integral.
///
/// `Full` and `Aux1` require `|x| < 1`; `Aux2` has no `x` singularity.
pub fn kernel_weight(variant: Variant, x: f64, y: f64, z: f64) -> Result<f64> {
    validate_y(y)?;
    validate_x(variant, x)?;
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!("kernel variable z = {z} outside [-1, 1]")));
    }
    Ok(kernel_weight_unchecked(variant, x, y, z))
}

#[inline]
fn kernel_weight_unchecked(variant: Variant, x: f64, y: f64, z: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let omz2 = 1.0 - z * z;
    match variant {
        Variant::Aux2 => 8.0 / (3.0 * pi) * omz2 * omz2,
        Variant::Full | Variant::Aux1 => {
            let omx2 = 1.0 - x * x;
            let omy2 = 1.0 - y * y;
            let r = orbit(x, y, z);
            let mut num = 1.0 - r * r - 2.0 * omy2 * omz2;
            if variant == Variant::Full {
                num += 4.0 * omx2 * omy2 * omz2 * omz2;
            }
            num / (pi * omx2)
        }
    }
}

/// Sum the kernel quadrature for one operator application. The rule must be
/// a Chebyshev-Gauss rule (its weights absorb `dz/sqrt(1-z^2)`).
fn kernel_sum(f: &dyn Fn(f64) -> f64, variant: Variant, y: f64, x: f64, rule: &QuadratureRule) -> f64 {
    let mut acc = 0.0;
    for (z, w) in rule.nodes().iter().zip(rule.weights()) {
        acc += w * kernel_weight_unchecked(variant, x, y, *z) * f(orbit(x, y, *z));
    }
    acc
}

/// Apply one generalized translation to a pointwise function by direct
/// quadrature.
///
/// For `Full`/`Aux1` the point `x` must lie strictly inside `(-1, 1)`;
/// values of `|x|` extremely close to 1 lose accuracy to cancellation
/// amplified by the `1/(1-x^2)` prefactor (see [`ENDPOINT_MARGIN`]).
pub fn translate_direct<F>(f: F, variant: Variant, y: f64, x: f64, z_order: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    validate_y(y)?;
    validate_x(variant, x)?;
    validate_z_order(z_order)?;
    let rule = quadrature::chebyshev_gauss(z_order)?;
    Ok(kernel_sum(&f, variant, y, x, &rule))
}

fn iterate_rec(
    f: &dyn Fn(f64) -> f64,
    variant: Variant,
    ys: &[f64],
    x: f64,
    rule: &QuadratureRule,
) -> f64 {
    match ys.split_last() {
        None => f(x),
        Some((&y, rest)) => {
            let inner = |xx: f64| iterate_rec(f, variant, rest, xx, rule);
            kernel_sum(&inner, variant, y, x, rule)
        }
    }
}

/// Apply the order-`r` iterated translation
/// `T_{y_1..y_r}^r(f, x) = T_{y_r}(T_{y_1..y_{r-1}}^{r-1}(f, .), x)`
/// by nested direct quadrature. Cost grows as `z_order^r`, so the nesting
/// depth is capped at [`MAX_DIRECT_ORDER`]; use the spectral backend beyond.
///
/// Inner evaluation points are orbit values and therefore stay strictly
/// inside `(-1, 1)` whenever the outer `x` does.
pub fn iterated_direct<F>(
    f: F,
    variant: Variant,
    ys: &[f64],
    x: f64,
    z_order: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if ys.len() > MAX_DIRECT_ORDER {
        return Err(Error::Unsupported(format!(
            "direct-backend nesting of order {} exceeds the cap {MAX_DIRECT_ORDER}; \
             use the spectral backend for deeper iterates",
            ys.len()
        )));
    }
    for &y in ys {
        validate_y(y)?;
    }
    if !ys.is_empty() {
        validate_x(variant, x)?;
    }
    validate_z_order(z_order)?;
    let rule = quadrature::chebyshev_gauss(z_order)?;
    Ok(iterate_rec(&f, variant, ys, x, &rule))
}

/// Eigenvalue tables of the three translation operators on the `(2, 2)`
/// basis, computed by quadrature at a fixed translation parameter `y`.
///
/// Entry `k` of each table is the factor by which the operator scales the
/// `k`-th Fourier-Jacobi coefficient.
#[derive(Debug, Clone)]
pub struct MultiplierTable {
    y: f64,
    full: Vec<f64>,
    aux1: Vec<f64>,
    aux2: Vec<f64>,
}

static TABLE_CACHE: LazyLock<RwLock<HashMap<(u64, usize), Arc<MultiplierTable>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

impl MultiplierTable {
    /// Compute (or fetch from the process-wide cache) the multiplier tables
    /// for translation parameter `y` and basis degrees `0..=n_max`.
    pub fn shared(y: f64, n_max: usize) -> Result<Arc<MultiplierTable>> {
        validate_y(y)?;
        let key = (y.to_bits(), n_max);
        if let Some(table) = TABLE_CACHE.read().expect("table cache poisoned").get(&key) {
            return Ok(Arc::clone(table));
        }
        let table = Arc::new(Self::compute(y, n_max)?);
        let mut cache = TABLE_CACHE.write().expect("table cache poisoned");
        Ok(Arc::clone(cache.entry(key).or_insert(table)))
    }

    /// Compute the tables without consulting the cache.
    ///
    /// One fused sweep over a tensor `x`-`z` grid evaluates all three kernels
    /// and the whole basis recurrence at each orbit point, then projects onto
    /// each basis polynomial: `m_k = <T(P_k), P_k>_w / <P_k, P_k>_w`. The
    /// `z` rule is exact for the polynomial integrands involved, and the
    /// `x` rule's `(1-x^2)^2` weight suppresses the kernel's endpoint
    /// cancellation, so entries carry only rounding error.
    fn compute(y: f64, n_max: usize) -> Result<MultiplierTable> {
        let basis = JacobiBasis::shared(2.0, 2.0, n_max)?;
        let x_rule = quadrature::gauss_rule(2.0, 2.0, n_max + 4)?;
        let z_rule = quadrature::chebyshev_gauss(MIN_Z_ORDER.max(n_max / 2 + 8))?;
        let len = n_max + 1;
        let pi = std::f64::consts::PI;
        let omy2 = 1.0 - y * y;
        let vp = omy2.max(0.0).sqrt();

        let mut full = vec![0.0; len];
        let mut aux1 = vec![0.0; len];
        let mut aux2 = vec![0.0; len];
        let mut t_full = vec![0.0; len];
        let mut t_aux1 = vec![0.0; len];
        let mut t_aux2 = vec![0.0; len];
        let mut pvals = vec![0.0; len];
        let mut xvals = vec![0.0; len];

        for (&x, &wx) in x_rule.nodes().iter().zip(x_rule.weights()) {
            let omx2 = 1.0 - x * x;
            let up = omx2.max(0.0).sqrt();
            t_full.iter_mut().for_each(|v| *v = 0.0);
            t_aux1.iter_mut().for_each(|v| *v = 0.0);
            t_aux2.iter_mut().for_each(|v| *v = 0.0);
            for (&z, &wz) in z_rule.nodes().iter().zip(z_rule.weights()) {
                let omz2 = 1.0 - z * z;
                let r = x * y - z * up * vp;
                basis.eval_all(r, &mut pvals);
                let k2 = 8.0 / (3.0 * pi) * omz2 * omz2;
                let k1 = (1.0 - r * r - 2.0 * omy2 * omz2) / (pi * omx2);
                let kf = k1 + 4.0 / pi * omy2 * omz2 * omz2;
                for k in 0..len {
                    let p = wz * pvals[k];
                    t_full[k] += kf * p;
                    t_aux1[k] += k1 * p;
                    t_aux2[k] += k2 * p;
                }
            }
            basis.eval_all(x, &mut xvals);
            for k in 0..len {
                let wxp = wx * xvals[k];
                full[k] += wxp * t_full[k];
                aux1[k] += wxp * t_aux1[k];
                aux2[k] += wxp * t_aux2[k];
            }
        }
        for k in 0..len {
            let h = basis.norm_sq(k)?;
            full[k] /= h;
            aux1[k] /= h;
            aux2[k] /= h;
        }
        Ok(MultiplierTable { y, full, aux1, aux2 })
    }

    /// The translation parameter this table was computed for.
    pub fn y(&self) -> f64 {
        self.y
    }

    /// Largest degree covered.
    pub fn n_max(&self) -> usize {
        self.full.len() - 1
    }

    /// Eigenvalues of the requested operator, indexed by degree.
    pub fn multipliers(&self, variant: Variant) -> &[f64] {
        match variant {
            Variant::Full => &self.full,
            Variant::Aux1 => &self.aux1,
            Variant::Aux2 => &self.aux2,
        }
    }
}

#[doc(hidden)]
pub fn clear_table_cache() {
    TABLE_CACHE.write().expect("table cache poisoned").clear();
}

/// Apply a generalized translation to a spectral function exactly, by
/// scaling each coefficient with the operator's eigenvalue.
pub fn translate_spectral(
    sf: &SpectralFunction,
    variant: Variant,
    y: f64,
) -> Result<SpectralFunction> {
    let table = MultiplierTable::shared(y, sf.basis().max_degree())?;
    let m = table.multipliers(variant);
    Ok(sf.map_coeffs(|k, c| c * m[k]))
}

/// Apply the order-`r` iterated translation in the spectral backend.
pub fn iterated_spectral(
    sf: &SpectralFunction,
    variant: Variant,
    ys: &[f64],
) -> Result<SpectralFunction> {
    let mut out = sf.clone();
    for &y in ys {
        out = translate_spectral(&out, variant, y)?;
    }
    Ok(out)
}
