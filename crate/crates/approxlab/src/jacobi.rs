//! Jacobi polynomial bases normalized by the condition `P_k(1) = 1`, and
//! spectral (Fourier-Jacobi) representations of functions in the `(2, 2)`
//! basis.
//!
//! Polynomials are evaluated through the classical three-term recurrence in
//! the standard normalization and divided by the recurrence's own value at
//! `x = 1`; because numerator and normalizer follow bitwise identical code
//! paths, `eval(k, 1.0)` is exactly `1.0` for every degree.
//!
//! A [`SpectralFunction`] stores coefficients `c_k` such that
//! `f(x) ~ sum_k c_k P_k(x)`; with `h_k = int P_k^2 (1-x^2)^2 dx` the raw
//! Fourier-Jacobi coefficient `a_k = int f P_k (1-x^2)^2 dx` is recovered as
//! `c_k * h_k`.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureRule};

/// Jacobi basis `P_k^{(a,b)}`, `k = 0..=n_max`, normalized by `P_k(1) = 1`.
#[derive(Debug)]
pub struct JacobiBasis {
    a: f64,
    b: f64,
    n_max: usize,
    /// Recurrence triples `(A_k, B_k, C_k)` of the standard normalization:
    /// `P_k = (A_k x + B_k) P_{k-1} + C_k P_{k-2}` (index 0 unused).
    rec: Vec<(f64, f64, f64)>,
    /// Values of the standard-normalization polynomials at `x = 1`.
    v: Vec<f64>,
    /// Squared norms `h_k = int P_k^2 (1-x)^a (1+x)^b dx` (normalized `P`).
    h: Vec<f64>,
}

impl JacobiBasis {
    /// Build the basis for exponents `a, b > -1` up to degree `n_max`.
    pub fn new(a: f64, b: f64, n_max: usize) -> Result<Self> {
        if !(a > -1.0) || !(b > -1.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!(
                "jacobi basis exponents must be finite and > -1, got ({a}, {b})"
            )));
        }
        let s = a + b;
        let mut rec = vec![(0.0, 0.0, 0.0); n_max + 1];
        if n_max >= 1 {
            rec[1] = ((s + 2.0) / 2.0, (a - b) / 2.0, 0.0);
        }
        for n in 2..=n_max {
            let nf = n as f64;
            let c1 = 2.0 * nf * (nf + s) * (2.0 * nf + s - 2.0);
            let t = 2.0 * nf + s;
            rec[n] = (
                (t - 1.0) * t * (t - 2.0) / c1,
                (t - 1.0) * (a * a - b * b) / c1,
                -2.0 * (nf + a - 1.0) * (nf + b - 1.0) * t / c1,
            );
        }
        let mut basis = JacobiBasis { a, b, n_max, rec, v: Vec::new(), h: Vec::new() };
        // Normalizers: the raw recurrence evaluated at exactly x = 1.
        basis.v = basis.raw_values(1.0);
        // Squared norms by quadrature (exact for these degrees).
        let rule = quadrature::gauss_rule(a, b, n_max + 8)?;
        let mut h = vec![0.0; n_max + 1];
        let mut scratch = vec![0.0; n_max + 1];
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            basis.eval_all(*x, &mut scratch);
            for (hk, pk) in h.iter_mut().zip(&scratch) {
                *hk += w * pk * pk;
            }
        }
        basis.h = h;
        Ok(basis)
    }

    /// Fetch the basis from the process-wide cache (building it on first
    /// use). Keys are the exact bit patterns of `(a, b)` plus `n_max`.
    pub fn shared(a: f64, b: f64, n_max: usize) -> Result<Arc<Self>> {
        let key = (a.to_bits(), b.to_bits(), n_max);
        if let Some(hit) = BASIS_CACHE.read().expect("basis cache poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let built = Arc::new(Self::new(a, b, n_max)?);
        let mut cache = BASIS_CACHE.write().expect("basis cache poisoned");
        let entry = cache.entry(key).or_insert(built);
        Ok(Arc::clone(entry))
    }

    /// Weight exponents `(a, b)`.
    pub fn exponents(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Highest degree carried by the basis.
    pub fn max_degree(&self) -> usize {
        self.n_max
    }

    /// Raw (standard-normalization) values of all degrees at `x`.
    fn raw_values(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n_max + 1];
        self.raw_values_into(x, &mut out);
        out
    }

    fn raw_values_into(&self, x: f64, out: &mut [f64]) {
        out[0] = 1.0;
        if self.n_max >= 1 {
            let (a1, b1, _) = self.rec[1];
            out[1] = a1 * x + b1;
        }
        for n in 2..=self.n_max {
            let (an, bn, cn) = self.rec[n];
            out[n] = (an * x + bn) * out[n - 1] + cn * out[n - 2];
        }
    }

    /// Normalized values `P_k(x)` for all `k = 0..=n_max`, written into
    /// `out` (whose length must be `n_max + 1`).
    pub fn eval_all(&self, x: f64, out: &mut [f64]) {
        assert_eq!(out.len(), self.n_max + 1, "eval_all scratch length mismatch");
        self.raw_values_into(x, out);
        for (val, v) in out.iter_mut().zip(&self.v) {
            *val /= v;
        }
    }

    /// Normalized values as a fresh vector.
    pub fn values(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n_max + 1];
        self.eval_all(x, &mut out);
        out
    }

    /// Value of `P_k(x)` (normalized so that `P_k(1) = 1` exactly).
    pub fn eval(&self, k: usize, x: f64) -> Result<f64> {
        self.check_degree(k)?;
        let mut pm1 = 1.0f64;
        if k == 0 {
            return Ok(pm1 / self.v[0]);
        }
        let (a1, b1, _) = self.rec[1];
        let mut p = a1 * x + b1;
        for n in 2..=k {
            let (an, bn, cn) = self.rec[n];
            let next = (an * x + bn) * p + cn * pm1;
            pm1 = p;
            p = next;
        }
        Ok(p / self.v[k])
    }

    /// Derivative `P_k'(x)` of the normalized polynomial.
    pub fn eval_deriv(&self, k: usize, x: f64) -> Result<f64> {
        self.check_degree(k)?;
        if k == 0 {
            return Ok(0.0);
        }
        let (a1, b1, _) = self.rec[1];
        let (mut pm1, mut dm1) = (1.0f64, 0.0f64);
        let (mut p, mut d) = (a1 * x + b1, a1);
        for n in 2..=k {
            let (an, bn, cn) = self.rec[n];
            let pn = (an * x + bn) * p + cn * pm1;
            let dn = an * p + (an * x + bn) * d + cn * dm1;
            pm1 = p;
            dm1 = d;
            p = pn;
            d = dn;
        }
        Ok(d / self.v[k])
    }

    /// Squared norm `h_k = int P_k(x)^2 (1-x)^a (1+x)^b dx`.
    pub fn norm_sq(&self, k: usize) -> Result<f64> {
        self.check_degree(k)?;
        Ok(self.h[k])
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.n_max {
            return Err(Error::Range(format!(
                "degree {k} exceeds basis maximum {}",
                self.n_max
            )));
        }
        Ok(())
    }
}

type BasisKey = (u64, u64, usize);

static BASIS_CACHE: LazyLock<RwLock<HashMap<BasisKey, Arc<JacobiBasis>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// The basis of the spectral theory used throughout the crate: `(a, b) = (2, 2)`.
pub fn square_basis(n_max: usize) -> Result<Arc<JacobiBasis>> {
    JacobiBasis::shared(2.0, 2.0, n_max)
}

/// A function represented by Fourier-Jacobi coefficients in a
/// [`JacobiBasis`]: `f(x) = sum_{k=0}^{N} c_k P_k(x)`.
#[derive(Debug, Clone)]
pub struct SpectralFunction {
    basis: Arc<JacobiBasis>,
    coeffs: Vec<f64>,
}

impl SpectralFunction {
    /// Wrap explicit coefficients `c_0..=c_N` over `basis`.
    pub fn from_coeffs(basis: Arc<JacobiBasis>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Range("spectral function needs at least c_0".into()));
        }
        if coeffs.len() > basis.max_degree() + 1 {
            return Err(Error::Range(format!(
                "{} coefficients exceed basis degree {}",
                coeffs.len(),
                basis.max_degree()
            )));
        }
        Ok(SpectralFunction { basis, coeffs })
    }

    /// Fourier-Jacobi analysis of `f` in the `(2, 2)` basis up to degree
    /// `n_max`: `c_k = (int f P_k (1-x^2)^2 dx) / h_k`, with the integral
    /// computed by `rule`.
    ///
    /// `rule` must carry exponents `(2, 2)` and at least `n_max + 1` points;
    /// for functions that are not polynomials of degree `<= n_max`, an order
    /// of `n_max + 8` or more is recommended.
    pub fn analyze<F: Fn(f64) -> f64>(
        f: F,
        n_max: usize,
        rule: &QuadratureRule,
    ) -> Result<Self> {
        if rule.exponents() != (2.0, 2.0) {
            return Err(Error::Domain(format!(
                "analysis requires a (2, 2) rule, got {:?}",
                rule.exponents()
            )));
        }
        if rule.order() < n_max + 1 {
            return Err(Error::Range(format!(
                "rule order {} is too small to resolve degree {n_max}",
                rule.order()
            )));
        }
        let basis = square_basis(n_max)?;
        let mut coeffs = vec![0.0; n_max + 1];
        let mut scratch = vec![0.0; n_max + 1];
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let fx = f(*x);
            basis.eval_all(*x, &mut scratch);
            for (ck, pk) in coeffs.iter_mut().zip(&scratch) {
                *ck += w * fx * pk;
            }
        }
        for (k, ck) in coeffs.iter_mut().enumerate() {
            *ck /= basis.h[k];
        }
        Ok(SpectralFunction { basis, coeffs })
    }

    /// The basis this function is expanded in.
    pub fn basis(&self) -> &Arc<JacobiBasis> {
        &self.basis
    }

    /// Coefficients `c_0..=c_N`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Highest represented degree `N`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Raw Fourier-Jacobi coefficient `a_k = c_k h_k` (the value of
    /// `int f P_k (1-x^2)^2 dx` when the basis is `(2, 2)`).
    pub fn raw_coefficient(&self, k: usize) -> Result<f64> {
        if k >= self.coeffs.len() {
            return Err(Error::Range(format!(
                "coefficient {k} beyond represented degree {}",
                self.degree()
            )));
        }
        Ok(self.coeffs[k] * self.basis.h[k])
    }

    /// Synthesis: `sum_k c_k P_k(x)`, evaluated by running the three-term
    /// recurrence once (no allocation).
    pub fn eval(&self, x: f64) -> f64 {
        let basis = &*self.basis;
        let mut acc = self.coeffs[0] / basis.v[0];
        if self.coeffs.len() == 1 {
            return acc;
        }
        let (a1, b1, _) = basis.rec[1];
        let mut pm1 = 1.0f64;
        let mut p = a1 * x + b1;
        acc += self.coeffs[1] * p / basis.v[1];
        for n in 2..self.coeffs.len() {
            let (an, bn, cn) = basis.rec[n];
            let next = (an * x + bn) * p + cn * pm1;
            pm1 = p;
            p = next;
            acc += self.coeffs[n] * p / basis.v[n];
        }
        acc
    }

    /// Map coefficients through `g` (used by spectral-backend operators).
    pub fn map_coeffs<G: FnMut(usize, f64) -> f64>(&self, mut g: G) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| g(k, c))
            .collect();
        SpectralFunction { basis: Arc::clone(&self.basis), coeffs }
    }
}
