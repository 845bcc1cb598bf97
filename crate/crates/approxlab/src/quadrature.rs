//! Gauss-Jacobi quadrature for weights `(1-x)^a (1+x)^b` on `[-1, 1]`.
//!
//! Rules are produced by the Golub-Welsch method: the three-term recurrence
//! coefficients of the monic orthogonal polynomials define a symmetric
//! tridiagonal Jacobi matrix whose eigenvalues are the nodes; the squared
//! first components of the normalized eigenvectors, scaled by the total mass
//! of the weight, are the quadrature weights. The tridiagonal eigenproblem
//! is solved by an implicit-shift QL iteration written out below, which
//! accumulates only the first row of the eigenvector matrix (all that the
//! weights need).
//!
//! Constructed rules are cached in memory per exact `(a, b, n)` key behind a
//! read-write lock, and optionally on disk in the directory named by the
//! `APPROXLAB_CACHE_DIR` environment variable (plain binary, versioned
//! header; corrupt or mismatched files are silently recomputed).

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, LazyLock, RwLock};

use crate::error::{Error, Result};
use crate::special::beta;

/// Relative tolerance for the weight-sum invariant of a constructed rule.
const MASS_TOL: f64 = 1e-12;

/// Iteration budget per eigenvalue in the QL sweep.
const QL_MAX_ITER: usize = 50;

/// An `n`-point Gauss-Jacobi rule: `sum_i w_i g(x_i)` approximates (and for
/// polynomial `g` of degree `<= 2n-1` equals) `int_{-1}^{1} g(x) (1-x)^a
/// (1+x)^b dx`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Weight exponents `(a, b)` of the rule.
    pub fn exponents(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Number of nodes.
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in strictly ascending order, all inside `(-1, 1)`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Positive weights, aligned with [`Self::nodes`].
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sum of the weights; equals the total mass of the weight function.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Apply the rule to `g`: `sum_i w_i g(x_i)`, summed in node order.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * g(*x);
        }
        acc
    }

    fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        for i in 0..n {
            let x = self.nodes[i];
            if !(-1.0 < x && x < 1.0) {
                return Err(Error::Internal(format!(
                    "gauss rule ({}, {}, {n}): node {i} = {x} outside (-1, 1)",
                    self.a, self.b
                )));
            }
            if i > 0 && self.nodes[i - 1] >= x {
                return Err(Error::Internal(format!(
                    "gauss rule ({}, {}, {n}): nodes not strictly ascending at {i}",
                    self.a, self.b
                )));
            }
            if self.weights[i] <= 0.0 {
                return Err(Error::Internal(format!(
                    "gauss rule ({}, {}, {n}): weight {i} = {} not positive",
                    self.a, self.b, self.weights[i]
                )));
            }
        }
        let mass = weight_total_mass(self.a, self.b);
        let sum = self.total_mass();
        if (sum - mass).abs() > MASS_TOL * mass {
            return Err(Error::Internal(format!(
                "gauss rule ({}, {}, {n}): weight sum {sum} differs from total mass {mass}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Apply `rule` to `g` (free-function form of [`QuadratureRule::integrate`]).
pub fn integrate<F: Fn(f64) -> f64>(rule: &QuadratureRule, g: F) -> f64 {
    rule.integrate(g)
}

/// Total mass `int_{-1}^1 (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)`.
pub fn weight_total_mass(a: f64, b: f64) -> f64 {
    2f64.powf(a + b + 1.0) * beta(a + 1.0, b + 1.0)
}

fn check_exponents(a: f64, b: f64) -> Result<()> {
    if !(a > -1.0) || !(b > -1.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "jacobi weight exponents must be finite and > -1, got ({a}, {b})"
        )));
    }
    Ok(())
}

/// Recurrence coefficients of the monic polynomials orthogonal with respect
/// to `(1-x)^a (1+x)^b`, in symmetric Jacobi-matrix form: entry `k` holds
/// `(alpha_k, sqrt(beta_{k+1}))`, where `p_{k+1} = (x - alpha_k) p_k -
/// beta_k p_{k-1}`. The off-diagonal of the last entry is unused and set to
/// zero.
pub fn recurrence_coeffs(a: f64, b: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    check_exponents(a, b)?;
    if n == 0 {
        return Err(Error::Range("quadrature order must be >= 1".into()));
    }
    let s = a + b;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let alpha = if k == 0 {
            (b - a) / (s + 2.0)
        } else {
            let d = 2.0 * k as f64 + s;
            (b * b - a * a) / (d * (d + 2.0))
        };
        let off = if k + 1 == n {
            0.0
        } else {
            let j = (k + 1) as f64;
            let beta_j = if k == 0 {
                // beta_1 with the (1 + a + b) factor cancelled, so that
                // Chebyshev-type exponents (a + b = -1) stay regular.
                4.0 * (a + 1.0) * (b + 1.0) / ((s + 2.0) * (s + 2.0) * (s + 3.0))
            } else {
                let d = 2.0 * j + s;
                4.0 * j * (j + a) * (j + b) * (j + s) / (d * d * (d + 1.0) * (d - 1.0))
            };
            beta_j.sqrt()
        };
        out.push((alpha, off));
    }
    Ok(out)
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` the off-diagonal coupling rows `i` and
/// `i+1` (`e[n-1]` is workspace). `z` is a single row of the eigenvector
/// accumulation (initialized by the caller, typically to `e_1^T`); on return
/// `d` holds unordered eigenvalues and `z[i]` the corresponding component of
/// the `i`-th normalized eigenvector.
fn tridiag_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Look for a negligible off-diagonal element to split at.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::Eigensolver(format!(
                    "QL sweep for eigenvalue {l} of a {n}x{n} Jacobi matrix exceeded \
                     {QL_MAX_ITER} iterations (residual off-diagonal {:.3e})",
                    e[l].abs()
                )));
            }
            // Implicit shift from the 2x2 block at l.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let bb = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Recover from underflow: skip this transformation.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
                // Accumulate the tracked eigenvector row.
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn build_rule(a: f64, b: f64, n: usize) -> Result<QuadratureRule> {
    let rec = recurrence_coeffs(a, b, n)?;
    let mut d: Vec<f64> = rec.iter().map(|&(alpha, _)| alpha).collect();
    let mut e: Vec<f64> = rec.iter().map(|&(_, off)| off).collect();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    tridiag_ql(&mut d, &mut e, &mut z).map_err(|err| match err {
        Error::Eigensolver(msg) => {
            Error::Eigensolver(format!("weight exponents ({a}, {b}), order {n}: {msg}"))
        }
        other => other,
    })?;
    let mass = weight_total_mass(a, b);
    let mut pairs: Vec<(f64, f64)> = d
        .iter()
        .zip(&z)
        .map(|(&x, &zz)| (x, mass * zz * zz))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let rule = QuadratureRule {
        a,
        b,
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    };
    rule.validate()?;
    Ok(rule)
}

// ---------------------------------------------------------------------------
// Caching.

type RuleKey = (u64, u64, usize);

static RULE_CACHE: LazyLock<RwLock<HashMap<RuleKey, Arc<QuadratureRule>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

const DISK_MAGIC: &[u8; 4] = b"AXQR";
const DISK_VERSION: u32 = 1;

fn disk_file_name(a: f64, b: f64, n: usize) -> String {
    format!("gj_v{DISK_VERSION}_{:016x}_{:016x}_{n}.bin", a.to_bits(), b.to_bits())
}

fn read_disk_rule(path: &Path, a: f64, b: f64, n: usize) -> Option<QuadratureRule> {
    let mut buf = Vec::new();
    std::fs::File::open(path).ok()?.read_to_end(&mut buf).ok()?;
    let expect = 4 + 4 + 16 + 8 + 16 * n;
    if buf.len() != expect || &buf[0..4] != DISK_MAGIC {
        return None;
    }
    let rd_u32 = |o: usize| u32::from_le_bytes(buf[o..o + 4].try_into().unwrap());
    let rd_u64 = |o: usize| u64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
    let rd_f64 = |o: usize| f64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
    if rd_u32(4) != DISK_VERSION
        || rd_u64(8) != a.to_bits()
        || rd_u64(16) != b.to_bits()
        || rd_u64(24) != n as u64
    {
        return None;
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        nodes.push(rd_f64(32 + 8 * i));
        weights.push(rd_f64(32 + 8 * n + 8 * i));
    }
    let rule = QuadratureRule { a, b, nodes, weights };
    rule.validate().ok()?;
    Some(rule)
}

fn write_disk_rule(dir: &Path, rule: &QuadratureRule, n: usize) {
    // Best effort: cache write failures must never fail the computation.
    let _ = std::fs::create_dir_all(dir);
    let final_path = dir.join(disk_file_name(rule.a, rule.b, n));
    let tmp_path = final_path.with_extension("tmp");
    let mut buf = Vec::with_capacity(32 + 16 * n);
    buf.extend_from_slice(DISK_MAGIC);
    buf.extend_from_slice(&DISK_VERSION.to_le_bytes());
    buf.extend_from_slice(&rule.a.to_bits().to_le_bytes());
    buf.extend_from_slice(&rule.b.to_bits().to_le_bytes());
    buf.extend_from_slice(&(n as u64).to_le_bytes());
    for x in &rule.nodes {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    for w in &rule.weights {
        buf.extend_from_slice(&w.to_le_bytes());
    }
    let write = || -> std::io::Result<()> {
        std::fs::File::create(&tmp_path)?.write_all(&buf)?;
        std::fs::rename(&tmp_path, &final_path)
    };
    let _ = write();
}

fn disk_cache_dir() -> Option<PathBuf> {
    std::env::var_os("APPROXLAB_CACHE_DIR").map(PathBuf::from)
}

/// Construct (or fetch from cache) the `n`-point Gauss-Jacobi rule for the
/// weight `(1-x)^a (1+x)^b`. Rules are shared: repeated calls with exactly
/// the same `(a, b, n)` return the same allocation.
pub fn gauss_rule(a: f64, b: f64, n: usize) -> Result<Arc<QuadratureRule>> {
    gauss_rule_with_cache(a, b, n, disk_cache_dir().as_deref())
}

/// As [`gauss_rule`], with an explicit disk-cache directory (`None` disables
/// the disk layer). The in-memory cache is always consulted first.
pub fn gauss_rule_with_cache(
    a: f64,
    b: f64,
    n: usize,
    disk_dir: Option<&Path>,
) -> Result<Arc<QuadratureRule>> {
    check_exponents(a, b)?;
    if n == 0 {
        return Err(Error::Range("quadrature order must be >= 1".into()));
    }
    let key = (a.to_bits(), b.to_bits(), n);
    if let Some(rule) = RULE_CACHE.read().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let from_disk = disk_dir.and_then(|dir| read_disk_rule(&dir.join(disk_file_name(a, b, n)), a, b, n));
    let (rule, fresh) = match from_disk {
        Some(rule) => (rule, false),
        None => (build_rule(a, b, n)?, true),
    };
    if fresh {
        if let Some(dir) = disk_dir {
            write_disk_rule(dir, &rule, n);
        }
    }
    let rule = Arc::new(rule);
    let mut cache = RULE_CACHE.write().expect("rule cache poisoned");
    // Another thread may have raced us; keep the first entry so that pointer
    // identity stays stable.
    let entry = cache.entry(key).or_insert_with(|| Arc::clone(&rule));
    Ok(Arc::clone(entry))
}

/// Gauss-Legendre rule (`a = b = 0`).
pub fn gauss_legendre(n: usize) -> Result<Arc<QuadratureRule>> {
    gauss_rule(0.0, 0.0, n)
}

/// Chebyshev-Gauss rule (`a = b = -1/2`).
pub fn chebyshev_gauss(n: usize) -> Result<Arc<QuadratureRule>> {
    gauss_rule(-0.5, -0.5, n)
}

/// Drop every cached rule (test support; never needed in normal use).
#[doc(hidden)]
pub fn clear_rule_cache() {
    RULE_CACHE.write().expect("rule cache poisoned").clear();
}
