//! Named test functions with parameters, parsed from compact command-line
//! specs like `abspow:mu=1.5`.
//!
//! Each entry carries the function itself, its parameter set, and the order
//! of its worst interior singularity (`kink_order`), from which the expected
//! best-approximation decay rate in `L_p` follows as `mu + 1/p`. Smooth
//! entries have no kink order and decay faster than any power.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::jacobi::{JacobiBasis, SpectralFunction};
use crate::space::{FunctionHandle, PExponent};

/// A resolved registry entry.
#[derive(Debug, Clone)]
pub struct FunctionDef {
    /// Base name, e.g. `abspow`.
    pub name: String,
    /// Canonical spec string with all parameters resolved, e.g.
    /// `abspow:mu=1.5`.
    pub spec: String,
    /// Resolved parameters in sorted order.
    pub params: BTreeMap<String, f64>,
    /// The function.
    pub handle: FunctionHandle,
    /// Holder exponent of the worst interior singularity, when there is
    /// one. `None` means smooth on `[-1, 1]`.
    pub kink_order: Option<f64>,
    /// One-line description.
    pub description: String,
}

impl FunctionDef {
    /// Expected decay exponent of best approximation in `L_{p}`: a kink of
    /// order `mu` limits the rate to `n^{-(mu + 1/p)}`. Smooth entries
    /// return `None` (faster than any power).
    pub fn expected_rate(&self, p: PExponent) -> Option<f64> {
        self.kink_order.map(|mu| mu + p.reciprocal())
    }
}

struct CatalogEntry {
    name: &'static str,
    /// Parameter names with defaults; empty when the entry takes none.
    params: &'static [(&'static str, f64)],
    description: &'static str,
}

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "abs", params: &[], description: "absolute value |x|" },
    CatalogEntry {
        name: "abspow",
        params: &[("mu", 1.5)],
        description: "|x|^mu, interior kink of order mu",
    },
    CatalogEntry {
        name: "absshift",
        params: &[("a", 0.3), ("mu", 1.0)],
        description: "|x - a|^mu, kink moved off the origin",
    },
    CatalogEntry {
        name: "bump",
        params: &[("beta", 4.0)],
        description: "Gaussian bump exp(-beta x^2)",
    },
    CatalogEntry {
        name: "cosfreq",
        params: &[("omega", 3.0)],
        description: "cos(omega x)",
    },
    CatalogEntry { name: "exp", params: &[], description: "exponential e^x" },
    CatalogEntry { name: "one", params: &[], description: "constant 1" },
    CatalogEntry {
        name: "pjac",
        params: &[("k", 3.0)],
        description: "degree-k basis polynomial, normalized to 1 at x = 1",
    },
    CatalogEntry {
        name: "runge",
        params: &[],
        description: "Runge function 1 / (1 + 25 x^2)",
    },
    CatalogEntry {
        name: "sinfreq",
        params: &[("omega", 3.0)],
        description: "sin(omega x)",
    },
    CatalogEntry {
        name: "truncpow",
        params: &[("a", 0.0), ("mu", 1.5)],
        description: "one-sided power max(0, x - a)^mu",
    },
    CatalogEntry { name: "x", params: &[], description: "identity x" },
];

/// Sorted names of all registered functions.
pub fn builtin_names() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.name).collect()
}

/// Human-readable catalog listing for usage messages.
pub fn catalog_help() -> String {
    let mut out = String::new();
    for e in CATALOG {
        let mut sig = e.name.to_string();
        if !e.params.is_empty() {
            sig.push(':');
            for (i, (k, v)) in e.params.iter().enumerate() {
                if i > 0 {
                    sig.push(',');
                }
                let _ = write!(sig, "{k}={v}");
            }
        }
        let _ = writeln!(out, "  {sig:<28} {}", e.description);
    }
    out
}

fn unknown_function(name: &str) -> Error {
    Error::Usage(format!(
        "unknown function '{name}'; available:\n{}",
        catalog_help()
    ))
}

fn parse_params(entry: &CatalogEntry, text: Option<&str>) -> Result<BTreeMap<String, f64>> {
    let mut params: BTreeMap<String, f64> =
        entry.params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    let Some(text) = text else {
        return Ok(params);
    };
    let mut seen = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let Some((key, value)) = piece.split_once('=') else {
            return Err(Error::Usage(format!(
                "malformed parameter '{piece}' for '{}'; expected key=value",
                entry.name
            )));
        };
        let key = key.trim();
        if !entry.params.iter().any(|&(k, _)| k == key) {
            return Err(Error::Usage(format!(
                "unknown parameter '{key}' for '{}'; accepted: {}",
                entry.name,
                entry
                    .params
                    .iter()
                    .map(|&(k, _)| k)
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        if seen.contains(&key.to_string()) {
            return Err(Error::Usage(format!(
                "parameter '{key}' given twice for '{}'",
                entry.name
            )));
        }
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::Usage(format!("parameter '{key}' has non-numeric value '{}'", value.trim()))
        })?;
        seen.push(key.to_string());
        params.insert(key.to_string(), value);
    }
    Ok(params)
}

fn canonical_spec(name: &str, params: &BTreeMap<String, f64>) -> String {
    if params.is_empty() {
        return name.to_string();
    }
    let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{name}:{}", body.join(","))
}

fn require_positive(params: &BTreeMap<String, f64>, key: &str, name: &str) -> Result<f64> {
    let v = params[key];
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!(
            "parameter {key} = {v} of '{name}' must be positive and finite"
        )));
    }
    Ok(v)
}

/// Resolve a function spec of the form `name` or `name:key=value,...`.
pub fn resolve(spec: &str) -> Result<FunctionDef> {
    let spec = spec.trim();
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n.trim(), Some(r)),
        None => (spec, None),
    };
    let entry = CATALOG.iter().find(|e| e.name == name).ok_or_else(|| unknown_function(name))?;
    let params = parse_params(entry, rest)?;
    let (handle, kink_order): (FunctionHandle, Option<f64>) = match name {
        "one" => (FunctionHandle::from_fn(|_| 1.0), None),
        "x" => (FunctionHandle::from_fn(|x| x), None),
        "exp" => (FunctionHandle::from_fn(f64::exp), None),
        "runge" => (FunctionHandle::from_fn(|x| 1.0 / (1.0 + 25.0 * x * x)), None),
        "abs" => (FunctionHandle::from_fn(f64::abs), Some(1.0)),
        "abspow" => {
            let mu = require_positive(&params, "mu", name)?;
            (FunctionHandle::from_fn(move |x: f64| x.abs().powf(mu)), Some(mu))
        }
        "absshift" => {
            let mu = require_positive(&params, "mu", name)?;
            let a = params["a"];
            if !(-1.0..=1.0).contains(&a) {
                return Err(Error::Domain(format!(
                    "shift a = {a} of 'absshift' must lie in [-1, 1]"
                )));
            }
            (FunctionHandle::from_fn(move |x: f64| (x - a).abs().powf(mu)), Some(mu))
        }
        "truncpow" => {
            let mu = require_positive(&params, "mu", name)?;
            let a = params["a"];
            if !(-1.0..=1.0).contains(&a) {
                return Err(Error::Domain(format!(
                    "knot a = {a} of 'truncpow' must lie in [-1, 1]"
                )));
            }
            (FunctionHandle::from_fn(move |x: f64| (x - a).max(0.0).powf(mu)), Some(mu))
        }
        "sinfreq" => {
            let omega = require_positive(&params, "omega", name)?;
            (FunctionHandle::from_fn(move |x: f64| (omega * x).sin()), None)
        }
        "cosfreq" => {
            let omega = require_positive(&params, "omega", name)?;
            (FunctionHandle::from_fn(move |x: f64| (omega * x).cos()), None)
        }
        "bump" => {
            let beta = require_positive(&params, "beta", name)?;
            (FunctionHandle::from_fn(move |x: f64| (-beta * x * x).exp()), None)
        }
        "pjac" => {
            let kf = params["k"];
            if kf < 0.0 || kf.fract() != 0.0 || kf > 128.0 {
                return Err(Error::Domain(format!(
                    "degree k = {kf} of 'pjac' must be an integer in 0..=128"
                )));
            }
            let k = kf as usize;
            let basis = JacobiBasis::shared(2.0, 2.0, k)?;
            let mut coeffs = vec![0.0; k + 1];
            coeffs[k] = 1.0;
            let sf = SpectralFunction::from_coeffs(basis, coeffs)?;
            (FunctionHandle::Spectral(sf), None)
        }
        _ => unreachable!("catalog and dispatch out of sync for '{name}'"),
    };
    Ok(FunctionDef {
        name: name.to_string(),
        spec: canonical_spec(name, &params),
        params,
        handle,
        kink_order,
        description: entry.description.to_string(),
    })
}
