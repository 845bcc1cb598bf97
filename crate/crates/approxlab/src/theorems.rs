//! Experiment drivers that turn the direct, inverse, and coincidence
//! statements — and the derivative/norm-comparison inequalities they rest
//! on — into quantitative, re-checkable desk experiments, plus a
//! self-contained verification suite aggregating every module's invariants.
//!
//! No theorem constant is asserted as a specific number: all checks are
//! ratio-stability checks (an empirical constant must stay within a
//! declared factor across the sweep) or slope checks (a fitted log-log
//! rate must land in a declared band). Every check records *how* its
//! observed value derives from the report's stored series, so a report can
//! be audited after the fact: re-deriving each observed value from the
//! serialized series must reproduce the verdict exactly.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::best_approx::{
    best_approx, en_sequence, equioscillation_certificate, fit_order, residual_orthogonality,
};
use crate::error::{Error, Result};
use crate::jacobi::{JacobiBasis, SpectralFunction};
use crate::jackson::{self, JacksonOperator};
use crate::quadrature;
use crate::registry::{self, FunctionDef};
use crate::report::Series;
use crate::smoothness::{self, Backend};
use crate::space::{
    validate_window, weighted_norm, FunctionHandle, NormSpec, PExponent, TheoremWindow,
    WindowStatus,
};
use crate::special;
use crate::translation::{self, Variant};

/// Declared stability factor for empirical theorem constants: the measured
/// `C_n` must satisfy `max/min <=` this across the sweep.
pub const STABILITY_FACTOR: f64 = 3.0;
/// Tolerance on fitted decay slopes against a known rate.
pub const SLOPE_TOLERANCE: f64 = 0.15;
/// Slack allowed in `slope(E_n) <= slope(omega) + tol`.
pub const SLOPE_ORDERING_TOLERANCE: f64 = 0.25;
/// Tolerance on `|lambda_E - lambda_omega|` in the coincidence experiment.
pub const EQUIVALENCE_TOLERANCE: f64 = 0.2;
/// Band factor for the derivative/norm-comparison ratio checks.
pub const BAND_FACTOR: f64 = 2.0;

/// Overall outcome of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// All checks passed.
    Pass,
    /// At least one check failed.
    Fail,
    /// The `(p, alpha)` window of the theorem is violated; the series are
    /// still computed but no claim is made.
    NotApplicable,
}

/// How a check's observed value derives from the report's series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CheckSource {
    /// `max(y) / min(y)` over the named series (infinite when `min <= 0`).
    RatioMaxOverMin { series: String },
    /// `max |y|` over the named series.
    MaxAbs { series: String },
    /// Fitted log-log slope of the named series.
    Slope { series: String },
    /// `slope(series_a) - slope(series_b)`.
    SlopeDiff { series_a: String, series_b: String },
    /// Number of points in the named series with `|y|` above a threshold.
    CountAbove { series: String, threshold: f64 },
    /// Measured directly by the producing code; re-audit re-evaluates only
    /// the rule. Used by the verification suite, whose checks are the
    /// primitive evidence.
    Measured,
}

/// The tolerance rule a check's observed value is held against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CheckRule {
    /// `observed <= bound`.
    AtMost { bound: f64 },
    /// `|observed| <= bound`.
    AbsAtMost { bound: f64 },
    /// `|observed - target| <= tol`.
    Within { target: f64, tol: f64 },
    /// `observed >= bound`.
    AtLeast { bound: f64 },
}

impl CheckRule {
    /// Evaluate the rule; non-finite observations never pass.
    pub fn evaluate(&self, observed: f64) -> bool {
        if !observed.is_finite() {
            return false;
        }
        match *self {
            CheckRule::AtMost { bound } => observed <= bound,
            CheckRule::AbsAtMost { bound } => observed.abs() <= bound,
            CheckRule::Within { target, tol } => (observed - target).abs() <= tol,
            CheckRule::AtLeast { bound } => observed >= bound,
        }
    }
}

/// One named check inside an experiment report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub source: CheckSource,
    pub rule: CheckRule,
    pub observed: f64,
    pub passed: bool,
    pub detail: String,
}

/// A complete experiment outcome: inputs, raw series, measured constants
/// and slopes, and the checks with their verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub inputs: BTreeMap<String, String>,
    pub series: Vec<Series>,
    pub empirical_constants: BTreeMap<String, f64>,
    pub slopes: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub applicable: bool,
    pub verdict: Verdict,
}

fn eval_source(series: &[Series], source: &CheckSource, stored: f64) -> Result<f64> {
    let find = |name: &str| -> Result<&Series> {
        series.iter().find(|s| s.name == name).ok_or_else(|| {
            Error::Internal(format!("check references missing series '{name}'"))
        })
    };
    Ok(match source {
        CheckSource::RatioMaxOverMin { series: name } => {
            let s = find(name)?;
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &(_, y) in &s.points {
                lo = lo.min(y);
                hi = hi.max(y);
            }
            if lo > 0.0 {
                hi / lo
            } else {
                f64::INFINITY
            }
        }
        CheckSource::MaxAbs { series: name } => {
            find(name)?.points.iter().fold(0.0f64, |a, &(_, y)| a.max(y.abs()))
        }
        CheckSource::Slope { series: name } => {
            let s = find(name)?;
            fit_order(&s.points, 0..s.points.len())?.fitted_slope
        }
        CheckSource::SlopeDiff { series_a, series_b } => {
            let a = find(series_a)?;
            let b = find(series_b)?;
            fit_order(&a.points, 0..a.points.len())?.fitted_slope
                - fit_order(&b.points, 0..b.points.len())?.fitted_slope
        }
        CheckSource::CountAbove { series: name, threshold } => {
            find(name)?.points.iter().filter(|&&(_, y)| y.abs() > *threshold).count() as f64
        }
        CheckSource::Measured => stored,
    })
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            inputs: BTreeMap::new(),
            series: Vec::new(),
            empirical_constants: BTreeMap::new(),
            slopes: BTreeMap::new(),
            checks: Vec::new(),
            applicable: true,
            verdict: Verdict::Pass,
        }
    }

    pub fn input(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn add_series(&mut self, s: Series) -> &mut Self {
        self.series.push(s);
        self
    }

    pub fn find_series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    /// Add a check whose observed value is derived from stored series
    /// through the given source (the same derivation an audit replays).
    pub fn check_from_series(
        &mut self,
        name: impl Into<String>,
        source: CheckSource,
        rule: CheckRule,
        detail: impl Into<String>,
    ) -> Result<()> {
        let observed = eval_source(&self.series, &source, f64::NAN)?;
        let passed = rule.evaluate(observed);
        self.checks.push(Check {
            name: name.into(),
            source,
            rule,
            observed,
            passed,
            detail: detail.into(),
        });
        Ok(())
    }

    /// Add a directly measured check (verification-suite primitives).
    pub fn check_measured(
        &mut self,
        name: impl Into<String>,
        observed: f64,
        rule: CheckRule,
        detail: impl Into<String>,
    ) {
        let passed = rule.evaluate(observed);
        self.checks.push(Check {
            name: name.into(),
            source: CheckSource::Measured,
            rule,
            observed,
            passed,
            detail: detail.into(),
        });
    }

    /// Recompute the verdict from the checks and applicability flag.
    pub fn finalize(&mut self) {
        self.verdict = if !self.applicable {
            Verdict::NotApplicable
        } else if self.checks.iter().all(|c| c.passed) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Names of the checks that failed.
    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    /// Re-derive every check's observed value from the stored series and
    /// confirm that observations, check outcomes, and the verdict all
    /// reproduce exactly. This is what makes a serialized report
    /// trustworthy on its own.
    pub fn audit(&self) -> Result<()> {
        for check in &self.checks {
            let observed = eval_source(&self.series, &check.source, check.observed)?;
            let same = if observed.is_nan() && check.observed.is_nan() {
                true
            } else {
                observed == check.observed
            };
            if !same {
                return Err(Error::Internal(format!(
                    "check '{}' observed {} but series re-derivation gives {observed}",
                    check.name, check.observed
                )));
            }
            if check.rule.evaluate(observed) != check.passed {
                return Err(Error::Internal(format!(
                    "check '{}' outcome does not match its rule",
                    check.name
                )));
            }
        }
        let expected = if !self.applicable {
            Verdict::NotApplicable
        } else if self.checks.iter().all(|c| c.passed) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        if expected != self.verdict {
            return Err(Error::Internal("verdict does not match the checks".into()));
        }
        Ok(())
    }
}

/// Geometric grid of `count` degrees from `lo` to `hi` inclusive.
pub fn default_n_grid(lo: usize, hi: usize, count: usize) -> Result<Vec<usize>> {
    if lo == 0 || hi < lo || count < 2 {
        return Err(Error::Domain(format!(
            "invalid degree grid: lo = {lo}, hi = {hi}, count = {count}"
        )));
    }
    let ratio = (hi as f64 / lo as f64).powf(1.0 / (count as f64 - 1.0));
    let mut out = Vec::with_capacity(count);
    let mut v = lo as f64;
    for _ in 0..count {
        let n = v.round() as usize;
        if out.last() != Some(&n) {
            out.push(n);
        }
        v *= ratio;
    }
    if out.last() != Some(&hi) {
        out.push(hi);
    }
    Ok(out)
}

fn validate_ns(ns: &[usize]) -> Result<Vec<usize>> {
    if ns.len() < 2 {
        return Err(Error::Domain("experiments need at least two degree values".into()));
    }
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted[0] == 0 {
        return Err(Error::Domain("degree values must be at least 1".into()));
    }
    if sorted.len() < 2 {
        return Err(Error::Domain("experiments need at least two distinct degrees".into()));
    }
    Ok(sorted)
}

/// The norm used for modulus evaluations inside experiments: same `(p,
/// alpha)` as the request, with the sup-grid capped so that the nested
/// direct quadrature stays affordable. Stability checks are insensitive to
/// this refinement level.
fn modulus_spec(spec: &NormSpec) -> Result<NormSpec> {
    let target = spec.sup_grid().min(1025);
    spec.clone().with_sup_grid(target)
}

fn window_input(report: &mut ExperimentReport, label: &str, status: &WindowStatus) -> bool {
    match status {
        WindowStatus::InWindow => {
            report.input(label, "in-window");
            true
        }
        WindowStatus::Outside(reason) => {
            report.input(label, format!("outside: {reason}"));
            false
        }
    }
}

fn max_y(points: &[(f64, f64)]) -> f64 {
    points.iter().fold(0.0f64, |a, &(_, y)| a.max(y.abs()))
}

/// Points with values above the floor, as a fit window.
fn fittable(points: &[(f64, f64)], floor: f64) -> Vec<(f64, f64)> {
    points.iter().copied().filter(|&(_, y)| y > floor).collect()
}

/// Register the slope of a series (storing a truncated `-fit` companion
/// series when some values sit at the numerical floor), or `None` when no
/// power law is measurable.
fn add_slope_series(
    report: &mut ExperimentReport,
    base_name: &str,
    floor: f64,
) -> Result<Option<String>> {
    let Some(series) = report.find_series(base_name) else {
        return Err(Error::Internal(format!("series '{base_name}' missing")));
    };
    let pts = fittable(&series.points, floor);
    if pts.len() < 2 {
        return Ok(None);
    }
    if pts.len() == series.points.len() {
        return Ok(Some(base_name.to_string()));
    }
    let name = format!("{base_name}-fit");
    let (xl, yl) = (series.x_label.clone(), series.y_label.clone());
    report.add_series(Series::new(name.clone(), xl, yl, pts));
    Ok(Some(name))
}

fn record_slope(report: &mut ExperimentReport, key: &str, series_name: &str) -> Result<f64> {
    let s = report
        .find_series(series_name)
        .ok_or_else(|| Error::Internal(format!("series '{series_name}' missing")))?;
    let slope = fit_order(&s.points, 0..s.points.len())?.fitted_slope;
    report.slopes.insert(key.to_string(), slope);
    Ok(slope)
}

/// Direct-theorem experiment: `E_n(f)` must decay at least as fast as
/// `omega_r(f, 1/n)`, with a stable ratio `C_n = E_n / omega_r(f, 1/n)`.
pub fn direct_experiment(
    def: &FunctionDef,
    spec: &NormSpec,
    r: usize,
    ns: &[usize],
) -> Result<ExperimentReport> {
    let ns = validate_ns(ns)?;
    let mut report = ExperimentReport::new("direct");
    report.input("f", &def.spec).input("p", spec.p()).input("alpha", spec.alpha()).input("r", r);
    report.input("n_grid", format!("{ns:?}"));
    report.input("stability_factor", STABILITY_FACTOR);
    let in_window =
        window_input(&mut report, "window", &validate_window(spec.p(), spec.alpha(), TheoremWindow::Direct));
    report.applicable = in_window;

    let norm_f = weighted_norm(&def.handle, spec)?;
    let floor = 1e-9 * norm_f.max(1.0);
    report.input("norm_f", format!("{norm_f:.6e}"));

    let mspec = modulus_spec(spec)?;
    let mut e_pts = Vec::with_capacity(ns.len());
    let mut w_pts = Vec::with_capacity(ns.len());
    for &n in &ns {
        let e = best_approx(&def.handle, n, spec)?.error;
        let w = smoothness::modulus(&def.handle, r, 1.0 / n as f64, &mspec, Backend::Auto)?.value;
        e_pts.push((n as f64, e));
        w_pts.push((n as f64, w));
    }
    report.add_series(Series::new("E_n", "n", "E_n", e_pts.clone()));
    report.add_series(Series::new("omega", "n", "omega_r(f, 1/n)", w_pts.clone()));

    if max_y(&e_pts) <= floor {
        // Polynomial (or constant) input: everything is at the numerical
        // floor and the theorem holds trivially.
        report.input("regime", "trivial: E_n at numerical floor throughout");
        report.check_from_series(
            "trivial-decay",
            CheckSource::MaxAbs { series: "E_n".into() },
            CheckRule::AtMost { bound: floor },
            "all best-approximation errors sit at the numerical floor",
        )?;
        report.finalize();
        return Ok(report);
    }

    let c_pts: Vec<(f64, f64)> = e_pts
        .iter()
        .zip(&w_pts)
        .filter(|(_, &(_, w))| w > floor)
        .map(|(&(n, e), &(_, w))| (n, e / w))
        .collect();
    report.add_series(Series::new("C_n", "n", "E_n / omega_r(f, 1/n)", c_pts.clone()));
    if let Some(&(_, c0)) = c_pts.first() {
        let (mut lo, mut hi) = (c0, c0);
        for &(_, c) in &c_pts {
            lo = lo.min(c);
            hi = hi.max(c);
        }
        report.empirical_constants.insert("C_direct_min".into(), lo);
        report.empirical_constants.insert("C_direct_max".into(), hi);
    }
    report.check_from_series(
        "constant-stability",
        CheckSource::RatioMaxOverMin { series: "C_n".into() },
        CheckRule::AtMost { bound: STABILITY_FACTOR },
        format!("the empirical constant C_n must stay within a factor {STABILITY_FACTOR}"),
    )?;

    let e_fit = add_slope_series(&mut report, "E_n", floor)?;
    let w_fit = add_slope_series(&mut report, "omega", floor)?;
    match (&e_fit, &w_fit) {
        (Some(e_name), Some(w_name)) => {
            record_slope(&mut report, "slope_E", e_name)?;
            record_slope(&mut report, "slope_omega", w_name)?;
            report.check_from_series(
                "slope-ordering",
                CheckSource::SlopeDiff { series_a: e_name.clone(), series_b: w_name.clone() },
                CheckRule::AtMost { bound: SLOPE_ORDERING_TOLERANCE },
                "E_n must decay at least as fast as the modulus, up to fit noise",
            )?;
            if let Some(rate) = def.expected_rate(spec.p()) {
                report.input("expected_rate", rate);
                report.check_from_series(
                    "decay-slope",
                    CheckSource::Slope { series: e_name.clone() },
                    CheckRule::Within { target: -rate, tol: SLOPE_TOLERANCE },
                    format!("the known singularity fixes the decay exponent at {rate}"),
                )?;
            }
        }
        _ => {
            report.input("regime", "decay too fast for a power-law fit inside the window");
            report.check_from_series(
                "super-algebraic-decay",
                CheckSource::CountAbove { series: "E_n".into(), threshold: floor },
                CheckRule::AtMost { bound: 1.0 },
                "at most one E_n above the floor: no measurable power law, decay is consistent",
            )?;
        }
    }
    report.finalize();
    Ok(report)
}

/// Inverse-theorem experiment: the modulus is controlled by the weighted
/// sum of best approximations,
/// `omega_r(f, 1/n) <= C n^{-2r} sum_{nu=1}^{n} nu^{2r-1} E_nu`.
pub fn inverse_experiment(
    def: &FunctionDef,
    spec: &NormSpec,
    r: usize,
    ns: &[usize],
) -> Result<ExperimentReport> {
    let ns = validate_ns(ns)?;
    let n_max = *ns.last().expect("validated non-empty");
    let mut report = ExperimentReport::new("inverse");
    report.input("f", &def.spec).input("p", spec.p()).input("alpha", spec.alpha()).input("r", r);
    report.input("n_grid", format!("{ns:?}"));
    report.input("stability_factor", STABILITY_FACTOR);
    let in_window =
        window_input(&mut report, "window", &validate_window(spec.p(), spec.alpha(), TheoremWindow::Inverse));
    report.applicable = in_window;

    let norm_f = weighted_norm(&def.handle, spec)?;
    let floor = 1e-9 * norm_f.max(1.0);
    report.input("norm_f", format!("{norm_f:.6e}"));

    let seq = en_sequence(&def.handle, n_max, spec)?;
    report.add_series(Series::new("E_n", "n", "E_n", seq.pairs.clone()));

    let mspec = modulus_spec(spec)?;
    let mut w_pts = Vec::with_capacity(ns.len());
    for &n in &ns {
        let w = smoothness::modulus(&def.handle, r, 1.0 / n as f64, &mspec, Backend::Auto)?.value;
        w_pts.push((n as f64, w));
    }
    report.add_series(Series::new("omega", "n", "omega_r(f, 1/n)", w_pts.clone()));

    // Weighted tail sums: RHS_n = n^{-2r} sum_{nu<=n} nu^{2r-1} E_nu.
    let mut rhs_pts = Vec::with_capacity(ns.len());
    for &n in &ns {
        let mut acc = 0.0;
        for nu in 1..=n {
            acc += (nu as f64).powi(2 * r as i32 - 1) * seq.pairs[nu - 1].1;
        }
        rhs_pts.push((n as f64, (n as f64).powi(-2 * r as i32) * acc));
    }
    report.add_series(Series::new("RHS_n", "n", "n^{-2r} weighted E-sum", rhs_pts.clone()));

    if max_y(&w_pts) <= floor {
        report.input("regime", "trivial: the modulus vanishes (constant input)");
        report.check_from_series(
            "vanishing-modulus",
            CheckSource::MaxAbs { series: "omega".into() },
            CheckRule::AtMost { bound: floor },
            "a vanishing modulus is bounded by any right-hand side",
        )?;
        report.finalize();
        return Ok(report);
    }

    let c_pts: Vec<(f64, f64)> = w_pts
        .iter()
        .zip(&rhs_pts)
        .filter(|(_, &(_, rhs))| rhs > 0.0)
        .map(|(&(n, w), &(_, rhs))| (n, w / rhs))
        .collect();
    report.add_series(Series::new("C_n", "n", "omega / RHS", c_pts.clone()));
    if !c_pts.is_empty() {
        let (mut lo, mut hi) = (c_pts[0].1, c_pts[0].1);
        for &(_, c) in &c_pts {
            lo = lo.min(c);
            hi = hi.max(c);
        }
        report.empirical_constants.insert("C_inverse_min".into(), lo);
        report.empirical_constants.insert("C_inverse_max".into(), hi);
    }

    if seq.pairs[n_max - 1].1 <= floor && max_y(&w_pts) > floor {
        // Polynomial input: the E-tail is exactly zero while the low-degree
        // terms keep RHS_n positive, so C_n decays by construction.
        report.input("regime", "polynomial-degenerate: zero E-tail, C_n decays");
        report.check_measured(
            "degenerate-tail",
            seq.pairs[n_max - 1].1 / norm_f.max(1e-300),
            CheckRule::AtMost { bound: 1e-9 },
            "E_n vanishes beyond the input's degree; stability of C_n is not claimed here",
        );
        report.finalize();
        return Ok(report);
    }

    report.check_from_series(
        "constant-stability",
        CheckSource::RatioMaxOverMin { series: "C_n".into() },
        CheckRule::AtMost { bound: STABILITY_FACTOR },
        format!("the empirical constant C_n must stay within a factor {STABILITY_FACTOR}"),
    )?;
    if let Some(w_name) = add_slope_series(&mut report, "omega", floor)? {
        record_slope(&mut report, "slope_omega", &w_name)?;
    }
    report.finalize();
    Ok(report)
}

/// Coincidence experiment: the decay exponent fitted from `E_n` and the one
/// fitted from `omega_r(f, 1/n)` must agree, provided the rate lies below
/// the saturation order `2r` of the modulus.
pub fn equivalence_experiment(
    def: &FunctionDef,
    spec: &NormSpec,
    r: usize,
    ns: &[usize],
) -> Result<ExperimentReport> {
    let ns = validate_ns(ns)?;
    let mut report = ExperimentReport::new("equivalence");
    report.input("f", &def.spec).input("p", spec.p()).input("alpha", spec.alpha()).input("r", r);
    report.input("n_grid", format!("{ns:?}"));
    let dir_ok =
        window_input(&mut report, "window_direct", &validate_window(spec.p(), spec.alpha(), TheoremWindow::Direct));
    let inv_ok =
        window_input(&mut report, "window_inverse", &validate_window(spec.p(), spec.alpha(), TheoremWindow::Inverse));
    report.applicable = dir_ok && inv_ok;

    let norm_f = weighted_norm(&def.handle, spec)?;
    let floor = 1e-9 * norm_f.max(1.0);
    report.input("norm_f", format!("{norm_f:.6e}"));
    let saturation = 2.0 * r as f64;
    if let Some(rate) = def.expected_rate(spec.p()) {
        report.input("expected_rate", rate);
        if rate >= saturation {
            report.input(
                "guard",
                format!("expected rate {rate} is at or beyond the saturation order {saturation}"),
            );
        }
    }

    let mspec = modulus_spec(spec)?;
    let mut e_pts = Vec::with_capacity(ns.len());
    let mut w_pts = Vec::with_capacity(ns.len());
    for &n in &ns {
        e_pts.push((n as f64, best_approx(&def.handle, n, spec)?.error));
        let w = smoothness::modulus(&def.handle, r, 1.0 / n as f64, &mspec, Backend::Auto)?.value;
        w_pts.push((n as f64, w));
    }
    report.add_series(Series::new("E_n", "n", "E_n", e_pts.clone()));
    report.add_series(Series::new("omega", "n", "omega_r(f, 1/n)", w_pts.clone()));

    if max_y(&e_pts) <= floor && max_y(&w_pts) <= floor {
        report.input("regime", "trivial: both series at the numerical floor");
        report.check_from_series(
            "trivial-decay",
            CheckSource::MaxAbs { series: "E_n".into() },
            CheckRule::AtMost { bound: floor },
            "degenerate input; the coincidence holds vacuously",
        )?;
        report.finalize();
        return Ok(report);
    }

    let e_fit = add_slope_series(&mut report, "E_n", floor)?;
    let w_fit = add_slope_series(&mut report, "omega", floor)?;
    let slope_w = match &w_fit {
        Some(name) => Some(record_slope(&mut report, "slope_omega", name)?),
        None => None,
    };
    let slope_e = match &e_fit {
        Some(name) => Some(record_slope(&mut report, "slope_E", name)?),
        None => None,
    };
    if let Some(se) = slope_e {
        report.slopes.insert("lambda_E".into(), -se);
    }
    if let Some(sw) = slope_w {
        report.slopes.insert("lambda_omega".into(), -sw);
    }

    match (&e_fit, &w_fit, slope_e, slope_w) {
        (Some(_), Some(w_name), _, Some(sw)) if -sw >= saturation - 0.25 => {
            // The modulus decays at (or beyond) its maximal order 2r: the
            // function is smoother than the window resolves, so no
            // coincidence of exponents is claimed — only that both series
            // are at least that steep.
            report.input("regime", format!("saturated: lambda_omega near the maximal order {saturation}"));
            let w_name = w_name.clone();
            report.check_from_series(
                "modulus-saturated",
                CheckSource::Slope { series: w_name },
                CheckRule::AtMost { bound: -(saturation - 0.25) },
                "the modulus runs at its maximal order; rates above it are invisible",
            )?;
            if let Some(e_name) = &e_fit {
                report.check_from_series(
                    "decay-at-least-saturation",
                    CheckSource::Slope { series: e_name.clone() },
                    CheckRule::AtMost { bound: -(saturation - 0.35) },
                    "best approximation must keep up with the saturated modulus",
                )?;
            }
        }
        (Some(e_name), Some(w_name), Some(_), Some(_)) => {
            let (e_name, w_name) = (e_name.clone(), w_name.clone());
            report.check_from_series(
                "slope-agreement",
                CheckSource::SlopeDiff { series_a: e_name, series_b: w_name },
                CheckRule::AbsAtMost { bound: EQUIVALENCE_TOLERANCE },
                "fitted decay exponents from E_n and from the modulus must coincide",
            )?;
            if let (Some(le), Some(lw)) =
                (report.slopes.get("lambda_E"), report.slopes.get("lambda_omega"))
            {
                report
                    .empirical_constants
                    .insert("lambda_gap".into(), (le - lw).abs());
            }
        }
        _ => {
            report.input("regime", "decay beneath the numerical floor before a fit is possible");
            report.check_from_series(
                "super-algebraic-decay",
                CheckSource::CountAbove { series: "E_n".into(), threshold: floor },
                CheckRule::AtMost { bound: 1.0 },
                "no measurable power law; consistent with smoothness beyond every window",
            )?;
        }
    }
    report.finalize();
    Ok(report)
}

/// Polynomial families swept by the derivative/norm-comparison check.
fn bm_random_coeffs(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn deriv_handle(basis: std::sync::Arc<JacobiBasis>, coeffs: Vec<f64>) -> FunctionHandle {
    FunctionHandle::from_fn(move |x| {
        let mut acc = 0.0;
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                acc += c * basis.eval_deriv(k, x).expect("degree within basis");
            }
        }
        acc
    })
}

fn value_handle(basis: std::sync::Arc<JacobiBasis>, coeffs: Vec<f64>) -> FunctionHandle {
    FunctionHandle::from_fn(move |x| {
        let mut row = vec![0.0; basis.max_degree() + 1];
        basis.eval_all(x, &mut row);
        row.iter().zip(&coeffs).map(|(p, c)| p * c).sum()
    })
}

/// Derivative and norm-comparison ratio sweep.
///
/// For each `n` in the grid and polynomial `P` of degree `n - 1` the sweep
/// records
///
/// * `ratio1 = ||P'||_{p, alpha+1/2} / (n ||P||_{p, alpha})` and
/// * `ratio2(rho) = ||P||_{p, alpha} / (n^{2 rho} ||P||_{p, alpha+rho})`,
///
/// for the basis family `P = P_{n-1}`, a seeded random-coefficient family,
/// and (as a diagnostic) the reproducing-kernel family in the
/// `(2 alpha + 2 rho)`-weight basis, which is the natural candidate
/// extremizer of the second inequality. The declared pass rule is a
/// factor-2 band across the grid for the two pinned families; the
/// inequalities' boundedness itself is checked separately.
pub fn bernstein_markov_check(
    p: PExponent,
    alpha: f64,
    ns: &[usize],
    seed: u64,
) -> Result<ExperimentReport> {
    let ns = validate_ns(ns)?;
    let mut report = ExperimentReport::new("bernstein-markov");
    report
        .input("p", p)
        .input("alpha", alpha)
        .input("n_grid", format!("{ns:?}"))
        .input("seed", seed)
        .input("band_factor", BAND_FACTOR);
    let spec_base = NormSpec::new(p, alpha)?;
    let spec_half = NormSpec::new(p, alpha + 0.5)?;
    let rhos = [0.5, 1.0];

    let n_top = *ns.last().expect("non-empty");
    let basis22 = JacobiBasis::shared(2.0, 2.0, n_top.max(1) - 1)?;

    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for &n in &ns {
        let deg = n - 1;
        let mut fams: Vec<(&str, std::sync::Arc<JacobiBasis>, Vec<f64>)> = Vec::new();
        let mut mode = vec![0.0; deg + 1];
        mode[deg] = 1.0;
        fams.push(("basis", basis22.clone(), mode));
        fams.push(("random", basis22.clone(), bm_random_coeffs(seed, n)));

        for (fam, basis, coeffs) in &fams {
            let value = value_handle(basis.clone(), coeffs.clone());
            let deriv = deriv_handle(basis.clone(), coeffs.clone());
            let norm_base = weighted_norm(&value, &spec_base)?;
            let norm_deriv = weighted_norm(&deriv, &spec_half)?;
            let ratio1 = norm_deriv / (n as f64 * norm_base);
            series
                .entry(format!("derivative-ratio-{fam}"))
                .or_default()
                .push((n as f64, ratio1));
            for &rho in &rhos {
                let spec_rho = NormSpec::new(p, alpha + rho)?;
                let norm_rho = weighted_norm(&value, &spec_rho)?;
                let ratio2 = norm_base / ((n as f64).powf(2.0 * rho) * norm_rho);
                series
                    .entry(format!("comparison-ratio-{fam}-rho-{rho}"))
                    .or_default()
                    .push((n as f64, ratio2));
            }
        }

        // Diagnostic extremal family for the norm comparison: the
        // reproducing kernel at the right endpoint in the target-weight
        // basis concentrates exactly where the comparison is tight.
        for &rho in &rhos {
            let beta = 2.0 * (alpha + rho);
            let kb = JacobiBasis::shared(beta, beta, deg)?;
            let mut coeffs = Vec::with_capacity(deg + 1);
            for k in 0..=deg {
                coeffs.push(1.0 / kb.norm_sq(k)?);
            }
            let value = value_handle(kb, coeffs);
            let spec_rho = NormSpec::new(p, alpha + rho)?;
            let ratio2 = weighted_norm(&value, &spec_base)?
                / ((n as f64).powf(2.0 * rho) * weighted_norm(&value, &spec_rho)?);
            series
                .entry(format!("comparison-ratio-extremal-rho-{rho}"))
                .or_default()
                .push((n as f64, ratio2));
        }
    }

    for (name, pts) in series {
        report.add_series(Series::new(name, "n", "ratio", pts));
    }

    // Boundedness of the inequalities (some constant exists and is modest).
    for fam in ["basis", "random"] {
        report.check_from_series(
            format!("derivative-bound-{fam}"),
            CheckSource::MaxAbs { series: format!("derivative-ratio-{fam}") },
            CheckRule::AtMost { bound: BAND_FACTOR },
            "the derivative inequality holds with a modest constant",
        )?;
        for rho in ["0.5", "1"] {
            report.check_from_series(
                format!("comparison-bound-{fam}-rho-{rho}"),
                CheckSource::MaxAbs { series: format!("comparison-ratio-{fam}-rho-{rho}") },
                CheckRule::AtMost { bound: BAND_FACTOR },
                "the norm-comparison inequality holds with a modest constant",
            )?;
        }
    }

    // Declared band rule: the ratios must stay within a factor-2 band
    // across the sweep. The basis family meets it for the derivative
    // inequality; the norm-comparison families do not (bulk-dominated
    // norms cannot see the n^{2 rho} factor), which this check reports
    // honestly rather than relaxing the band.
    let band =
        |report: &mut ExperimentReport, check: String, series_name: String| -> Result<()> {
            let observed = eval_source(
                &report.series,
                &CheckSource::RatioMaxOverMin { series: series_name.clone() },
                f64::NAN,
            )?;
            report.check_from_series(
                check,
                CheckSource::RatioMaxOverMin { series: series_name },
                CheckRule::AtMost { bound: BAND_FACTOR },
                format!("measured band factor {observed:.4}"),
            )
        };
    for fam in ["basis", "random"] {
        band(
            &mut report,
            format!("derivative-band-{fam}"),
            format!("derivative-ratio-{fam}"),
        )?;
        for rho in ["0.5", "1"] {
            band(
                &mut report,
                format!("comparison-band-{fam}-rho-{rho}"),
                format!("comparison-ratio-{fam}-rho-{rho}"),
            )?;
        }
    }
    for rho in ["0.5", "1"] {
        band(
            &mut report,
            format!("comparison-band-extremal-rho-{rho}"),
            format!("comparison-ratio-extremal-rho-{rho}"),
        )?;
    }

    for check in &report.checks {
        report
            .empirical_constants
            .entry(format!("band:{}", check.name))
            .or_insert(check.observed);
    }
    report.finalize();
    Ok(report)
}

/// Configuration of the verification suite.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Quadrature order for the direct-translation checks. The default
    /// resolves every kernel integral to machine accuracy; deliberately
    /// small values demonstrate which checks catch the under-resolution.
    pub z_order: usize,
    /// Seed for the randomized property checks.
    pub seed: u64,
    /// Registry entries exercised by the function-dependent checks; `None`
    /// selects the default set, an explicit empty list is an error.
    pub functions: Option<Vec<String>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { z_order: translation::DEFAULT_Z_ORDER, seed: 2024, functions: None }
    }
}

fn linspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect()
}

/// Direct kernel translation with an arbitrary (possibly deliberately
/// under-resolved) `z` order: the suite's probe for quadrature
/// sensitivity.
fn raw_translate(
    variant: Variant,
    f: &dyn Fn(f64) -> f64,
    y: f64,
    x: f64,
    z_order: usize,
) -> Result<f64> {
    let rule = quadrature::chebyshev_gauss(z_order)?;
    let mut acc = 0.0;
    for (&z, &w) in rule.nodes().iter().zip(rule.weights()) {
        acc += w * translation::kernel_weight(variant, x, y, z)? * f(translation::orbit(x, y, z));
    }
    Ok(acc)
}

/// Run every module's invariants with their declared tolerances. Returns a
/// report with one named check per invariant; the verdict is the
/// conjunction.
pub fn verify_suite(config: &VerifyConfig) -> Result<ExperimentReport> {
    if let Some(functions) = &config.functions {
        if functions.is_empty() {
            return Err(Error::Usage(
                "empty function selection: the suite refuses to pass vacuously".into(),
            ));
        }
    }
    let function_specs = config
        .functions
        .clone()
        .unwrap_or_else(|| {
            vec!["exp".into(), "abs".into(), "abspow:mu=1.5".into(), "runge".into()]
        });
    let defs: Vec<FunctionDef> =
        function_specs.iter().map(|s| registry::resolve(s)).collect::<Result<_>>()?;

    let mut rep = ExperimentReport::new("verify");
    rep.input("z_order", config.z_order)
        .input("seed", config.seed)
        .input("functions", function_specs.join(" "));

    // ---- quadrature ----
    {
        let mut worst = 0.0f64;
        for &(a, b) in &[(2.0, 2.0), (0.0, 0.0), (1.0, 3.0), (0.5, 1.5)] {
            let rule = quadrature::gauss_rule(a, b, 24)?;
            let exact = 2f64.powf(a + b + 1.0) * special::beta(a + 1.0, b + 1.0);
            worst = worst.max((rule.total_mass() - exact).abs() / exact);
        }
        rep.check_measured(
            "quadrature-mass-closed-form",
            worst,
            CheckRule::AtMost { bound: 1e-13 },
            "total mass against the Euler beta integral",
        );
    }
    {
        let rule = quadrature::gauss_rule(2.0, 2.0, 16)?;
        let mut worst = 0.0f64;
        for j in 0..=6i32 {
            let exact = 2.0
                * (1.0 / (2.0 * j as f64 + 1.0) - 2.0 / (2.0 * j as f64 + 3.0)
                    + 1.0 / (2.0 * j as f64 + 5.0));
            let got = rule.integrate(|x| x.powi(2 * j));
            worst = worst.max((got - exact).abs());
        }
        rep.check_measured(
            "quadrature-polynomial-exactness",
            worst,
            CheckRule::AtMost { bound: 1e-14 },
            "even monomials against closed-form weighted integrals",
        );
    }
    {
        let rule = quadrature::gauss_rule(2.0, 2.0, 33)?;
        let nodes = rule.nodes();
        let mut worst = 0.0f64;
        for i in 0..nodes.len() {
            worst = worst.max((nodes[i] + nodes[nodes.len() - 1 - i]).abs());
        }
        rep.check_measured(
            "quadrature-node-symmetry",
            worst,
            CheckRule::AtMost { bound: 1e-15 },
            "symmetric weight, symmetric nodes",
        );
        let min_w = rule.weights().iter().fold(f64::MAX, |a, &w| a.min(w));
        rep.check_measured(
            "quadrature-weight-positivity",
            min_w,
            CheckRule::AtLeast { bound: f64::MIN_POSITIVE },
            "Gauss weights are strictly positive",
        );
    }

    // ---- basis ----
    {
        let basis = JacobiBasis::shared(2.0, 2.0, 64)?;
        let vals = basis.values(1.0);
        let worst = vals.iter().fold(0.0f64, |a, &v| a.max((v - 1.0).abs()));
        rep.check_measured(
            "basis-normalization-at-one",
            worst,
            CheckRule::AtMost { bound: 1e-15 },
            "normalization P_k(1) = 1 is exact by construction",
        );

        let rule = quadrature::gauss_rule(2.0, 2.0, 16)?;
        let mut worst_off = 0.0f64;
        let mut worst_h = 0.0f64;
        let mut row = vec![0.0; basis.max_degree() + 1];
        let mut gram = vec![0.0; 13 * 13];
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            basis.eval_all(x, &mut row[..]);
            for j in 0..13 {
                for k in 0..=j {
                    gram[j * 13 + k] += w * row[j] * row[k];
                }
            }
        }
        for j in 0..13usize {
            let hj = 128.0
                / ((2 * j + 5) as f64
                    * (j + 1) as f64
                    * (j + 2) as f64
                    * (j + 3) as f64
                    * (j + 4) as f64);
            worst_h = worst_h.max((gram[j * 13 + j] - hj).abs() / hj);
            for k in 0..j {
                let scale = (gram[j * 13 + j] * gram[k * 13 + k]).sqrt();
                worst_off = worst_off.max(gram[j * 13 + k].abs() / scale);
            }
        }
        rep.check_measured(
            "basis-orthogonality",
            worst_off,
            CheckRule::AtMost { bound: 1e-12 },
            "normalized off-diagonal Gram entries",
        );
        rep.check_measured(
            "basis-norm-closed-form",
            worst_h,
            CheckRule::AtMost { bound: 1e-12 },
            "squared norms against the rational closed form",
        );
    }
    {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let basis = JacobiBasis::shared(2.0, 2.0, 20)?;
        let coeffs: Vec<f64> = (0..=20).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sf = SpectralFunction::from_coeffs(basis, coeffs.clone())?;
        let rule = quadrature::gauss_rule(2.0, 2.0, 64)?;
        let again = SpectralFunction::analyze(|x| sf.eval(x), 20, &rule)?;
        let worst = coeffs
            .iter()
            .zip(again.coeffs())
            .fold(0.0f64, |a, (c, d)| a.max((c - d).abs()));
        rep.check_measured(
            "spectral-round-trip",
            worst,
            CheckRule::AtMost { bound: 1e-10 },
            "synthesis then analysis returns the coefficients",
        );
    }

    // ---- weighted space ----
    {
        let f = FunctionHandle::from_fn(f64::exp);
        let g = FunctionHandle::from_fn(|x: f64| (3.0 * x).sin());
        let fg = FunctionHandle::from_fn(|x: f64| x.exp() + (3.0 * x).sin());
        let f2 = FunctionHandle::from_fn(|x: f64| 2.0 * x.exp());
        let mut worst_scale = 0.0f64;
        let mut worst_tri = 0.0f64;
        for p in [
            PExponent::finite(1.0)?,
            PExponent::finite(2.0)?,
            PExponent::finite(3.5)?,
            PExponent::Infinity,
        ] {
            let spec = NormSpec::new(p, 1.0)?;
            let (nf, ng, nfg, nf2) = (
                weighted_norm(&f, &spec)?,
                weighted_norm(&g, &spec)?,
                weighted_norm(&fg, &spec)?,
                weighted_norm(&f2, &spec)?,
            );
            worst_scale = worst_scale.max((nf2 - 2.0 * nf).abs() / nf);
            worst_tri = worst_tri.max(nfg - nf - ng);
        }
        rep.check_measured(
            "norm-scaling",
            worst_scale,
            CheckRule::AtMost { bound: 1e-10 },
            "absolute homogeneity across exponents",
        );
        rep.check_measured(
            "norm-triangle",
            worst_tri,
            CheckRule::AtMost { bound: 1e-10 },
            "triangle inequality across exponents",
        );
    }
    {
        let inf = PExponent::Infinity;
        let p1 = PExponent::finite(1.0)?;
        let p2 = PExponent::finite(2.0)?;
        let cases: &[(PExponent, f64, TheoremWindow, bool)] = &[
            (p2, 1.0, TheoremWindow::Inverse, true),
            (inf, 0.5, TheoremWindow::Inverse, false),
            (inf, 1.0, TheoremWindow::Inverse, true),
            (inf, 1.5, TheoremWindow::Inverse, false),
            (p1, 0.6, TheoremWindow::Inverse, true),
            (p1, 0.5, TheoremWindow::Inverse, false),
            (p2, 2.6, TheoremWindow::Direct, false),
            (p2, 2.4, TheoremWindow::Direct, true),
            (p1, 2.0, TheoremWindow::Direct, true),
            (p1, 2.1, TheoremWindow::Direct, false),
            (inf, 2.9, TheoremWindow::Direct, true),
            (inf, 3.0, TheoremWindow::Direct, false),
        ];
        let mismatches = cases
            .iter()
            .filter(|(p, a, w, expect)| validate_window(*p, *a, *w).is_in_window() != *expect)
            .count();
        rep.check_measured(
            "window-table",
            mismatches as f64,
            CheckRule::AtMost { bound: 0.0 },
            "pinned (p, alpha) window membership table",
        );
    }

    // ---- translation (z-order sensitive) ----
    let grid = linspace(-0.95, 0.95, 21);
    {
        let one = |_: f64| 1.0;
        let mut worst_full = 0.0f64;
        let mut worst_aux1 = 0.0f64;
        for &y in &grid {
            for &x in &grid {
                let tf = raw_translate(Variant::Full, &one, y, x, config.z_order)?;
                worst_full = worst_full.max((tf - 1.0).abs());
                let t1 = raw_translate(Variant::Aux1, &one, y, x, config.z_order)?;
                worst_aux1 = worst_aux1.max((t1 - (1.5 * y * y - 0.5)).abs());
            }
        }
        rep.check_measured(
            "translation-constant-full",
            worst_full,
            CheckRule::AtMost { bound: 1e-10 },
            "the full kernel has unit mass",
        );
        rep.check_measured(
            "translation-constant-aux1",
            worst_aux1,
            CheckRule::AtMost { bound: 1e-10 },
            "the first auxiliary kernel maps 1 to (3y^2 - 1)/2",
        );
    }
    {
        let basis = JacobiBasis::shared(2.0, 2.0, 12)?;
        let mut worst_eigen = 0.0f64;
        let mut worst_rank1 = 0.0f64;
        for nu in 0..=12usize {
            let f = |x: f64| basis.eval(nu, x).expect("within basis");
            for &y in &grid {
                let table = translation::MultiplierTable::shared(y, 12)?;
                let m_aux1 = table.multipliers(Variant::Aux1)[nu];
                let py = basis.eval(nu, y)?;
                for &x in &grid {
                    let px = basis.eval(nu, x)?;
                    let t2 = raw_translate(Variant::Aux2, &f, y, x, config.z_order)?;
                    worst_eigen = worst_eigen.max((t2 - px * py).abs());
                    let t1 = raw_translate(Variant::Aux1, &f, y, x, config.z_order)?;
                    worst_rank1 = worst_rank1.max((t1 - px * m_aux1).abs());
                }
            }
        }
        rep.check_measured(
            "translation-eigenfunction-product",
            worst_eigen,
            CheckRule::AtMost { bound: 1e-9 },
            "second auxiliary translation acts as P_nu(x) P_nu(y); \
             an under-resolved z quadrature shows up here first",
        );
        rep.check_measured(
            "translation-rank-one-factorization",
            worst_rank1,
            CheckRule::AtMost { bound: 1e-8 },
            "first auxiliary translation factorizes through its multiplier",
        );
    }
    {
        let ys = linspace(-1.0, 1.0, 41);
        let mut worst = 0.0f64;
        for &y in &ys {
            let table = translation::MultiplierTable::shared(y, 48)?;
            let full = table.multipliers(Variant::Full);
            worst = worst.max((full[0] - 1.0).abs());
            worst = worst.max((full[1] - y.powi(3)).abs());
        }
        rep.check_measured(
            "translation-multiplier-anchors",
            worst,
            CheckRule::AtMost { bound: 1e-9 },
            "lowest multipliers have closed forms 1 and y^3",
        );
        let mut worst_rel = 0.0f64;
        for &y in &[-0.95, -0.4, 0.1, 0.62, 0.9] {
            let table = translation::MultiplierTable::shared(y, 48)?;
            let full = table.multipliers(Variant::Full);
            let a1 = table.multipliers(Variant::Aux1);
            let a2 = table.multipliers(Variant::Aux2);
            for k in 0..=48 {
                worst_rel =
                    worst_rel.max((full[k] - a1[k] - 1.5 * (1.0 - y * y) * a2[k]).abs());
            }
        }
        rep.check_measured(
            "translation-kernel-relation",
            worst_rel,
            CheckRule::AtMost { bound: 2e-10 },
            "pointwise kernel decomposition carries to the multipliers",
        );
    }
    {
        // Self-adjointness in the (2,2)-weighted inner product.
        let basis = JacobiBasis::shared(2.0, 2.0, 6)?;
        let rule = quadrature::gauss_rule(2.0, 2.0, 64)?;
        let ys = linspace(-0.95, 0.95, 11);
        let mut worst = 0.0f64;
        for variant in [Variant::Aux1, Variant::Aux2] {
            for &y in &ys {
                // Translate every basis function once per x node.
                let nx = rule.nodes().len();
                let mut tvals = vec![0.0; 7 * nx];
                for j in 0..=6usize {
                    let f = |x: f64| basis.eval(j, x).expect("within basis");
                    for (i, &x) in rule.nodes().iter().enumerate() {
                        tvals[j * nx + i] = raw_translate(variant, &f, y, x, config.z_order)?;
                    }
                }
                let mut bvals = vec![0.0; 7 * nx];
                for (i, &x) in rule.nodes().iter().enumerate() {
                    let mut row = vec![0.0; 7];
                    basis.eval_all(x, &mut row);
                    for j in 0..=6 {
                        bvals[j * nx + i] = row[j];
                    }
                }
                for j in 0..=6usize {
                    for k in j..=6usize {
                        let mut tj_k = 0.0;
                        let mut tk_j = 0.0;
                        for (i, &w) in rule.weights().iter().enumerate() {
                            tj_k += w * tvals[j * nx + i] * bvals[k * nx + i];
                            tk_j += w * tvals[k * nx + i] * bvals[j * nx + i];
                        }
                        worst = worst.max((tj_k - tk_j).abs());
                    }
                }
            }
        }
        rep.check_measured(
            "translation-self-adjointness",
            worst,
            CheckRule::AtMost { bound: 1e-8 },
            "both auxiliary kernels are symmetric in the weighted inner product",
        );
    }
    {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x6f72_6269);
        let mut worst = 0.0f64;
        for _ in 0..10_000 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let y: f64 = rng.gen_range(-1.0..1.0);
            let z: f64 = rng.gen_range(-1.0..1.0);
            let r = translation::orbit(x, y, z);
            worst = worst.max(r.abs() - 1.0);
            let u = (1.0 - x * x).sqrt();
            let v = (1.0 - y * y).sqrt();
            let lhs = 1.0 - r * r;
            worst = worst.max((lhs - ((x * v + y * z * u).powi(2) + (1.0 - x * x) * (1.0 - z * z))).abs());
            worst = worst.max((lhs - ((y * u + x * z * v).powi(2) + (1.0 - y * y) * (1.0 - z * z))).abs());
        }
        rep.check_measured(
            "orbit-identities",
            worst,
            CheckRule::AtMost { bound: 1e-12 },
            "orbit point stays in [-1, 1] with two exact square decompositions",
        );
    }
    {
        // Backend agreement on a smooth function (translation and
        // differences). The reference z order never goes below the
        // library's floor: this check validates agreement, not
        // under-resolution.
        let z_ref = config.z_order.max(translation::DEFAULT_Z_ORDER);
        let rule = quadrature::gauss_rule(2.0, 2.0, 96)?;
        let sf = SpectralFunction::analyze(f64::exp, 40, &rule)?;
        let mut worst_t = 0.0f64;
        for &y in &[-0.62, 0.3] {
            let ts = translation::translate_spectral(&sf, Variant::Full, y)?;
            for &x in &grid {
                let td = translation::translate_direct(f64::exp, Variant::Full, y, x, z_ref)?;
                worst_t = worst_t.max((td - ts.eval(x)).abs());
            }
        }
        rep.check_measured(
            "translation-backend-agreement",
            worst_t,
            CheckRule::AtMost { bound: 1e-7 },
            "spectral multipliers against direct kernel quadrature",
        );

        let f = FunctionHandle::from_fn(f64::exp);
        let mut worst_d = 0.0f64;
        for ts_steps in [vec![0.7], vec![0.7, 0.4]] {
            let ds = smoothness::difference(&f, &ts_steps, Backend::Spectral { n_max: 40 })?;
            let dd = smoothness::difference(&f, &ts_steps, Backend::Direct { z_order: z_ref })?;
            for &x in &grid {
                worst_d = worst_d.max((ds.eval(x) - dd.eval(x)).abs());
            }
        }
        rep.check_measured(
            "difference-backend-agreement",
            worst_d,
            CheckRule::AtMost { bound: 1e-7 },
            "generalized differences through both backends",
        );
    }

    // ---- smoothness ----
    {
        let spec = NormSpec::new(PExponent::finite(2.0)?, 1.0)?;
        let f = FunctionHandle::from_fn(f64::exp);
        let mut prev = 0.0;
        let mut worst = 0.0f64;
        for &delta in &[0.2, 0.5, 0.9, 1.4, 2.0, 2.6, std::f64::consts::PI] {
            let value = smoothness::modulus(&f, 1, delta, &spec, Backend::Auto)?.value;
            worst = worst.max(prev - value);
            prev = value;
        }
        rep.check_measured(
            "modulus-monotonicity",
            worst,
            CheckRule::AtMost { bound: 1e-12 },
            "the modulus is nondecreasing in delta",
        );

        let c = FunctionHandle::from_fn(|_| 2.5);
        let value = smoothness::modulus(&c, 2, 1.0, &spec, Backend::Auto)?.value;
        rep.check_measured(
            "modulus-constant-zero",
            value,
            CheckRule::AtMost { bound: 1e-12 },
            "constants are invariant under the translation average",
        );
    }
    {
        let basis = JacobiBasis::shared(2.0, 2.0, 1)?;
        let sf = SpectralFunction::from_coeffs(basis, vec![0.0, 1.0])?;
        let f = FunctionHandle::Spectral(sf);
        let spec = NormSpec::new(PExponent::Infinity, 0.0)?;
        let mut worst = 0.0f64;
        for &delta in &[0.25, 0.7, 1.2] {
            let got = smoothness::modulus(&f, 1, delta, &spec, Backend::Auto)?.value;
            let law = 1.0 - delta.cos().powi(3);
            worst = worst.max((got - law).abs());
        }
        rep.check_measured(
            "modulus-cosine-law",
            worst,
            CheckRule::AtMost { bound: 1e-4 },
            "first modulus of the identity function has the closed form 1 - cos^3(delta)",
        );
    }

    // ---- best approximation ----
    {
        let f = FunctionHandle::from_fn(f64::exp);
        let spec = NormSpec::new(PExponent::finite(2.0)?, 1.0)?;
        let res = best_approx(&f, 8, &spec)?;
        let worst = residual_orthogonality(&f, &res, &spec)? / weighted_norm(&f, &spec)?;
        rep.check_measured(
            "projection-orthogonality",
            worst,
            CheckRule::AtMost { bound: 1e-9 },
            "the least-squares residual is orthogonal to the space",
        );

        let spec_inf = NormSpec::new(PExponent::Infinity, 0.0)?;
        let mut worst_margin = f64::MAX;
        for n in [5usize, 8, 12] {
            let res = best_approx(&f, n, &spec_inf)?;
            let cert = equioscillation_certificate(&f, &res, &spec_inf, 0.01)?;
            worst_margin = worst_margin.min(cert.alternations as f64 - (n as f64 + 1.0));
        }
        rep.check_measured(
            "equioscillation-count",
            worst_margin,
            CheckRule::AtLeast { bound: 0.0 },
            "minimax residual alternates at least n + 1 times within 1%",
        );
    }
    {
        let spec = NormSpec::new(PExponent::finite(2.0)?, 1.0)?;
        let mut worst = f64::NEG_INFINITY;
        for def in &defs {
            let seq = en_sequence(&def.handle, 12, &spec)?;
            for w in seq.pairs.windows(2) {
                worst = worst.max(w[1].1 - w[0].1);
            }
        }
        rep.check_measured(
            "en-sequence-monotone",
            worst,
            CheckRule::AtMost { bound: 1e-10 },
            "best-approximation errors never increase with the degree",
        );
    }
    {
        let exact: Vec<(f64, f64)> = (2..=32).map(|n| (n as f64, 3.0 * (n as f64).powi(-2))).collect();
        let slope = fit_order(&exact, 0..exact.len())?.fitted_slope;
        rep.check_measured(
            "fit-order-exact",
            (slope + 2.0).abs(),
            CheckRule::AtMost { bound: 1e-12 },
            "log-log fit recovers a pure power law exactly",
        );
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x666974);
        let noisy: Vec<(f64, f64)> = (4..=64)
            .map(|n| {
                let u: f64 = rng.gen_range(-1.0..1.0);
                (n as f64, (n as f64).powi(-1) * (1.0 + 0.01 * u))
            })
            .collect();
        let slope = fit_order(&noisy, 0..noisy.len())?.fitted_slope;
        rep.check_measured(
            "fit-order-noise-robust",
            (slope + 1.0).abs(),
            CheckRule::AtMost { bound: 0.05 },
            "one percent multiplicative noise moves the fitted slope by less than 0.05",
        );
    }
    {
        let basis = JacobiBasis::shared(2.0, 2.0, 3)?;
        let sf = SpectralFunction::from_coeffs(basis, vec![1.0, -0.5, 0.0, 0.25])?;
        let f = FunctionHandle::Spectral(sf);
        let mut worst = 0.0f64;
        for p in [PExponent::finite(2.0)?, PExponent::Infinity] {
            let spec = NormSpec::new(p, 1.0)?;
            worst = worst.max(best_approx(&f, 5, &spec)?.error);
        }
        rep.check_measured(
            "polynomial-reproduction",
            worst,
            CheckRule::AtMost { bound: 1e-10 },
            "polynomials inside the space are reproduced",
        );
    }

    // ---- smoothing operator ----
    {
        let mut worst = 0.0f64;
        for q in 1..=3usize {
            let op = JacksonOperator::new(q, 1, 1)?;
            worst = worst.max((op.gamma() - 4.0 / 3.0).abs());
        }
        let op = JacksonOperator::new(1, 2, 1)?;
        worst = worst.max((op.gamma() - 256.0 / 15.0).abs());
        rep.check_measured(
            "jackson-normalization",
            worst,
            CheckRule::AtMost { bound: 1e-11 },
            "kernel normalization against closed forms",
        );
    }
    {
        let basis = JacobiBasis::shared(2.0, 2.0, 2)?;
        let one = FunctionHandle::Spectral(SpectralFunction::from_coeffs(
            basis,
            vec![1.0, 0.0, 0.0],
        )?);
        let mut worst = 0.0f64;
        for r in 1..=3usize {
            let op = JacksonOperator::new(1, 3, r)?;
            let out = op.apply(&one)?;
            worst = worst.max((out.coeffs()[0] - 1.0).abs());
            for &c in &out.coeffs()[1..] {
                worst = worst.max(c.abs());
            }
        }
        rep.check_measured(
            "jackson-constant-reproduction",
            worst,
            CheckRule::AtMost { bound: 1e-12 },
            "the smoothing operator reproduces constants for every order",
        );
    }
    {
        let mut worst = 0.0f64;
        for q in [1usize, 2] {
            for m in [2usize, 3, 4] {
                let op = JacksonOperator::new(q, m, 1)?;
                let d = op.degree_bound();
                let beta = op.multipliers(d + 8)?;
                for &b in &beta[d + 1..] {
                    worst = worst.max((b + 1.0).abs());
                }
            }
        }
        rep.check_measured(
            "jackson-degree-bound",
            worst,
            CheckRule::AtMost { bound: 1e-7 },
            "averaged difference multipliers hit -1 beyond (q+2)(m-1), truncating the output",
        );
    }
    {
        let f = FunctionHandle::from_fn(f64::exp);
        let mut worst = 0.0f64;
        for m in [2usize, 3] {
            for r in [1usize, 2] {
                let op = JacksonOperator::new(1, m, r)?;
                let spectral = op.apply(&f)?;
                for &x in &[-0.9, -0.3, 0.0, 0.5, 0.8] {
                    let direct = op.apply_direct(&f, x, 24, 64)?;
                    worst = worst.max((direct - spectral.eval(x)).abs());
                }
            }
        }
        rep.check_measured(
            "jackson-backend-agreement",
            worst,
            CheckRule::AtMost { bound: 1e-7 },
            "multiplier route against literal nested quadrature",
        );
    }
    {
        let mut violations = 0usize;
        for lambda in [0.5, 1.0, 2.0, 3.5] {
            for n in [1usize, 5, 16, 48] {
                let (q, m) = jackson::choose_parameters(lambda, n)?;
                if 2.0 * q as f64 <= lambda || (q + 2) * (m - 1) > n.saturating_sub(1) {
                    violations += 1;
                }
            }
        }
        rep.check_measured(
            "jackson-parameter-choice",
            violations as f64,
            CheckRule::AtMost { bound: 0.0 },
            "chosen (q, m) respect the rate and the degree budget",
        );
    }

    // ---- registry and reports ----
    {
        let failures = registry::builtin_names()
            .iter()
            .filter(|name| registry::resolve(name).is_err())
            .count();
        rep.check_measured(
            "registry-resolution",
            failures as f64,
            CheckRule::AtMost { bound: 0.0 },
            "every catalog entry resolves with its defaults",
        );
    }
    {
        let dir = std::env::temp_dir().join(format!("approxlab-verify-{}", std::process::id()));
        std::fs::create_dir_all(&dir)
            .map_err(|e| Error::Io { path: dir.display().to_string(), source: e })?;
        let series = vec![Series::new(
            "probe",
            "n",
            "v",
            (1..=5).map(|n| (n as f64, 1.0 / n as f64)).collect(),
        )];
        let a = dir.join("a.csv");
        let b = dir.join("b.csv");
        crate::report::write_csv(&a, &series)?;
        crate::report::write_csv(&b, &series)?;
        let same = std::fs::read(&a).ok() == std::fs::read(&b).ok();
        let _ = std::fs::remove_dir_all(&dir);
        rep.check_measured(
            "report-determinism",
            if same { 0.0 } else { 1.0 },
            CheckRule::AtMost { bound: 0.0 },
            "identical inputs produce byte-identical outputs",
        );
    }
    {
        let def = registry::resolve("pjac:k=2")?;
        let spec = NormSpec::new(PExponent::finite(2.0)?, 1.0)?;
        let report = direct_experiment(&def, &spec, 1, &[4, 6])?;
        let audit_ok = report.audit().is_ok() && report.passed();
        rep.check_measured(
            "experiment-audit",
            if audit_ok { 0.0 } else { 1.0 },
            CheckRule::AtMost { bound: 0.0 },
            "a trivial experiment passes and its verdict re-derives from its series",
        );
    }

    rep.finalize();
    Ok(rep)
}

/// One frozen regression value with its absolute tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineEntry {
    pub value: f64,
    pub tolerance: f64,
}

/// Regression baseline document: experiment-scoped key to frozen value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub entries: BTreeMap<String, BaselineEntry>,
}

fn baseline_keys(report: &ExperimentReport) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for (k, v) in &report.slopes {
        out.push((format!("{}/slope/{k}", report.experiment), *v));
    }
    for (k, v) in &report.empirical_constants {
        out.push((format!("{}/constant/{k}", report.experiment), *v));
    }
    out
}

/// Compare reports against a frozen baseline, freezing new keys on the way.
///
/// Stored keys are compared within their stored tolerance, but only for the
/// experiments actually present in `reports` — a baseline file can
/// accumulate entries from several experiment kinds across separate runs
/// without each run failing the others' keys. A stored key whose experiment
/// IS present but which the run no longer measures fails (a derived quantity
/// silently disappearing is a regression). Measured keys absent from the
/// file are frozen into it with a matching tolerance.
///
/// Returns `(frozen, checks)`: `frozen` is true when the file gained new
/// entries (a `baseline-frozen` check reports how many).
pub fn apply_baseline(path: &Path, reports: &[&ExperimentReport]) -> Result<(bool, Vec<Check>)> {
    let mut measured = BTreeMap::new();
    let mut experiments: Vec<&str> = Vec::new();
    for report in reports {
        if !experiments.contains(&report.experiment.as_str()) {
            experiments.push(&report.experiment);
        }
        for (key, value) in baseline_keys(report) {
            measured.insert(key, value);
        }
    }
    let mut baseline: Baseline =
        if path.exists() { crate::report::read_json(path)? } else { Baseline::default() };
    let mut checks = Vec::new();
    for (key, entry) in &baseline.entries {
        let scope = key.split('/').next().unwrap_or("");
        if !experiments.contains(&scope) {
            continue;
        }
        let (observed, detail) = match measured.get(key) {
            Some(value) => (
                value - entry.value,
                format!("measured {value:.6} against frozen {:.6}", entry.value),
            ),
            None => (f64::NAN, "no measurement produced for this frozen key".to_string()),
        };
        let rule = CheckRule::AbsAtMost { bound: entry.tolerance };
        checks.push(Check {
            name: format!("baseline/{key}"),
            source: CheckSource::Measured,
            rule: rule.clone(),
            observed,
            passed: rule.evaluate(observed),
            detail,
        });
    }
    let mut frozen = 0usize;
    for (key, value) in &measured {
        if baseline.entries.contains_key(key) {
            continue;
        }
        let tolerance =
            if key.contains("/slope/") { 0.1 } else { (0.2 * value.abs()).max(0.05) };
        baseline.entries.insert(key.clone(), BaselineEntry { value: *value, tolerance });
        frozen += 1;
    }
    if frozen > 0 {
        crate::report::write_json(path, &baseline)?;
        checks.push(Check {
            name: "baseline-frozen".into(),
            source: CheckSource::Measured,
            rule: CheckRule::AtLeast { bound: 1.0 },
            observed: frozen as f64,
            passed: true,
            detail: format!("froze {frozen} values into {}", path.display()),
        });
    }
    Ok((frozen > 0, checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec2(alpha: f64) -> NormSpec {
        NormSpec::new(PExponent::finite(2.0).unwrap(), alpha).unwrap()
    }

    #[test]
    fn degree_grids_are_geometric_and_inclusive() {
        let grid = default_n_grid(8, 48, 6).unwrap();
        assert_eq!(grid.first(), Some(&8));
        assert_eq!(grid.last(), Some(&48));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(default_n_grid(0, 48, 6), Err(Error::Domain(_))));
    }

    #[test]
    fn trivial_direct_experiment_passes_and_audits() {
        let def = registry::resolve("pjac:k=2").unwrap();
        let report = direct_experiment(&def, &spec2(1.0), 1, &[4, 6, 8]).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.inputs["regime"].starts_with("trivial"));
        report.audit().unwrap();
    }

    #[test]
    fn direct_experiment_on_a_kink_finds_the_rate() {
        let def = registry::resolve("abs").unwrap();
        let spec = NormSpec::new(PExponent::Infinity, 1.0).unwrap();
        let report = direct_experiment(&def, &spec, 1, &[8, 16, 32]).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "failed: {:?}", report.failed_checks());
        let slope = report.slopes["slope_E"];
        assert!((-1.3..=-0.7).contains(&slope), "slope {slope}");
        report.audit().unwrap();
    }

    #[test]
    fn out_of_window_reports_are_not_applicable_but_computed() {
        let def = registry::resolve("abs").unwrap();
        let spec = NormSpec::new(PExponent::finite(2.0).unwrap(), 2.6).unwrap();
        let report = direct_experiment(&def, &spec, 1, &[4, 8]).unwrap();
        assert_eq!(report.verdict, Verdict::NotApplicable);
        assert!(!report.series.is_empty());
        assert!(report.inputs["window"].starts_with("outside"));
        report.audit().unwrap();
    }

    #[test]
    fn inverse_experiment_is_stable_for_a_kink_function() {
        let def = registry::resolve("abspow:mu=1.5").unwrap();
        let report = inverse_experiment(&def, &spec2(1.0), 1, &[8, 16, 32]).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "failed: {:?}", report.failed_checks());
        let c_series = report.find_series("C_n").unwrap();
        assert!(c_series.points.iter().all(|&(_, c)| c.is_finite() && c > 0.0));
        report.audit().unwrap();
    }

    #[test]
    fn inverse_experiment_flags_vanishing_and_degenerate_regimes() {
        let one = registry::resolve("one").unwrap();
        let report = inverse_experiment(&one, &spec2(1.0), 1, &[4, 8]).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.inputs["regime"].contains("trivial"));

        let poly = registry::resolve("pjac:k=3").unwrap();
        let report = inverse_experiment(&poly, &spec2(1.0), 1, &[8, 16]).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.inputs["regime"].contains("degenerate"));
        report.audit().unwrap();
    }

    #[test]
    fn equivalence_experiment_matches_rates_for_kinks() {
        let def = registry::resolve("abs").unwrap();
        let report = equivalence_experiment(&def, &spec2(1.0), 1, &[8, 16, 32]).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "failed: {:?}", report.failed_checks());
        let gap = report.empirical_constants["lambda_gap"];
        assert!(gap <= EQUIVALENCE_TOLERANCE, "gap {gap}");
        report.audit().unwrap();
    }

    #[test]
    fn equivalence_experiment_guards_saturated_rates() {
        let def = registry::resolve("abspow:mu=2.5").unwrap();
        let report = equivalence_experiment(&def, &spec2(1.0), 1, &[8, 16, 32]).unwrap();
        assert!(
            report.inputs.get("regime").map_or(false, |r| r.contains("saturated")),
            "inputs: {:?}",
            report.inputs
        );
        assert!(report.checks.iter().any(|c| c.name == "modulus-saturated"));
        assert!(!report.checks.iter().any(|c| c.name == "slope-agreement"));
        report.audit().unwrap();
    }

    #[test]
    fn bernstein_markov_derivative_ratio_matches_the_closed_form_for_x() {
        // P = x at n = 2, (p, alpha) = (2, 1): the ratio
        // ||P'||_{2,1.5} / (2 ||P||_{2,1}) reduces to
        // sqrt(32/35) / (2 sqrt(16/105)) = sqrt(6)/2.
        let report =
            bernstein_markov_check(PExponent::finite(2.0).unwrap(), 1.0, &[2, 4], 7).unwrap();
        let series = report.find_series("derivative-ratio-basis").unwrap();
        let at2 = series.points.iter().find(|&&(n, _)| n == 2.0).unwrap().1;
        assert_abs_diff_eq!(at2, 6.0f64.sqrt() / 2.0, epsilon = 1e-9);
        report.audit().unwrap();
    }

    #[test]
    fn bernstein_markov_reports_the_band_failures_honestly() {
        let report = bernstein_markov_check(
            PExponent::finite(2.0).unwrap(),
            1.0,
            &[4, 8, 16, 32],
            2024,
        )
        .unwrap();
        // Boundedness holds everywhere...
        for check in &report.checks {
            if check.name.starts_with("derivative-bound") || check.name.starts_with("comparison-bound")
            {
                assert!(check.passed, "{} failed: {}", check.name, check.observed);
            }
        }
        // ...the basis family meets the derivative band...
        assert!(report.checks.iter().any(|c| c.name == "derivative-band-basis" && c.passed));
        // ...but fixed-coefficient families cannot track the n^{2 rho}
        // factor, so the comparison bands fail and the verdict is Fail.
        let fails = report.failed_checks();
        assert!(fails.iter().any(|n| n.starts_with("comparison-band-basis")), "{fails:?}");
        assert_eq!(report.verdict, Verdict::Fail);
        report.audit().unwrap();
    }

    #[test]
    fn audits_catch_tampered_series() {
        let def = registry::resolve("abs").unwrap();
        let mut report = direct_experiment(&def, &spec2(1.0), 1, &[4, 8]).unwrap();
        report.audit().unwrap();
        // Tamper with a stored value: the audit must notice.
        if let Some(series) = report.series.iter_mut().find(|s| s.name == "C_n") {
            series.points[0].1 *= 1.5;
        }
        assert!(report.audit().is_err());
    }

    #[test]
    fn verify_suite_passes_on_defaults() {
        let report = verify_suite(&VerifyConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "failed: {:?}", report.failed_checks());
        assert!(report.checks.len() >= 30, "only {} checks", report.checks.len());
        report.audit().unwrap();
    }

    #[test]
    fn verify_suite_catches_an_under_resolved_kernel_quadrature() {
        let config = VerifyConfig { z_order: 8, ..Default::default() };
        let report = verify_suite(&config).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        let fails = report.failed_checks();
        assert!(
            fails.contains(&"translation-eigenfunction-product"),
            "culprit not named: {fails:?}"
        );
    }

    #[test]
    fn verify_suite_rejects_an_empty_function_selection() {
        let config = VerifyConfig { functions: Some(Vec::new()), ..Default::default() };
        assert!(matches!(verify_suite(&config), Err(Error::Usage(_))));
    }

    #[test]
    fn baseline_freezes_then_compares() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("baseline.json");
        let def = registry::resolve("abs").unwrap();
        let report = direct_experiment(&def, &spec2(1.0), 1, &[6, 12]).unwrap();
        let (frozen, checks) = apply_baseline(&path, &[&report]).unwrap();
        assert!(frozen);
        assert!(checks.iter().all(|c| c.passed));
        let (frozen, checks) = apply_baseline(&path, &[&report]).unwrap();
        assert!(!frozen);
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");

        // A second experiment kind accumulates into the same file without
        // disturbing the first, and a joint run compares both.
        let inverse = inverse_experiment(&def, &spec2(1.0), 1, &[6, 12]).unwrap();
        let (frozen, checks) = apply_baseline(&path, &[&inverse]).unwrap();
        assert!(frozen);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let (frozen, checks) = apply_baseline(&path, &[&report, &inverse]).unwrap();
        assert!(!frozen);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");

        // A shifted baseline value must be flagged.
        let mut baseline: Baseline = crate::report::read_json(&path).unwrap();
        for entry in baseline.entries.values_mut() {
            entry.value += 10.0;
        }
        crate::report::write_json(&path, &baseline).unwrap();
        let (_, checks) = apply_baseline(&path, &[&report]).unwrap();
        assert!(checks.iter().all(|c| !c.passed));
    }
}
