//! Command-line front end: argument parsing, dispatch to the experiment
//! drivers, output writing, and the exit-code policy.
//!
//! Every subcommand funnels into an [`ExperimentReport`] so that CSV, JSON,
//! and SVG emission share one code path. A run that writes files also writes
//! a `<stem>.manifest.json` sidecar recording the full parameter set, so
//! any numeric output can be traced back to the invocation that produced it.
//!
//! Exit codes: `0` when every requested check passes (or the run makes no
//! claim), `1` when a check or baseline comparison fails, `2` for usage and
//! domain errors — unknown function names, out-of-window parameters without
//! `--force`, malformed or unwritable output paths.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::best_approx::{en_sequence, fit_order};
use crate::error::{Error, Result};
use crate::jackson::JacksonOperator;
use crate::registry;
use crate::report::{
    manifest_path_for, write_csv, write_json, write_svg, RunManifest, Series, SvgOptions,
};
use crate::smoothness::{self, Backend};
use crate::space::{
    validate_window, weighted_norm, FunctionHandle, NormSpec, PExponent, TheoremWindow,
    WindowStatus,
};
use crate::theorems::{
    apply_baseline, bernstein_markov_check, default_n_grid, direct_experiment,
    equivalence_experiment, inverse_experiment, verify_suite, Check, CheckRule, ExperimentReport,
    Verdict, VerifyConfig,
};
use crate::translation;

/// Run the tool on an argument vector (including the program name) and
/// return the process exit code. The binary is a thin wrapper around this,
/// and tests drive it in-process.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests exit 0; real parse errors are usage
            // errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli, &argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "approxlab",
    version,
    about = "Weighted polynomial approximation lab: generalized translations, \
             moduli of smoothness, best approximation, and rate experiments \
             on (-1, 1)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the whole invariant suite, one pass/fail line per check.
    Verify(VerifyArgs),
    /// Best-approximation errors E_n(f) for n = 1..=n-max.
    Approx(ApproxArgs),
    /// Generalized modulus of smoothness over a step sweep.
    Modulus(ModulusArgs),
    /// Jackson-type approximant error as the base degree grows.
    Jackson(JacksonArgs),
    /// Direct estimate experiment: E_n against the modulus at 1/n.
    Direct(TheoremArgs),
    /// Converse estimate experiment: modulus against a weighted E_nu sum.
    Inverse(TheoremArgs),
    /// Two-sided rate comparison of E_n and modulus decay exponents.
    Equivalence(TheoremArgs),
    /// Weighted Bernstein-Markov ratio diagnostics (bands expected red).
    BmCheck(BmArgs),
}

#[derive(Debug, Args)]
struct NormArgs {
    /// Lebesgue exponent: a finite value >= 1, or "inf" for the sup norm.
    #[arg(long, default_value = "2")]
    p: String,
    /// Weight exponent alpha in the Jacobi weight (1 - x^2)^alpha.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Override the sup-norm sampling grid size.
    #[arg(long)]
    sup_grid: Option<usize>,
}

impl NormArgs {
    fn spec(&self) -> Result<NormSpec> {
        let spec = NormSpec::new(parse_p(&self.p)?, self.alpha)?;
        match self.sup_grid {
            Some(size) => spec.with_sup_grid(size),
            None => Ok(spec),
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the series as CSV (path ending .csv) or the manifest plus full
    /// report as JSON (path ending .json).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a log-log SVG chart of the run's series.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Quadrature order for the direct kernel-translation checks.
    #[arg(long, default_value_t = translation::DEFAULT_Z_ORDER)]
    quad_order: usize,
    /// Seed for the randomized property checks.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Registry entries for the function-dependent checks (repeatable);
    /// defaults to a representative smooth/kink selection.
    #[arg(long = "f")]
    f: Vec<String>,
    /// Tolerance override for baseline comparisons.
    #[arg(long)]
    tol: Option<f64>,
    /// Regression baseline JSON: new keys are frozen, stored keys compared.
    #[arg(long)]
    baseline: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    /// Function to approximate: `name` or `name:key=value,...`.
    #[arg(long = "f")]
    f: String,
    #[command(flatten)]
    norm: NormArgs,
    /// Largest polynomial dimension in the E_n sequence.
    #[arg(long, default_value_t = 32)]
    n_max: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ModulusArgs {
    /// Function to measure: `name` or `name:key=value,...`.
    #[arg(long = "f")]
    f: String,
    #[command(flatten)]
    norm: NormArgs,
    /// Smoothness order r >= 1.
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Evaluate at this single step instead of the default sweep.
    #[arg(long)]
    delta: Option<f64>,
    /// Sweep resolution: steps run over 1/n for n geometric up to this.
    #[arg(long, default_value_t = 48)]
    n_max: usize,
    /// Force the direct-quadrature backend with this z order.
    #[arg(long)]
    quad_order: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct JacksonArgs {
    /// Function to approximate: `name` or `name:key=value,...`.
    #[arg(long = "f")]
    f: String,
    #[command(flatten)]
    norm: NormArgs,
    /// Kernel sharpness exponent q >= 1.
    #[arg(long, default_value_t = 1)]
    q: usize,
    /// Largest base degree in the sweep (geometric from 2).
    #[arg(long, default_value_t = 16)]
    m: usize,
    /// Operator iterate order r >= 1.
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct TheoremArgs {
    /// Function to test: `name` or `name:key=value,...`.
    #[arg(long = "f")]
    f: String,
    #[command(flatten)]
    norm: NormArgs,
    /// Modulus order r >= 1.
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Top of the degree grid (geometric from 8, or from 2 for small tops).
    #[arg(long, default_value_t = 48)]
    n_max: usize,
    /// Compute outside the theorem window anyway; outputs are watermarked
    /// and the run makes no claim.
    #[arg(long)]
    force: bool,
    /// Tolerance override for baseline comparisons.
    #[arg(long)]
    tol: Option<f64>,
    /// Regression baseline JSON: new keys are frozen, stored keys compared.
    #[arg(long)]
    baseline: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct BmArgs {
    /// Lebesgue exponent: a finite value >= 1, or "inf" for the sup norm.
    #[arg(long, default_value = "2")]
    p: String,
    /// Weight exponent alpha > 0 (the derivative bound needs alpha + 1/2).
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Top of the dyadic degree grid 4, 8, 16, ..., n-max.
    #[arg(long, default_value_t = 64)]
    n_max: usize,
    /// Seed for the random coefficient families.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Tolerance override for baseline comparisons.
    #[arg(long)]
    tol: Option<f64>,
    /// Regression baseline JSON: new keys are frozen, stored keys compared.
    #[arg(long)]
    baseline: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

fn dispatch(cli: Cli, argv: &[String]) -> Result<i32> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args, argv),
        Command::Approx(args) => cmd_approx(args, argv),
        Command::Modulus(args) => cmd_modulus(args, argv),
        Command::Jackson(args) => cmd_jackson(args, argv),
        Command::Direct(args) => cmd_theorem(args, argv, TheoremKind::Direct),
        Command::Inverse(args) => cmd_theorem(args, argv, TheoremKind::Inverse),
        Command::Equivalence(args) => cmd_theorem(args, argv, TheoremKind::Equivalence),
        Command::BmCheck(args) => cmd_bm(args, argv),
    }
}

fn parse_p(text: &str) -> Result<PExponent> {
    let t = text.trim().to_ascii_lowercase();
    if matches!(t.as_str(), "inf" | "infinity") {
        return Ok(PExponent::Infinity);
    }
    let value: f64 = t
        .parse()
        .map_err(|_| Error::Usage(format!("--p expects a finite exponent or \"inf\", got '{text}'")))?;
    PExponent::finite(value)
}

/// Degree grid for the theorem experiments: geometric and inclusive, from 8
/// for comfortably large tops (transients below 8 pollute rate fits) and
/// from 2 otherwise.
fn degree_grid(n_max: usize) -> Result<Vec<usize>> {
    if n_max < 2 {
        return Err(Error::Usage("--n-max must be at least 2".into()));
    }
    let (lo, count) = if n_max >= 16 { (8, 6) } else { (2, 3) };
    default_n_grid(lo, n_max, count.min(n_max - lo + 1))
}

/// Dyadic grid 4, 8, ..., capped and closed at `n_max`.
fn dyadic_grid(n_max: usize) -> Result<Vec<usize>> {
    if n_max < 4 {
        return Err(Error::Usage("--n-max must be at least 4".into()));
    }
    let mut ns = vec![4usize];
    while ns.last().expect("non-empty") * 2 <= n_max {
        let next = ns.last().expect("non-empty") * 2;
        ns.push(next);
    }
    if *ns.last().expect("non-empty") != n_max {
        ns.push(n_max);
    }
    Ok(ns)
}

fn verdict_label(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::NotApplicable => "not applicable (outside theorem window)",
    }
}

fn print_check(check: &Check) {
    let status = if check.passed { "pass" } else { "FAIL" };
    println!("  [{status}] {}: observed {:.3e} — {}", check.name, check.observed, check.detail);
}

/// Print a report: inputs, series (fully when `points` is set), derived
/// slopes and constants, checks, verdict.
fn print_report(report: &ExperimentReport, points: bool) {
    for (k, v) in &report.inputs {
        println!("  {k} = {v}");
    }
    for s in &report.series {
        if points {
            println!("  series {} ({} against {}):", s.name, s.y_label, s.x_label);
            for &(x, y) in &s.points {
                println!("    {x:.6e}  {y:.17e}");
            }
        } else {
            println!("  series {}: {} points", s.name, s.points.len());
        }
    }
    for (k, v) in &report.slopes {
        println!("  slope[{k}] = {v:.4}");
    }
    for (k, v) in &report.empirical_constants {
        println!("  constant[{k}] = {v:.6e}");
    }
    for c in &report.checks {
        print_check(c);
    }
    println!("verdict: {}", verdict_label(report.verdict));
}

/// Fold the report verdict together with an optional baseline comparison
/// into the final pass/fail answer. `tol` replaces the stored tolerance of
/// every compared key.
fn finish_with_baseline(
    report: &ExperimentReport,
    baseline: Option<&Path>,
    tol: Option<f64>,
) -> Result<bool> {
    let mut ok = report.verdict != Verdict::Fail;
    if let Some(path) = baseline {
        let (frozen, mut checks) = apply_baseline(path, &[report])?;
        if let Some(tol) = tol {
            for check in &mut checks {
                if check.name != "baseline-frozen" {
                    let rule = CheckRule::AbsAtMost { bound: tol };
                    check.passed = rule.evaluate(check.observed);
                    check.rule = rule;
                }
            }
        }
        if frozen {
            println!("baseline: froze new entries into {}", path.display());
        }
        for check in &checks {
            print_check(check);
        }
        ok &= checks.iter().all(|c| c.passed);
    }
    Ok(ok)
}

/// JSON document shape for `--out path.json`: the manifest plus the full
/// report, so a stored run re-verifies without the tool.
#[derive(Serialize)]
struct JsonDocument<'a> {
    manifest: &'a RunManifest,
    report: &'a ExperimentReport,
}

/// Write the requested outputs plus the manifest sidecar. Output paths are
/// recorded in the manifest before anything is written so the embedded copy
/// inside a JSON document is already complete.
fn emit(
    report: &ExperimentReport,
    manifest: &mut RunManifest,
    output: &OutputArgs,
    svg_options: &SvgOptions,
) -> Result<()> {
    if output.out.is_none() && output.svg.is_none() {
        return Ok(());
    }
    let fmt = match &output.out {
        Some(path) => match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Some("csv"),
            Some("json") => Some("json"),
            _ => {
                return Err(Error::Usage(format!(
                    "--out must end in .csv or .json, got '{}'",
                    path.display()
                )))
            }
        },
        None => None,
    };
    if output.svg.is_some() && report.series.is_empty() {
        return Err(Error::Usage("this run produces no series to plot with --svg".into()));
    }
    for path in [output.out.as_deref(), output.svg.as_deref()].into_iter().flatten() {
        manifest.outputs.push(path.display().to_string());
    }
    manifest.stamp();
    if let Some(path) = &output.out {
        if fmt == Some("csv") {
            write_csv(path, &report.series)?;
        } else {
            write_json(path, &JsonDocument { manifest, report })?;
        }
    }
    if let Some(path) = &output.svg {
        write_svg(path, &report.series, svg_options)?;
    }
    let anchor = output.out.as_deref().or(output.svg.as_deref()).expect("some output requested");
    write_json(&manifest_path_for(anchor), manifest)?;
    Ok(())
}

fn exit_code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn cmd_verify(args: VerifyArgs, argv: &[String]) -> Result<i32> {
    let functions = if args.f.is_empty() { None } else { Some(args.f.clone()) };
    let config = VerifyConfig { z_order: args.quad_order, seed: args.seed, functions };
    let report = verify_suite(&config)?;
    let passed = report.checks.iter().filter(|c| c.passed).count();
    println!("subcommand: verify ({} of {} checks passed)", passed, report.checks.len());
    print_report(&report, false);
    let ok = finish_with_baseline(&report, args.baseline.as_deref(), args.tol)?;

    let mut manifest = RunManifest::new(argv.to_vec(), "verify");
    manifest.seed = Some(args.seed);
    manifest.param("quad_order", args.quad_order).param("seed", args.seed);
    manifest.param(
        "functions",
        config.functions.as_ref().map_or_else(|| "default".to_string(), |fs| fs.join(";")),
    );
    if let Some(tol) = args.tol {
        manifest.param("tol", tol);
    }
    emit(&report, &mut manifest, &args.output, &SvgOptions::default())?;
    Ok(exit_code(ok))
}

fn cmd_approx(args: ApproxArgs, argv: &[String]) -> Result<i32> {
    let def = registry::resolve(&args.f)?;
    let spec = args.norm.spec()?;
    if args.n_max == 0 {
        return Err(Error::Usage("--n-max must be at least 1".into()));
    }
    let scaling = en_sequence(&def.handle, args.n_max, &spec)?;

    let mut report = ExperimentReport::new("approx");
    report
        .input("f", &def.spec)
        .input("p", spec.p())
        .input("alpha", spec.alpha())
        .input("n_max", args.n_max)
        .input("fit_range", format!("{:?}", scaling.fit_range));
    report.series.push(Series::new("E_n", "n", "E_n", scaling.pairs.clone()));
    report.slopes.insert("E_n".into(), scaling.fitted_slope);
    report.finalize();
    println!("subcommand: approx");
    print_report(&report, true);

    let mut manifest = RunManifest::new(argv.to_vec(), "approx");
    manifest
        .param("f", &def.spec)
        .param("p", spec.p())
        .param("alpha", spec.alpha())
        .param("n_max", args.n_max)
        .param("sup_grid", spec.sup_grid());
    let svg = SvgOptions {
        title: format!("E_n for {}", def.spec),
        annotate_slope: true,
        ..SvgOptions::default()
    };
    emit(&report, &mut manifest, &args.output, &svg)?;
    Ok(0)
}

fn cmd_modulus(args: ModulusArgs, argv: &[String]) -> Result<i32> {
    let def = registry::resolve(&args.f)?;
    let spec = args.norm.spec()?;
    let backend = match args.quad_order {
        Some(z) => Backend::Direct { z_order: z },
        None => Backend::Auto,
    };
    let deltas: Vec<f64> = match args.delta {
        Some(d) => vec![d],
        None => {
            if args.n_max < 2 {
                return Err(Error::Usage("--n-max must be at least 2".into()));
            }
            let mut ns = default_n_grid(2, args.n_max, 9)?;
            ns.reverse();
            ns.iter().map(|&n| 1.0 / n as f64).collect()
        }
    };

    let mut points = Vec::with_capacity(deltas.len());
    let mut warned: Vec<String> = Vec::new();
    for &delta in &deltas {
        let rep = smoothness::modulus(&def.handle, args.r, delta, &spec, backend)?;
        for w in &rep.warnings {
            if !warned.contains(w) {
                eprintln!("warning: {w}");
                warned.push(w.clone());
            }
        }
        points.push((delta, rep.value));
    }

    let mut report = ExperimentReport::new("modulus");
    report
        .input("f", &def.spec)
        .input("p", spec.p())
        .input("alpha", spec.alpha())
        .input("r", args.r)
        .input("delta_grid", format!("{deltas:?}"));
    report.series.push(Series::new(format!("omega_{}", args.r), "delta", "omega", points.clone()));
    if points.len() >= 2 && points.iter().all(|&(_, v)| v > 0.0) {
        if let Ok(fit) = fit_order(&points, 0..points.len()) {
            report.slopes.insert("omega".into(), fit.fitted_slope);
        }
    }
    report.finalize();
    println!("subcommand: modulus");
    print_report(&report, true);

    let mut manifest = RunManifest::new(argv.to_vec(), "modulus");
    manifest
        .param("f", &def.spec)
        .param("p", spec.p())
        .param("alpha", spec.alpha())
        .param("r", args.r)
        .param("sup_grid", spec.sup_grid())
        .param("delta_grid", format!("{deltas:?}"));
    if let Some(z) = args.quad_order {
        manifest.param("quad_order", z);
    }
    let svg = SvgOptions {
        title: format!("omega_{} for {}", args.r, def.spec),
        annotate_slope: true,
        ..SvgOptions::default()
    };
    emit(&report, &mut manifest, &args.output, &svg)?;
    Ok(0)
}

fn cmd_jackson(args: JacksonArgs, argv: &[String]) -> Result<i32> {
    let def = registry::resolve(&args.f)?;
    let spec = args.norm.spec()?;
    if args.m < 2 {
        return Err(Error::Usage("--m must be at least 2".into()));
    }
    let count = (((args.m as f64) / 2.0).log2().round() as usize).max(1) + 1;
    let ms = default_n_grid(2, args.m, count)?;

    let mut errors = Vec::with_capacity(ms.len());
    let mut degrees = Vec::with_capacity(ms.len());
    for &m in &ms {
        let op = JacksonOperator::new(args.q, m, args.r)?;
        // `apply` already yields the approximant (sign-corrected iterate).
        let approx = op.apply(&def.handle)?;
        let fh = def.handle.clone();
        let diff = FunctionHandle::from_fn(move |x| fh.eval(x) - approx.eval(x));
        errors.push((m as f64, weighted_norm(&diff, &spec)?));
        degrees.push((m as f64, op.degree_bound() as f64));
    }

    let mut report = ExperimentReport::new("jackson");
    report
        .input("f", &def.spec)
        .input("p", spec.p())
        .input("alpha", spec.alpha())
        .input("q", args.q)
        .input("r", args.r)
        .input("m_grid", format!("{ms:?}"));
    report.series.push(Series::new("jackson-error", "m", "error", errors.clone()));
    report.series.push(Series::new("degree-bound", "m", "degree", degrees));
    if errors.len() >= 2 && errors.iter().all(|&(_, v)| v > 0.0) {
        if let Ok(fit) = fit_order(&errors, 0..errors.len()) {
            report.slopes.insert("jackson-error".into(), fit.fitted_slope);
        }
    }
    report.finalize();
    println!("subcommand: jackson");
    print_report(&report, true);

    let mut manifest = RunManifest::new(argv.to_vec(), "jackson");
    manifest
        .param("f", &def.spec)
        .param("p", spec.p())
        .param("alpha", spec.alpha())
        .param("q", args.q)
        .param("r", args.r)
        .param("m", args.m)
        .param("sup_grid", spec.sup_grid());
    let svg = SvgOptions {
        title: format!("Jackson error for {}", def.spec),
        annotate_slope: true,
        ..SvgOptions::default()
    };
    emit(&report, &mut manifest, &args.output, &svg)?;
    Ok(0)
}

#[derive(Debug, Clone, Copy)]
enum TheoremKind {
    Direct,
    Inverse,
    Equivalence,
}

fn cmd_theorem(args: TheoremArgs, argv: &[String], kind: TheoremKind) -> Result<i32> {
    let def = registry::resolve(&args.f)?;
    let spec = args.norm.spec()?;
    let name = match kind {
        TheoremKind::Direct => "direct",
        TheoremKind::Inverse => "inverse",
        TheoremKind::Equivalence => "equivalence",
    };
    let windows: &[TheoremWindow] = match kind {
        TheoremKind::Direct => &[TheoremWindow::Direct],
        TheoremKind::Inverse => &[TheoremWindow::Inverse],
        TheoremKind::Equivalence => &[TheoremWindow::Direct, TheoremWindow::Inverse],
    };
    let mut outside = Vec::new();
    for &w in windows {
        if let WindowStatus::Outside(reason) = validate_window(spec.p(), spec.alpha(), w) {
            outside.push(reason);
        }
    }
    let forced = !outside.is_empty();
    if forced && !args.force {
        return Err(Error::Domain(format!(
            "(p, alpha) = ({}, {}) is outside the {name} theorem window: {}; \
             pass --force to compute anyway (outputs are watermarked)",
            spec.p(),
            spec.alpha(),
            outside.join("; ")
        )));
    }

    let ns = degree_grid(args.n_max)?;
    let report = match kind {
        TheoremKind::Direct => direct_experiment(&def, &spec, args.r, &ns)?,
        TheoremKind::Inverse => inverse_experiment(&def, &spec, args.r, &ns)?,
        TheoremKind::Equivalence => equivalence_experiment(&def, &spec, args.r, &ns)?,
    };
    println!("subcommand: {name}");
    if forced {
        println!("NOTE: outside theorem window — no claim is made by this run");
    }
    print_report(&report, false);
    let ok = finish_with_baseline(&report, args.baseline.as_deref(), args.tol)?;

    let mut manifest = RunManifest::new(argv.to_vec(), name);
    manifest
        .param("f", &def.spec)
        .param("p", spec.p())
        .param("alpha", spec.alpha())
        .param("r", args.r)
        .param("n_max", args.n_max)
        .param("n_grid", format!("{ns:?}"))
        .param("sup_grid", spec.sup_grid());
    if let Some(tol) = args.tol {
        manifest.param("tol", tol);
    }
    let mut svg = SvgOptions {
        title: format!("{name} experiment for {}", def.spec),
        annotate_slope: true,
        ..SvgOptions::default()
    };
    if forced {
        manifest.param("window", "outside theorem window");
        svg.title.push_str(" [outside theorem window]");
    }
    emit(&report, &mut manifest, &args.output, &svg)?;
    Ok(exit_code(ok))
}

fn cmd_bm(args: BmArgs, argv: &[String]) -> Result<i32> {
    let p = parse_p(&args.p)?;
    // Validates the (p, alpha) pair even though the check builds its own
    // norms internally.
    NormSpec::new(p, args.alpha)?;
    let ns = dyadic_grid(args.n_max)?;
    let report = bernstein_markov_check(p, args.alpha, &ns, args.seed)?;
    println!("subcommand: bm-check");
    print_report(&report, false);
    let ok = finish_with_baseline(&report, args.baseline.as_deref(), args.tol)?;

    let mut manifest = RunManifest::new(argv.to_vec(), "bm-check");
    manifest.seed = Some(args.seed);
    manifest
        .param("p", p)
        .param("alpha", args.alpha)
        .param("n_max", args.n_max)
        .param("n_grid", format!("{ns:?}"))
        .param("seed", args.seed);
    if let Some(tol) = args.tol {
        manifest.param("tol", tol);
    }
    let svg = SvgOptions {
        title: format!("Bernstein-Markov ratios at p = {p}, alpha = {}", args.alpha),
        annotate_slope: false,
        ..SvgOptions::default()
    };
    emit(&report, &mut manifest, &args.output, &svg)?;
    Ok(exit_code(ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_parses_finite_and_infinite_spellings() {
        assert!(matches!(parse_p("inf"), Ok(PExponent::Infinity)));
        assert!(matches!(parse_p(" INF "), Ok(PExponent::Infinity)));
        assert!(matches!(parse_p("Infinity"), Ok(PExponent::Infinity)));
        match parse_p("2") {
            Ok(PExponent::Finite(v)) => assert_eq!(v, 2.0),
            other => panic!("unexpected: {other:?}"),
        }
        assert!(matches!(parse_p("nope"), Err(Error::Usage(_))));
        // Finite validation is delegated: p < 1 is rejected there.
        assert!(parse_p("0.5").is_err());
    }

    #[test]
    fn degree_grids_adapt_to_small_tops() {
        let big = degree_grid(48).unwrap();
        assert_eq!(big.first(), Some(&8));
        assert_eq!(big.last(), Some(&48));
        let small = degree_grid(12).unwrap();
        assert_eq!(small.first(), Some(&2));
        assert_eq!(small.last(), Some(&12));
        assert!(degree_grid(1).is_err());
    }

    #[test]
    fn dyadic_grids_close_at_the_top() {
        assert_eq!(dyadic_grid(64).unwrap(), vec![4, 8, 16, 32, 64]);
        assert_eq!(dyadic_grid(48).unwrap(), vec![4, 8, 16, 32, 48]);
        assert_eq!(dyadic_grid(4).unwrap(), vec![4]);
        assert!(dyadic_grid(3).is_err());
    }

    #[test]
    fn usage_errors_exit_two_and_help_exits_zero() {
        // Missing required --f.
        assert_eq!(run(["approxlab", "approx"]), 2);
        // Unknown subcommand.
        assert_eq!(run(["approxlab", "nonsense"]), 2);
        // Unknown registry entry: resolution fails with the catalog listed.
        assert_eq!(run(["approxlab", "approx", "--f", "nosuchfn", "--n-max", "2"]), 2);
        assert_eq!(run(["approxlab", "--help"]), 0);
        assert_eq!(run(["approxlab", "--version"]), 0);
    }

    #[test]
    fn out_extension_is_validated() {
        let mut report = ExperimentReport::new("unit");
        report.series.push(Series::new("s", "x", "y", vec![(1.0, 1.0)]));
        report.finalize();
        let mut manifest = RunManifest::new(vec!["unit".into()], "unit");
        let output = OutputArgs { out: Some(PathBuf::from("bad.txt")), svg: None };
        let err = emit(&report, &mut manifest, &output, &SvgOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }
}
