//! End-to-end checks of the command line interface: output formats, exit
//! codes, theorem-window gating, baseline freezing, and the disk cache.
//!
//! Everything runs in-process through [`approxlab::cli::run`], with outputs
//! routed to temporary directories. Tests that compare manifest bytes pin
//! the timestamp through `SOURCE_DATE_EPOCH`; they all pin the same value,
//! so they stay independent under parallel execution.

use std::path::Path;

use approxlab::cli;

fn run(args: &[&str]) -> i32 {
    let mut argv = vec!["approxlab"];
    argv.extend_from_slice(args);
    cli::run(argv)
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn csv_export_writes_the_error_series_with_a_manifest_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("errors.csv");
    let code = run(&[
        "approx", "--f", "abs", "--p", "2", "--alpha", "1", "--n-max", "8", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let text = read(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("series,x,y"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8, "one row per degree");
    for (i, row) in rows.iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 3);
        assert_eq!(fields[0], "E_n");
        assert_eq!(fields[1].parse::<f64>().unwrap(), (i + 1) as f64);
        let value: f64 = fields[2].parse().unwrap();
        assert!(value.is_finite() && value >= 0.0);
    }

    let sidecar = dir.path().join("errors.manifest.json");
    let manifest: serde_json::Value = serde_json::from_str(&read(&sidecar)).unwrap();
    assert_eq!(manifest["subcommand"], "approx");
    assert_eq!(manifest["params"]["f"], "abs");
    assert!(manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .any(|o| o.as_str().unwrap().ends_with("errors.csv")));
}

#[test]
fn repeated_runs_are_byte_identical() {
    std::env::set_var("SOURCE_DATE_EPOCH", "1700000000");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("errors.csv");
    let args = [
        "approx", "--f", "abspow:mu=1.5", "--p", "2", "--alpha", "1", "--n-max", "6", "--out",
        out.to_str().unwrap(),
    ];

    assert_eq!(run(&args), 0);
    let csv_first = std::fs::read(&out).unwrap();
    let manifest = dir.path().join("errors.manifest.json");
    let manifest_first = std::fs::read(&manifest).unwrap();

    assert_eq!(run(&args), 0);
    assert_eq!(std::fs::read(&out).unwrap(), csv_first);
    assert_eq!(std::fs::read(&manifest).unwrap(), manifest_first);
}

#[test]
fn svg_export_draws_one_polyline_per_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("jackson.csv");
    let chart = dir.path().join("jackson.svg");
    let code = run(&[
        "jackson", "--f", "exp", "--p", "2", "--alpha", "1", "--q", "1", "--m", "8", "--out",
        out.to_str().unwrap(), "--svg", chart.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let svg = read(&chart);
    assert_eq!(svg.matches("<polyline").count(), 2, "error and degree-bound series");
    assert!(svg.contains("<svg"));
    assert!(svg.contains("</svg>"));
}

#[test]
fn json_export_nests_manifest_and_report() {
    std::env::set_var("SOURCE_DATE_EPOCH", "1700000000");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("modulus.json");
    let code = run(&[
        "modulus", "--f", "abs", "--p", "2", "--alpha", "1", "--r", "1", "--delta", "0.5",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let doc: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(doc["manifest"]["timestamp_unix"], 1700000000);
    assert_eq!(doc["report"]["experiment"], "modulus");
    assert_eq!(doc["report"]["verdict"], "pass");
    // The document embeds the same manifest that the sidecar carries.
    let sidecar: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("modulus.manifest.json"))).unwrap();
    assert_eq!(doc["manifest"], sidecar);
}

#[test]
fn out_of_window_runs_need_force_and_are_watermarked() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("direct.json");
    let base = [
        "direct", "--f", "abs", "--p", "2", "--alpha", "2.6", "--n-max", "16", "--out",
        out.to_str().unwrap(),
    ];

    // Outside the theorem window: refused with the usage/domain exit code.
    assert_eq!(run(&base), 2);
    assert!(!out.exists());

    // Forced: runs, makes no pass/fail claim, and watermarks the manifest.
    let mut forced = base.to_vec();
    forced.push("--force");
    assert_eq!(run(&forced), 0);
    let doc: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(doc["manifest"]["params"]["window"], "outside theorem window");
    assert_eq!(doc["report"]["applicable"], false);
    assert_eq!(doc["report"]["verdict"], "not-applicable");
}

#[test]
fn under_resolved_verification_fails_loudly() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.json");
    let code = run(&[
        "verify", "--quad-order", "8", "--seed", "2024", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "a deliberately coarse kernel quadrature must fail checks");

    let doc: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let checks = doc["report"]["checks"].as_array().unwrap();
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    assert!(
        failed.iter().any(|name| name.contains("translation")),
        "the translation identities are the checks that see the coarse rule, got {failed:?}"
    );
}

#[test]
fn baselines_freeze_then_guard_regressions() {
    let dir = tempfile::tempdir().unwrap();
    let baseline = dir.path().join("baseline.json");
    let args = [
        "direct", "--f", "abs", "--p", "2", "--alpha", "1", "--n-max", "48", "--baseline",
        baseline.to_str().unwrap(),
    ];

    // First run freezes the measured slopes and constants.
    assert_eq!(run(&args), 0);
    assert!(baseline.exists());

    // Second run compares against the frozen values and passes.
    assert_eq!(run(&args), 0);

    // A drifted baseline is caught: shift every frozen value far outside
    // its tolerance and re-run.
    let mut doc: serde_json::Value = serde_json::from_str(&read(&baseline)).unwrap();
    for (_, entry) in doc["entries"].as_object_mut().unwrap() {
        let shifted = entry["value"].as_f64().unwrap() + 10.0;
        entry["value"] = serde_json::json!(shifted);
    }
    std::fs::write(&baseline, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    assert_eq!(run(&args), 1);
}

#[test]
fn disk_cache_populates_when_directed() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var("APPROXLAB_CACHE_DIR", dir.path());
    let out = tempfile::tempdir().unwrap();
    // A weight exponent used nowhere else in this binary, so the norm rule
    // cannot already sit in the process-wide memory cache (a memory hit
    // would skip the disk write).
    let code = run(&[
        "approx", "--f", "exp", "--p", "2", "--alpha", "0.37", "--n-max", "4", "--out",
        out.path().join("e.csv").to_str().unwrap(),
    ]);
    std::env::remove_var("APPROXLAB_CACHE_DIR");
    assert_eq!(code, 0);
    let cached = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(cached > 0, "quadrature rules should be written to the cache directory");
}
