//! Deterministic report emission: CSV series, JSON documents with an
//! embedded run manifest, and self-contained SVG log-log plots.
//!
//! Every writer is byte-stable: floats are printed with fixed precision,
//! maps are ordered, and no wall-clock data is ever included, so re-running
//! a command with the same inputs reproduces its outputs exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named `(x, y)` series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(
        name: impl Into<String>,
        x_label: impl Into<String>,
        y_label: impl Into<String>,
        points: Vec<(f64, f64)>,
    ) -> Self {
        Self { name: name.into(), x_label: x_label.into(), y_label: y_label.into(), points }
    }
}

/// Everything needed to reproduce a run: two runs with equal manifests must
/// produce byte-identical outputs. The only wall-clock field is the
/// timestamp, which honors the reproducible-builds `SOURCE_DATE_EPOCH`
/// convention so that it too can be pinned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// The argument vector as invoked.
    pub argv: Vec<String>,
    /// Subcommand name.
    pub subcommand: String,
    /// Resolved parameters after defaulting, stringified.
    pub params: BTreeMap<String, String>,
    /// Crate version that produced the run.
    pub version: String,
    /// Unix time of the run; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp_unix: Option<u64>,
    /// Random seed, when the run used one.
    pub seed: Option<u64>,
    /// Paths of the files the run wrote.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(argv: Vec<String>, subcommand: impl Into<String>) -> Self {
        Self {
            argv,
            subcommand: subcommand.into(),
            params: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: None,
            seed: None,
            outputs: Vec::new(),
        }
    }

    /// Fill the timestamp from `SOURCE_DATE_EPOCH` when set (pinning it for
    /// reproducible output trees), otherwise from the system clock.
    pub fn stamp(&mut self) -> &mut Self {
        let pinned = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.parse().ok());
        self.timestamp_unix = pinned.or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs())
        });
        self
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.params.insert(key.into(), value.to_string());
        self
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

/// RFC 4180 field quoting: quote when the field contains a comma, quote, or
/// line break, doubling embedded quotes.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Write series in long form (`series,x,y`), floats at full precision.
pub fn write_csv(path: &Path, series: &[Series]) -> Result<()> {
    let mut out = String::from("series,x,y\n");
    for s in series {
        let name = csv_field(&s.name);
        for &(x, y) in &s.points {
            let _ = writeln!(out, "{name},{x:.16e},{y:.16e}");
        }
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
        }
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Write any serializable document as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, payload: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(payload)?;
    text.push('\n');
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
        }
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Read a JSON document written by [`write_json`].
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Sidecar manifest path: `foo.csv` maps to `foo.manifest.json`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.manifest.json"))
}

/// Plot styling options.
#[derive(Debug, Clone)]
pub struct SvgOptions {
    pub title: String,
    pub log_x: bool,
    pub log_y: bool,
    /// Annotate each series with its fitted log-log slope.
    pub annotate_slope: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { title: String::new(), log_x: true, log_y: true, annotate_slope: false }
    }
}

const PALETTE: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const W: f64 = 800.0;
const H: f64 = 520.0;
const ML: f64 = 72.0;
const MR: f64 = 24.0;
const MT: f64 = 44.0;
const MB: f64 = 56.0;

fn axis_transform(lo: f64, hi: f64, log: bool) -> (f64, f64) {
    if log {
        (lo.log10(), hi.log10())
    } else {
        (lo, hi)
    }
}

fn map_coord(v: f64, lo: f64, hi: f64, log: bool, px_lo: f64, px_hi: f64) -> f64 {
    let (a, b) = axis_transform(lo, hi, log);
    let t = if log { v.log10() } else { v };
    let frac = if b > a { (t - a) / (b - a) } else { 0.5 };
    px_lo + frac * (px_hi - px_lo)
}

/// Tick positions: decades for log axes, a 1/2/5 progression otherwise.
fn ticks(lo: f64, hi: f64, log: bool) -> Vec<f64> {
    if log {
        let first = lo.log10().floor() as i32;
        let last = hi.log10().ceil() as i32;
        (first..=last).map(|d| 10f64.powi(d)).filter(|&v| v >= lo / 1.001 && v <= hi * 1.001).collect()
    } else {
        let span = hi - lo;
        if !(span > 0.0) {
            return vec![lo];
        }
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|&s| span / s <= 6.0)
            .unwrap_or(mag * 10.0);
        let mut v = (lo / step).ceil() * step;
        let mut out = Vec::new();
        while v <= hi + 1e-12 * span {
            out.push(v);
            v += step;
        }
        out
    }
}

fn fmt_tick(v: f64, log: bool) -> String {
    if log {
        let d = v.log10().round() as i32;
        if (0..=3).contains(&d) {
            format!("{}", 10f64.powi(d))
        } else {
            format!("1e{d}")
        }
    } else if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 0.01 && v.abs() < 10000.0 {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render series as a standalone SVG plot. Points that cannot be placed on
/// the requested axes (non-finite, or non-positive on a log axis) are
/// dropped from the drawing.
pub fn write_svg(path: &Path, series: &[Series], options: &SvgOptions) -> Result<()> {
    let usable = |p: &(f64, f64)| {
        p.0.is_finite()
            && p.1.is_finite()
            && (!options.log_x || p.0 > 0.0)
            && (!options.log_y || p.1 > 0.0)
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in series {
        for p in s.points.iter().filter(|p| usable(p)) {
            xs.push(p.0);
            ys.push(p.1);
        }
    }
    if xs.is_empty() {
        return Err(Error::Domain("nothing to plot: no drawable points".into()));
    }
    let (mut x_lo, mut x_hi) = xs.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let (mut y_lo, mut y_hi) = ys.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    // Pad degenerate ranges so a flat series still renders.
    if x_lo == x_hi {
        let pad = if options.log_x { 2.0 } else { x_lo.abs().max(1.0) * 0.1 };
        if options.log_x {
            x_lo /= pad;
            x_hi *= pad;
        } else {
            x_lo -= pad;
            x_hi += pad;
        }
    }
    if y_lo == y_hi {
        let pad = if options.log_y { 2.0 } else { y_lo.abs().max(1.0) * 0.1 };
        if options.log_y {
            y_lo /= pad;
            y_hi *= pad;
        } else {
            y_lo -= pad;
            y_hi += pad;
        }
    }

    let px = |x: f64| map_coord(x, x_lo, x_hi, options.log_x, ML, W - MR);
    let py = |y: f64| map_coord(y, y_lo, y_hi, options.log_y, H - MB, MT);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"sans-serif\" font-size=\"13\">"
    );
    let _ = writeln!(svg, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    if !options.title.is_empty() {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>",
            (ML + W - MR) / 2.0,
            xml_escape(&options.title)
        );
    }
    // Frame.
    let _ = writeln!(
        svg,
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#333\"/>",
        W - ML - MR,
        H - MT - MB
    );
    for t in ticks(x_lo, x_hi, options.log_x) {
        let x = px(t);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#ccc\"/>",
            MT,
            H - MB
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            H - MB + 18.0,
            fmt_tick(t, options.log_x)
        );
    }
    for t in ticks(y_lo, y_hi, options.log_y) {
        let y = py(t);
        let _ = writeln!(
            svg,
            "<line x1=\"{ML}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#ccc\"/>",
            W - MR
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            ML - 6.0,
            y + 4.0,
            fmt_tick(t, options.log_y)
        );
    }
    // Axis labels from the first series.
    if let Some(s0) = series.first() {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            (ML + W - MR) / 2.0,
            H - 12.0,
            xml_escape(&s0.x_label)
        );
        let _ = writeln!(
            svg,
            "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>",
            (MT + H - MB) / 2.0,
            (MT + H - MB) / 2.0,
            xml_escape(&s0.y_label)
        );
    }
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s.points.iter().copied().filter(|p| usable(p)).collect();
        if pts.is_empty() {
            continue;
        }
        let mut poly = String::new();
        for (x, y) in &pts {
            let _ = write!(poly, "{:.2},{:.2} ", px(*x), py(*y));
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            poly.trim_end()
        );
        for (x, y) in &pts {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.6\" fill=\"{color}\"/>",
                px(*x),
                py(*y)
            );
        }
        // Legend entry.
        let ly = MT + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2.4\"/>",
            ML + 10.0,
            ML + 34.0
        );
        let mut label = s.name.clone();
        if options.annotate_slope && pts.len() >= 2 {
            if let Ok(rep) = crate::best_approx::fit_order(&pts, 0..pts.len()) {
                let _ = write!(label, "  (slope {:.2})", rep.fitted_slope);
            }
        }
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            ML + 40.0,
            ly + 4.0,
            xml_escape(&label)
        );
    }
    svg.push_str("</svg>\n");
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
        }
    }
    fs::write(path, svg).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_series() -> Vec<Series> {
        vec![
            Series::new(
                "decay, smooth",
                "n",
                "E_n",
                (1..=8).map(|n| (n as f64, (n as f64).powi(-2))).collect(),
            ),
            Series::new(
                "decay-kink",
                "n",
                "E_n",
                (1..=8).map(|n| (n as f64, 0.5 * (n as f64).powi(-1))).collect(),
            ),
        ]
    }

    #[test]
    fn csv_is_long_form_full_precision_and_quoted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_csv(&path, &sample_series()).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "series,x,y");
        assert_eq!(lines.len(), 1 + 16);
        // The first series name contains a comma and must be quoted.
        assert!(lines[1].starts_with("\"decay, smooth\","));
        assert!(lines[1].contains("1.0000000000000000e0"));
        // Every data row is exactly series,x,y — no extra columns where a
        // timestamp could hide.
        for line in &lines[1..] {
            let field_commas = line.rsplitn(3, ',').count();
            assert_eq!(field_commas, 3, "unexpected row shape: {line}");
        }
    }

    #[test]
    fn csv_writes_are_byte_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_csv(&a, &sample_series()).unwrap();
        write_csv(&b, &sample_series()).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }

    #[test]
    fn manifest_round_trips_through_json() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.manifest.json");
        let mut manifest =
            RunManifest::new(vec!["approxlab".into(), "verify".into()], "verify");
        manifest.param("z_order", 64).param("alpha", 1.0);
        manifest.seed = Some(42);
        manifest.outputs.push("out.csv".into());
        write_json(&path, &manifest).unwrap();
        let back: RunManifest = read_json(&path).unwrap();
        assert_eq!(back, manifest);
        // Keys of params are sorted in the serialized text.
        let text = fs::read_to_string(&path).unwrap();
        let alpha_at = text.find("\"alpha\"").unwrap();
        let z_at = text.find("\"z_order\"").unwrap();
        assert!(alpha_at < z_at);
    }

    #[test]
    fn sidecar_manifest_path_replaces_the_extension() {
        assert_eq!(
            manifest_path_for(Path::new("out/foo.csv")),
            PathBuf::from("out/foo.manifest.json")
        );
        assert_eq!(manifest_path_for(Path::new("bare")), PathBuf::from("bare.manifest.json"));
    }

    #[test]
    fn svg_contains_polylines_ticks_and_title() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.svg");
        let options = SvgOptions {
            title: "decay of E_n".into(),
            annotate_slope: true,
            ..Default::default()
        };
        write_svg(&path, &sample_series(), &options).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("<polyline").count(), 2);
        assert!(text.contains("decay of E_n"));
        assert!(text.contains("slope -2.00") || text.contains("slope -2.0"));
        assert!(text.contains("<svg "));
        assert!(text.ends_with("</svg>\n"));
        // Log decade tick for 1 must appear.
        assert!(text.contains(">1</text>"));
    }

    #[test]
    fn svg_skips_unplottable_points_and_rejects_empty_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.svg");
        let series = vec![Series::new(
            "with-zeros",
            "n",
            "v",
            vec![(1.0, 1.0), (2.0, 0.0), (3.0, 0.25)],
        )];
        write_svg(&path, &series, &SvgOptions::default()).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("<circle").count(), 2);

        let empty = vec![Series::new("none", "n", "v", vec![(0.0, 0.0)])];
        assert!(matches!(
            write_svg(&path, &empty, &SvgOptions::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn linear_axis_ticks_use_round_steps() {
        let t = ticks(0.0, 1.0, false);
        assert!(t.contains(&0.2) || t.contains(&0.25) || t.contains(&0.5));
        let t = ticks(3.0, 47.0, true);
        assert_eq!(t, vec![10.0]);
    }
}
