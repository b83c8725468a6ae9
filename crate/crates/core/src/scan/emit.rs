use std::fmt::Write as _;
use std::path::Path;

use num_traits::ToPrimitive;

use super::{Breakpoint, ScanReport};
use crate::error::{Error, Result};
use crate::exactnum::{decimal_rational, rational_text, Rational};

/// `t,A,S,ratio,flags,S_decimal`; exact values in text syntax, flags `|`-joined.
pub fn to_csv(report: &ScanReport) -> String {
    let mut out = String::from("t,A,S,ratio,flags,S_decimal\n");
    let text = |x: &Option<Rational>| x.as_ref().map(rational_text).unwrap_or_default();
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            rational_text(&r.t),
            rational_text(&r.a),
            text(&r.s),
            text(&r.ratio),
            r.flags.join("|"),
            r.s.as_ref().map(|s| decimal_rational(s, 12)).unwrap_or_default(),
        );
    }
    out
}

pub fn to_json(report: &ScanReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 50.0;

fn f(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `S(t)` as one polyline, with a circle per located breakpoint.
pub fn to_svg(report: &ScanReport) -> String {
    let pts: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter_map(|r| r.s.as_ref().map(|s| (f(&r.t), f(s))))
        .collect();
    let (mut x0, mut x1) = (f(&report.config.t_min), f(&report.config.t_max));
    if x1 <= x0 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    let mut y0 = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let mut y1 = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if !y0.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    if y1 <= y0 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 500">"#);
    let _ = writeln!(out, r#"<rect x="0" y="0" width="800" height="500" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<path d="M{m} {b} H{r} M{m} {b} V{m}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="12">t = {}</text><text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">t = {}</text>"#,
        MARGIN,
        HEIGHT - MARGIN + 20.0,
        rational_text(&report.config.t_min),
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 20.0,
        rational_text(&report.config.t_max)
    );
    let poly: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y))).collect();
    let _ = writeln!(out, r#"<polyline points="{}" stroke="steelblue" stroke-width="2" fill="none"/>"#, poly.join(" "));
    let s_at = |t: &Rational| report.rows.iter().find(|r| &r.t == t).and_then(|r| r.s.as_ref()).map(f);
    for bp in &report.breakpoints {
        match bp {
            Breakpoint::At { t } => {
                if let Some(s) = s_at(t) {
                    let _ = writeln!(
                        out,
                        r#"<circle class="breakpoint" cx="{:.3}" cy="{:.3}" r="5" fill="crimson"/>"#,
                        px(f(t)),
                        py(s)
                    );
                }
            }
            Breakpoint::Within { lo, hi } => {
                if let (Some(a), Some(b)) = (s_at(lo), s_at(hi)) {
                    let _ = writeln!(
                        out,
                        r#"<circle class="breakpoint" cx="{:.3}" cy="{:.3}" r="5" fill="none" stroke="crimson"/>"#,
                        px((f(lo) + f(hi)) / 2.0),
                        py((a + b) / 2.0)
                    );
                }
            }
            Breakpoint::Region { lo, hi } => {
                let _ = writeln!(
                    out,
                    r#"<rect class="curved" x="{:.3}" y="{m}" width="{:.3}" height="{h}" fill="orange" fill-opacity="0.15"/>"#,
                    px(f(lo)),
                    px(f(hi)) - px(f(lo)),
                    m = MARGIN,
                    h = HEIGHT - 2.0 * MARGIN
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Write `contents` to `path`, reporting the path on failure.
pub fn write_output(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::par::Execution;
    use crate::scan::{scan_with, ScanConfig};

    #[test]
    fn csv_shape() {
        let r = scan_with(&ScanConfig::exact(int(1), int(2), rat(1, 2)), Execution::Serial).unwrap();
        let csv = to_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,A,S,ratio,flags,S_decimal");
        assert_eq!(lines[1], "1,2,2,1,,2.000000000000");
        assert_eq!(lines[2], "3/2,5/2,5/2,1,linear,2.500000000000");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn svg_markers() {
        let r = scan_with(&ScanConfig::exact(int(1), rat(13, 2), rat(1, 4)), Execution::Serial).unwrap();
        let svg = to_svg(&r);
        assert!(svg.contains(r#"viewBox="0 0 800 500""#));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches(r#"class="breakpoint""#).count(), 2);
    }

    #[test]
    fn json_roundtrip() {
        let r = scan_with(&ScanConfig::exact(int(1), int(3), rat(1, 2)), Execution::Serial).unwrap();
        let j = to_json(&r).unwrap();
        assert!(j.contains("\"schema_version\": 1"));
        let back: ScanReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn io_error_names_path() {
        let e = write_output(Path::new("/nonexistent-dir/x.csv"), "x").unwrap_err();
        assert!(e.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
