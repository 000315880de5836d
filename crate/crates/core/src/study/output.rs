use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{StudyError, StudyResult, StudyRow};

pub const CSV_HEADER: &str = "case,k,n,h,error_l2,error_h1l2,rate";

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// CSV text for a result: one row per `(k, n)`.
pub fn to_csv(result: &StudyResult) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in &result.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.case,
            r.k,
            r.n,
            num(r.h),
            opt(r.error_l2),
            opt(r.error_h1l2),
            opt(r.rate)
        );
    }
    s
}

pub fn write_csv(result: &StudyResult, path: &Path) -> Result<(), StudyError> {
    write_atomic(path, &to_csv(result))
}

/// Writes through a sibling temp file so a failed run never leaves a
/// truncated artifact behind.
fn write_atomic(path: &Path, text: &str) -> Result<(), StudyError> {
    let io = |e: std::io::Error| StudyError::Io(format!("{}: {e}", path.display()));
    let name = path
        .file_name()
        .ok_or_else(|| StudyError::Io(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, text).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

/// Parses text produced by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<StudyRow>, StudyError> {
    let bad = |line: usize, what: &str| StudyError::Parse(format!("line {line}: {what}"));
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(bad(1, "missing header")),
    }
    let field = |s: &str, line: usize| -> Result<Option<f64>, StudyError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| bad(line, "bad number"))
        }
    };
    let mut rows = Vec::new();
    for (i, line) in lines {
        let ln = i + 1;
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            return Err(bad(ln, "expected 7 columns"));
        }
        rows.push(StudyRow {
            case: cols[0].to_string(),
            k: cols[1].parse().map_err(|_| bad(ln, "bad k"))?,
            n: cols[2].parse().map_err(|_| bad(ln, "bad n"))?,
            h: field(cols[3], ln)?.ok_or_else(|| bad(ln, "missing h"))?,
            error_l2: field(cols[4], ln)?,
            error_h1l2: field(cols[5], ln)?,
            rate: field(cols[6], ln)?,
        });
    }
    Ok(rows)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 70.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
}

impl Axes {
    fn px(&self, h: f64) -> f64 {
        MARGIN + (h.log10() - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, e: f64) -> f64 {
        HEIGHT - MARGIN - (e.log10() - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Standalone log–log plot of error against `h`, one polyline per order,
/// with dashed guides of the expected slope through each first point.
pub fn to_svg(result: &StudyResult) -> String {
    let mut series: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    for k in result.rows.iter().map(|r| r.k) {
        series.entry(k).or_insert_with(|| {
            result.series(k).into_iter().filter(|(h, e)| *h > 0.0 && *e > 0.0).collect()
        });
    }
    let pts: Vec<(f64, f64)> = series.values().flatten().copied().collect();
    let decades = |vals: Vec<f64>| -> (f64, f64) {
        if vals.is_empty() {
            return (-2.0, 0.0);
        }
        let lo = vals.iter().fold(f64::INFINITY, |m, v| m.min(v.log10())).floor();
        let hi = vals.iter().fold(f64::NEG_INFINITY, |m, v| m.max(v.log10())).ceil();
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, hi + 1.0)
        }
    };
    let axes = Axes {
        x: decades(pts.iter().map(|p| p.0).collect()),
        y: decades(pts.iter().map(|p| p.1).collect()),
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        "<rect x=\"{x0:.2}\" y=\"{y0:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y1 - y0
    );
    for d in (axes.x.0 as i32)..=(axes.x.1 as i32) {
        let x = axes.px(10f64.powi(d));
        let _ = writeln!(s, "<line x1=\"{x:.2}\" y1=\"{y1:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", y1 + 5.0);
        let _ = writeln!(
            s,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">1e{d}</text>",
            y1 + 20.0
        );
    }
    for d in (axes.y.0 as i32)..=(axes.y.1 as i32) {
        let y = axes.py(10f64.powi(d));
        let _ = writeln!(s, "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>", x0 - 5.0);
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">1e{d}</text>",
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">h</text>",
        0.5 * (x0 + x1),
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        "<text x=\"15\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 15 {:.2})\">error</text>",
        0.5 * (y0 + y1),
        0.5 * (y0 + y1)
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        0.5 * (x0 + x1),
        y0 - 20.0,
        result.case.name()
    );

    for (i, (k, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        if pts.is_empty() {
            continue;
        }
        let coords: Vec<String> = pts.iter().map(|&(h, e)| format!("{:.2},{:.2}", axes.px(h), axes.py(e))).collect();
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
            coords.join(" ")
        );
        for &(h, e) in pts {
            let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>", axes.px(h), axes.py(e));
        }
        // guide of the expected slope through the first point
        let slope = result.case.expected_rate(*k);
        let (ha, ea) = pts[0];
        let hb = pts.iter().map(|p| p.0).fold(ha, f64::min);
        let hb = if hb == ha { pts.iter().map(|p| p.0).fold(ha, f64::max) } else { hb };
        let eb = ea * (hb / ha).powf(slope);
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-dasharray=\"6 4\"/>",
            axes.px(ha),
            axes.py(ea),
            axes.px(hb),
            axes.py(eb)
        );
        let ly = y0 + 18.0 + 18.0 * i as f64;
        let rate = result.rate(*k).map(|r| format!("{r:.2}")).unwrap_or_else(|| "n/a".into());
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            x0 + 10.0,
            x0 + 30.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">k={k} rate {rate} (guide {slope})</text>",
            x0 + 36.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(result: &StudyResult, path: &Path) -> Result<(), StudyError> {
    write_atomic(path, &to_svg(result))
}

/// Fixed-width rate table for terminal output.
pub fn rate_table(result: &StudyResult) -> String {
    let mut s = format!("{} ({:?})\n", result.case.name(), result.norm);
    let _ = writeln!(s, "{:>3} {:>6} {:>12} {:>14}", "k", "n", "h", "error");
    for r in &result.rows {
        let e = result.primary_error(r).map(|e| format!("{e:.6e}")).unwrap_or_default();
        let _ = writeln!(s, "{:>3} {:>6} {:>12.6e} {:>14}", r.k, r.n, r.h, e);
    }
    for (k, rate) in &result.rates {
        let rate = rate.map(|r| format!("{r:.3}")).unwrap_or_else(|| "n/a".into());
        let _ = writeln!(s, "rate k={k}: {rate} (expected {})", result.case.expected_rate(*k));
    }
    for f in &result.failures {
        let _ = writeln!(s, "failed k={} n={}: {}", f.k, f.n, f.message);
    }
    s
}
