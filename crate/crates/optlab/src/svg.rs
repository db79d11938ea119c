//! Minimal deterministic SVG line plots of CSV columns.

use std::fmt::Write as _;

use optlab_core::Error;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct AxesSpec {
    pub x: String,
    pub ys: Vec<String>,
    pub log_y: bool,
    pub title: String,
}

impl AxesSpec {
    pub fn new(x: &str, ys: &[&str]) -> Self {
        Self { x: x.into(), ys: ys.iter().map(|s| s.to_string()).collect(), log_y: false, title: String::new() }
    }

    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    pub fn title(mut self, t: &str) -> Self {
        self.title = t.into();
        self
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn parse_table(csv: &str) -> Result<Table, Error> {
    let mut lines = csv.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(Error::Parse(format!("row {i}: {} fields, expected {}", fields.len(), header.len())));
        }
        // non-numeric cells (labels) become NaN and are never plotted
        rows.push(fields.iter().map(|f| f.trim().parse::<f64>().unwrap_or(f64::NAN)).collect());
    }
    if rows.is_empty() {
        return Err(Error::Parse("CSV has no data rows".into()));
    }
    Ok(Table { header, rows })
}

fn column(t: &Table, name: &str) -> Result<usize, Error> {
    t.header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::Parse(format!("no column {name:?}")))
}

/// One `<polyline>` per y column. Non-finite values, and non-positive ones
/// on a log axis, are skipped.
pub fn emit_svg(csv: &str, axes: &AxesSpec) -> Result<String, Error> {
    let t = parse_table(csv)?;
    let xi = column(&t, &axes.x)?;
    let yis = axes.ys.iter().map(|y| column(&t, y)).collect::<Result<Vec<_>, _>>()?;
    let ty = |v: f64| if axes.log_y { v.log10() } else { v };
    let keep = |v: f64| v.is_finite() && (!axes.log_y || v > 0.0);

    let mut series: Vec<Vec<(f64, f64)>> = Vec::new();
    for &yi in &yis {
        series.push(
            t.rows
                .iter()
                .filter(|r| r[xi].is_finite() && keep(r[yi]))
                .map(|r| (r[xi], ty(r[yi])))
                .collect(),
        );
    }
    let all = series.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return Err(Error::Parse("no plottable values".into()));
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    if !axes.title.is_empty() {
        let _ = writeln!(out, r#"<text x="{}" y="30" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&axes.title));
    }
    let ylabel = if axes.log_y { "log10 " } else { "" };
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="11">{} [{}, {}]</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(&axes.x),
        fmt(x0),
        fmt(x1)
    );
    let _ = writeln!(
        out,
        r#"<text x="10" y="{}" font-size="11">{ylabel}y [{}, {}]</text>"#,
        MARGIN - 8.0,
        fmt(y0),
        fmt(y1)
    );
    for (k, (pts, name)) in series.iter().zip(&axes.ys).enumerate() {
        let color = COLORS[k % COLORS.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#,
            coords.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" fill="{color}">{}</text>"#,
            WIDTH - MARGIN + 4.0,
            MARGIN + 14.0 * (k as f64 + 1.0),
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn fmt(v: f64) -> String {
    format!("{v:.4e}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
