use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::run::DistanceRecord;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 9] = [
    "param",
    "d_psi",
    "d_rho",
    "d_psi_norm",
    "d_rho_norm",
    "overlap",
    "energy_ref",
    "energy_var",
    "flags",
];

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text for `records`, floats with 17 significant digits.
pub fn records_to_csv(records: &[DistanceRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let wrap = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(wrap)?;
    for r in records {
        w.write_record([
            r.param.clone(),
            float(r.d_psi),
            float(r.d_rho),
            float(r.d_psi_norm),
            float(r.d_rho_norm),
            float(r.overlap),
            float(r.energy_ref),
            float(r.energy_var),
            r.flags.join(";"),
        ])
        .map_err(wrap)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn emit_csv(records: &[DistanceRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::invalid("refusing to write an empty record set"));
    }
    std::fs::write(path, records_to_csv(records)?).map_err(|e| io_error(path, e))
}

#[derive(Deserialize)]
struct Row {
    param: String,
    d_psi: f64,
    d_rho: f64,
    d_psi_norm: f64,
    d_rho_norm: f64,
    overlap: f64,
    energy_ref: f64,
    energy_var: f64,
    flags: String,
}

pub fn records_from_csv(text: &str) -> Result<Vec<DistanceRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| Error::Parse(format!("csv header: {e}")))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected csv header {:?}", header.iter().collect::<Vec<_>>())));
    }
    r.deserialize::<Row>()
        .map(|row| {
            let row = row.map_err(|e| Error::Parse(format!("csv: {e}")))?;
            Ok(DistanceRecord {
                param: row.param,
                d_psi: row.d_psi,
                d_rho: row.d_rho,
                d_psi_norm: row.d_psi_norm,
                d_rho_norm: row.d_rho_norm,
                overlap: row.overlap,
                energy_ref: row.energy_ref,
                energy_var: row.energy_var,
                flags: row.flags.split(';').filter(|s| !s.is_empty()).map(str::to_string).collect(),
            })
        })
        .collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<DistanceRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    records_from_csv(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// One curve of a plot.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    /// Points sorted by `D_psi`, in normalized or raw axes.
    pub fn from_records(label: &str, records: &[DistanceRecord], normalized: bool) -> Self {
        let mut points: Vec<(f64, f64)> = records
            .iter()
            .map(|r| if normalized { (r.d_psi_norm, r.d_rho_norm) } else { (r.d_psi, r.d_rho) })
            .collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        Series {
            label: label.to_string(),
            points,
        }
    }
}

const PALETTE: [&str; 8] = ["#1b6ca8", "#d1495b", "#2a9d8f", "#e9a03b", "#6a4c93", "#4d908e", "#8d6346", "#555555"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag)
}

/// Self-contained SVG with one polyline per series.
pub fn render_svg(title: &str, series: &[Series], normalized: bool) -> Result<String> {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (xmax, ymax) = all.fold((0.0_f64, 0.0_f64), |(x, y), p| (x.max(p.0), y.max(p.1)));
    if series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::invalid("nothing to plot"));
    }
    let xmax = if xmax > 0.0 { xmax } else { 1.0 } * 1.05;
    let ymax = if ymax > 0.0 { ymax } else { 1.0 } * 1.05;
    let (w, h) = (640.0, 480.0);
    let (left, right, top, bottom) = (70.0, 190.0, 40.0, 60.0);
    let (pw, ph) = (w - left - right, h - top - bottom);
    let sx = |x: f64| left + pw * x / xmax;
    let sy = |y: f64| top + ph * (1.0 - y / ymax);
    let (xlabel, ylabel) = if normalized {
        ("D_psi / sqrt(2N)", "D_rho / 2N")
    } else {
        ("D_psi", "D_rho")
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, left + pw / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for (max, horizontal) in [(xmax, true), (ymax, false)] {
        let step = tick_step(max);
        let mut v = 0.0;
        while v <= max + 1e-12 {
            if horizontal {
                let x = sx(v);
                let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#, top + ph, top + ph + 5.0);
                let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, top + ph + 18.0, trim(v));
            } else {
                let y = sy(v);
                let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/>"#, left - 5.0);
                let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, left - 8.0, y + 4.0, trim(v));
            }
            v += step;
        }
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, left + pw / 2.0, h - 15.0);
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{ylabel}</text>"#,
        top + ph / 2.0
    );
    for (i, series) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = series.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            pts.join(" "),
            escape(&series.label)
        );
        let ly = top + 10.0 + 18.0 * i as f64;
        let lx = left + pw + 15.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&series.label));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn trim(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn emit_svg(title: &str, series: &[Series], normalized: bool, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(title, series, normalized)?).map_err(|e| io_error(path, e))
}
