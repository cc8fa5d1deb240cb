//! File outputs: CSV tables, SVG heatmaps and box-plot panels.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::stats::BoxplotStats;
use crate::HarnessError;

/// Writes files into one directory and remembers their names for the manifest.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, HarnessError> {
        fs::create_dir_all(root).map_err(|e| HarnessError::Io(format!("{}: {e}", root.display())))?;
        Ok(Self { root: root.to_path_buf(), files: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), HarnessError> {
        let p = self.root.join(name);
        fs::write(&p, contents).map_err(|e| HarnessError::Io(format!("{}: {e}", p.display())))?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| HarnessError::Io(format!("{name}: {e}"));
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(format!("{name}: {e}")))?;
        self.write(name, &String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Shortest round-trip formatting; infinities as `inf`.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Greyscale heatmap, black at the minimum and white at the maximum finite value.
///
/// `values` is row-major with `width` cells per row; row 0 is drawn at the bottom.
pub fn heatmap_svg(title: &str, width: usize, height: usize, values: &[f64]) -> String {
    let cell = 16.0;
    let (w, h) = (width as f64 * cell, height as f64 * cell);
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w,
        h + 20.0,
        w,
        h + 20.0
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(s, r#"<text x="2" y="14" font-size="12">{}</text>"#, escape(title));
    for y in 0..height {
        for x in 0..width {
            let v = values[y * width + x];
            let fill = if v.is_finite() {
                let g = (255.0 * (v - lo) / span).round() as u8;
                format!("rgb({g},{g},{g})")
            } else {
                "rgb(200,40,40)".into()
            };
            let _ = writeln!(
                s,
                r#"<rect class="cell" x="{}" y="{}" width="{cell}" height="{cell}" fill="{fill}"><title>({x},{y}) {}</title></rect>"#,
                x as f64 * cell,
                20.0 + (height - 1 - y) as f64 * cell,
                num(v)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// One panel of a box-plot figure: a title and labelled boxes sharing one value axis.
#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub boxes: Vec<(String, BoxplotStats)>,
}

/// Panels laid out in rows of `columns`; each panel scales its own axis to its data.
pub fn boxplot_svg(title: &str, panels: &[Panel], columns: usize) -> String {
    let columns = columns.max(1);
    let (pw, ph) = (220.0, 160.0);
    let rows = panels.len().div_ceil(columns);
    let (w, h) = (pw * columns as f64, 24.0 + ph * rows as f64);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(s, r#"<text x="4" y="16" font-size="13">{}</text>"#, escape(title));
    for (i, p) in panels.iter().enumerate() {
        let ox = (i % columns) as f64 * pw;
        let oy = 24.0 + (i / columns) as f64 * ph;
        let finite = |b: &BoxplotStats| [b.min, b.max].into_iter().filter(|v| v.is_finite()).collect::<Vec<_>>();
        let all: Vec<f64> = p.boxes.iter().flat_map(|(_, b)| finite(b)).collect();
        let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let (top, bottom) = (oy + 20.0, oy + ph - 24.0);
        let ypos = |v: f64| {
            let v = if v.is_finite() { v } else { hi };
            bottom - (v - lo) / span * (bottom - top)
        };
        let _ = writeln!(s, r#"<g class="panel">"#);
        let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#, ox + 2.0, oy + 2.0, pw - 4.0, ph - 4.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11">{}</text>"#, ox + 6.0, oy + 14.0, escape(&p.title));
        let slot = (pw - 12.0) / p.boxes.len().max(1) as f64;
        for (j, (label, b)) in p.boxes.iter().enumerate() {
            let cx = ox + 6.0 + slot * (j as f64 + 0.5);
            let bw = (slot * 0.6).max(2.0);
            let _ = writeln!(s, r#"<g class="box"><title>{}: median {}</title>"#, escape(label), num(b.median));
            let _ = writeln!(s, r#"<line x1="{cx}" y1="{}" x2="{cx}" y2="{}" stroke="black"/>"#, ypos(b.min), ypos(b.max));
            let (y3, y1) = (ypos(b.q3), ypos(b.q1));
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{bw}" height="{}" fill="white" stroke="black"/>"#,
                cx - bw / 2.0,
                y3,
                (y1 - y3).max(0.5)
            );
            let ym = ypos(b.median);
            let _ = writeln!(s, r#"<line x1="{}" y1="{ym}" x2="{}" y2="{ym}" stroke="black" stroke-width="2"/>"#, cx - bw / 2.0, cx + bw / 2.0);
            let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="8" text-anchor="middle">{}</text>"#, cx, oy + ph - 10.0, escape(label));
            s.push_str("</g>\n");
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}
