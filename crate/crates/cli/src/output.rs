use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

pub fn csv_rows<R: Serialize>(rows: &[R]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Usage(format!("cannot write CSV: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

pub fn json<R: Serialize + ?Sized>(value: &R) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(format!("cannot write JSON: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// CSV of `rows` or JSON of `whole`; SVG is refused.
pub fn table<R: Serialize, W: Serialize + ?Sized>(format: Format, rows: &[R], whole: &W) -> Result<String, Failure> {
    match format {
        Format::Csv => csv_rows(rows),
        Format::Json => json(whole),
        Format::Svg => Err(Failure::Usage("SVG output exists for `region` and `multiplier` only".into())),
    }
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Real and imaginary parts of a radial profile as polylines.
pub fn profile_svg(title: &str, points: &[(f64, f64, f64)]) -> String {
    const W: f64 = 600.0;
    const H: f64 = 300.0;
    const PAD: f64 = 40.0;
    let x_max = points.iter().map(|p| p.0).fold(f64::MIN, f64::max);
    let x_min = points.iter().map(|p| p.0).fold(f64::MAX, f64::min);
    let y_abs = points
        .iter()
        .map(|p| p.1.abs().max(p.2.abs()))
        .fold(0.0, f64::max)
        .max(1e-300);
    let px = |x: f64| PAD + (x - x_min) / (x_max - x_min).max(1e-300) * (W - 2.0 * PAD);
    let py = |y: f64| H / 2.0 - y / y_abs * (H / 2.0 - PAD);
    let line = |pick: fn(&(f64, f64, f64)) -> f64| {
        points
            .iter()
            .map(|p| format!("{:.2},{:.2}", px(p.0), py(pick(p))))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    );
    svg.push_str(&format!(
        "<line x1=\"{PAD}\" y1=\"{mid}\" x2=\"{end}\" y2=\"{mid}\" stroke=\"gray\"/>\n",
        mid = H / 2.0,
        end = W - PAD
    ));
    svg.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"black\" points=\"{}\"/>\n",
        line(|p| p.1)
    ));
    if points.iter().any(|p| p.2 != 0.0) {
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"steelblue\" stroke-dasharray=\"4 3\" points=\"{}\"/>\n",
            line(|p| p.2)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{PAD}\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">{title}</text>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{PAD}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n<text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"11\">{x_max}</text>\n",
        y = H - 10.0,
        x = W - PAD - 20.0
    ));
    svg.push_str("</svg>\n");
    svg
}
