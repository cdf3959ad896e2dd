//! Tiny self-contained SVG log-log plot; cosmetic output only.

use crate::report::RungRow;
use std::path::Path;

pub fn write_loglog_svg(rows: &[RungRow], title: &str, path: &Path) -> std::io::Result<()> {
    let (w, h) = (640.0f64, 440.0f64);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for row in rows {
        for (name, &v) in &row.values {
            if v <= 0.0 || row.x <= 0.0 {
                continue;
            }
            match series.iter_mut().find(|(n, _)| n == name) {
                Some((_, pts)) => pts.push((row.x.ln(), v.ln())),
                None => series.push((name.clone(), vec![(row.x.ln(), v.ln())])),
            }
        }
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for (_, pts) in &series {
        for (x, y) in pts {
            xs.push(*x);
            ys.push(*y);
        }
    }
    if xs.is_empty() {
        return std::fs::write(path, "<svg xmlns='http://www.w3.org/2000/svg'/>");
    }
    let (x0, x1) = (xs.iter().cloned().fold(f64::MAX, f64::min), xs.iter().cloned().fold(f64::MIN, f64::max));
    let (y0, y1) = (ys.iter().cloned().fold(f64::MAX, f64::min), ys.iter().cloned().fold(f64::MIN, f64::max));
    let sx = |x: f64| ml + (x - x0) / (x1 - x0).max(1e-12) * (w - ml - mr);
    let sy = |y: f64| h - mb - (y - y0) / (y1 - y0).max(1e-12) * (h - mt - mb);
    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns='http://www.w3.org/2000/svg' width='{w}' height='{h}' viewBox='0 0 {w} {h}'>\n"
    ));
    out.push_str("<rect width='100%' height='100%' fill='white'/>\n");
    out.push_str(&format!(
        "<text x='{}' y='24' font-family='monospace' font-size='15'>{}</text>\n",
        ml,
        xml_escape(title)
    ));
    out.push_str(&format!(
        "<line x1='{ml}' y1='{}' x2='{}' y2='{}' stroke='black'/>\n",
        h - mb,
        w - mr,
        h - mb
    ));
    out.push_str(&format!("<line x1='{ml}' y1='{mt}' x2='{ml}' y2='{}' stroke='black'/>\n", h - mb));
    out.push_str(&format!(
        "<text x='{}' y='{}' font-family='monospace' font-size='12'>ln x</text>\n",
        (w - mr) - 40.0,
        h - mb + 30.0
    ));
    out.push_str(&format!(
        "<text x='12' y='{mt}' font-family='monospace' font-size='12'>ln value</text>\n"
    ));
    for (si, (name, pts)) in series.iter().enumerate() {
        let color = palette[si % palette.len()];
        let mut d = String::new();
        let mut sorted = pts.clone();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (i, (x, y)) in sorted.iter().enumerate() {
            d.push_str(if i == 0 { "M" } else { "L" });
            d.push_str(&format!("{:.2},{:.2} ", sx(*x), sy(*y)));
        }
        out.push_str(&format!("<path d='{d}' fill='none' stroke='{color}' stroke-width='1.5'/>\n"));
        for (x, y) in &sorted {
            out.push_str(&format!(
                "<circle cx='{:.2}' cy='{:.2}' r='3' fill='{color}'/>\n",
                sx(*x),
                sy(*y)
            ));
        }
        out.push_str(&format!(
            "<text x='{}' y='{}' font-family='monospace' font-size='12' fill='{color}'>{}</text>\n",
            w - mr - 150.0,
            mt + 16.0 * si as f64,
            xml_escape(name)
        ));
    }
    out.push_str("</svg>\n");
    std::fs::write(path, out)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
