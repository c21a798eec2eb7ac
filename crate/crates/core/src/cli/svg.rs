//! Minimal static SVG line plots on a fixed 800x600 canvas.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#7f7f7f"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStyle {
    Line,
    Points,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: SeriesStyle,
}

impl Series {
    pub fn line(name: &str, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
            style: SeriesStyle::Line,
        }
    }

    pub fn points(name: &str, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
            style: SeriesStyle::Points,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

impl Plot {
    pub fn render(&self) -> String {
        let finite = |s: &Series| s.points.clone().into_iter().filter(|(x, y)| x.is_finite() && y.is_finite());
        let (x0, x1) = bounds(self.series.iter().flat_map(|s| finite(s).map(|p| p.0)));
        let (y0, y1) = bounds(self.series.iter().flat_map(|s| finite(s).map(|p| p.1)));
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(out, r#"<rect width="800" height="600" fill="white"/>"#).unwrap();
        writeln!(
            out,
            r#"<rect x="{m}" y="{m}" width="{w}" height="{h}" fill="none" stroke="black"/>"#,
            m = MARGIN,
            w = WIDTH - 2.0 * MARGIN,
            h = HEIGHT - 2.0 * MARGIN
        )
        .unwrap();
        writeln!(out, r#"<text x="400" y="30" text-anchor="middle" font-size="16">{}</text>"#, escape(&self.title)).unwrap();
        writeln!(out, r#"<text x="400" y="585" text-anchor="middle">{}</text>"#, escape(&self.x_label)).unwrap();
        writeln!(
            out,
            r#"<text x="18" y="300" text-anchor="middle" transform="rotate(-90 18 300)">{}</text>"#,
            escape(&self.y_label)
        )
        .unwrap();
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let (x, y) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            writeln!(out, r#"<text x="{:.2}" y="555" text-anchor="middle">{:.3}</text>"#, sx(x), x).unwrap();
            writeln!(out, r#"<text x="55" y="{:.2}" text-anchor="end">{:.3}</text>"#, sy(y) + 4.0, y).unwrap();
        }
        for (k, s) in self.series.iter().enumerate() {
            let colour = PALETTE[k % PALETTE.len()];
            match s.style {
                SeriesStyle::Line => {
                    let pts: Vec<String> = finite(s).map(|(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                    if !pts.is_empty() {
                        writeln!(
                            out,
                            r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#,
                            pts.join(" ")
                        )
                        .unwrap();
                    }
                }
                SeriesStyle::Points => {
                    for (x, y) in finite(s) {
                        writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{colour}"/>"#, sx(x), sy(y)).unwrap();
                    }
                }
            }
            let ly = MARGIN + 18.0 + 18.0 * k as f64;
            writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="12" height="12" fill="{colour}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                WIDTH - MARGIN - 150.0,
                ly - 10.0,
                WIDTH - MARGIN - 132.0,
                ly,
                escape(&s.name)
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
