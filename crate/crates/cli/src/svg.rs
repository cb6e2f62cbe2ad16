//! Minimal SVG writer: a fixed 800x800 canvas with `y` pointing up.

use std::fmt::Write;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 50.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// Maps the box `[0, width] x [0, height]` onto the canvas with equal scale
/// on both axes.
pub struct Canvas {
    width: f64,
    height: f64,
    scale: f64,
    body: String,
}

impl Canvas {
    pub fn new(width: f64, height: f64) -> Self {
        let scale = (SIZE - 2.0 * MARGIN) / width.max(height);
        let mut c = Self {
            width,
            height,
            scale,
            body: String::new(),
        };
        c.axes();
        c
    }

    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + x * self.scale, SIZE - MARGIN - y * self.scale)
    }

    fn axes(&mut self) {
        let (x0, y0) = self.map(0.0, 0.0);
        let (x1, y1) = self.map(self.width, self.height);
        let _ = writeln!(
            self.body,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000" stroke-width="1"/>"##,
            x1 - x0,
            y0 - y1
        );
        for (x, y, label, anchor) in [
            (x0, y0 + 18.0, "0".to_string(), "middle"),
            (x1, y0 + 18.0, format!("{:.4}", self.width), "middle"),
            (x0 - 6.0, y1 + 4.0, format!("{:.4}", self.height), "end"),
        ] {
            let _ = writeln!(
                self.body,
                r#"<text x="{x:.2}" y="{y:.2}" font-size="12" text-anchor="{anchor}">{label}</text>"#
            );
        }
    }

    pub fn rect(&mut self, x_lo: f64, y_lo: f64, x_hi: f64, y_hi: f64, fill: &str, opacity: f64) {
        let (a, b) = self.map(x_lo, y_hi);
        let (c, d) = self.map(x_hi, y_lo);
        let _ = writeln!(
            self.body,
            r#"<rect x="{a:.2}" y="{b:.2}" width="{:.2}" height="{:.2}" fill="{fill}" fill-opacity="{opacity:.4}"/>"#,
            c - a,
            d - b
        );
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, width: f64) {
        if points.len() < 2 {
            return;
        }
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| {
                let (u, v) = self.map(x, y);
                format!("{u:.2},{v:.2}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            coords.join(" ")
        );
    }

    pub fn mark(&mut self, x: f64, y: f64, fill: &str) {
        let (u, v) = self.map(x, y);
        let _ = writeln!(
            self.body,
            r##"<circle cx="{u:.2}" cy="{v:.2}" r="5" fill="{fill}" stroke="#000"/>"##
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n{}</svg>\n",
            self.body
        )
    }
}
