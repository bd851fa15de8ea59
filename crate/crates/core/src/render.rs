//! Deterministic SVG output for packings and point clouds.
//!
//! The y axis points up as in the plane, so the page coordinate is
//! `ymax - y`. Circles with negative curvature are drawn as outlines only;
//! lines are clipped to the viewport.

use std::fmt::Write;

use crate::circle::{AccRow, FloatRow};
use crate::error::{Error, Result};
use crate::rational;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    /// `(xmin, ymin, xmax, ymax)` in plane coordinates.
    pub viewport: (f64, f64, f64, f64),
    pub stroke_width: f64,
    pub labels: bool,
    pub max_circles: Option<usize>,
    /// Image width in pixels; the height follows the viewport aspect ratio.
    pub width_px: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            viewport: (-1.05, -1.05, 1.05, 1.05),
            stroke_width: 1.0,
            labels: false,
            max_circles: None,
            width_px: 800.0,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        let (x0, y0, x1, y1) = self.viewport;
        if !(x1 > x0 && y1 > y0) || ![x0, y0, x1, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::Precondition(format!("empty viewport {:?}", self.viewport)));
        }
        if self.width_px.is_nan() || self.width_px <= 0.0 {
            return Err(Error::Precondition("image width must be positive".into()));
        }
        Ok(())
    }

    /// Viewport enclosing every finite circle with a 5% margin; keeps the
    /// current one when there is no finite circle.
    pub fn fit_to(mut self, rows: &[FloatRow]) -> Self {
        let mut bb = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for r in rows {
            if let Some((cx, cy)) = r.center() {
                let rad = r.radius();
                bb = (bb.0.min(cx - rad), bb.1.min(cy - rad), bb.2.max(cx + rad), bb.3.max(cy + rad));
            }
        }
        if bb.0.is_finite() && bb.2 > bb.0 && bb.3 > bb.1 {
            let m = 0.05 * (bb.2 - bb.0).max(bb.3 - bb.1);
            self.viewport = (bb.0 - m, bb.1 - m, bb.2 + m, bb.3 + m);
        }
        self
    }

    fn scale(&self) -> f64 {
        self.width_px / (self.viewport.2 - self.viewport.0)
    }

    fn height_px(&self) -> f64 {
        (self.viewport.3 - self.viewport.1) * self.scale()
    }

    fn page(&self, x: f64, y: f64) -> (f64, f64) {
        let s = self.scale();
        ((x - self.viewport.0) * s, (self.viewport.3 - y) * s)
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Segment of the line `p·n = m` inside the viewport, if any.
fn clip_line(n: (f64, f64), m: f64, vp: (f64, f64, f64, f64)) -> Option<((f64, f64), (f64, f64))> {
    let (x0, y0, x1, y1) = vp;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    if n.1.abs() > 1e-15 {
        for x in [x0, x1] {
            let y = (m - n.0 * x) / n.1;
            if (y0..=y1).contains(&y) {
                pts.push((x, y));
            }
        }
    }
    if n.0.abs() > 1e-15 {
        for y in [y0, y1] {
            let x = (m - n.1 * y) / n.0;
            if (x0..=x1).contains(&x) {
                pts.push((x, y));
            }
        }
    }
    pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    match pts.as_slice() {
        [a, .., b] => Some((*a, *b)),
        _ => None,
    }
}

fn header(spec: &RenderSpec) -> String {
    let (w, h) = (num(spec.width_px), num(spec.height_px()));
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    )
}

/// One element per circle, in the order given.
pub fn render_svg(rows: &[AccRow], spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let s = spec.scale();
    let sw = num(spec.stroke_width);
    let mut out = header(spec);
    let take = spec.max_circles.unwrap_or(usize::MAX);
    let mut labels = String::new();
    for row in rows.iter().take(take) {
        let f = FloatRow::from(row);
        match f.center() {
            None => {
                // Row (2m, 0, n1, n2): the line p·n = m.
                let n = (f.w1, f.w2);
                if let Some((a, b)) = clip_line(n, f.co_curvature / 2.0, spec.viewport) {
                    let (pa, pb) = (spec.page(a.0, a.1), spec.page(b.0, b.1));
                    writeln!(
                        out,
                        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"{sw}\"/>",
                        num(pa.0),
                        num(pa.1),
                        num(pb.0),
                        num(pb.1)
                    )
                    .expect("write to string");
                }
            }
            Some((cx, cy)) => {
                let (px, py) = spec.page(cx, cy);
                let r = f.radius() * s;
                let fill = if f.curvature < 0.0 { "none" } else { "#dde6f0" };
                writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"{sw}\"/>",
                    num(px),
                    num(py),
                    num(r)
                )
                .expect("write to string");
                if spec.labels && rational::is_integer(&row.curvature) && f.curvature > 0.0 {
                    let size = 0.8 * r;
                    if size >= 4.0 {
                        writeln!(
                            labels,
                            "<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\">{}</text>",
                            num(px),
                            num(py),
                            num(size),
                            rational::format(&row.curvature)
                        )
                        .expect("write to string");
                    }
                }
            }
        }
    }
    out.push_str(&labels);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Dots of radius `dot_px` pixels, for limit-set samples.
pub fn render_points(points: &[(f64, f64)], spec: &RenderSpec, dot_px: f64) -> Result<String> {
    spec.validate()?;
    let mut out = header(spec);
    for &(x, y) in points {
        let (px, py) = spec.page(x, y);
        writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>", num(px), num(py), num(dot_px))
            .expect("write to string");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
