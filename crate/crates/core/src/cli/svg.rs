//! SVG rendering of the image of a polar grid.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::scenario::PlotOptions;
use crate::error::EvalError;
use crate::verify::{circle, Mapping};

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 20.0;

/// Image curves: circles `k/(circles+1)`, `rays` radial segments, and the
/// boundary circle `r_test` (last).
pub fn image_curves(m: &Mapping, r_test: f64, o: &PlotOptions) -> Result<Vec<Vec<Complex64>>, EvalError> {
    let mut curves = Vec::new();
    let n = o.samples.max(16);
    for k in 1..=o.circles {
        let r = k as f64 / (o.circles + 1) as f64;
        let mut pts = circle(r, n);
        pts.push(pts[0]);
        curves.push(m.eval_along(&pts)?);
    }
    let steps = (n / 4).max(8);
    for j in 0..o.rays {
        let dir = Complex64::from_polar(1.0, TAU * j as f64 / o.rays as f64);
        let pts: Vec<Complex64> = (1..=steps).map(|i| dir * (r_test * i as f64 / steps as f64)).collect();
        let mut img = vec![Complex64::new(0.0, 0.0)];
        img.extend(m.eval_along(&pts)?);
        curves.push(img);
    }
    let mut pts = circle(r_test, 4 * n);
    pts.push(pts[0]);
    curves.push(m.eval_along(&pts)?);
    Ok(curves)
}

/// Fit the curves into a fixed 1000×1000 view box (y up) and emit SVG 1.1.
pub fn render(curves: &[Vec<Complex64>], title: &str) -> String {
    let finite = curves.iter().flatten().filter(|p| p.re.is_finite() && p.im.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in finite {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let to_px = |p: Complex64| (SIZE / 2.0 + (p.re - cx) * scale, SIZE / 2.0 - (p.im - cy) * scale);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="1000" height="1000" viewBox="0 0 1000 1000">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect width="1000" height="1000" fill="white"/>"#);
    let last = curves.len().saturating_sub(1);
    for (k, c) in curves.iter().enumerate() {
        let (stroke, width) = if k == last { ("#b2182b", 1.6) } else { ("#2166ac", 0.8) };
        // split at non-finite points so a bad sample does not draw a spurious line
        for run in c.split(|p| !(p.re.is_finite() && p.im.is_finite())) {
            if run.len() < 2 {
                continue;
            }
            let mut pts = String::new();
            for &p in run {
                let (x, y) = to_px(p);
                let _ = write!(pts, "{x:.3},{y:.3} ");
            }
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{stroke}" stroke-width="{width}" points="{}"/>"#,
                pts.trim_end()
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
