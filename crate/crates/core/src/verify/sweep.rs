//! Sort-and-sweep search for crossing segments of a closed polyline.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Two non-adjacent segments `(k, k+1)` that meet at `point`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentPair {
    pub first: usize,
    pub second: usize,
    pub point: Complex64,
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

/// Intersection point of segments `ab` and `cd`, if any.
pub fn segment_intersection(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Option<Complex64> {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        let t = d1 / (d1 - d2);
        return Some(a + (b - a) * t);
    }
    if d1 == 0.0 && on_segment(c, d, a) {
        return Some(a);
    }
    if d2 == 0.0 && on_segment(c, d, b) {
        return Some(b);
    }
    if d3 == 0.0 && on_segment(a, b, c) {
        return Some(c);
    }
    if d4 == 0.0 && on_segment(a, b, d) {
        return Some(d);
    }
    None
}

/// First crossing of non-adjacent segments of the closed polyline through `pts`,
/// in order of the segments' leftmost x coordinate.
pub fn first_intersection(pts: &[Complex64]) -> Option<SegmentPair> {
    let n = pts.len();
    if n < 4 {
        return None;
    }
    let seg = |k: usize| (pts[k], pts[(k + 1) % n]);
    let min_x = |k: usize| {
        let (a, b) = seg(k);
        a.re.min(b.re)
    };
    let max_x = |k: usize| {
        let (a, b) = seg(k);
        a.re.max(b.re)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| min_x(i).total_cmp(&min_x(j)).then(i.cmp(&j)));
    let mut active: Vec<usize> = Vec::new();
    for &k in &order {
        let x = min_x(k);
        active.retain(|&j| max_x(j) >= x);
        let (a, b) = seg(k);
        let (ylo, yhi) = (a.im.min(b.im), a.im.max(b.im));
        for &j in &active {
            let diff = k.abs_diff(j);
            if diff == 1 || diff == n - 1 {
                continue;
            }
            let (c, d) = seg(j);
            if c.im.max(d.im) < ylo || c.im.min(d.im) > yhi {
                continue;
            }
            if let Some(p) = segment_intersection(a, b, c, d) {
                return Some(SegmentPair {
                    first: j.min(k),
                    second: j.max(k),
                    point: p,
                });
            }
        }
        active.push(k);
    }
    None
}
