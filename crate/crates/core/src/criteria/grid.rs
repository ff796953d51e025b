use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EvalError;

/// Polar sample grid on the disk, radii clustered toward the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub refine_levels: u32,
}

impl Default for DiskGrid {
    fn default() -> Self {
        DiskGrid::new(200, 512, 0.999)
    }
}

impl DiskGrid {
    /// `r_k = r_max (1 - (1 - k/(n-1))^2)`, `k = 0..n`.
    pub fn new(n_radii: usize, angles: usize, r_max: f64) -> Self {
        assert!(n_radii >= 2 && angles >= 1 && r_max < 1.0);
        let radii = (0..n_radii)
            .map(|k| {
                let s = 1.0 - k as f64 / (n_radii - 1) as f64;
                r_max * (1.0 - s * s)
            })
            .collect();
        DiskGrid {
            radii,
            angles,
            refine_levels: 2,
        }
    }

    pub fn r_max(&self) -> f64 {
        self.radii.last().copied().unwrap_or(0.0)
    }

    /// Radius-major enumeration; a zero radius contributes the origin once.
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.radii.len() * self.angles);
        for &r in &self.radii {
            if r == 0.0 {
                out.push(Complex64::new(0.0, 0.0));
                continue;
            }
            for j in 0..self.angles {
                out.push(Complex64::from_polar(r, TAU * j as f64 / self.angles as f64));
            }
        }
        out
    }

    /// `(ring index, angle index)` of every point in [`DiskGrid::points`] order.
    fn coordinates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &r) in self.radii.iter().enumerate() {
            if r == 0.0 {
                out.push((i, 0));
            } else {
                out.extend((0..self.angles).map(|j| (i, j)));
            }
        }
        out
    }

    fn ring_spacing(&self, i: usize) -> f64 {
        let n = self.radii.len();
        let below = if i > 0 { self.radii[i] - self.radii[i - 1] } else { 0.0 };
        let above = if i + 1 < n { self.radii[i + 1] - self.radii[i] } else { 0.0 };
        below.max(above)
    }
}

/// Result of a grid maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub at: Complex64,
    /// Points evaluated, including refinement.
    pub evaluated: usize,
    /// Points where the functional failed; they are skipped.
    pub skipped: usize,
    pub first_error: Option<EvalError>,
    /// Linear extrapolation of the two outermost ring maxima to `|z| = 1`,
    /// present when the maximum sits on the outermost ring.
    pub boundary_trend: Option<f64>,
}

fn ring_max(values: &[Result<f64, EvalError>], coords: &[(usize, usize)], ring: usize) -> Option<f64> {
    values
        .iter()
        .zip(coords)
        .filter(|(_, c)| c.0 == ring)
        .filter_map(|(v, _)| v.as_ref().ok().copied())
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
}

/// Maximum of `f` over the grid, with local refinement around the best point.
///
/// Ties go to the earliest point in enumeration order.
pub fn grid_max<F>(grid: &DiskGrid, f: F) -> Result<Extremum, EvalError>
where
    F: Fn(Complex64) -> Result<f64, EvalError> + Sync,
{
    let pts = grid.points();
    let coords = grid.coordinates();
    let values: Vec<Result<f64, EvalError>> = pts.par_iter().map(|&z| f(z)).collect();
    let mut best: Option<(f64, usize)> = None;
    let mut skipped = 0;
    let mut first_error = None;
    for (k, v) in values.iter().enumerate() {
        match v {
            Ok(v) if v.is_nan() => skipped += 1,
            Ok(v) => {
                if best.is_none_or(|(b, _)| *v > b) {
                    best = Some((*v, k));
                }
            }
            Err(e) => {
                skipped += 1;
                if first_error.is_none() {
                    first_error = Some(e.clone());
                }
            }
        }
    }
    let Some((mut value, k)) = best else {
        return Err(first_error.unwrap_or(EvalError::Domain("empty grid".into())));
    };
    let mut at = pts[k];
    let mut evaluated = pts.len();
    let (ring, col) = coords[k];
    let last = grid.radii.len() - 1;
    let boundary_trend = if ring == last && last >= 1 {
        match (ring_max(&values, &coords, last), ring_max(&values, &coords, last - 1)) {
            (Some(v1), Some(v0)) => {
                let (r1, r0) = (grid.radii[last], grid.radii[last - 1]);
                Some(v1 + (v1 - v0) * (1.0 - r1) / (r1 - r0))
            }
            _ => None,
        }
    } else {
        None
    };

    // local refinement on 9x9 stencils, shrinking by 4 per level
    let (mut r0, mut t0) = (grid.radii[ring], TAU * col as f64 / grid.angles as f64);
    let mut dr = grid.ring_spacing(ring);
    let mut dt = TAU / grid.angles as f64;
    let r_max = grid.r_max();
    for _ in 0..grid.refine_levels {
        dr /= 4.0;
        dt /= 4.0;
        let mut cand = Vec::with_capacity(81);
        for i in 0..9 {
            let r = r0 + (i as f64 - 4.0) * dr;
            if !(0.0..=r_max).contains(&r) {
                continue;
            }
            for j in 0..9 {
                let t = t0 + (j as f64 - 4.0) * dt;
                cand.push((r, t));
            }
        }
        let vals: Vec<_> = cand
            .par_iter()
            .map(|&(r, t)| f(Complex64::from_polar(r, t)))
            .collect();
        evaluated += cand.len();
        for (&(r, t), v) in cand.iter().zip(vals) {
            if let Ok(v) = v {
                if v > value {
                    value = v;
                    at = Complex64::from_polar(r, t);
                    r0 = r;
                    t0 = t;
                }
            }
        }
    }
    Ok(Extremum {
        value,
        at,
        evaluated,
        skipped,
        first_error,
        boundary_trend,
    })
}

/// Minimum of `f` over the grid (see [`grid_max`]).
pub fn grid_min<F>(grid: &DiskGrid, f: F) -> Result<Extremum, EvalError>
where
    F: Fn(Complex64) -> Result<f64, EvalError> + Sync,
{
    let mut e = grid_max(grid, |z| f(z).map(|v| -v))?;
    e.value = -e.value;
    e.boundary_trend = e.boundary_trend.map(|v| -v);
    Ok(e)
}
