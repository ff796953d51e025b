//! Empirical geometry: injectivity sampling, boundary simplicity, sense
//! preservation and convexity in a direction.
//!
//! Negative results come with constructive witnesses; positive results mean
//! only that nothing was found at the sampled resolution.

pub mod presets;
mod sweep;

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{grid_max, grid_min, upper_verdict, Bound, CheckReport, DiskGrid, ExtremumKind, Relation, Verdict, Witness, DEFAULT_SLACK};
use crate::error::EvalError;
use crate::funcore::AnalyticFn;
use crate::shear::HarmonicShear;

pub use sweep::{first_intersection, SegmentPair};

/// A mapping under test: analytic `f`, or harmonic `H + conj(G)`.
#[derive(Debug, Clone)]
pub enum Mapping {
    Analytic(AnalyticFn),
    Harmonic(HarmonicShear),
}

impl Mapping {
    pub fn eval(&self, z: Complex64) -> Result<Complex64, EvalError> {
        match self {
            Mapping::Analytic(f) => f.value(z),
            Mapping::Harmonic(s) => s.eval(z),
        }
    }

    /// `(a, b)` with `df = a dz + conj(b dz)`.
    pub fn derivs(&self, z: Complex64) -> Result<(Complex64, Complex64), EvalError> {
        match self {
            Mapping::Analytic(f) => Ok((f.deriv(z)?, Complex64::new(0.0, 0.0))),
            Mapping::Harmonic(s) => s.derivs(z),
        }
    }

    /// Images along a polyline; harmonic maps use chord increments.
    pub fn eval_along(&self, pts: &[Complex64]) -> Result<Vec<Complex64>, EvalError> {
        match self {
            Mapping::Analytic(f) => pts.par_iter().map(|&z| f.value(z)).collect(),
            Mapping::Harmonic(s) => s.eval_along(pts),
        }
    }
}

/// Sampling plan for a mapping.
#[derive(Debug, Clone)]
pub struct PointMap {
    pub mapping: Mapping,
    pub r_test: f64,
    pub n_boundary: usize,
    pub n_interior: usize,
    pub seed: u64,
}

impl PointMap {
    pub fn new(mapping: Mapping) -> Self {
        PointMap {
            mapping,
            r_test: 0.995,
            n_boundary: 4096,
            n_interior: 20_000,
            seed: 0,
        }
    }

    /// Closed polyline `r_test e^{2πik/n}` (first point not repeated).
    pub fn boundary_points(&self) -> Vec<Complex64> {
        circle(self.r_test, self.n_boundary)
    }

    /// Area-uniform Halton points in `|z| < r_test`, shifted by a seeded offset.
    pub fn interior_points(&self) -> Vec<Complex64> {
        halton_disk(self.n_interior, self.r_test, self.seed)
    }
}

pub fn circle(r: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(r, TAU * k as f64 / n as f64)).collect()
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut out = 0.0;
    while i > 0 {
        f /= base as f64;
        out += f * (i % base) as f64;
        i /= base;
    }
    out
}

/// Halton (2, 3) points mapped area-uniformly into the disk of radius `r`.
pub fn halton_disk(n: usize, r: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s1, s2): (f64, f64) = (rng.gen(), rng.gen());
    (1..=n as u64)
        .map(|i| {
            let u = (radical_inverse(i, 2) + s1).fract();
            let v = (radical_inverse(i, 3) + s2).fract();
            Complex64::from_polar(r * u.sqrt(), TAU * v)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionWitness {
    pub z1: Complex64,
    pub z2: Complex64,
    pub image_distance: f64,
    pub preimage_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub collision: Option<CollisionWitness>,
    pub samples: usize,
    pub failed_samples: usize,
    pub candidate_pairs: usize,
    pub refined_pairs: usize,
}

impl InjectivityReport {
    pub fn verdict(&self) -> Verdict {
        if self.collision.is_some() {
            Verdict::BoundViolated
        } else {
            Verdict::Certified
        }
    }
}

/// Tolerances of the injectivity search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InjectivityOptions {
    pub separation: f64,
    pub collision_tol: f64,
    /// Hash cell size in units of the median local image spacing.
    pub cell_factor: f64,
    pub max_refinements: usize,
}

impl Default for InjectivityOptions {
    fn default() -> Self {
        InjectivityOptions {
            separation: 0.05,
            collision_tol: 1e-8,
            cell_factor: 2.0,
            max_refinements: 400,
        }
    }
}

/// Solve `f(z) = target` near `z` by damped Newton on the real 2x2 system.
fn newton_to(m: &Mapping, target: Complex64, mut z: Complex64, limit: f64) -> Option<(Complex64, f64)> {
    let mut fz = m.eval(z).ok()?;
    let mut res = (fz - target).norm();
    for _ in 0..60 {
        if res < 1e-14 * (1.0 + target.norm()) {
            break;
        }
        let (a, b) = m.derivs(z).ok()?;
        let det = a.norm_sqr() - b.norm_sqr();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let r = target - fz;
        let mut step = (a.conj() * r - b.conj() * r.conj()) / det;
        let mut improved = false;
        for _ in 0..40 {
            let mut cand = z + step;
            if cand.norm() >= limit {
                cand *= limit / cand.norm() * (1.0 - 1e-12);
            }
            if let Ok(fc) = m.eval(cand) {
                let rc = (fc - target).norm();
                if rc < res {
                    z = cand;
                    fz = fc;
                    res = rc;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Some((z, res))
}

/// Search for `z1 ≠ z2` with `f(z1) = f(z2)`.
pub fn injectivity_test(pm: &PointMap) -> Result<InjectivityReport, EvalError> {
    injectivity_test_with(pm, InjectivityOptions::default())
}

pub fn injectivity_test_with(pm: &PointMap, opts: InjectivityOptions) -> Result<InjectivityReport, EvalError> {
    let mut pts = pm.interior_points();
    pts.extend(pm.boundary_points());
    let evals: Vec<Result<(Complex64, f64), EvalError>> = pts
        .par_iter()
        .map(|&z| {
            let w = pm.mapping.eval(z)?;
            let (a, b) = pm.mapping.derivs(z)?;
            Ok((w, a.norm() + b.norm()))
        })
        .collect();
    let failed = evals.iter().filter(|e| e.is_err()).count();
    if failed * 100 > pts.len() {
        let err = evals.into_iter().find_map(|e| e.err()).expect("failures present");
        return Err(err);
    }
    let mut zs = Vec::with_capacity(pts.len());
    let mut ws = Vec::with_capacity(pts.len());
    let mut scales = Vec::with_capacity(pts.len());
    for (z, e) in pts.iter().zip(evals) {
        if let Ok((w, s)) = e {
            zs.push(*z);
            ws.push(w);
            scales.push(s);
        }
    }
    let spacing = pm.r_test * (std::f64::consts::PI / pm.n_interior.max(1) as f64).sqrt();
    scales.sort_by(f64::total_cmp);
    let median = scales[scales.len() / 2] * spacing;
    let cell = (opts.cell_factor * median).max(1e-12);

    let key = |w: Complex64| ((w.re / cell).floor() as i64, (w.im / cell).floor() as i64);
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &w) in ws.iter().enumerate() {
        cells.entry(key(w)).or_default().push(i);
    }
    let mut cands: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &w) in ws.iter().enumerate() {
        let (kx, ky) = key(w);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = cells.get(&(kx + dx, ky + dy)) {
                    for &j in bucket {
                        if j <= i || (zs[i] - zs[j]).norm() <= opts.separation {
                            continue;
                        }
                        let d = (w - ws[j]).norm();
                        if d < cell {
                            cands.push((d, i, j));
                        }
                    }
                }
            }
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut report = InjectivityReport {
        collision: None,
        samples: pts.len(),
        failed_samples: failed,
        candidate_pairs: cands.len(),
        refined_pairs: 0,
    };
    let limit = 1.0 - 1e-9;
    for &(_, i, j) in cands.iter().take(opts.max_refinements) {
        report.refined_pairs += 1;
        let target = ws[i];
        if let Some((z2, res)) = newton_to(&pm.mapping, target, zs[j], limit) {
            let sep = (z2 - zs[i]).norm();
            if res < opts.collision_tol && sep > opts.separation {
                report.collision = Some(CollisionWitness {
                    z1: zs[i],
                    z2,
                    image_distance: res,
                    preimage_distance: sep,
                });
                break;
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub simple: bool,
    pub segments: usize,
    pub intersection: Option<SegmentPair>,
}

/// Self-intersection test of the image of `|z| = r_test`.
pub fn boundary_simplicity(pm: &PointMap) -> Result<BoundaryReport, EvalError> {
    if pm.n_boundary < 64 {
        return Err(EvalError::Domain("boundary test needs at least 64 points".into()));
    }
    let imgs = pm.mapping.eval_along(&pm.boundary_points())?;
    polyline_simplicity(&imgs)
}

/// Self-intersection test of a closed polyline.
pub fn polyline_simplicity(imgs: &[Complex64]) -> Result<BoundaryReport, EvalError> {
    let n = imgs.len();
    for k in 0..n {
        if imgs[k] == imgs[(k + 1) % n] {
            return Err(EvalError::Domain(format!("zero-length boundary segment at index {k}")));
        }
    }
    let hit = first_intersection(imgs);
    Ok(BoundaryReport {
        simple: hit.is_none(),
        segments: n,
        intersection: hit,
    })
}

/// `sup |ω|` against 1 (certified with margin), plus the minimum Jacobian.
pub fn sense_preserving_scan(s: &HarmonicShear, grid: &DiskGrid) -> Result<CheckReport, EvalError> {
    let e = grid_max(grid, |z| Ok(s.omega().value(z)?.norm()))?;
    let jac = grid_min(grid, |z| s.jacobian(z))?;
    let mut verdict = upper_verdict(&e, 1.0, DEFAULT_SLACK);
    if e.value >= 1.0 {
        verdict = Verdict::BoundViolated;
    } else if verdict == Verdict::BoundViolated {
        verdict = Verdict::Inconclusive;
    }
    let mut witnesses = Vec::new();
    if verdict == Verdict::BoundViolated {
        witnesses.push(Witness { z: e.at, value: e.value, label: Some("|omega| >= 1".into()) });
    }
    let mut notes = vec![format!("min Jacobian {:.6e} at {}", jac.value, jac.at)];
    if let Some(t) = e.boundary_trend {
        notes.push(format!("sup |omega| on outermost ring; boundary trend {t:.6}"));
    }
    Ok(CheckReport {
        criterion: "sense".into(),
        parameters: Default::default(),
        kind: ExtremumKind::Sup,
        sup_value: e.value,
        argmax: e.at,
        bound: Bound { relation: Relation::Below, value: 1.0 },
        verdict,
        witnesses,
        notes,
        evaluated: e.evaluated + jac.evaluated,
        skipped: e.skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub convex: bool,
    pub direction: f64,
    pub levels: usize,
    pub skipped_levels: usize,
    pub max_crossings: usize,
    /// First level (in the rotated frame) with more than two crossings.
    pub witness_level: Option<f64>,
}

/// Count crossings of lines parallel to `e^{iθ}` with the boundary image.
pub fn convex_in_direction_test(pm: &PointMap, theta: f64) -> Result<DirectionReport, EvalError> {
    let imgs = pm.mapping.eval_along(&pm.boundary_points())?;
    let b = polyline_simplicity(&imgs)?;
    if !b.simple {
        return Err(EvalError::Domain("boundary image is not simple; direction test undefined".into()));
    }
    Ok(crossing_levels(&imgs, theta, 256))
}

/// Crossing counts on `levels` lines of the rotated closed polyline.
pub fn crossing_levels(imgs: &[Complex64], theta: f64, levels: usize) -> DirectionReport {
    let rot = Complex64::from_polar(1.0, -theta);
    let pts: Vec<Complex64> = imgs.iter().map(|&w| w * rot).collect();
    let (lo, hi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.im), h.max(p.im)));
    let extent = hi - lo;
    let band = 1e-6 * extent.max(1e-300);
    let n = pts.len();
    let mut report = DirectionReport {
        convex: true,
        direction: theta,
        levels,
        skipped_levels: 0,
        max_crossings: 0,
        witness_level: None,
    };
    for k in 0..levels {
        let y = lo + (k as f64 + 0.5) * extent / levels as f64;
        if pts.iter().any(|p| (p.im - y).abs() < band) {
            report.skipped_levels += 1;
            continue;
        }
        let crossings = (0..n)
            .filter(|&i| {
                let (a, b) = (pts[i].im - y, pts[(i + 1) % n].im - y);
                (a < 0.0) != (b < 0.0)
            })
            .count();
        report.max_crossings = report.max_crossings.max(crossings);
        if crossings > 2 && report.witness_level.is_none() {
            report.convex = false;
            report.witness_level = Some(y);
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub max_error: f64,
    pub at: Complex64,
    pub samples: usize,
}

/// Largest `|numeric - closed|` over `n` Halton points with `|z| <= 0.95`.
pub fn closed_form_compare(numeric: &AnalyticFn, closed: &AnalyticFn, n: usize, seed: u64) -> Result<CompareReport, EvalError> {
    let pts = halton_disk(n, 0.95, seed);
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|&z| Ok((numeric.value(z)? - closed.value(z)?).norm()))
        .collect::<Result<_, EvalError>>()?;
    let (k, &max_error) = errs
        .iter()
        .enumerate()
        .fold((0, &0.0), |best, (k, e)| if *e > *best.1 { (k, e) } else { best });
    Ok(CompareReport { max_error, at: pts[k], samples: n })
}

/// Deterministic random unit-circle points, used by property tests and sweeps.
pub fn seeded_unit_points(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcore::BuiltinFamily;

    fn small(m: Mapping) -> PointMap {
        PointMap { n_interior: 4000, n_boundary: 1024, ..PointMap::new(m) }
    }

    #[test]
    fn halton_inside_and_deterministic() {
        let a = halton_disk(500, 0.9, 7);
        assert!(a.iter().all(|z| z.norm() < 0.9));
        assert_eq!(a, halton_disk(500, 0.9, 7));
        assert_ne!(a, halton_disk(500, 0.9, 8));
    }

    #[test]
    fn identity_and_square() {
        let id = small(Mapping::Analytic(AnalyticFn::builtin(BuiltinFamily::Identity)));
        assert!(injectivity_test(&id).unwrap().collision.is_none());
        assert!(boundary_simplicity(&id).unwrap().simple);
        let d = convex_in_direction_test(&id, 0.3).unwrap();
        assert!(d.convex && d.max_crossings == 2);

        let sq = small(Mapping::Analytic(AnalyticFn::parse("z^2").unwrap()));
        let w = injectivity_test(&sq).unwrap().collision.unwrap();
        assert!((w.z1 + w.z2).norm() < 1e-6, "{w:?}");
        assert!(w.image_distance < 1e-8 && w.preimage_distance > 0.05);
        assert!(!boundary_simplicity(&sq).unwrap().simple);
    }

    #[test]
    fn koebe_is_injective_on_samples() {
        let k = small(Mapping::Analytic(AnalyticFn::builtin(BuiltinFamily::Koebe)));
        assert!(injectivity_test(&k).unwrap().collision.is_none());
        assert!(boundary_simplicity(&k).unwrap().simple);
    }

    #[test]
    fn degenerate_polyline() {
        let pts = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(polyline_simplicity(&pts).is_err());
    }
}
