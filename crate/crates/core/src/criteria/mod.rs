//! Univalence criteria as grid-evaluable functionals, and verdict plumbing.
//!
//! Grid suprema under-estimate true suprema, so an upper-bound criterion is
//! only certified with a margin (`slack`) and when the outermost rings do not
//! trend past the bound; a grid value beyond the bound is a genuine violation.

pub mod bounds;
pub mod grid;

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{finite, EvalError, ParamError};
use crate::funcore::{Analytic, AnalyticFn};
use crate::shear::HarmonicShear;
use crate::transforms::{integrate_real, QuadOptions};

pub use grid::{grid_max, grid_min, DiskGrid, Extremum};

/// Default certification margin for upper-bound checks.
pub const DEFAULT_SLACK: f64 = 1e-3;

/// Classical necessary bound `(1-|z|^2)|f''/f'| <= 6` for univalent `f`.
pub const NECESSITY_BOUND: f64 = 6.0;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Scalar parameters shared by the criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub delta: f64,
    pub gamma: f64,
    pub c: f64,
    pub lambda_count: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            alpha: 0.0,
            beta: 0.0,
            theta: 0.0,
            delta: 0.0,
            gamma: 2.0,
            c: 0.0,
            lambda_count: 64,
        }
    }
}

impl Params {
    /// Ranges needed for the computations themselves.
    pub fn validate(&self) -> Result<(), ParamError> {
        let fin = |name, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(ParamError { name, value: v, expected: "finite" })
            }
        };
        fin("alpha", self.alpha)?;
        fin("beta", self.beta)?;
        fin("theta", self.theta)?;
        if !(0.0..1.0).contains(&self.delta) {
            return Err(ParamError { name: "delta", value: self.delta, expected: "in [0, 1)" });
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return Err(ParamError { name: "gamma", value: self.gamma, expected: ">= 1" });
        }
        if !(self.c > -0.5 && self.c <= 0.0) {
            return Err(ParamError { name: "c", value: self.c, expected: "in (-1/2, 0]" });
        }
        if self.lambda_count == 0 {
            return Err(ParamError { name: "lambda_count", value: 0.0, expected: ">= 1" });
        }
        Ok(())
    }

    /// Ranges under which the theorems are stated (`α, β ≥ 0`).
    pub fn theorem_range_violations(&self) -> Vec<ParamError> {
        let mut out = Vec::new();
        if self.alpha < 0.0 {
            out.push(ParamError { name: "alpha", value: self.alpha, expected: ">= 0" });
        }
        if self.beta < 0.0 {
            out.push(ParamError { name: "beta", value: self.beta, expected: ">= 0" });
        }
        out
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("alpha".to_string(), self.alpha),
            ("beta".to_string(), self.beta),
            ("theta".to_string(), self.theta),
            ("delta".to_string(), self.delta),
            ("gamma".to_string(), self.gamma),
            ("c".to_string(), self.c),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    BoundViolated,
    Inconclusive,
}

impl Verdict {
    /// Combine verdicts: any violation dominates, then any inconclusive.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (BoundViolated, _) | (_, BoundViolated) => BoundViolated,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Certified,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::BoundViolated => "bound-violated",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Sup,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = ">")]
    Above,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::AtLeast => ">=",
            Relation::Above => ">",
        })
    }
}

/// Required relation between the functional's extremum and a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub relation: Relation,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub z: Complex64,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Outcome of one criterion on one mapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub criterion: String,
    pub parameters: BTreeMap<String, f64>,
    /// Whether `sup_value` is a supremum or an infimum of the functional.
    pub kind: ExtremumKind,
    pub sup_value: f64,
    pub argmax: Complex64,
    pub bound: Bound,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub evaluated: usize,
    pub skipped: usize,
}

impl CheckReport {
    fn from_extremum(criterion: &str, kind: ExtremumKind, e: &Extremum, bound: Bound, verdict: Verdict) -> Self {
        let mut notes = Vec::new();
        if let Some(err) = &e.first_error {
            notes.push(format!("{} grid points skipped; first error: {err}", e.skipped));
        }
        if let Some(t) = e.boundary_trend {
            notes.push(format!("extremum on outermost ring; boundary trend {t:.6}"));
        }
        let witnesses = if verdict == Verdict::BoundViolated {
            vec![Witness { z: e.at, value: e.value, label: None }]
        } else {
            Vec::new()
        };
        CheckReport {
            criterion: criterion.to_string(),
            parameters: BTreeMap::new(),
            kind,
            sup_value: e.value,
            argmax: e.at,
            bound,
            verdict,
            witnesses,
            notes,
            evaluated: e.evaluated,
            skipped: e.skipped,
        }
    }

    pub fn with_parameters(mut self, p: BTreeMap<String, f64>) -> Self {
        self.parameters = p;
        self
    }
}

/// Verdict for `sup <= bound`.
pub fn upper_verdict(e: &Extremum, bound: f64, slack: f64) -> Verdict {
    if e.value > bound {
        Verdict::BoundViolated
    } else if e.value <= bound - slack && e.boundary_trend.is_none_or(|t| t <= bound - slack) {
        Verdict::Certified
    } else {
        Verdict::Inconclusive
    }
}

/// Verdict for `inf > bound` (strict) or `inf >= bound`.
pub fn lower_verdict(e: &Extremum, bound: f64, strict: bool) -> Verdict {
    let ok = if strict { e.value > bound } else { e.value >= bound };
    if ok {
        Verdict::Certified
    } else {
        Verdict::BoundViolated
    }
}

fn upper_check(criterion: &str, e: Extremum, bound: f64, slack: f64) -> CheckReport {
    let v = upper_verdict(&e, bound, slack);
    CheckReport::from_extremum(criterion, ExtremumKind::Sup, &e, Bound { relation: Relation::AtMost, value: bound }, v)
}

// ---------------------------------------------------------------- functionals

/// `h''/h'`.
pub fn pre_schwarzian_analytic<A: Analytic + ?Sized>(h: &A, z: Complex64) -> Result<Complex64, EvalError> {
    h.pre_schwarzian(z)
}

fn check_dilatation(z: Complex64, w: Complex64) -> Result<(), EvalError> {
    if w.norm() >= 1.0 {
        return Err(EvalError::NotSelfMap { at: z, value: w.norm(), what: "dilatation" });
    }
    Ok(())
}

/// `h''/h' - conj(ω) ω'/(1 - |ω|^2)` for `f = h + conj(g)` with dilatation `ω`.
pub fn pre_schwarzian_parts<H, W>(h: &H, omega: &W, z: Complex64) -> Result<Complex64, EvalError>
where
    H: Analytic + ?Sized,
    W: Analytic + ?Sized,
{
    let w = omega.value(z)?;
    check_dilatation(z, w)?;
    let p = h.pre_schwarzian(z)?;
    finite(z, p - w.conj() * omega.deriv(z)? / (1.0 - w.norm_sqr()))
}

pub fn pre_schwarzian_harmonic(s: &HarmonicShear, z: Complex64) -> Result<Complex64, EvalError> {
    pre_schwarzian_parts(&**s.h(), &**s.omega(), z)
}

/// `(1-|z|^2)|z P_f| + |z ω'| (1-|z|^2)/(1-|ω|^2)`.
pub fn becker_harmonic_parts<H, W>(h: &H, omega: &W, z: Complex64) -> Result<f64, EvalError>
where
    H: Analytic + ?Sized,
    W: Analytic + ?Sized,
{
    if z == Complex64::new(0.0, 0.0) {
        return Ok(0.0);
    }
    let w = omega.value(z)?;
    check_dilatation(z, w)?;
    let p = pre_schwarzian_parts(h, omega, z)?;
    let s = 1.0 - z.norm_sqr();
    Ok(s * (z * p).norm() + (z * omega.deriv(z)?).norm() * s / (1.0 - w.norm_sqr()))
}

pub fn becker_harmonic_functional(s: &HarmonicShear, z: Complex64) -> Result<f64, EvalError> {
    becker_harmonic_parts(&**s.h(), &**s.omega(), z)
}

/// `(1-|z|^2)|z h''/h'|`.
pub fn becker_analytic_functional<A: Analytic + ?Sized>(h: &A, z: Complex64) -> Result<f64, EvalError> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(0.0);
    }
    Ok((1.0 - z.norm_sqr()) * (z * h.pre_schwarzian(z)?).norm())
}

/// `(1-|z|^2)|h''/h'|`, at most 6 for univalent `h`.
pub fn univalence_necessity_functional<A: Analytic + ?Sized>(h: &A, z: Complex64) -> Result<f64, EvalError> {
    Ok((1.0 - z.norm_sqr()) * h.pre_schwarzian(z)?.norm())
}

/// `Re[1 + z h''/h']`.
pub fn convexity_functional<A: Analytic + ?Sized>(h: &A, z: Complex64) -> Result<f64, EvalError> {
    Ok((ONE + z * h.pre_schwarzian(z)?).re)
}

/// `(1-|z|^2)|z φ'/φ|`, at most `2γ` on a linear invariant family of order γ.
pub fn lif_functional<A: Analytic + ?Sized>(phi: &A, z: Complex64) -> Result<f64, EvalError> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(1.0);
    }
    let v = phi.value(z)?;
    if v == Complex64::new(0.0, 0.0) {
        return Err(EvalError::BranchTracking { at: z, reason: "phi vanishes away from the origin" });
    }
    Ok((1.0 - z.norm_sqr()) * (z * phi.deriv(z)? / v).norm())
}

/// `‖w‖ = sup |w|`.
pub fn norm_sup<A: Analytic + ?Sized + Sync>(w: &A, grid: &DiskGrid) -> Result<Extremum, EvalError> {
    let e = grid_max(grid, |z| Ok(w.value(z)?.norm()))?;
    match &e.first_error {
        Some(err) => Err(err.clone()),
        None => Ok(e),
    }
}

/// `‖w*‖ = sup |w'|(1-|z|^2)/(1-|w|^2)`.
pub fn norm_hyperbolic<A: Analytic + ?Sized + Sync>(w: &A, grid: &DiskGrid) -> Result<Extremum, EvalError> {
    let e = grid_max(grid, |z| {
        let v = w.value(z)?;
        if v.norm() >= 1.0 {
            return Err(EvalError::NotSelfMap { at: z, value: v.norm(), what: "w" });
        }
        Ok(w.deriv(z)?.norm() * (1.0 - z.norm_sqr()) / (1.0 - v.norm_sqr()))
    })?;
    match &e.first_error {
        Some(err) => Err(err.clone()),
        None => Ok(e),
    }
}

/// `Re{e^{iμ}(1 - 2z e^{-iμ} cos ν + z^2 e^{-2iμ}) φ'(z)}` given `φ'(z)`.
pub fn lemma_e_form_with(dphi: Complex64, mu: f64, nu: f64, z: Complex64) -> f64 {
    let e = Complex64::from_polar(1.0, -mu);
    (e.conj() * (ONE - 2.0 * z * e * nu.cos() + z * z * e * e) * dphi).re
}

pub fn lemma_e_form<A: Analytic + ?Sized>(phi: &A, mu: f64, nu: f64, z: Complex64) -> Result<f64, EvalError> {
    Ok(lemma_e_form_with(phi.deriv(z)?, mu, nu, z))
}

// ---------------------------------------------------------------- checks

pub fn becker_analytic_check(h: &AnalyticFn, grid: &DiskGrid, slack: f64) -> Result<CheckReport, EvalError> {
    let e = grid_max(grid, |z| becker_analytic_functional(&**h, z))?;
    Ok(upper_check("becker-analytic", e, 1.0, slack))
}

pub fn becker_harmonic_check(s: &HarmonicShear, grid: &DiskGrid, slack: f64) -> Result<CheckReport, EvalError> {
    let e = grid_max(grid, |z| becker_harmonic_functional(s, z))?;
    Ok(upper_check("becker-harmonic", e, 1.0, slack))
}

pub fn necessity_check(h: &AnalyticFn, grid: &DiskGrid) -> Result<CheckReport, EvalError> {
    let e = grid_max(grid, |z| univalence_necessity_functional(&**h, z))?;
    // the bound is sharp (Koebe), so a sup just under 6 is expected for univalent maps
    let v = if e.value > NECESSITY_BOUND + 1e-9 { Verdict::BoundViolated } else { Verdict::Certified };
    let mut r = CheckReport::from_extremum(
        "necessity",
        ExtremumKind::Sup,
        &e,
        Bound { relation: Relation::AtMost, value: NECESSITY_BOUND },
        v,
    );
    r.notes.push("necessary condition only: passing does not imply univalence".into());
    Ok(r)
}

/// `inf Re[1 + z h''/h'] > 0` (convexity of an analytic map).
pub fn convexity_check(h: &AnalyticFn, grid: &DiskGrid) -> Result<CheckReport, EvalError> {
    let e = grid_min(grid, |z| convexity_functional(&**h, z))?;
    let v = lower_verdict(&e, 0.0, true);
    Ok(CheckReport::from_extremum("convexity", ExtremumKind::Inf, &e, Bound { relation: Relation::Above, value: 0.0 }, v))
}

/// Close-to-convexity test: `Re[1 + zH''/H'] > c` and `|ω| < cos(π|c|)`.
pub fn lemma_b_check(s: &HarmonicShear, c: f64, grid: &DiskGrid) -> Result<CheckReport, EvalError> {
    if !(c > -0.5 && c <= 0.0) {
        return Err(EvalError::Domain(format!("lemma-b needs -1/2 < c <= 0, got {c}")));
    }
    let conv = grid_min(grid, |z| convexity_functional(&**s.h(), z))?;
    let omega = grid_max(grid, |z| Ok(s.omega().value(z)?.norm()))?;
    let cap = (PI * c.abs()).cos();
    let conv_ok = conv.value > c;
    let omega_ok = omega.value < cap;
    let verdict = if conv_ok && omega_ok { Verdict::Certified } else { Verdict::BoundViolated };
    let mut r = CheckReport::from_extremum(
        "lemma-b",
        ExtremumKind::Inf,
        &conv,
        Bound { relation: Relation::Above, value: c },
        verdict,
    );
    r.witnesses.clear();
    if !conv_ok {
        r.witnesses.push(Witness { z: conv.at, value: conv.value, label: Some("convexity".into()) });
    }
    if !omega_ok {
        r.witnesses.push(Witness { z: omega.at, value: omega.value, label: Some("dilatation".into()) });
    }
    r.notes.push(format!("sup |omega| = {:.9} against cos(pi|c|) = {cap:.9}", omega.value));
    r.parameters.insert("c".into(), c);
    r.parameters.insert("sup_omega".into(), omega.value);
    Ok(r)
}

/// One `(μ, ν)` entry of a CHD-form scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaEEntry {
    pub mu: f64,
    pub nu: f64,
    pub min: f64,
    pub argmin: Complex64,
}

/// CHD form at one `(μ, ν)`: CHD certified when the grid minimum is `>= 0`.
pub fn lemma_e_check(phi: &AnalyticFn, mu: f64, nu: f64, grid: &DiskGrid) -> Result<CheckReport, EvalError> {
    let e = grid_min(grid, |z| lemma_e_form(&**phi, mu, nu, z))?;
    let v = lower_verdict(&e, 0.0, false);
    let mut r = CheckReport::from_extremum("lemma-e-chd", ExtremumKind::Inf, &e, Bound { relation: Relation::AtLeast, value: 0.0 }, v);
    r.parameters.insert("mu".into(), mu);
    r.parameters.insert("nu".into(), nu);
    Ok(r)
}

/// Minimum of the CHD form over the grid (no refinement) for each
/// `μ = 2πi/n_mu`, `ν = πj/(n_nu - 1)`.
pub fn lemma_e_scan(phi: &AnalyticFn, grid: &DiskGrid, n_mu: usize, n_nu: usize) -> Result<Vec<LemmaEEntry>, EvalError> {
    let pts = grid.points();
    let derivs: Vec<Complex64> = pts
        .par_iter()
        .map(|&z| phi.deriv(z))
        .collect::<Result<_, _>>()?;
    let pairs: Vec<(f64, f64)> = (0..n_mu)
        .flat_map(|i| {
            (0..n_nu).map(move |j| {
                let nu = if n_nu > 1 { PI * j as f64 / (n_nu - 1) as f64 } else { 0.0 };
                (TAU * i as f64 / n_mu as f64, nu)
            })
        })
        .collect();
    Ok(pairs
        .par_iter()
        .map(|&(mu, nu)| {
            let mut min = f64::INFINITY;
            let mut argmin = Complex64::new(0.0, 0.0);
            for (&z, &d) in pts.iter().zip(&derivs) {
                let v = lemma_e_form_with(d, mu, nu, z);
                if v < min {
                    min = v;
                    argmin = z;
                }
            }
            LemmaEEntry { mu, nu, min, argmin }
        })
        .collect())
}

/// Summarize a scan: certified if some `(μ, ν)` has a non-negative minimum.
pub fn lemma_e_scan_report(entries: &[LemmaEEntry]) -> CheckReport {
    let best = entries
        .iter()
        .copied()
        .reduce(|a, b| if b.min > a.min { b } else { a })
        .expect("non-empty scan");
    let verdict = if best.min >= 0.0 { Verdict::Certified } else { Verdict::BoundViolated };
    let witnesses = if verdict == Verdict::BoundViolated {
        vec![Witness { z: best.argmin, value: best.min, label: Some(format!("mu={:.6}, nu={:.6}", best.mu, best.nu)) }]
    } else {
        Vec::new()
    };
    CheckReport {
        criterion: "lemma-e-chd".into(),
        parameters: BTreeMap::from([("mu".into(), best.mu), ("nu".into(), best.nu)]),
        kind: ExtremumKind::Inf,
        sup_value: best.min,
        argmax: best.argmin,
        bound: Bound { relation: Relation::AtLeast, value: 0.0 },
        verdict,
        witnesses,
        notes: vec![format!(
            "best of {} (mu, nu) pairs; {} pairs have a negative minimum",
            entries.len(),
            entries.iter().filter(|e| e.min < 0.0).count()
        )],
        evaluated: entries.len(),
        skipped: 0,
    }
}

/// `∫_{t1}^{t2} Re[1 + z h''/h'] dt` on `z = r e^{it}`.
pub fn ctc_arc_integral<A: Analytic + ?Sized>(h: &A, r: f64, t1: f64, t2: f64) -> Result<f64, EvalError> {
    if !(0.0 < r && r < 1.0) || !(t1 < t2 && t2 <= t1 + TAU + 1e-12) {
        return Err(EvalError::Domain(format!("bad arc r={r}, [{t1}, {t2}]")));
    }
    let opts = QuadOptions { tol: 1e-10, max_nodes: 20_000 };
    Ok(integrate_real(|t| convexity_functional(h, Complex64::from_polar(r, t)), t1, t2, opts)?.value)
}

/// Smallest arc integral over arcs with endpoints on `n` equally spaced angles.
pub fn ctc_min_arc<A: Analytic + ?Sized>(h: &A, r: f64, n: usize) -> Result<(f64, f64, f64), EvalError> {
    let step = TAU / n as f64;
    let mut cum = vec![0.0; 2 * n + 1];
    for k in 0..n {
        let piece = ctc_arc_integral(h, r, k as f64 * step, (k + 1) as f64 * step)?;
        cum[k + 1] = cum[k] + piece;
    }
    for k in n..2 * n {
        cum[k + 1] = cum[k] + (cum[k + 1 - n] - cum[k - n]);
    }
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..n {
        for len in 1..=n {
            let v = cum[i + len] - cum[i];
            if v < best.0 {
                best = (v, i as f64 * step, (i + len) as f64 * step);
            }
        }
    }
    Ok(best)
}

/// `λ_k = e^{2πik/n}`, starting at `λ = 1`.
pub fn lambdas(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect()
}

fn omega_vanishes(s: &HarmonicShear, grid: &DiskGrid) -> bool {
    let pts = grid.points();
    pts.iter().step_by(97).all(|&z| s.omega().value(z).is_ok_and(|w| w == Complex64::new(0.0, 0.0)))
}

/// Run `checker` on `H + λG` for `λ_count` points of the unit circle.
///
/// A failing `λ` is a genuine counterexample; passing finitely many `λ` is
/// heuristic evidence only.
pub fn stable_sweep<C>(s: &HarmonicShear, lambda_count: usize, grid: &DiskGrid, checker: C) -> Result<CheckReport, EvalError>
where
    C: Fn(&AnalyticFn) -> Result<CheckReport, EvalError>,
{
    let ls = if omega_vanishes(s, grid) { vec![ONE] } else { lambdas(lambda_count.max(1)) };
    let mut agg: Option<CheckReport> = None;
    let mut verdict = Verdict::Certified;
    for (k, &l) in ls.iter().enumerate() {
        let r = checker(&s.lambda_family(l))?;
        verdict = verdict.combine(r.verdict);
        let failing = r.verdict == Verdict::BoundViolated;
        let a = agg.get_or_insert_with(|| CheckReport { witnesses: Vec::new(), notes: Vec::new(), ..r.clone() });
        if failing && a.witnesses.is_empty() {
            a.witnesses = r
                .witnesses
                .iter()
                .map(|w| Witness { label: Some(format!("lambda #{k} = {l:.6}")), ..w.clone() })
                .collect();
            a.parameters.insert("lambda_re".into(), l.re);
            a.parameters.insert("lambda_im".into(), l.im);
        }
        let better = match a.kind {
            ExtremumKind::Sup => r.sup_value > a.sup_value,
            ExtremumKind::Inf => r.sup_value < a.sup_value,
        };
        if better {
            a.sup_value = r.sup_value;
            a.argmax = r.argmax;
        }
        if k > 0 {
            a.evaluated += r.evaluated;
            a.skipped += r.skipped;
        }
    }
    let mut a = agg.expect("at least one lambda");
    a.verdict = verdict;
    a.notes.push(format!("{} values of lambda", ls.len()));
    Ok(a)
}

/// Stable univalence sweep: any `λ` failing the necessity bound 6 violates;
/// all `λ` passing the analytic Becker bound 1 certifies.
pub fn shu_sweep(s: &HarmonicShear, lambda_count: usize, grid: &DiskGrid, slack: f64) -> Result<CheckReport, EvalError> {
    let necessity = stable_sweep(s, lambda_count, grid, |f| necessity_check(f, grid))?;
    let mut r = if necessity.verdict == Verdict::BoundViolated {
        necessity
    } else {
        let becker = stable_sweep(s, lambda_count, grid, |f| becker_analytic_check(f, grid, slack))?;
        let mut b = becker;
        if b.verdict == Verdict::BoundViolated {
            // Becker is only sufficient
            b.verdict = Verdict::Inconclusive;
            b.notes.push("Becker bound exceeded for some lambda; sufficient test only".into());
            b.witnesses.clear();
        }
        b.notes.push(format!("necessity sup over lambda = {:.6}", necessity.sup_value));
        b
    };
    r.criterion = "shu-sweep".into();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcore::BuiltinFamily;
    use crate::shear::{build_f, shear_solve};
    use crate::transforms::TransformSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small_grid() -> DiskGrid {
        DiskGrid::new(60, 128, 0.999)
    }

    #[test]
    fn pre_schwarzian_examples() {
        let id = AnalyticFn::builtin(BuiltinFamily::Identity);
        assert_eq!(pre_schwarzian_analytic(&*id, c(0.3, 0.1)).unwrap(), c(0.0, 0.0));
        let k = AnalyticFn::builtin(BuiltinFamily::Koebe);
        assert!((pre_schwarzian_analytic(&*k, c(0.0, 0.0)).unwrap() - 4.0).norm() < 1e-15);
        let cay = AnalyticFn::builtin(BuiltinFamily::Cayley);
        assert!((pre_schwarzian_analytic(&*cay, c(0.0, 0.0)).unwrap() - 2.0).norm() < 1e-15);
    }

    #[test]
    fn becker_examples() {
        let cay = AnalyticFn::builtin(BuiltinFamily::Cayley);
        // (1 - r^2) r |2/(1 - r)| at r = 1/2; without the factor z it is 3
        assert!((becker_analytic_functional(&*cay, c(0.5, 0.0)).unwrap() - 1.5).abs() < 1e-14);
        assert!((univalence_necessity_functional(&*cay, c(0.5, 0.0)).unwrap() - 3.0).abs() < 1e-14);
        let id = AnalyticFn::builtin(BuiltinFamily::Identity);
        assert_eq!(becker_analytic_functional(&*id, c(0.5, 0.5)).unwrap(), 0.0);
        let s = shear_solve(&id, &AnalyticFn::parse("0").unwrap());
        assert_eq!(becker_harmonic_functional(&s, c(0.2, 0.7)).unwrap(), 0.0);
    }

    #[test]
    fn example_three_six_value() {
        let s = build_f(
            &TransformSpec::real(AnalyticFn::builtin(BuiltinFamily::Koebe), 1.0, 1.0, 0.0),
            &AnalyticFn::parse("z/2").unwrap(),
        );
        let phi = s.lambda_family(ONE);
        let v = univalence_necessity_functional(&*phi, c(0.5, 0.0)).unwrap();
        assert!((v - 6.5).abs() < 1e-9, "{v}");
        let r = shu_sweep(&s, 8, &small_grid(), DEFAULT_SLACK).unwrap();
        assert_eq!(r.verdict, Verdict::BoundViolated);
        assert!(r.witnesses[0].label.as_deref().unwrap().starts_with("lambda #0"));
    }

    #[test]
    fn norms() {
        let g = small_grid();
        let w = AnalyticFn::parse("z/2").unwrap();
        assert!((norm_sup(&*w, &g).unwrap().value - 0.5).abs() < 1e-3);
        assert!((norm_hyperbolic(&*w, &g).unwrap().value - 0.5).abs() < 1e-6);
        let w = AnalyticFn::parse("0.3").unwrap();
        assert!((norm_sup(&*w, &g).unwrap().value - 0.3).abs() < 1e-15);
        assert_eq!(norm_hyperbolic(&*w, &g).unwrap().value, 0.0);
        let w = AnalyticFn::parse("z").unwrap();
        assert!((norm_hyperbolic(&*w, &g).unwrap().value - 1.0).abs() < 1e-12);
        assert!(norm_hyperbolic(&*AnalyticFn::parse("2*z").unwrap(), &g).is_err());
    }

    #[test]
    fn lemma_b_examples() {
        let g = small_grid();
        let cay = AnalyticFn::builtin(BuiltinFamily::Cayley);
        let s = shear_solve(&cay, &AnalyticFn::parse("0").unwrap());
        assert_eq!(lemma_b_check(&s, 0.0, &g).unwrap().verdict, Verdict::Certified);
        let cap = (PI * 0.2f64).cos();
        let s = shear_solve(&cay, &AnalyticFn::parse(&format!("{cap}")).unwrap());
        let r = lemma_b_check(&s, -0.2, &g).unwrap();
        assert_eq!(r.verdict, Verdict::BoundViolated);
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn lemma_e_periodic_and_identity() {
        let id = AnalyticFn::builtin(BuiltinFamily::Identity);
        for x in [-0.9, 0.0, 0.5] {
            assert!(lemma_e_form(&*id, 0.0, PI / 2.0, c(x, 0.0)).unwrap() > 0.0);
        }
        let t = AnalyticFn::builtin(BuiltinFamily::Twostrip);
        let z = c(0.3, -0.4);
        let a = lemma_e_form(&*t, 0.7, 1.1, z).unwrap();
        let b = lemma_e_form(&*t, 0.7 + TAU, 1.1, z).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn arc_integrals() {
        let id = AnalyticFn::builtin(BuiltinFamily::Identity);
        assert!((ctc_arc_integral(&*id, 0.5, 0.3, 1.3).unwrap() - 1.0).abs() < 1e-12);
        let cay = AnalyticFn::builtin(BuiltinFamily::Cayley);
        let (m, _, _) = ctc_min_arc(&*cay, 0.9, 64).unwrap();
        assert!(m > 0.0);
    }

    #[test]
    fn verdict_rules() {
        let e = |value: f64, trend: Option<f64>| Extremum {
            value,
            at: c(0.0, 0.0),
            evaluated: 1,
            skipped: 0,
            first_error: None,
            boundary_trend: trend,
        };
        assert_eq!(upper_verdict(&e(0.5, None), 1.0, 1e-3), Verdict::Certified);
        assert_eq!(upper_verdict(&e(0.9995, None), 1.0, 1e-3), Verdict::Inconclusive);
        assert_eq!(upper_verdict(&e(0.99, Some(1.0)), 1.0, 1e-3), Verdict::Inconclusive);
        assert_eq!(upper_verdict(&e(1.01, None), 1.0, 1e-3), Verdict::BoundViolated);
        assert_eq!(lower_verdict(&e(0.0, None), 0.0, true), Verdict::BoundViolated);
        assert_eq!(lower_verdict(&e(0.0, None), 0.0, false), Verdict::Certified);
    }
}
