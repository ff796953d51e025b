use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;

use super::report::{CheckEntry, Probe, Report, SCHEMA_VERSION};
use super::scenario::{Flags, Scenario, Setup};
use super::{svg, CliError};
use crate::criteria::bounds::{self, BoundInputs, BoundResult, Theorem};
use crate::criteria::{self as cr, Verdict, DEFAULT_SLACK};
use crate::error::EvalError;
use crate::funcore::AnalyticFn;
use crate::transforms::CesaroFn;
use crate::verify::{self, Mapping};

/// Every check name, in the order `all` runs them.
pub const CHECKS: [&str; 13] = [
    "becker-analytic",
    "necessity",
    "convexity",
    "becker-harmonic",
    "shu-sweep",
    "lemma-b",
    "lemma-e-chd",
    "sense",
    "inject",
    "boundary",
    "convex-dir",
    "closed-form",
    "bounds",
];

const LEMMA_E_SCAN: (usize, usize) = (64, 33);

fn numeric(e: EvalError) -> CliError {
    CliError::Numeric(e.to_string())
}

fn emit(flags: &Flags, text: &str) -> Result<(), CliError> {
    match &flags.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

fn points(setup: &Setup) -> Result<&[Complex64], CliError> {
    if setup.points.is_empty() {
        return Err(CliError::Usage("no evaluation points; pass --z".into()));
    }
    Ok(&setup.points)
}

pub fn transform(flags: &Flags) -> Result<i32, CliError> {
    let setup = Setup::new(Scenario::resolve(flags)?)?;
    let f = setup.transform();
    let spec = setup.spec();
    let raw = CesaroFn::new(spec.phi.clone(), spec.alpha, spec.beta).with_options(setup.opts);
    let rot = Complex64::from_polar(1.0, setup.params.theta);
    let mut rows = Vec::new();
    for &z in points(&setup)? {
        let value = f.value(z).map_err(numeric)?;
        let error = if setup.params.alpha == 0.0 {
            0.0
        } else {
            raw.quadrature(rot * z).map_err(numeric)?.error_estimate
        };
        rows.push((z, value, error));
    }
    let text = if flags.json {
        let v: Vec<_> = rows
            .iter()
            .map(|(z, v, e)| serde_json::json!({ "z": z, "value": v, "error_estimate": e }))
            .collect();
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    } else {
        rows.iter()
            .map(|(z, v, e)| format!("{}\t{}\t{e:.2e}\n", fmt_c(*z), fmt_c(*v)))
            .collect()
    };
    emit(flags, &text)?;
    Ok(0)
}

pub fn shear(flags: &Flags) -> Result<i32, CliError> {
    let setup = Setup::new(Scenario::resolve(flags)?)?;
    let s = setup.shear();
    let mut rows = Vec::new();
    for &z in points(&setup)? {
        let (h, g) = s.parts(z).map_err(numeric)?;
        let omega = s.omega().value(z).map_err(numeric)?;
        let jac = s.jacobian(z).map_err(numeric)?;
        rows.push((z, h, g, h + g.conj(), omega, jac));
    }
    let text = if flags.json {
        let v: Vec<_> = rows
            .iter()
            .map(|(z, h, g, f, w, j)| serde_json::json!({ "z": z, "h": h, "g": g, "f": f, "omega": w, "jacobian": j }))
            .collect();
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    } else {
        let mut t = String::from("z\tH\tG\tF\tomega\tjacobian\n");
        for (z, h, g, f, w, j) in &rows {
            t += &format!("{}\t{}\t{}\t{}\t{}\t{j:.6e}\n", fmt_c(*z), fmt_c(*h), fmt_c(*g), fmt_c(*f), fmt_c(*w));
        }
        t
    };
    emit(flags, &text)?;
    Ok(0)
}

fn bound_inputs(sc: &Scenario, delta: f64) -> BoundInputs {
    let d = BoundInputs::default();
    BoundInputs {
        alpha: sc.alpha.unwrap_or(d.alpha),
        beta: sc.beta.unwrap_or(d.beta),
        delta,
        gamma: sc.gamma.unwrap_or(d.gamma),
        c: sc.c.unwrap_or(d.c),
        r: sc.r.unwrap_or(d.r),
        norm_w: sc.norm_w.unwrap_or(d.norm_w),
        norm_w_star: sc.norm_w_star.unwrap_or(d.norm_w_star),
    }
}

pub fn bounds(flags: &Flags) -> Result<i32, CliError> {
    let sc = Scenario::resolve(flags)?;
    let name = sc.theorem.as_deref().ok_or_else(|| CliError::Usage("bounds needs --theorem".into()))?;
    let t: Theorem = name.parse().map_err(CliError::Usage)?;
    let inputs = bound_inputs(&sc, sc.delta.unwrap_or(0.0));
    let r = bounds::evaluate(t, &inputs).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = if flags.json {
        serde_json::to_string_pretty(&r).expect("serializable") + "\n"
    } else {
        let mut t = format!("{:.12}\n", r.headline());
        t += &format!("# {}: {}", r.theorem, r.formula);
        if let Some(h) = r.holds {
            t += &format!("; holds for alpha = {}: {h}", inputs.alpha);
        }
        if let Some(c) = r.case {
            t += &format!("; case {c:?}");
        }
        t + "\n"
    };
    emit(flags, &text)?;
    Ok(if r.holds == Some(false) { 1 } else { 0 })
}

pub fn plot(flags: &Flags) -> Result<i32, CliError> {
    let setup = Setup::new(Scenario::resolve(flags)?)?;
    let pm = setup.point_map();
    let opts = setup.scenario.plot.unwrap_or_default();
    let curves = svg::image_curves(&pm.mapping, pm.r_test, &opts).map_err(numeric)?;
    let title = match &pm.mapping {
        Mapping::Analytic(f) => f.describe(),
        Mapping::Harmonic(s) => format!("H + conj(G), H - G = {}, omega = {}", s.phi().describe(), s.omega().describe()),
    };
    emit(flags, &svg::render(&curves, &title))?;
    Ok(0)
}

fn probes(setup: &Setup, f: impl Fn(Complex64) -> Result<f64, EvalError>) -> Result<Vec<Probe>, EvalError> {
    setup.points.iter().map(|&z| Ok(Probe { z, value: f(z)? })).collect()
}

type Functional = fn(&AnalyticFn, Complex64) -> Result<f64, EvalError>;

fn run_check(name: &str, setup: &Setup, entry: &mut CheckEntry) -> Result<Verdict, EvalError> {
    let grid = &setup.grid;
    let params = setup.params.to_map();
    let put = |entry: &mut CheckEntry, r: cr::CheckReport| {
        let v = r.verdict;
        entry.report = Some(r.with_parameters(params.clone()));
        v
    };
    match name {
        "becker-analytic" | "necessity" | "convexity" => {
            let h = setup.analytic_target();
            let (r, functional): (_, Functional) = match name {
                "becker-analytic" => (
                    cr::becker_analytic_check(&h, grid, DEFAULT_SLACK)?,
                    |h, z| cr::becker_analytic_functional(&**h, z),
                ),
                "necessity" => (cr::necessity_check(&h, grid)?, |h, z| cr::univalence_necessity_functional(&**h, z)),
                _ => (cr::convexity_check(&h, grid)?, |h, z| cr::convexity_functional(&**h, z)),
            };
            entry.probes = probes(setup, |z| functional(&h, z))?;
            Ok(put(entry, r))
        }
        "becker-harmonic" => {
            let s = setup.shear();
            entry.probes = probes(setup, |z| cr::becker_harmonic_functional(&s, z))?;
            Ok(put(entry, cr::becker_harmonic_check(&s, grid, DEFAULT_SLACK)?))
        }
        "shu-sweep" => {
            let s = setup.shear();
            Ok(put(entry, cr::shu_sweep(&s, setup.params.lambda_count, grid, DEFAULT_SLACK)?))
        }
        "lemma-b" => Ok(put(entry, cr::lemma_b_check(&setup.shear(), setup.params.c, grid)?)),
        "lemma-e-chd" => {
            let h = setup.analytic_target();
            let r = match (setup.scenario.mu, setup.scenario.nu) {
                (Some(mu), Some(nu)) => {
                    entry.probes = probes(setup, |z| cr::lemma_e_form(&*h, mu, nu, z))?;
                    cr::lemma_e_check(&h, mu, nu, grid)?
                }
                _ => cr::lemma_e_scan_report(&cr::lemma_e_scan(&h, grid, LEMMA_E_SCAN.0, LEMMA_E_SCAN.1)?),
            };
            Ok(put(entry, r))
        }
        "sense" => Ok(put(entry, verify::sense_preserving_scan(&setup.shear(), grid)?)),
        "inject" => {
            let r = verify::injectivity_test(&setup.point_map())?;
            let v = r.verdict();
            if r.collision.is_none() {
                entry.notes.push("no collision found (not a proof of univalence)".into());
            }
            entry.injectivity = Some(r);
            Ok(v)
        }
        "boundary" => {
            let r = verify::boundary_simplicity(&setup.point_map())?;
            let v = if r.simple { Verdict::Certified } else { Verdict::BoundViolated };
            entry.boundary = Some(r);
            Ok(v)
        }
        "convex-dir" => {
            let r = verify::convex_in_direction_test(&setup.point_map(), setup.scenario.direction.unwrap_or(0.0))?;
            let v = if r.convex { Verdict::Certified } else { Verdict::BoundViolated };
            entry.direction = Some(r);
            Ok(v)
        }
        "closed-form" => {
            let src = setup
                .scenario
                .closed_form
                .as_deref()
                .ok_or_else(|| EvalError::Domain("closed-form check needs closed_form".into()))?;
            let closed = AnalyticFn::parse(src).map_err(|e| EvalError::Domain(format!("closed_form: {e}")))?;
            let r = verify::closed_form_compare(&setup.transform(), &closed, 100, setup.seed)?;
            let tol = setup.scenario.compare_tol.unwrap_or(1e-9);
            entry.notes.push(format!("tolerance {tol:e}"));
            let v = if r.max_error <= tol { Verdict::Certified } else { Verdict::BoundViolated };
            entry.compare = Some(r);
            Ok(v)
        }
        "bounds" => bounds_check(setup, entry),
        other => Err(EvalError::Domain(format!("unknown check `{other}`"))),
    }
}

/// Evaluate every calculator at the scenario's parameters; certified when
/// some theorem's condition on α holds.
fn bounds_check(setup: &Setup, entry: &mut CheckEntry) -> Result<Verdict, EvalError> {
    let delta = setup.delta().map_err(|e| EvalError::Domain(e.to_string()))?;
    let mut inputs = bound_inputs(&setup.scenario, delta);
    if let Some(w) = &setup.w {
        if setup.scenario.norm_w.is_none() {
            inputs.norm_w = cr::norm_sup(&**w, &setup.grid)?.value.min(1.0);
        }
        if setup.scenario.norm_w_star.is_none() {
            inputs.norm_w_star = cr::norm_hyperbolic(&**w, &setup.grid)?.value.min(1.0);
        }
        entry.notes.push(format!("grid norms: ||w|| = {:.9}, ||w*|| = {:.9}", inputs.norm_w, inputs.norm_w_star));
    } else {
        inputs.norm_w = setup.scenario.norm_w.unwrap_or(0.0);
        inputs.norm_w_star = setup.scenario.norm_w_star.unwrap_or(0.0);
    }
    entry.notes.push("hypotheses on phi and w are not checked here".into());
    let mut results: Vec<BoundResult> = Vec::new();
    for t in Theorem::ALL {
        match bounds::evaluate(t, &inputs) {
            Ok(r) => results.push(r),
            Err(e) => entry.notes.push(format!("{t}: {e}")),
        }
    }
    let covered = results.iter().any(|r| {
        r.theorem != Theorem::Arcsin && (r.holds == Some(true) || (r.holds.is_none() && r.alpha_max.is_some_and(|m| inputs.alpha <= m)))
    });
    entry.bounds = Some(results);
    Ok(if covered { Verdict::Certified } else { Verdict::Inconclusive })
}

fn exit_code(entries: &[CheckEntry]) -> i32 {
    let has = |v| entries.iter().any(|e| e.verdict == Some(v));
    if has(Verdict::BoundViolated) {
        1
    } else if entries.iter().any(|e| e.error.is_some()) {
        3
    } else if has(Verdict::Inconclusive) {
        4
    } else {
        0
    }
}

fn check_names(setup: &Setup) -> Result<Vec<String>, CliError> {
    let mut names = Vec::new();
    for n in &setup.scenario.checks {
        if n == "all" {
            names.extend(
                CHECKS
                    .iter()
                    .filter(|&&c| c != "closed-form" || setup.scenario.closed_form.is_some())
                    .map(|c| c.to_string()),
            );
        } else if CHECKS.contains(&n.as_str()) {
            names.push(n.clone());
        } else {
            return Err(CliError::Usage(format!("unknown check `{n}` (expected one of {}, all)", CHECKS.join(", "))));
        }
    }
    if names.is_empty() {
        return Err(CliError::Usage("no checks requested; pass --check".into()));
    }
    if names.iter().any(|n| n == "bounds") {
        setup.delta()?;
    }
    if names.iter().any(|n| n == "closed-form") && setup.scenario.closed_form.is_none() {
        return Err(CliError::Usage("closed-form check needs --closed-form".into()));
    }
    names.dedup();
    Ok(names)
}

/// Run the requested checks and build the report.
pub fn run_report(sc: Scenario) -> Result<Report, CliError> {
    let start = Instant::now();
    let setup = Setup::new(sc)?;
    let names = check_names(&setup)?;
    let mut entries = Vec::new();
    for name in &names {
        let t = Instant::now();
        let mut entry = CheckEntry::new(name);
        match run_check(name, &setup, &mut entry) {
            Ok(v) => entry.verdict = Some(v),
            Err(e) => entry.error = Some(e.to_string()),
        }
        entry.seconds = t.elapsed().as_secs_f64();
        entries.push(entry);
    }
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: "geoshear".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        scenario: setup.scenario.clone(),
        exit_code: exit_code(&entries),
        checks: entries,
        warnings: setup.warnings.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

pub fn check(flags: &Flags) -> Result<i32, CliError> {
    let report = run_report(Scenario::resolve(flags)?)?;
    let json = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    if let Some(path) = &flags.out {
        std::fs::write(path, &json).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let mut out = std::io::stdout().lock();
    let text = if flags.json {
        json
    } else {
        let mut t = String::new();
        for w in &report.warnings {
            t += &format!("warning: {w}\n");
        }
        for e in &report.checks {
            t += &e.summary();
            t.push('\n');
        }
        t + &format!("exit {} ({:.2} s)\n", report.exit_code, report.wall_time_s)
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(report.exit_code)
}
