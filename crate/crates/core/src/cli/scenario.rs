//! Scenario files and the flag set they mirror.

use std::path::{Path, PathBuf};

use clap::Args;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::criteria::{DiskGrid, Params};
use crate::funcore::{AnalyticFn, BuiltinFamily};
use crate::shear::{build_f_with, HarmonicShear};
use crate::transforms::{cesaro_transform_with, QuadOptions, TransformSpec};
use crate::verify::{Mapping, PointMap};

/// Command-line flags. Every flag has a scenario-file field of the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Builtin φ: identity | cayley | koebe | twostrip | logmap
    #[arg(long)]
    pub phi: Option<String>,
    /// φ as an expression in z
    #[arg(long, allow_hyphen_values = true)]
    pub phi_expr: Option<String>,
    /// Dilatation generator w(z); the shear uses ω = α(1+β)w
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Starlike order of φ (defaults for builtins)
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub lambda_count: Option<usize>,
    /// Analytic checks act on H + e^{it}G instead of the transform
    #[arg(long)]
    pub lambda_arg: Option<f64>,
    #[arg(long)]
    pub grid_radii: Option<usize>,
    #[arg(long)]
    pub grid_angles: Option<usize>,
    #[arg(long)]
    pub grid_r_max: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Quadrature tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Evaluation / probe points (complex literals)
    #[arg(long, allow_hyphen_values = true)]
    pub z: Vec<String>,
    /// Checks to run (repeatable or comma separated; `all` for every check)
    #[arg(long, value_delimiter = ',')]
    pub check: Vec<String>,
    #[arg(long)]
    pub theorem: Option<String>,
    #[arg(long)]
    pub norm_w: Option<f64>,
    #[arg(long)]
    pub norm_w_star: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Direction for convex-dir, in radians
    #[arg(long)]
    pub direction: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    /// Closed form of the transform for the closed-form check
    #[arg(long, allow_hyphen_values = true)]
    pub closed_form: Option<String>,
    #[arg(long)]
    pub compare_tol: Option<f64>,
    #[arg(long)]
    pub r_test: Option<f64>,
    #[arg(long)]
    pub n_boundary: Option<usize>,
    #[arg(long)]
    pub n_interior: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print JSON to stdout
    #[arg(long)]
    pub json: bool,
    /// Scenario file; its fields override flags
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlotOptions {
    pub circles: usize,
    pub rays: usize,
    pub samples: usize,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { circles: 11, rays: 24, samples: 720 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub phi: Option<String>,
    #[serde(alias = "phi-expr")]
    pub phi_expr: Option<String>,
    pub w: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub theta: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub c: Option<f64>,
    #[serde(alias = "lambda-count")]
    pub lambda_count: Option<usize>,
    #[serde(alias = "lambda-arg")]
    pub lambda_arg: Option<f64>,
    #[serde(alias = "grid-radii")]
    pub grid_radii: Option<usize>,
    #[serde(alias = "grid-angles")]
    pub grid_angles: Option<usize>,
    #[serde(alias = "grid-r-max")]
    pub grid_r_max: Option<f64>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub z: Vec<String>,
    #[serde(alias = "check")]
    pub checks: Vec<String>,
    pub theorem: Option<String>,
    #[serde(alias = "norm-w")]
    pub norm_w: Option<f64>,
    #[serde(alias = "norm-w-star")]
    pub norm_w_star: Option<f64>,
    pub r: Option<f64>,
    pub direction: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    #[serde(alias = "closed-form")]
    pub closed_form: Option<String>,
    #[serde(alias = "compare-tol")]
    pub compare_tol: Option<f64>,
    #[serde(alias = "r-test")]
    pub r_test: Option<f64>,
    #[serde(alias = "n-boundary")]
    pub n_boundary: Option<usize>,
    #[serde(alias = "n-interior")]
    pub n_interior: Option<usize>,
    pub plot: Option<PlotOptions>,
}

impl Scenario {
    pub fn from_flags(f: &Flags) -> Self {
        Scenario {
            name: None,
            description: None,
            phi: f.phi.clone(),
            phi_expr: f.phi_expr.clone(),
            w: f.w.clone(),
            alpha: f.alpha,
            beta: f.beta,
            theta: f.theta,
            delta: f.delta,
            gamma: f.gamma,
            c: f.c,
            lambda_count: f.lambda_count,
            lambda_arg: f.lambda_arg,
            grid_radii: f.grid_radii,
            grid_angles: f.grid_angles,
            grid_r_max: f.grid_r_max,
            seed: f.seed,
            tol: f.tol,
            z: f.z.clone(),
            checks: f.check.clone(),
            theorem: f.theorem.clone(),
            norm_w: f.norm_w,
            norm_w_star: f.norm_w_star,
            r: f.r,
            direction: f.direction,
            mu: f.mu,
            nu: f.nu,
            closed_form: f.closed_form.clone(),
            compare_tol: f.compare_tol,
            r_test: f.r_test,
            n_boundary: f.n_boundary,
            n_interior: f.n_interior,
            plot: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` win; the rest come from `base`.
    pub fn over(self, base: Scenario) -> Scenario {
        macro_rules! pick {
            ($($f:ident),*) => { Scenario { $($f: self.$f.or(base.$f),)* z: if self.z.is_empty() { base.z } else { self.z }, checks: if self.checks.is_empty() { base.checks } else { self.checks } } };
        }
        pick!(
            name, description, phi, phi_expr, w, alpha, beta, theta, delta, gamma, c, lambda_count, lambda_arg,
            grid_radii, grid_angles, grid_r_max, seed, tol, theorem, norm_w, norm_w_star, r, direction, mu, nu,
            closed_form, compare_tol, r_test, n_boundary, n_interior, plot
        )
    }

    /// Flags, overridden by the scenario file if one is given.
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let from_flags = Scenario::from_flags(flags);
        match &flags.scenario {
            Some(path) => Ok(Scenario::load(path)?.over(from_flags)),
            None => Ok(from_flags),
        }
    }
}

/// Parse a complex literal such as `0.5`, `-0.3+0.2i` or `pi/4*i`.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let f = AnalyticFn::parse(s).map_err(|e| CliError::Usage(format!("bad complex number `{s}`: {e}")))?;
    let v = f
        .value(Complex64::new(0.0, 0.0))
        .map_err(|e| CliError::Usage(format!("bad complex number `{s}`: {e}")))?;
    // drop signed zeros
    Ok(Complex64::new(v.re + 0.0, v.im + 0.0))
}

fn parse_fn(what: &str, src: &str) -> Result<AnalyticFn, CliError> {
    AnalyticFn::parse(src).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

/// A validated scenario with its functions built.
#[derive(Debug, Clone)]
pub struct Setup {
    pub scenario: Scenario,
    pub phi: AnalyticFn,
    pub builtin: Option<BuiltinFamily>,
    pub w: Option<AnalyticFn>,
    pub params: Params,
    pub grid: DiskGrid,
    pub opts: QuadOptions,
    pub seed: u64,
    pub points: Vec<Complex64>,
    pub warnings: Vec<String>,
}

impl Setup {
    pub fn new(sc: Scenario) -> Result<Self, CliError> {
        let (phi, builtin) = match (&sc.phi, &sc.phi_expr) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --phi or --phi-expr, not both".into())),
            (Some(tag), None) => {
                let fam: BuiltinFamily = tag.parse().map_err(CliError::Usage)?;
                (AnalyticFn::builtin(fam), Some(fam))
            }
            (None, Some(src)) => (parse_fn("phi-expr", src)?, None),
            (None, None) => (AnalyticFn::builtin(BuiltinFamily::Identity), Some(BuiltinFamily::Identity)),
        };
        let w = sc.w.as_deref().map(|s| parse_fn("w", s)).transpose()?;
        let params = Params {
            alpha: sc.alpha.unwrap_or(0.0),
            beta: sc.beta.unwrap_or(0.0),
            theta: sc.theta.unwrap_or(0.0),
            delta: sc.delta.unwrap_or(0.0),
            gamma: sc.gamma.unwrap_or(2.0),
            c: sc.c.unwrap_or(0.0),
            lambda_count: sc.lambda_count.unwrap_or(64),
        };
        params.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let warnings = params
            .theorem_range_violations()
            .into_iter()
            .map(|e| format!("outside the theorems' stated range: {e}"))
            .collect();
        let grid = DiskGrid::new(
            sc.grid_radii.unwrap_or(200),
            sc.grid_angles.unwrap_or(512),
            sc.grid_r_max.unwrap_or(0.999),
        );
        if grid.radii.is_empty() || grid.angles == 0 || !(grid.r_max() > 0.0 && grid.r_max() < 1.0) {
            return Err(CliError::Usage("grid needs radii >= 1, angles >= 1 and 0 < r_max < 1".into()));
        }
        let tol = sc.tol.unwrap_or(QuadOptions::default().tol);
        if tol.is_nan() || tol <= 0.0 {
            return Err(CliError::Usage(format!("tol must be positive, got {tol}")));
        }
        if let Some(r) = sc.r_test {
            if !(r > 0.0 && r < 1.0) {
                return Err(CliError::Usage(format!("r_test must lie in (0, 1), got {r}")));
            }
        }
        let points = sc.z.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>, _>>()?;
        if let Some(z) = points.iter().find(|z| z.norm() >= 1.0) {
            return Err(CliError::Usage(format!("evaluation point {z} is outside the unit disk")));
        }
        Ok(Setup {
            seed: sc.seed.unwrap_or(0),
            opts: QuadOptions { tol, ..QuadOptions::default() },
            scenario: sc,
            phi,
            builtin,
            w,
            params,
            grid,
            points,
            warnings,
        })
    }

    /// δ for the starlike-order theorems: explicit, or the builtin's known order.
    pub fn delta(&self) -> Result<f64, CliError> {
        if let Some(d) = self.scenario.delta {
            return Ok(d);
        }
        match self.builtin.and_then(|b| b.starlike_order()) {
            Some(d) => Ok(d),
            None => Err(CliError::Usage("this phi has no default starlike order; pass --delta".into())),
        }
    }

    pub fn spec(&self) -> TransformSpec {
        TransformSpec::real(self.phi.clone(), self.params.alpha, self.params.beta, self.params.theta)
    }

    /// `rotate(C_{αβ}[φ], θ)`.
    pub fn transform(&self) -> AnalyticFn {
        cesaro_transform_with(&self.spec(), self.opts)
    }

    /// The shear of the transform; `w = 0` when no `w` is given.
    pub fn shear(&self) -> HarmonicShear {
        let zero = AnalyticFn::parse("0").expect("constant parses");
        build_f_with(&self.spec(), self.w.as_ref().unwrap_or(&zero), self.opts)
    }

    /// Target of the analytic checks: `H + e^{it}G` if `lambda_arg` is set, else the transform.
    pub fn analytic_target(&self) -> AnalyticFn {
        match (self.scenario.lambda_arg, &self.w) {
            (Some(t), Some(_)) => self.shear().lambda_family(Complex64::from_polar(1.0, t)),
            _ => self.transform(),
        }
    }

    /// Target of the geometric checks: the harmonic shear when `w` is given.
    pub fn mapping(&self) -> Mapping {
        if self.w.is_some() && self.scenario.lambda_arg.is_none() {
            Mapping::Harmonic(self.shear())
        } else {
            Mapping::Analytic(self.analytic_target())
        }
    }

    pub fn point_map(&self) -> PointMap {
        let mut pm = PointMap::new(self.mapping());
        pm.seed = self.seed;
        if let Some(r) = self.scenario.r_test {
            pm.r_test = r;
        }
        if let Some(n) = self.scenario.n_boundary {
            pm.n_boundary = n;
        }
        if let Some(n) = self.scenario.n_interior {
            pm.n_interior = n;
        }
        pm
    }
}
