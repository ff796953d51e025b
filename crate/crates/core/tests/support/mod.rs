//! Checks shared by the property suites and the acceptance run.
#![allow(dead_code)]

use geoshear::criteria::{norm_hyperbolic, pre_schwarzian_harmonic, pre_schwarzian_parts, DiskGrid};
use geoshear::error::EvalError;
use geoshear::exprlang::{differentiate, Expr};
use geoshear::funcore::{Analytic, AnalyticFn, BuiltinFamily};
use geoshear::transforms::{c_beta, cesaro_transform, hornich_add, i_alpha, integrate_path, integrate_segment, j_alpha, QuadOptions, TransformSpec};
use geoshear::verify::{halton_disk, presets::Preset};
use num_complex::Complex64;

pub type C = Complex64;

pub fn cx(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Parameter sets of the preset shears (left and right panels).
pub const PRESET_PARAMS: [(Preset, f64, f64); 8] = [
    (Preset::CayleyNegZ, 0.2, 0.5),
    (Preset::CayleyNegZ, 0.5, 1.0),
    (Preset::IdentityMobius, 1.0 / 14.0, 1.0),
    (Preset::IdentityMobius, 0.5, 1.0),
    (Preset::KoebeCosine, 4.0 / 15.0, 1.0),
    (Preset::KoebeCosine, -1.0, 1.0),
    (Preset::CayleyHalf, 0.7, 0.01),
    (Preset::CayleyHalf, 2.0, -0.5),
];

fn lit(z: C) -> String {
    format!("({}{:+}i)", z.re, z.im)
}

// ------------------------------------------------------------ Schwarz–Pick

/// `e^{it} z^k (z-a)/(1-conj(a) z) [(z-b)/(1-conj(b) z)]`, a self-map of the disk.
pub fn blaschke(t: f64, k: u32, a: C, b: Option<C>) -> String {
    let mut src = format!("{}*z^{k}*(z - {})/(1 - {}*z)", lit(C::from_polar(1.0, t)), lit(a), lit(a.conj()));
    if let Some(b) = b {
        src += &format!("*(z - {})/(1 - {}*z)", lit(b), lit(b.conj()));
    }
    src
}

/// Grid estimate of `‖w*‖` for the expression `src`.
pub fn hyperbolic_norm(src: &str) -> f64 {
    let w = AnalyticFn::parse(src).unwrap();
    norm_hyperbolic(&*w, &DiskGrid::new(40, 96, 0.99)).unwrap().value
}

// ------------------------------------------------------------ shear identities

/// `(|G' - ωH'| / max(|H'|, 1), |H - G - φ|)` for preset `idx` at `z`.
pub fn shear_identity_errors(idx: usize, theta: f64, z: C) -> (f64, f64) {
    let (p, alpha, beta) = PRESET_PARAMS[idx];
    let s = p.shear(alpha, beta, theta, -0.4);
    let (hp, gp) = s.derivs(z).unwrap();
    let omega = s.omega().value(z).unwrap();
    let (h, g) = s.parts(z).unwrap();
    let phi = s.phi().value(z).unwrap();
    ((gp - omega * hp).norm() / hp.norm().max(1.0), (h - g - phi).norm())
}

// ------------------------------------------------------------ Hornich decompositions

pub const HORNICH_CASES: [(BuiltinFamily, f64, f64); 4] = [
    (BuiltinFamily::Cayley, 0.2, 0.5),
    (BuiltinFamily::Koebe, 0.3, 1.0),
    (BuiltinFamily::Twostrip, 1.5, 0.25),
    (BuiltinFamily::Identity, 0.6, 2.0),
];

/// Largest deviation of `J_α ⊕ I_{αβ}[logmap]` and of `I_α ∘ C_β` from `C_{αβ}` at `n` points.
pub fn hornich_error(fam: BuiltinFamily, alpha: f64, beta: f64, n: usize) -> f64 {
    let logmap = AnalyticFn::builtin(BuiltinFamily::Logmap);
    let phi = AnalyticFn::builtin(fam);
    let c = cesaro_transform(&TransformSpec::real(phi.clone(), alpha, beta, 0.0));
    let sum = hornich_add(&j_alpha(&phi, cx(alpha, 0.0)), &i_alpha(&logmap, cx(alpha * beta, 0.0)));
    let comp = i_alpha(&c_beta(&phi, cx(beta, 0.0)), cx(alpha, 0.0));
    halton_disk(n, 0.9, 3)
        .into_iter()
        .map(|z| {
            let v = c.value(z).unwrap();
            (sum.value(z).unwrap() - v).norm().max((comp.value(z).unwrap() - v).norm())
        })
        .fold(0.0, f64::max)
}

// ------------------------------------------------------------ affine invariance

/// `h + a g` for analytic `h`, `g`.
#[derive(Debug)]
struct Combo {
    h: AnalyticFn,
    g: AnalyticFn,
    a: C,
}

impl Analytic for Combo {
    fn value(&self, z: C) -> Result<C, EvalError> {
        Ok(self.h.value(z)? + self.a * self.g.value(z)?)
    }
    fn deriv(&self, z: C) -> Result<C, EvalError> {
        Ok(self.h.deriv(z)? + self.a * self.g.deriv(z)?)
    }
    fn pre_schwarzian(&self, z: C) -> Result<C, EvalError> {
        Ok((self.h.second_deriv(z)? + self.a * self.g.second_deriv(z)?) / self.deriv(z)?)
    }
    fn describe(&self) -> String {
        "h + a g".into()
    }
}

/// `(ω + conj(a)) / (1 + a ω)`: dilatation of `F + a conj(F)`.
#[derive(Debug)]
struct MobiusOmega {
    omega: AnalyticFn,
    a: C,
}

impl Analytic for MobiusOmega {
    fn value(&self, z: C) -> Result<C, EvalError> {
        let w = self.omega.value(z)?;
        Ok((w + self.a.conj()) / (1.0 + self.a * w))
    }
    fn deriv(&self, z: C) -> Result<C, EvalError> {
        let w = self.omega.value(z)?;
        Ok(self.omega.deriv(z)? * (1.0 - self.a.norm_sqr()) / ((1.0 + self.a * w) * (1.0 + self.a * w)))
    }
    fn pre_schwarzian(&self, z: C) -> Result<C, EvalError> {
        let w = self.omega.value(z)?;
        Ok(self.omega.pre_schwarzian(z)? - 2.0 * self.a * self.omega.deriv(z)? / (1.0 + self.a * w))
    }
    fn describe(&self) -> String {
        "mobius(omega)".into()
    }
}

/// Largest change of the harmonic pre-Schwarzian of preset `idx` under `F -> F + a conj(F)`.
pub fn affine_invariance_error(idx: usize, a: C, n: usize) -> f64 {
    let (p, alpha, beta) = PRESET_PARAMS[idx];
    let s = p.shear(alpha, beta, 0.0, -0.4);
    let h = Combo { h: s.h().clone(), g: s.g().clone(), a };
    let omega = MobiusOmega { omega: s.omega().clone(), a };
    halton_disk(n, 0.9, 11)
        .into_iter()
        .map(|z| (pre_schwarzian_harmonic(&s, z).unwrap() - pre_schwarzian_parts(&h, &omega, z).unwrap()).norm())
        .fold(0.0, f64::max)
}

// ------------------------------------------------------------ path independence

pub const PATH_FAMILIES: [BuiltinFamily; 4] = [BuiltinFamily::Cayley, BuiltinFamily::Koebe, BuiltinFamily::Twostrip, BuiltinFamily::Logmap];

/// `(|straight - bent|, 2 tol max(1, |straight|))` for `∫ f'` over `[0, z]` and `[0, mid, z]`.
pub fn path_discrepancy(fam: BuiltinFamily, alpha: f64, z: C, mid: C) -> (f64, f64) {
    let f = cesaro_transform(&TransformSpec::real(AnalyticFn::builtin(fam), alpha, 0.5, 0.0));
    let opts = QuadOptions::default();
    let zero = cx(0.0, 0.0);
    let straight = integrate_segment(f.deriv_walker(), zero, z, opts).unwrap().value;
    let bent = integrate_path(f.deriv_walker(), &[zero, mid, z], opts).unwrap().value;
    ((straight - bent).norm(), 2.0 * opts.tol * straight.norm().max(1.0))
}

// ------------------------------------------------------------ symbolic derivatives

fn central(e: &Expr, z: C, h: f64) -> Option<C> {
    let d = (e.eval(z + h).ok()? - e.eval(z - h).ok()?) / (2.0 * h);
    (d.re.is_finite() && d.im.is_finite()).then_some(d)
}

/// Relative gap between the symbolic derivative and a central difference,
/// or `None` where the difference quotient is unstable (pole, branch cut).
pub fn derivative_gap(e: &Expr, z: C) -> Option<f64> {
    let exact = differentiate(e).eval(z).ok().filter(|d| d.norm() < 1e6)?;
    let d1 = central(e, z, 1e-5)?;
    let d2 = central(e, z, 5e-6)?;
    if (d1 - d2).norm() > 1e-7 * d1.norm().max(1.0) {
        return None;
    }
    Some((exact - d1).norm() / exact.norm().max(1.0))
}
