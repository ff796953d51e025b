//! C ABI for geoshear.
//!
//! Functions return a [`GsStatus`]; on failure the message is available from
//! [`gs_last_error`] on the same thread. Handles are opaque and must be
//! released with the matching `*_free` function. Panics never cross the
//! boundary: they are reported as `GS_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use geoshear::criteria::bounds::{self, BoundInputs, Theorem};
use geoshear::criteria::{becker_harmonic_check, DiskGrid, Verdict, DEFAULT_SLACK};
use geoshear::error::EvalError;
use geoshear::funcore::{AnalyticFn, BuiltinFamily};
use geoshear::shear::{build_f, shear_solve, HarmonicShear};
use geoshear::transforms::{cesaro_transform, TransformSpec};
use geoshear::verify::{boundary_simplicity, injectivity_test, Mapping, PointMap};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for GsComplex {
    fn from(z: Complex64) -> Self {
        GsComplex { re: z.re, im: z.im }
    }
}

impl From<GsComplex> for Complex64 {
    fn from(z: GsComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Status codes; the first six match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    Violated = 1,
    InvalidArgument = 2,
    Numeric = 3,
    Inconclusive = 4,
    Io = 5,
    NullPointer = 6,
    Panic = 7,
}

/// Opaque analytic function.
pub struct GsFunction(AnalyticFn);

/// Opaque harmonic shear `H + conj(G)`.
pub struct GsShear(HarmonicShear);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

struct Fail(GsStatus, String);

impl From<EvalError> for Fail {
    fn from(e: EvalError) -> Self {
        Fail(GsStatus::Numeric, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<GsStatus, Fail>) -> GsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            GsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(GsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(GsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(GsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write_out<T>(p: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail(GsStatus::NullPointer, format!("{what} is null")));
    }
    p.write(v);
    Ok(())
}

fn verdict_status(v: Verdict) -> GsStatus {
    match v {
        Verdict::Certified => GsStatus::Ok,
        Verdict::BoundViolated => GsStatus::Violated,
        Verdict::Inconclusive => GsStatus::Inconclusive,
    }
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn gs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builtin family by name: identity, cayley, koebe, twostrip, logmap.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_function_builtin(name: *const c_char, out: *mut *mut GsFunction) -> GsStatus {
    guard(|| {
        let fam: BuiltinFamily = str_arg(name, "name")?.parse().map_err(|e| Fail(GsStatus::InvalidArgument, e))?;
        write_out(out, Box::into_raw(Box::new(GsFunction(AnalyticFn::builtin(fam)))), "out")?;
        Ok(GsStatus::Ok)
    })
}

/// Function from an expression in `z`.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_function_parse(src: *const c_char, out: *mut *mut GsFunction) -> GsStatus {
    guard(|| {
        let f = AnalyticFn::parse(str_arg(src, "src")?).map_err(|e| Fail(GsStatus::InvalidArgument, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(GsFunction(f))), "out")?;
        Ok(GsStatus::Ok)
    })
}

/// `rotate(C_{αβ}[φ], θ)` as a new function handle.
///
/// # Safety
/// `phi` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_transform(
    phi: *const GsFunction,
    alpha: f64,
    beta: f64,
    theta: f64,
    out: *mut *mut GsFunction,
) -> GsStatus {
    guard(|| {
        let phi = ref_arg(phi, "phi")?;
        if !(alpha.is_finite() && beta.is_finite() && theta.is_finite()) {
            return Err(Fail(GsStatus::InvalidArgument, "alpha, beta and theta must be finite".into()));
        }
        let f = cesaro_transform(&TransformSpec::real(phi.0.clone(), alpha, beta, theta));
        write_out(out, Box::into_raw(Box::new(GsFunction(f))), "out")?;
        Ok(GsStatus::Ok)
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_function_eval(f: *const GsFunction, z: GsComplex, out: *mut GsComplex) -> GsStatus {
    guard(|| {
        let v = ref_arg(f, "f")?.0.value(z.into())?;
        write_out(out, v.into(), "out")?;
        Ok(GsStatus::Ok)
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_function_deriv(f: *const GsFunction, z: GsComplex, out: *mut GsComplex) -> GsStatus {
    guard(|| {
        let v = ref_arg(f, "f")?.0.deriv(z.into())?;
        write_out(out, v.into(), "out")?;
        Ok(GsStatus::Ok)
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_function_free(f: *mut GsFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Shear of `rotate(C_{αβ}[φ], θ)` with dilatation `α(1+β) w`.
///
/// # Safety
/// `phi` and `w` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_shear_build(
    phi: *const GsFunction,
    w: *const GsFunction,
    alpha: f64,
    beta: f64,
    theta: f64,
    out: *mut *mut GsShear,
) -> GsStatus {
    guard(|| {
        let (phi, w) = (ref_arg(phi, "phi")?, ref_arg(w, "w")?);
        if !(alpha.is_finite() && beta.is_finite() && theta.is_finite()) {
            return Err(Fail(GsStatus::InvalidArgument, "alpha, beta and theta must be finite".into()));
        }
        let s = build_f(&TransformSpec::real(phi.0.clone(), alpha, beta, theta), &w.0);
        write_out(out, Box::into_raw(Box::new(GsShear(s))), "out")?;
        Ok(GsStatus::Ok)
    })
}

/// Shear with `H - G = phi` and dilatation `omega`.
///
/// # Safety
/// `phi` and `omega` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_shear_solve(phi: *const GsFunction, omega: *const GsFunction, out: *mut *mut GsShear) -> GsStatus {
    guard(|| {
        let s = shear_solve(&ref_arg(phi, "phi")?.0, &ref_arg(omega, "omega")?.0);
        write_out(out, Box::into_raw(Box::new(GsShear(s))), "out")?;
        Ok(GsStatus::Ok)
    })
}

/// `F(z) = H(z) + conj(G(z))`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_shear_eval(s: *const GsShear, z: GsComplex, out: *mut GsComplex) -> GsStatus {
    guard(|| {
        let v = ref_arg(s, "s")?.0.eval(z.into())?;
        write_out(out, v.into(), "out")?;
        Ok(GsStatus::Ok)
    })
}

/// `H(z)` and `G(z)`.
///
/// # Safety
/// `s` must be a live handle; `h` and `g` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_shear_parts(s: *const GsShear, z: GsComplex, h: *mut GsComplex, g: *mut GsComplex) -> GsStatus {
    guard(|| {
        let (hv, gv) = ref_arg(s, "s")?.0.parts(z.into())?;
        write_out(h, hv.into(), "h")?;
        write_out(g, gv.into(), "g")?;
        Ok(GsStatus::Ok)
    })
}

/// Dilatation `ω(z) = G'(z)/H'(z)`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_shear_dilatation(s: *const GsShear, z: GsComplex, out: *mut GsComplex) -> GsStatus {
    guard(|| {
        let v = ref_arg(s, "s")?.0.omega().value(z.into())?;
        write_out(out, v.into(), "out")?;
        Ok(GsStatus::Ok)
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_shear_free(s: *mut GsShear) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Harmonic Becker functional over a polar grid: writes the grid sup and
/// returns `GS_STATUS_OK` (certified), `GS_STATUS_VIOLATED` or `GS_STATUS_INCONCLUSIVE`.
///
/// # Safety
/// `s` must be a live handle; `sup` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_check_becker_harmonic(s: *const GsShear, radii: usize, angles: usize, sup: *mut f64) -> GsStatus {
    guard(|| {
        let s = ref_arg(s, "s")?;
        if radii == 0 || angles == 0 {
            return Err(Fail(GsStatus::InvalidArgument, "grid needs at least one radius and angle".into()));
        }
        let r = becker_harmonic_check(&s.0, &DiskGrid::new(radii, angles, 0.999), DEFAULT_SLACK)?;
        write_out(sup, r.sup_value, "sup")?;
        Ok(verdict_status(r.verdict))
    })
}

/// Sampled injectivity test of the shear. Returns `GS_STATUS_VIOLATED` and
/// writes the colliding preimages when a collision is found, `GS_STATUS_OK`
/// otherwise (no collision found, not a proof).
///
/// # Safety
/// `s` must be a live handle; `z1` and `z2` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_check_injectivity(s: *const GsShear, seed: u64, z1: *mut GsComplex, z2: *mut GsComplex) -> GsStatus {
    guard(|| {
        let s = ref_arg(s, "s")?;
        let mut pm = PointMap::new(Mapping::Harmonic(s.0.clone()));
        pm.seed = seed;
        let r = injectivity_test(&pm)?;
        if let Some(c) = r.collision {
            write_out(z1, c.z1.into(), "z1")?;
            write_out(z2, c.z2.into(), "z2")?;
        }
        Ok(verdict_status(r.verdict()))
    })
}

/// Self-intersection test of the image of `|z| = 0.995`.
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_check_boundary(s: *const GsShear) -> GsStatus {
    guard(|| {
        let r = boundary_simplicity(&PointMap::new(Mapping::Harmonic(ref_arg(s, "s")?.0.clone())))?;
        Ok(if r.simple { GsStatus::Ok } else { GsStatus::Violated })
    })
}

/// Inputs of [`gs_bound`]; unused fields are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GsBoundInputs {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub gamma: f64,
    pub c: f64,
    pub r: f64,
    pub norm_w: f64,
    pub norm_w_star: f64,
}

/// Defaults: γ = 2, r = 1, norms 1, everything else 0.
#[no_mangle]
pub extern "C" fn gs_bound_inputs_default() -> GsBoundInputs {
    let d = BoundInputs::default();
    GsBoundInputs {
        alpha: d.alpha,
        beta: d.beta,
        delta: d.delta,
        gamma: d.gamma,
        c: d.c,
        r: d.r,
        norm_w: d.norm_w,
        norm_w_star: d.norm_w_star,
    }
}

/// Evaluate a theorem's calculator (`thm31`, `shcc`, `lif-univ`, ...).
/// Writes the headline number; returns `GS_STATUS_VIOLATED` when the
/// theorem's condition fails for the given α.
///
/// # Safety
/// `theorem` must be a NUL-terminated string; `inputs` readable; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_bound(theorem: *const c_char, inputs: *const GsBoundInputs, value: *mut f64) -> GsStatus {
    guard(|| {
        let t: Theorem = str_arg(theorem, "theorem")?.parse().map_err(|e| Fail(GsStatus::InvalidArgument, e))?;
        let i = ref_arg(inputs, "inputs")?;
        let i = BoundInputs {
            alpha: i.alpha,
            beta: i.beta,
            delta: i.delta,
            gamma: i.gamma,
            c: i.c,
            r: i.r,
            norm_w: i.norm_w,
            norm_w_star: i.norm_w_star,
        };
        let r = bounds::evaluate(t, &i).map_err(|e| Fail(GsStatus::InvalidArgument, e.to_string()))?;
        write_out(value, r.headline(), "value")?;
        Ok(if r.holds == Some(false) { GsStatus::Violated } else { GsStatus::Ok })
    })
}
