use std::ffi::{CStr, CString};
use std::ptr;

use geoshear_ffi::*;

fn c(re: f64, im: f64) -> GsComplex {
    GsComplex { re, im }
}

fn last_error() -> String {
    let p = gs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn builtin(name: &str) -> *mut GsFunction {
    let name = CString::new(name).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { gs_function_builtin(name.as_ptr(), &mut f) }, GsStatus::Ok);
    f
}

fn parse(src: &str) -> *mut GsFunction {
    let src = CString::new(src).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { gs_function_parse(src.as_ptr(), &mut f) }, GsStatus::Ok);
    f
}

#[test]
fn transform_value_through_handles() {
    let phi = builtin("cayley");
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(gs_transform(phi, 0.2, 0.5, 0.0, &mut f), GsStatus::Ok);
        let mut v = c(0.0, 0.0);
        assert_eq!(gs_function_eval(f, c(0.5, 0.0), &mut v), GsStatus::Ok);
        // (1 - 0.5^0.7)/0.7
        let expected = (1.0 - 0.5f64.powf(0.7)) / 0.7;
        assert!((v.re - expected).abs() < 1e-10 && v.im.abs() < 1e-12);
        let mut d = c(0.0, 0.0);
        assert_eq!(gs_function_deriv(f, c(0.5, 0.0), &mut d), GsStatus::Ok);
        assert!((d.re - 0.5f64.powf(-0.3)).abs() < 1e-12);
        gs_function_free(f);
        gs_function_free(phi);
    }
}

#[test]
fn shear_parts_recombine() {
    let phi = builtin("cayley");
    let w = parse("-z");
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(gs_shear_build(phi, w, 0.2, 0.5, 0.0, &mut s), GsStatus::Ok);
        let z = c(0.3, -0.4);
        let (mut h, mut g, mut f, mut om) = (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(gs_shear_parts(s, z, &mut h, &mut g), GsStatus::Ok);
        assert_eq!(gs_shear_eval(s, z, &mut f), GsStatus::Ok);
        assert_eq!(gs_shear_dilatation(s, z, &mut om), GsStatus::Ok);
        assert!((f.re - (h.re + g.re)).abs() < 1e-14 && (f.im - (h.im - g.im)).abs() < 1e-14);
        assert!((om.re + 0.3 * 0.3).abs() < 1e-15 && (om.im - 0.3 * 0.4).abs() < 1e-15);
        let mut sup = 0.0;
        assert_eq!(gs_check_becker_harmonic(s, 40, 128, &mut sup), GsStatus::Ok);
        assert!(sup > 0.0 && sup < 1.0);
        gs_shear_free(s);
        gs_function_free(w);
        gs_function_free(phi);
    }
}

#[test]
fn collision_witness_for_even_map() {
    let phi = parse("z^2");
    let zero = parse("0");
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(gs_shear_solve(phi, zero, &mut s), GsStatus::Ok);
        let (mut z1, mut z2) = (c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(gs_check_injectivity(s, 0, &mut z1, &mut z2), GsStatus::Violated);
        assert!((z1.re + z2.re).abs() < 1e-6 && (z1.im + z2.im).abs() < 1e-6);
        assert_eq!(gs_check_boundary(s), GsStatus::Violated);
        gs_shear_free(s);
        gs_function_free(zero);
        gs_function_free(phi);
    }
}

#[test]
fn bounds_and_errors() {
    let mut inputs = gs_bound_inputs_default();
    inputs.beta = 1.0;
    let mut v = 0.0;
    let name = CString::new("shcc").unwrap();
    unsafe {
        assert_eq!(gs_bound(name.as_ptr(), &inputs, &mut v), GsStatus::Ok);
        assert!((v - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        inputs.alpha = 0.5;
        assert_eq!(gs_bound(name.as_ptr(), &inputs, &mut v), GsStatus::Violated);

        let bad = CString::new("thm99").unwrap();
        assert_eq!(gs_bound(bad.as_ptr(), &inputs, &mut v), GsStatus::InvalidArgument);
        assert!(last_error().contains("thm99"));

        inputs.beta = -1.0;
        assert_eq!(gs_bound(name.as_ptr(), &inputs, &mut v), GsStatus::InvalidArgument);
        assert!(last_error().contains("beta"));

        assert_eq!(gs_bound(ptr::null(), &inputs, &mut v), GsStatus::NullPointer);

        let mut f = ptr::null_mut();
        let junk = CString::new("z +* 2").unwrap();
        assert_eq!(gs_function_parse(junk.as_ptr(), &mut f), GsStatus::InvalidArgument);
        assert!(f.is_null());

        let phi = builtin("cayley");
        let mut out = c(0.0, 0.0);
        assert_eq!(gs_function_eval(phi, c(1.0, 0.0), &mut out), GsStatus::Numeric);
        assert!(!last_error().is_empty());
        assert_eq!(gs_function_eval(phi, c(0.5, 0.0), &mut out), GsStatus::Ok);
        assert!(gs_last_error().is_null());
        gs_function_free(phi);
        gs_function_free(ptr::null_mut());
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(gs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/geoshear.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    // the header must also be valid C when a compiler is available
    let dir = tempfile::tempdir().unwrap();
    let probe = dir.path().join("probe.c");
    std::fs::write(&probe, "#include \"geoshear.h\"\nint main(void) { return GS_STATUS_OK; }\n").unwrap();
    if let Ok(out) = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&probe)
        .output()
    {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
