//! Adaptive Gauss–Kronrod (7/15) quadrature, evaluated depth-first in path order.
#![allow(clippy::excessive_precision)]

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::EvalError;

// QUADPACK qk15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Values that can be integrated: a real vector space with a norm.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Two complex values integrated together (e.g. `H` and `G` of a shear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair(pub Complex64, pub Complex64);

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Pair {
    type Output = Pair;
    fn sub(self, o: Pair) -> Pair {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, k: f64) -> Pair {
        Pair(self.0 * k, self.1 * k)
    }
}

impl Mul<Complex64> for Pair {
    type Output = Pair;
    fn mul(self, k: Complex64) -> Pair {
        Pair(self.0 * k, self.1 * k)
    }
}

impl QuadValue for Pair {
    fn zero() -> Self {
        Pair(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }
    fn magnitude(&self) -> f64 {
        self.0.norm().max(self.1.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadOptions {
    /// Target error, relative to `max(1, |integral|)`.
    pub tol: f64,
    pub max_nodes: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-10,
            max_nodes: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T = Complex64> {
    pub value: T,
    pub error_estimate: f64,
    pub nodes_used: usize,
}

struct State<'f, T> {
    f: &'f mut dyn FnMut(f64) -> Result<T, EvalError>,
    nodes: usize,
    budget_hit: bool,
    tol: f64,
    max_nodes: usize,
    length: f64,
}

fn gk15<T: QuadValue>(st: &mut State<'_, T>, a: f64, b: f64) -> Result<(T, f64), EvalError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [T::zero(); 15];
    // nodes in increasing order so stateful integrands see path order
    for (k, x) in XGK.iter().enumerate() {
        fv[k] = (st.f)(c - h * x)?;
    }
    for (k, x) in XGK.iter().enumerate().take(7).rev() {
        fv[14 - k] = (st.f)(c + h * x)?;
    }
    st.nodes += 15;
    let mut kron = fv[7] * WGK[7];
    let mut gauss = fv[7] * WG[3];
    for k in 0..7 {
        let pair = fv[k] + fv[14 - k];
        kron = kron + pair * WGK[k];
        if k % 2 == 1 {
            gauss = gauss + pair * WG[k / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    Ok((kron, (kron - gauss).magnitude()))
}

fn adapt<T: QuadValue>(
    st: &mut State<'_, T>,
    a: f64,
    b: f64,
    depth: u32,
) -> Result<(T, f64), EvalError> {
    let (value, err) = gk15(st, a, b)?;
    let share = (b - a) / st.length;
    // local magnitude scale: the integral this piece would give if it spanned the whole range
    let scale = (value.magnitude() / share).max(1.0);
    let good = err <= st.tol * share * scale;
    let exhausted = st.nodes + 30 > st.max_nodes || depth >= 60 || b - a <= 1e-14 * st.length;
    if good || exhausted {
        if !good {
            st.budget_hit = true;
        }
        return Ok((value, err));
    }
    let m = 0.5 * (a + b);
    let (lv, le) = adapt(st, a, m, depth + 1)?;
    let (rv, re) = adapt(st, m, b, depth + 1)?;
    Ok((lv + rv, le + re))
}

/// `∫_a^b f(t) dt` with `f` called at increasing `t` within each panel.
pub fn integrate_real<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadratureResult<T>, EvalError>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T, EvalError>,
{
    if a == b {
        return Ok(QuadratureResult {
            value: T::zero(),
            error_estimate: 0.0,
            nodes_used: 0,
        });
    }
    let mut st = State {
        f: &mut f,
        nodes: 0,
        budget_hit: false,
        tol: opts.tol,
        max_nodes: opts.max_nodes,
        length: (b - a).abs(),
    };
    let (value, err) = adapt(&mut st, a, b, 0)?;
    if st.budget_hit && err > opts.tol * value.magnitude().max(1.0) {
        return Err(EvalError::Convergence {
            estimate: Complex64::new(value.magnitude(), 0.0),
            error: err,
            tol: opts.tol,
            nodes: st.nodes,
        });
    }
    Ok(QuadratureResult {
        value,
        error_estimate: err,
        nodes_used: st.nodes,
    })
}

/// `∫` of `g` over the straight segment `[from, to]`; `g` sees points in path order.
pub fn integrate_segment<T, G>(
    mut g: G,
    from: Complex64,
    to: Complex64,
    opts: QuadOptions,
) -> Result<QuadratureResult<T>, EvalError>
where
    T: QuadValue + Mul<Complex64, Output = T>,
    G: FnMut(Complex64) -> Result<T, EvalError>,
{
    let delta = to - from;
    let r = integrate_real(|t| g(from + delta * t), 0.0, 1.0, opts)?;
    Ok(QuadratureResult {
        value: r.value * delta,
        error_estimate: r.error_estimate * delta.norm(),
        nodes_used: r.nodes_used,
    })
}

/// Integral along the polyline through `points`.
pub fn integrate_path<T, G>(
    mut g: G,
    points: &[Complex64],
    opts: QuadOptions,
) -> Result<QuadratureResult<T>, EvalError>
where
    T: QuadValue + Mul<Complex64, Output = T>,
    G: FnMut(Complex64) -> Result<T, EvalError>,
{
    let mut total = QuadratureResult {
        value: T::zero(),
        error_estimate: 0.0,
        nodes_used: 0,
    };
    for w in points.windows(2) {
        let r = integrate_segment(&mut g, w[0], w[1], opts)?;
        total.value = total.value + r.value;
        total.error_estimate += r.error_estimate;
        total.nodes_used += r.nodes_used;
    }
    Ok(total)
}

/// Antiderivative values (from 0) at each point of a polyline, by chord increments.
pub fn values_along<T, G>(
    mut g: G,
    points: &[Complex64],
    opts: QuadOptions,
) -> Result<Vec<T>, EvalError>
where
    T: QuadValue + Mul<Complex64, Output = T>,
    G: FnMut(Complex64) -> Result<T, EvalError>,
{
    let mut out = Vec::with_capacity(points.len());
    let mut prev = Complex64::new(0.0, 0.0);
    let mut acc = T::zero();
    for &p in points {
        acc = acc + integrate_segment(&mut g, prev, p, opts)?.value;
        out.push(acc);
        prev = p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spec_examples() {
        let o = QuadOptions::default();
        let r = integrate_segment(|_| Ok(c(1.0, 0.0)), c(0.0, 0.0), c(0.3, 0.4), o).unwrap();
        assert!((r.value - c(0.3, 0.4)).norm() < 1e-15);
        assert!(r.error_estimate < 1e-14);
        let r = integrate_segment(Ok, c(0.0, 0.0), c(0.0, 1.0), o).unwrap();
        assert!((r.value - c(-0.5, 0.0)).norm() < 1e-15);
        let r = integrate_segment(|z: Complex64| Ok((1.0 - z).powi(-2)), c(0.0, 0.0), c(0.5, 0.0), o).unwrap();
        assert!((r.value - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn nodes_avoid_the_origin_and_are_deterministic() {
        let o = QuadOptions::default();
        let f = |z: Complex64| {
            assert!(z != c(0.0, 0.0));
            Ok(z.ln())
        };
        let a = integrate_segment(f, c(0.0, 0.0), c(0.7, 0.2), o).unwrap();
        let b = integrate_segment(f, c(0.0, 0.0), c(0.7, 0.2), o).unwrap();
        assert_eq!(a, b);
        let z = c(0.7, 0.2);
        assert!((a.value - (z * z.ln() - z)).norm() < 1e-9);
    }

    #[test]
    fn near_boundary_singularity() {
        let o = QuadOptions::default();
        let z = c(0.999, 0.0);
        let r = integrate_segment(|w: Complex64| Ok((1.0 - w).powi(-3)), c(0.0, 0.0), z, o).unwrap();
        let exact = 0.5 * ((1.0 - z).powi(-2) - 1.0);
        assert!((r.value - exact).norm() < 1e-10 * exact.norm(), "{} vs {}", r.value, exact);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let o = QuadOptions { tol: 1e-14, max_nodes: 45 };
        let r = integrate_real(|t: f64| Ok(t.sqrt()), 0.0, 1.0, o);
        assert!(matches!(r, Err(EvalError::Convergence { .. })));
    }

    #[test]
    fn path_and_chord_values() {
        let o = QuadOptions::default();
        let pts = [c(0.0, 0.0), c(0.3, 0.0), c(0.3, 0.5)];
        let r = integrate_path(|z: Complex64| Ok(z * z), &pts, o).unwrap();
        assert!((r.value - c(0.3, 0.5).powi(3) / 3.0).norm() < 1e-15);
        let v: Vec<Complex64> = values_along(|z: Complex64| Ok(z), &pts[1..], o).unwrap();
        assert!((v[1] - c(0.3, 0.5).powi(2) / 2.0).norm() < 1e-15);
    }
}
