//! Branch-correct complex elementary functions and the [`AnalyticFn`] interface.

mod builtin;
mod expr_fn;
mod track;

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{finite, EvalError};

pub use builtin::BuiltinFamily;
pub use expr_fn::ExprFn;
pub use track::LogTracker;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Principal logarithm with imaginary part in (-pi, pi].
pub fn principal_log(w: Complex64) -> Result<Complex64, EvalError> {
    if w == ZERO {
        return Err(EvalError::BranchPoint { at: w, what: "log(0)" });
    }
    let mut arg = w.im.atan2(w.re);
    if arg == -std::f64::consts::PI {
        arg = std::f64::consts::PI;
    }
    Ok(Complex64::new(w.norm().ln(), arg))
}

/// `exp(a * Log w)` with the principal logarithm; `w^0 = 1` for every `w`.
pub fn principal_pow(w: Complex64, a: Complex64) -> Result<Complex64, EvalError> {
    if a == ZERO {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if w == ZERO {
        return if a.re > 0.0 {
            Ok(ZERO)
        } else {
            Err(EvalError::BranchPoint { at: w, what: "0^a with Re(a) <= 0" })
        };
    }
    if a.im == 0.0 && a.re.fract() == 0.0 && a.re.abs() <= 64.0 {
        return Ok(w.powi(a.re as i32));
    }
    Ok((a * principal_log(w)?).exp())
}

/// Principal square root (argument in (-pi/2, pi/2]).
pub fn principal_sqrt(w: Complex64) -> Complex64 {
    if w.im == 0.0 && w.re < 0.0 {
        return Complex64::new(0.0, (-w.re).sqrt());
    }
    w.sqrt()
}

/// Evaluator of a function along a sequence of points; may carry continuation state.
pub type Walker<'a> = Box<dyn FnMut(Complex64) -> Result<Complex64, EvalError> + 'a>;

/// An analytic function on the unit disk with derivative access.
///
/// Implementations are immutable and shareable. The `log_*` methods return the
/// analytic branch fixed by continuation from the origin, not the pointwise
/// principal branch; the defaults track it numerically along the segment `[0, z]`.
pub trait Analytic: Send + Sync + fmt::Debug {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError>;

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError>;

    /// `f''(z) / f'(z)`.
    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError>;

    fn second_deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(self.pre_schwarzian(z)? * self.deriv(z)?)
    }

    /// Branch of `log(f(z)/z)` equal to `Log f'(0)` at the origin.
    fn log_ratio(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let mut t = LogTracker::new(|w| ratio_at(self, w), ZERO)?;
        t.advance(z)
    }

    /// Branch of `log f'(z)` equal to `Log f'(0)` at the origin.
    fn log_deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let mut t = LogTracker::new(|w| self.deriv(w), ZERO)?;
        t.advance(z)
    }

    /// `f'` for points visited in path order.
    fn deriv_walker(&self) -> Walker<'_> {
        Box::new(move |z| self.deriv(z))
    }

    fn log_ratio_walker(&self) -> Walker<'_> {
        let mut tracker = None;
        Box::new(move |z| {
            let t = match &mut tracker {
                Some(t) => t,
                None => tracker.insert(LogTracker::new(move |w| ratio_at(self, w), ZERO)?),
            };
            t.advance(z)
        })
    }

    fn log_deriv_walker(&self) -> Walker<'_> {
        let mut tracker = None;
        Box::new(move |z| {
            let t = match &mut tracker {
                Some(t) => t,
                None => tracker.insert(LogTracker::new(move |w| self.deriv(w), ZERO)?),
            };
            t.advance(z)
        })
    }

    /// Closed-form derivative function, when the representation has one.
    fn derivative_fn(&self) -> Option<AnalyticFn> {
        None
    }

    fn describe(&self) -> String;
}

/// `f(w)/w`, continued by `f'(0)` at the origin.
fn ratio_at<A: Analytic + ?Sized>(f: &A, w: Complex64) -> Result<Complex64, EvalError> {
    if w == ZERO {
        f.deriv(ZERO)
    } else {
        Ok(f.value(w)? / w)
    }
}

/// Shared handle to an analytic function.
#[derive(Clone)]
pub struct AnalyticFn(Arc<dyn Analytic>);

impl AnalyticFn {
    pub fn new<A: Analytic + 'static>(inner: A) -> Self {
        AnalyticFn(Arc::new(inner))
    }

    pub fn builtin(family: BuiltinFamily) -> Self {
        AnalyticFn::new(family)
    }

    pub fn from_expr(expr: crate::exprlang::Expr) -> Self {
        AnalyticFn::new(ExprFn::new(expr))
    }

    pub fn parse(src: &str) -> Result<Self, crate::exprlang::ParseError> {
        Ok(AnalyticFn::from_expr(crate::exprlang::parse(src)?))
    }

    /// The derivative as a function in its own right.
    pub fn derivative(&self) -> AnalyticFn {
        self.0
            .derivative_fn()
            .unwrap_or_else(|| AnalyticFn::new(DerivativeOf(self.clone())))
    }

    /// `(|f(0)|, |f'(0) - 1|)`.
    pub fn normalization_defect(&self) -> Result<(f64, f64), EvalError> {
        Ok((self.value(ZERO)?.norm(), (self.deriv(ZERO)? - ONE).norm()))
    }

    /// `z -> k f(z)`.
    pub fn scaled(&self, k: Complex64) -> AnalyticFn {
        AnalyticFn::new(Scaled { inner: self.clone(), k })
    }

    pub fn ptr_eq(&self, other: &AnalyticFn) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Deref for AnalyticFn {
    type Target = dyn Analytic;

    fn deref(&self) -> &Self::Target {
        &*self.0
    }
}

impl fmt::Debug for AnalyticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnalyticFn({})", self.0.describe())
    }
}

/// `z -> e^{-i theta} f(e^{i theta} z)`.
pub fn rotate_fn(f: &AnalyticFn, theta: f64) -> AnalyticFn {
    if theta == 0.0 {
        return f.clone();
    }
    AnalyticFn::new(Rotated {
        inner: f.clone(),
        theta,
        rot: Complex64::from_polar(1.0, theta),
    })
}

#[derive(Debug)]
struct Rotated {
    inner: AnalyticFn,
    theta: f64,
    rot: Complex64,
}

impl Analytic for Rotated {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(self.rot.conj() * self.inner.value(self.rot * z)?)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.inner.deriv(self.rot * z)
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(self.rot * self.inner.pre_schwarzian(self.rot * z)?)
    }

    fn log_ratio(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.inner.log_ratio(self.rot * z)
    }

    fn log_deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.inner.log_deriv(self.rot * z)
    }

    fn deriv_walker(&self) -> Walker<'_> {
        let mut w = self.inner.deriv_walker();
        let rot = self.rot;
        Box::new(move |z| w(rot * z))
    }

    fn log_ratio_walker(&self) -> Walker<'_> {
        let mut w = self.inner.log_ratio_walker();
        let rot = self.rot;
        Box::new(move |z| w(rot * z))
    }

    fn log_deriv_walker(&self) -> Walker<'_> {
        let mut w = self.inner.log_deriv_walker();
        let rot = self.rot;
        Box::new(move |z| w(rot * z))
    }

    fn describe(&self) -> String {
        format!("rotate({}, {})", self.inner.describe(), self.theta)
    }
}

#[derive(Debug)]
struct Scaled {
    inner: AnalyticFn,
    k: Complex64,
}

impl Analytic for Scaled {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(self.k * self.inner.value(z)?)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(self.k * self.inner.deriv(z)?)
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        if self.k == ZERO {
            return Err(EvalError::CriticalPoint { at: z });
        }
        self.inner.pre_schwarzian(z)
    }

    fn deriv_walker(&self) -> Walker<'_> {
        let mut w = self.inner.deriv_walker();
        let k = self.k;
        Box::new(move |z| Ok(k * w(z)?))
    }

    fn describe(&self) -> String {
        format!("({})*{}", self.k, self.inner.describe())
    }
}

/// Derivative of a function without a symbolic derivative; `f'''` comes from an
/// 8-point Cauchy integral of `f''` on a small circle.
#[derive(Debug)]
struct DerivativeOf(AnalyticFn);

impl Analytic for DerivativeOf {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.0.deriv(z)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.0.second_deriv(z)
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let h = (0.5 * (1.0 - z.norm())).clamp(1e-6, 1e-3);
        let mut acc = ZERO;
        for k in 0..8 {
            let u = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * k as f64);
            acc += self.0.second_deriv(z + h * u)? * u.conj();
        }
        let third = acc / (8.0 * h);
        let second = self.0.second_deriv(z)?;
        if second == ZERO {
            return Err(EvalError::CriticalPoint { at: z });
        }
        finite(z, third / second)
    }

    fn describe(&self) -> String {
        format!("d/dz {}", self.0.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn principal_pow_examples() {
        assert!((principal_pow(c(4.0, 0.0), c(0.5, 0.0)).unwrap() - 2.0).norm() < 1e-15);
        assert!((principal_pow(c(0.0, 1.0), c(2.0, 0.0)).unwrap() + 1.0).norm() < 1e-15);
        // exp(0.3 ln 2)
        let expect = (0.3 * 2f64.ln()).exp();
        assert!((principal_pow(c(0.5, 0.0), c(-0.3, 0.0)).unwrap() - expect).norm() < 1e-15);
        assert!((expect - 1.231_144_413).abs() < 1e-9);
    }

    #[test]
    fn principal_pow_at_zero() {
        assert_eq!(principal_pow(ZERO, c(0.5, 0.0)).unwrap(), ZERO);
        assert!(principal_pow(ZERO, c(-0.5, 0.0)).is_err());
        assert!(principal_pow(ZERO, c(0.0, 3.0)).is_err());
        assert_eq!(principal_pow(ZERO, ZERO).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn principal_log_range() {
        let l = principal_log(c(-1.0, -0.0)).unwrap();
        assert_eq!(l.im, PI);
        let l = principal_log(c(-1.0, 0.0)).unwrap();
        assert_eq!(l.im, PI);
        assert!(principal_log(ZERO).is_err());
        assert_eq!(principal_sqrt(c(-4.0, -0.0)), c(0.0, 2.0));
    }

    #[test]
    fn pow_identities() {
        for w in [c(0.3, -2.0), c(-1.5, 0.1), c(2.0, 0.0)] {
            assert!((principal_pow(w, ONE).unwrap() - w).norm() < 1e-14 * w.norm().max(1.0));
            assert_eq!(principal_pow(w, ZERO).unwrap(), ONE);
        }
    }

    #[test]
    fn rotation_examples() {
        let koebe = AnalyticFn::builtin(BuiltinFamily::Koebe);
        let z = c(0.5, 0.0);
        assert_eq!(rotate_fn(&koebe, 0.0).value(z).unwrap(), koebe.value(z).unwrap());
        let id = AnalyticFn::builtin(BuiltinFamily::Identity);
        for theta in [0.3, 1.0, -2.5] {
            let v = rotate_fn(&id, theta).value(c(0.2, 0.4)).unwrap();
            assert!((v - c(0.2, 0.4)).norm() < 1e-15);
        }
        // -koebe(-0.5) = 0.5 / 2.25
        let v = rotate_fn(&koebe, PI).value(z).unwrap();
        assert!((v - c(0.5 / 2.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation_inverse_and_derivatives() {
        let f = AnalyticFn::builtin(BuiltinFamily::Twostrip);
        let theta = 0.7;
        let g = rotate_fn(&rotate_fn(&f, theta), -theta);
        let z = c(0.31, -0.52);
        assert!((g.value(z).unwrap() - f.value(z).unwrap()).norm() < 1e-14);
        let r = rotate_fn(&f, theta);
        let h = 1e-6;
        let fd = (r.value(z + h).unwrap() - r.value(z - h).unwrap()) / (2.0 * h);
        assert!((fd - r.deriv(z).unwrap()).norm() < 1e-8);
        let fd2 = (r.deriv(z + h).unwrap() - r.deriv(z - h).unwrap()) / (2.0 * h);
        assert!((fd2 / r.deriv(z).unwrap() - r.pre_schwarzian(z).unwrap()).norm() < 1e-7);
    }

    #[test]
    fn generic_derivative_wrapper() {
        let f = AnalyticFn::builtin(BuiltinFamily::Koebe);
        let d = AnalyticFn::new(DerivativeOf(f.clone()));
        let z = c(0.2, 0.3);
        assert_eq!(d.value(z).unwrap(), f.deriv(z).unwrap());
        assert!((f.derivative().value(z).unwrap() - f.deriv(z).unwrap()).norm() < 1e-14);
        // koebe'' = (4 + 2z)/(1 - z)^4, koebe''' = (18 + 6z)/(1-z)^5
        let f2 = (4.0 + 2.0 * z) / (1.0 - z).powi(4);
        let f3 = (18.0 + 6.0 * z) / (1.0 - z).powi(5);
        assert!((d.deriv(z).unwrap() - f2).norm() < 1e-12);
        assert!((d.pre_schwarzian(z).unwrap() - f3 / f2).norm() < 1e-9);
    }
}
