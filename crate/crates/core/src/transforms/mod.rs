//! Integral operators built on quadrature of closed-form derivatives.
//!
//! Every transform here is represented by its derivative, which is always
//! available in closed form (given the branch-tracked logarithms of its
//! arguments); values come from integrating that derivative over `[0, z]`.

pub mod quad;

use num_complex::Complex64;

use crate::error::{finite, EvalError};
use crate::funcore::{principal_log, rotate_fn, Analytic, AnalyticFn, Walker};

pub use quad::{
    integrate_path, integrate_real, integrate_segment, values_along, Pair, QuadOptions,
    QuadratureResult,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Below this modulus the pre-Schwarzian of a transform uses its limit at 0.
const ORIGIN_RADIUS: f64 = 1e-7;

/// `∫_0^z f'(ζ) dζ`, driving `f`'s derivative walker in path order.
pub fn antiderivative<A: Analytic + ?Sized>(
    f: &A,
    z: Complex64,
    opts: QuadOptions,
) -> Result<QuadratureResult, EvalError> {
    integrate_segment(f.deriv_walker(), ZERO, z, opts)
}

/// Parameters of `C_{αβ}` together with the rotation `θ` applied to the result.
#[derive(Debug, Clone)]
pub struct TransformSpec {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub theta: f64,
    pub phi: AnalyticFn,
}

impl TransformSpec {
    pub fn real(phi: AnalyticFn, alpha: f64, beta: f64, theta: f64) -> Self {
        TransformSpec {
            alpha: Complex64::new(alpha, 0.0),
            beta: Complex64::new(beta, 0.0),
            theta,
            phi,
        }
    }
}

/// `C_{αβ}[φ](z) = ∫_0^z (φ(ζ)/(ζ(1-ζ)^β))^α dζ`.
#[derive(Debug, Clone)]
pub struct CesaroFn {
    phi: AnalyticFn,
    alpha: Complex64,
    beta: Complex64,
    opts: QuadOptions,
}

impl CesaroFn {
    pub fn new(phi: AnalyticFn, alpha: Complex64, beta: Complex64) -> Self {
        CesaroFn {
            phi,
            alpha,
            beta,
            opts: QuadOptions::default(),
        }
    }

    pub fn with_options(mut self, opts: QuadOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn quadrature(&self, z: Complex64) -> Result<QuadratureResult, EvalError> {
        antiderivative(self, z, self.opts)
    }

    fn exponent(&self, log_ratio: Complex64, z: Complex64) -> Result<Complex64, EvalError> {
        let mut e = log_ratio;
        if self.beta != ZERO {
            let l = principal_log(ONE - z).map_err(|_| EvalError::BranchPoint {
                at: z,
                what: "log(1 - z) at z = 1",
            })?;
            e -= self.beta * l;
        }
        Ok(self.alpha * e)
    }
}

impl Analytic for CesaroFn {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        if self.alpha == ZERO {
            return Ok(z);
        }
        Ok(self.quadrature(z)?.value)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        if self.alpha == ZERO {
            return Ok(ONE);
        }
        finite(z, self.log_deriv(z)?.exp())
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        if self.alpha == ZERO {
            return Ok(ZERO);
        }
        // α (φ'/φ - 1/z + β/(1-z)); the bracket tends to φ''(0)/2 at the origin
        let bracket = if z.norm() < ORIGIN_RADIUS {
            0.5 * self.phi.second_deriv(ZERO)?
        } else {
            let v = self.phi.value(z)?;
            if v == ZERO {
                return Err(EvalError::BranchTracking {
                    at: z,
                    reason: "phi vanishes away from the origin",
                });
            }
            self.phi.deriv(z)? / v - ONE / z
        };
        let tail = if self.beta == ZERO {
            ZERO
        } else {
            if z == ONE {
                return Err(EvalError::Pole { at: z });
            }
            self.beta / (ONE - z)
        };
        finite(z, self.alpha * (bracket + tail))
    }

    fn log_deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        if self.alpha == ZERO {
            return Ok(ZERO);
        }
        self.exponent(self.phi.log_ratio(z)?, z)
    }

    fn deriv_walker(&self) -> Walker<'_> {
        let mut logs = self.log_deriv_walker();
        Box::new(move |z| finite(z, logs(z)?.exp()))
    }

    fn log_deriv_walker(&self) -> Walker<'_> {
        if self.alpha == ZERO {
            return Box::new(|_| Ok(ZERO));
        }
        let mut inner = self.phi.log_ratio_walker();
        Box::new(move |z| self.exponent(inner(z)?, z))
    }

    fn describe(&self) -> String {
        format!("C[{}, {}]({})", self.alpha, self.beta, self.phi.describe())
    }
}

/// `C_{αβ}[φ]` rotated by `θ`.
pub fn cesaro_transform(spec: &TransformSpec) -> AnalyticFn {
    cesaro_transform_with(spec, QuadOptions::default())
}

pub fn cesaro_transform_with(spec: &TransformSpec, opts: QuadOptions) -> AnalyticFn {
    let c = AnalyticFn::new(CesaroFn::new(spec.phi.clone(), spec.alpha, spec.beta).with_options(opts));
    rotate_fn(&c, spec.theta)
}

/// `J_α[φ](z) = ∫_0^z (φ(ζ)/ζ)^α dζ`.
pub fn j_alpha(phi: &AnalyticFn, alpha: Complex64) -> AnalyticFn {
    AnalyticFn::new(CesaroFn::new(phi.clone(), alpha, ZERO))
}

/// `C_β = C_{1β}`.
pub fn c_beta(phi: &AnalyticFn, beta: Complex64) -> AnalyticFn {
    AnalyticFn::new(CesaroFn::new(phi.clone(), ONE, beta))
}

/// `I_α[φ](z) = ∫_0^z φ'(ζ)^α dζ` (Hornich scalar multiple).
#[derive(Debug, Clone)]
pub struct IAlphaFn {
    phi: AnalyticFn,
    alpha: Complex64,
    opts: QuadOptions,
}

impl Analytic for IAlphaFn {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        if self.alpha == ZERO {
            return Ok(z);
        }
        Ok(antiderivative(self, z, self.opts)?.value)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        finite(z, self.log_deriv(z)?.exp())
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        if self.alpha == ZERO {
            return Ok(ZERO);
        }
        Ok(self.alpha * self.phi.pre_schwarzian(z)?)
    }

    fn log_deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        if self.alpha == ZERO {
            return Ok(ZERO);
        }
        Ok(self.alpha * self.phi.log_deriv(z)?)
    }

    fn deriv_walker(&self) -> Walker<'_> {
        let mut logs = self.log_deriv_walker();
        Box::new(move |z| finite(z, logs(z)?.exp()))
    }

    fn log_deriv_walker(&self) -> Walker<'_> {
        if self.alpha == ZERO {
            return Box::new(|_| Ok(ZERO));
        }
        let mut inner = self.phi.log_deriv_walker();
        let a = self.alpha;
        Box::new(move |z| Ok(a * inner(z)?))
    }

    fn describe(&self) -> String {
        format!("I[{}]({})", self.alpha, self.phi.describe())
    }
}

pub fn i_alpha(phi: &AnalyticFn, alpha: Complex64) -> AnalyticFn {
    AnalyticFn::new(IAlphaFn {
        phi: phi.clone(),
        alpha,
        opts: QuadOptions::default(),
    })
}

/// `(f ⊕ g)(z) = ∫_0^z f'(ζ) g'(ζ) dζ`.
#[derive(Debug, Clone)]
pub struct HornichSum {
    f: AnalyticFn,
    g: AnalyticFn,
    opts: QuadOptions,
}

impl Analytic for HornichSum {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(antiderivative(self, z, self.opts)?.value)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        finite(z, self.f.deriv(z)? * self.g.deriv(z)?)
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(self.f.pre_schwarzian(z)? + self.g.pre_schwarzian(z)?)
    }

    fn log_deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(self.f.log_deriv(z)? + self.g.log_deriv(z)?)
    }

    fn deriv_walker(&self) -> Walker<'_> {
        let mut a = self.f.deriv_walker();
        let mut b = self.g.deriv_walker();
        Box::new(move |z| finite(z, a(z)? * b(z)?))
    }

    fn log_deriv_walker(&self) -> Walker<'_> {
        let mut a = self.f.log_deriv_walker();
        let mut b = self.g.log_deriv_walker();
        Box::new(move |z| Ok(a(z)? + b(z)?))
    }

    fn describe(&self) -> String {
        format!("({}) (+) ({})", self.f.describe(), self.g.describe())
    }
}

pub fn hornich_add(f: &AnalyticFn, g: &AnalyticFn) -> AnalyticFn {
    AnalyticFn::new(HornichSum {
        f: f.clone(),
        g: g.clone(),
        opts: QuadOptions::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcore::BuiltinFamily;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn b(f: BuiltinFamily) -> AnalyticFn {
        AnalyticFn::builtin(f)
    }

    #[test]
    fn alpha_zero_is_identity() {
        let f = cesaro_transform(&TransformSpec::real(b(BuiltinFamily::Koebe), 0.0, 0.7, 0.0));
        assert_eq!(f.value(c(0.3, 0.2)).unwrap(), c(0.3, 0.2));
        assert_eq!(i_alpha(&b(BuiltinFamily::Cayley), ZERO).value(c(0.5, 0.0)).unwrap(), c(0.5, 0.0));
    }

    #[test]
    fn alexander_of_koebe() {
        let f = j_alpha(&b(BuiltinFamily::Koebe), ONE);
        assert!((f.value(c(0.5, 0.0)).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn cayley_fifth_half() {
        let f = cesaro_transform(&TransformSpec::real(b(BuiltinFamily::Cayley), 0.2, 0.5, 0.0));
        let expect = (1.0 - 0.5f64.powf(0.7)) / 0.7;
        assert!((f.value(c(0.5, 0.0)).unwrap() - expect).norm() < 1e-12);
        assert!((expect - 0.549_183).abs() < 1e-6);
    }

    #[test]
    fn j_three_halves_twostrip() {
        let f = j_alpha(&b(BuiltinFamily::Twostrip), c(1.5, 0.0));
        assert!((f.value(c(0.6, 0.0)).unwrap() - 0.75).norm() < 1e-12);
    }

    #[test]
    fn i_alpha_and_hornich() {
        let cay = b(BuiltinFamily::Cayley);
        let z = c(0.5, 0.0);
        assert!((i_alpha(&cay, c(2.0, 0.0)).value(z).unwrap() - 7.0 / 3.0).norm() < 1e-12);
        assert!((hornich_add(&cay, &cay).value(z).unwrap() - 7.0 / 3.0).norm() < 1e-12);
        let w = c(0.3, -0.6);
        assert!((i_alpha(&cay, ONE).value(w).unwrap() - cay.value(w).unwrap()).norm() < 1e-11);
        let id = b(BuiltinFamily::Identity);
        let k = b(BuiltinFamily::Koebe);
        assert!((hornich_add(&id, &k).value(w).unwrap() - k.value(w).unwrap()).norm() < 1e-11);
    }

    #[test]
    fn pre_schwarzian_limit_at_origin() {
        // C_{αβ}[koebe]: α(φ''(0)/2 + β) = α(2 + β)
        let f = CesaroFn::new(b(BuiltinFamily::Koebe), c(0.4, 0.0), c(0.5, 0.0));
        let p0 = f.pre_schwarzian(ZERO).unwrap();
        assert!((p0 - 0.4 * 2.5).norm() < 1e-12);
        let p = f.pre_schwarzian(c(1e-4, 0.0)).unwrap();
        assert!((p - p0).norm() < 1e-3);
    }
}
