//! Horizontal shears `F = H + conj(G)` with `H - G = φ` and `G' = ω H'`.

use num_complex::Complex64;

use crate::error::{finite, EvalError};
use crate::funcore::{principal_log, Analytic, AnalyticFn, Walker};
use crate::transforms::{
    antiderivative, cesaro_transform_with, integrate_segment, values_along, Pair, QuadOptions,
    TransformSpec,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn one_minus(at: Complex64, w: Complex64) -> Result<Complex64, EvalError> {
    let d = ONE - w;
    if d == ZERO {
        Err(EvalError::Pole { at })
    } else {
        Ok(d)
    }
}

/// `H' = φ'/(1 - ω)`.
#[derive(Debug, Clone)]
struct ShearH {
    phi: AnalyticFn,
    omega: AnalyticFn,
    opts: QuadOptions,
}

impl Analytic for ShearH {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(antiderivative(self, z, self.opts)?.value)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let w = self.omega.value(z)?;
        finite(z, self.phi.deriv(z)? / one_minus(z, w)?)
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let w = self.omega.value(z)?;
        finite(
            z,
            self.phi.pre_schwarzian(z)? + self.omega.deriv(z)? / one_minus(z, w)?,
        )
    }

    fn log_deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        // principal Log(1 - ω) is the continued branch while |ω| < 1
        let w = self.omega.value(z)?;
        let l = principal_log(one_minus(z, w)?)?;
        Ok(self.phi.log_deriv(z)? - l)
    }

    fn deriv_walker(&self) -> Walker<'_> {
        let mut d = self.phi.deriv_walker();
        Box::new(move |z| {
            let w = self.omega.value(z)?;
            finite(z, d(z)? / one_minus(z, w)?)
        })
    }

    fn describe(&self) -> String {
        format!("H[{}; {}]", self.phi.describe(), self.omega.describe())
    }
}

/// `G' = ω H'`.
#[derive(Debug, Clone)]
struct ShearG {
    h: AnalyticFn,
    omega: AnalyticFn,
    opts: QuadOptions,
}

impl Analytic for ShearG {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(antiderivative(self, z, self.opts)?.value)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        finite(z, self.omega.value(z)? * self.h.deriv(z)?)
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let w = self.omega.value(z)?;
        if w == ZERO {
            return Err(EvalError::CriticalPoint { at: z });
        }
        finite(z, self.omega.deriv(z)? / w + self.h.pre_schwarzian(z)?)
    }

    fn deriv_walker(&self) -> Walker<'_> {
        let mut d = self.h.deriv_walker();
        Box::new(move |z| finite(z, self.omega.value(z)? * d(z)?))
    }

    fn describe(&self) -> String {
        format!("G[{}]", self.omega.describe())
    }
}

/// `Φ = H + λG`, with `Φ' = H'(1 + λω)`.
#[derive(Debug, Clone)]
struct LambdaFn {
    h: AnalyticFn,
    omega: AnalyticFn,
    lambda: Complex64,
    opts: QuadOptions,
}

impl Analytic for LambdaFn {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(antiderivative(self, z, self.opts)?.value)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        finite(z, self.h.deriv(z)? * (ONE + self.lambda * self.omega.value(z)?))
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let factor = ONE + self.lambda * self.omega.value(z)?;
        if factor == ZERO {
            return Err(EvalError::CriticalPoint { at: z });
        }
        finite(
            z,
            self.h.pre_schwarzian(z)? + self.lambda * self.omega.deriv(z)? / factor,
        )
    }

    fn deriv_walker(&self) -> Walker<'_> {
        let mut d = self.h.deriv_walker();
        Box::new(move |z| finite(z, d(z)? * (ONE + self.lambda * self.omega.value(z)?)))
    }

    fn describe(&self) -> String {
        format!("H + ({})G", self.lambda)
    }
}

/// Harmonic map `F = H + conj(G)` obtained by shearing `φ` with dilatation `ω`.
#[derive(Debug, Clone)]
pub struct HarmonicShear {
    phi: AnalyticFn,
    omega: AnalyticFn,
    h: AnalyticFn,
    g: AnalyticFn,
    opts: QuadOptions,
}

/// Solve `H - G = φ`, `G' = ω H'` with `H(0) = G(0) = 0`.
pub fn shear_solve(phi: &AnalyticFn, omega: &AnalyticFn) -> HarmonicShear {
    shear_solve_with(phi, omega, QuadOptions::default())
}

pub fn shear_solve_with(phi: &AnalyticFn, omega: &AnalyticFn, opts: QuadOptions) -> HarmonicShear {
    let h = AnalyticFn::new(ShearH {
        phi: phi.clone(),
        omega: omega.clone(),
        opts,
    });
    let g = AnalyticFn::new(ShearG {
        h: h.clone(),
        omega: omega.clone(),
        opts,
    });
    HarmonicShear {
        phi: phi.clone(),
        omega: omega.clone(),
        h,
        g,
        opts,
    }
}

/// Shear of `rotate(C_{αβ}[φ], θ)` with dilatation `α(1+β) w`.
pub fn build_f(spec: &TransformSpec, w: &AnalyticFn) -> HarmonicShear {
    build_f_with(spec, w, QuadOptions::default())
}

pub fn build_f_with(spec: &TransformSpec, w: &AnalyticFn, opts: QuadOptions) -> HarmonicShear {
    let target = cesaro_transform_with(spec, opts);
    let omega = w.scaled(spec.alpha * (ONE + spec.beta));
    shear_solve_with(&target, &omega, opts)
}

impl HarmonicShear {
    pub fn phi(&self) -> &AnalyticFn {
        &self.phi
    }

    pub fn omega(&self) -> &AnalyticFn {
        &self.omega
    }

    pub fn h(&self) -> &AnalyticFn {
        &self.h
    }

    pub fn g(&self) -> &AnalyticFn {
        &self.g
    }

    /// `(H', G')` at `z`.
    pub fn derivs(&self, z: Complex64) -> Result<(Complex64, Complex64), EvalError> {
        let hp = self.h.deriv(z)?;
        Ok((hp, self.omega.value(z)? * hp))
    }

    /// `(H(z), G(z))` from one quadrature pass.
    pub fn parts(&self, z: Complex64) -> Result<(Complex64, Complex64), EvalError> {
        let r = integrate_segment(self.pair_walker(), ZERO, z, self.opts)?;
        Ok((r.value.0, r.value.1))
    }

    /// `F(z) = H(z) + conj(G(z))`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let (h, g) = self.parts(z)?;
        Ok(h + g.conj())
    }

    /// `F` along a polyline, by chord increments.
    pub fn eval_along(&self, points: &[Complex64]) -> Result<Vec<Complex64>, EvalError> {
        let parts: Vec<Pair> = values_along(self.pair_walker(), points, self.opts)?;
        Ok(parts.into_iter().map(|p| p.0 + p.1.conj()).collect())
    }

    fn pair_walker(&self) -> impl FnMut(Complex64) -> Result<Pair, EvalError> + '_ {
        let mut d = self.h.deriv_walker();
        move |z| {
            let hp = d(z)?;
            Ok(Pair(hp, self.omega.value(z)? * hp))
        }
    }

    /// `|H'|^2 - |G'|^2`.
    pub fn jacobian(&self, z: Complex64) -> Result<f64, EvalError> {
        let (hp, gp) = self.derivs(z)?;
        Ok(hp.norm_sqr() - gp.norm_sqr())
    }

    /// `Φ = H + λG`.
    pub fn lambda_family(&self, lambda: Complex64) -> AnalyticFn {
        AnalyticFn::new(LambdaFn {
            h: self.h.clone(),
            omega: self.omega.clone(),
            lambda,
            opts: self.opts,
        })
    }

    /// Largest `|ω|` over `points`.
    pub fn max_dilatation(&self, points: &[Complex64]) -> Result<f64, EvalError> {
        points
            .iter()
            .try_fold(0.0f64, |m, &z| Ok(m.max(self.omega.value(z)?.norm())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcore::BuiltinFamily;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_dilatation() {
        let k = AnalyticFn::builtin(BuiltinFamily::Koebe);
        let s = shear_solve(&k, &AnalyticFn::parse("0").unwrap());
        let z = c(0.4, -0.3);
        assert!((s.eval(z).unwrap() - k.value(z).unwrap()).norm() < 1e-12);
        assert_eq!(s.g().deriv(z).unwrap(), ZERO);
    }

    #[test]
    fn example_closed_form_h() {
        // φ' = (1-ζ)^{-a}, ω = -a ζ with a = α(1+β) = 0.3
        let s = build_f(
            &TransformSpec::real(AnalyticFn::builtin(BuiltinFamily::Cayley), 0.2, 0.5, 0.0),
            &AnalyticFn::parse("-z").unwrap(),
        );
        let z = c(0.3, 0.5);
        let a = 0.3;
        let expect = (ONE - z).powf(-a) / (ONE + a * z);
        assert!((s.h().deriv(z).unwrap() - expect).norm() < 1e-13);
        assert!((s.g().deriv(z).unwrap() + a * z * expect).norm() < 1e-13);
    }

    #[test]
    fn recombines_and_lambda() {
        let k = AnalyticFn::builtin(BuiltinFamily::Koebe);
        let s = build_f(&TransformSpec::real(k, 1.0, 1.0, 0.0), &AnalyticFn::parse("z/2").unwrap());
        let z = c(0.5, 0.0);
        let (h, g) = s.parts(z).unwrap();
        assert!((h - g - s.phi().value(z).unwrap()).norm() < 1e-10);
        assert_eq!(s.jacobian(ZERO).unwrap(), 1.0);
        // Φ'_{1} / C'[koebe] = (1+z)/(1-z)
        let ratio = s.lambda_family(ONE).deriv(z).unwrap() / s.phi().deriv(z).unwrap();
        assert!((ratio - 3.0).norm() < 1e-12);
        let minus = s.lambda_family(-ONE);
        assert!((minus.value(z).unwrap() - s.phi().value(z).unwrap()).norm() < 1e-10);
    }
}
