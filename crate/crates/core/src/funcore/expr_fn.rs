use std::sync::OnceLock;

use num_complex::Complex64;

use super::{Analytic, AnalyticFn};
use crate::error::{finite, EvalError};
use crate::exprlang::{differentiate, Expr};

/// Function given by an expression; first and second derivatives are symbolic.
#[derive(Debug)]
pub struct ExprFn {
    expr: Expr,
    d1: Expr,
    d2: Expr,
    derivative: OnceLock<AnalyticFn>,
}

impl ExprFn {
    pub fn new(expr: Expr) -> Self {
        let d1 = differentiate(&expr);
        let d2 = differentiate(&d1);
        ExprFn {
            expr,
            d1,
            d2,
            derivative: OnceLock::new(),
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.d1
    }
}

impl Analytic for ExprFn {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.expr.eval(z)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.d1.eval(z)
    }

    fn second_deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.d2.eval(z)
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let d1 = self.d1.eval(z)?;
        if d1 == Complex64::new(0.0, 0.0) {
            return Err(EvalError::CriticalPoint { at: z });
        }
        finite(z, self.d2.eval(z)? / d1)
    }

    fn derivative_fn(&self) -> Option<AnalyticFn> {
        Some(
            self.derivative
                .get_or_init(|| AnalyticFn::new(ExprFn::new(self.d1.clone())))
                .clone(),
        )
    }

    fn describe(&self) -> String {
        self.expr.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprlang::parse;

    #[test]
    fn derivative_is_cached() {
        let f = AnalyticFn::parse("z/(1-z)").unwrap();
        let a = f.derivative();
        let b = f.derivative();
        assert!(a.ptr_eq(&b));
        let z = Complex64::new(0.5, 0.0);
        assert!((a.value(z).unwrap() - 4.0).norm() < 1e-14);
    }

    #[test]
    fn critical_point() {
        let f = ExprFn::new(parse("z^2").unwrap());
        assert!(matches!(
            f.pre_schwarzian(Complex64::new(0.0, 0.0)),
            Err(EvalError::CriticalPoint { .. })
        ));
    }

    #[test]
    fn tracked_log_ratio_crosses_principal_cut() {
        // log(f(z)/z) = 4iz exactly; the imaginary part passes pi
        let f = AnalyticFn::parse("z*exp(4i*z)").unwrap();
        let z = Complex64::new(0.95, 0.0);
        let l = f.log_ratio(z).unwrap();
        assert!((l - Complex64::new(0.0, 3.8)).norm() < 1e-12, "{l}");
    }
}
