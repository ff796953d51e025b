use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{principal_log, Analytic, AnalyticFn, Walker};
use crate::error::{finite, EvalError};
use crate::exprlang::parse;

/// Closed-form test functions, all normalized (`f(0) = 0`, `f'(0) = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinFamily {
    Identity,
    /// `z/(1-z)`, onto the half-plane `Re w > -1/2`.
    Cayley,
    /// `z/(1-z)^2`.
    Koebe,
    /// `z/(1-z^2)`, onto a two-slit plane; convex in the imaginary direction.
    Twostrip,
    /// `-log(1-z)`.
    Logmap,
}

impl BuiltinFamily {
    pub const ALL: [BuiltinFamily; 5] = [
        BuiltinFamily::Identity,
        BuiltinFamily::Cayley,
        BuiltinFamily::Koebe,
        BuiltinFamily::Twostrip,
        BuiltinFamily::Logmap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinFamily::Identity => "identity",
            BuiltinFamily::Cayley => "cayley",
            BuiltinFamily::Koebe => "koebe",
            BuiltinFamily::Twostrip => "twostrip",
            BuiltinFamily::Logmap => "logmap",
        }
    }

    /// Source in the expression language.
    pub fn source(self) -> &'static str {
        match self {
            BuiltinFamily::Identity => "z",
            BuiltinFamily::Cayley => "z/(1 - z)",
            BuiltinFamily::Koebe => "z/(1 - z)^2",
            BuiltinFamily::Twostrip => "z/(1 - z^2)",
            BuiltinFamily::Logmap => "-log(1 - z)",
        }
    }

    /// Known order of starlikeness, when the family has a standard one.
    pub fn starlike_order(self) -> Option<f64> {
        match self {
            BuiltinFamily::Identity | BuiltinFamily::Cayley => Some(0.5),
            BuiltinFamily::Koebe | BuiltinFamily::Twostrip => Some(0.0),
            BuiltinFamily::Logmap => None,
        }
    }
}

impl fmt::Display for BuiltinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinFamily::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown builtin function `{s}`"))
    }
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn nonzero(at: Complex64, d: Complex64) -> Result<Complex64, EvalError> {
    if d == Complex64::new(0.0, 0.0) {
        Err(EvalError::Pole { at })
    } else {
        Ok(d)
    }
}

fn log_at(at: Complex64, w: Complex64) -> Result<Complex64, EvalError> {
    principal_log(w).map_err(|_| EvalError::BranchPoint { at, what: "log(0)" })
}

/// `-log(1-z)/z`, by its Taylor series near the origin.
fn logmap_ratio(z: Complex64) -> Result<Complex64, EvalError> {
    if z.norm() < 0.1 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..24).rev() {
            acc = acc * z + 1.0 / (k as f64 + 1.0);
        }
        return Ok(acc);
    }
    Ok(-log_at(z, ONE - z)? / z)
}

impl Analytic for BuiltinFamily {
    fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let v = match self {
            BuiltinFamily::Identity => z,
            BuiltinFamily::Cayley => z / nonzero(z, ONE - z)?,
            BuiltinFamily::Koebe => z / nonzero(z, (ONE - z) * (ONE - z))?,
            BuiltinFamily::Twostrip => z / nonzero(z, ONE - z * z)?,
            BuiltinFamily::Logmap => -log_at(z, ONE - z)?,
        };
        finite(z, v)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let v = match self {
            BuiltinFamily::Identity => ONE,
            BuiltinFamily::Cayley => ONE / nonzero(z, (ONE - z).powi(2))?,
            BuiltinFamily::Koebe => (ONE + z) / nonzero(z, (ONE - z).powi(3))?,
            BuiltinFamily::Twostrip => (ONE + z * z) / nonzero(z, (ONE - z * z).powi(2))?,
            BuiltinFamily::Logmap => ONE / nonzero(z, ONE - z)?,
        };
        finite(z, v)
    }

    fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let crit = |d: Complex64| {
            if d == Complex64::new(0.0, 0.0) {
                Err(EvalError::CriticalPoint { at: z })
            } else {
                Ok(d)
            }
        };
        let v = match self {
            BuiltinFamily::Identity => Complex64::new(0.0, 0.0),
            BuiltinFamily::Cayley => 2.0 / nonzero(z, ONE - z)?,
            BuiltinFamily::Koebe => ONE / crit(ONE + z)? + 3.0 / nonzero(z, ONE - z)?,
            BuiltinFamily::Twostrip => {
                2.0 * z / crit(ONE + z * z)? + 4.0 * z / nonzero(z, ONE - z * z)?
            }
            BuiltinFamily::Logmap => ONE / nonzero(z, ONE - z)?,
        };
        finite(z, v)
    }

    fn log_ratio(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let v = match self {
            BuiltinFamily::Identity => Complex64::new(0.0, 0.0),
            BuiltinFamily::Cayley => -log_at(z, ONE - z)?,
            BuiltinFamily::Koebe => -2.0 * log_at(z, ONE - z)?,
            BuiltinFamily::Twostrip => -log_at(z, ONE - z * z)?,
            // -log(1-z)/z has positive real part in the disk
            BuiltinFamily::Logmap => log_at(z, logmap_ratio(z)?)?,
        };
        finite(z, v)
    }

    fn log_deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let v = match self {
            BuiltinFamily::Identity => Complex64::new(0.0, 0.0),
            BuiltinFamily::Cayley => -2.0 * log_at(z, ONE - z)?,
            BuiltinFamily::Koebe => log_at(z, ONE + z)? - 3.0 * log_at(z, ONE - z)?,
            BuiltinFamily::Twostrip => log_at(z, ONE + z * z)? - 2.0 * log_at(z, ONE - z * z)?,
            BuiltinFamily::Logmap => -log_at(z, ONE - z)?,
        };
        finite(z, v)
    }

    fn log_ratio_walker(&self) -> Walker<'_> {
        Box::new(move |z| self.log_ratio(z))
    }

    fn log_deriv_walker(&self) -> Walker<'_> {
        Box::new(move |z| self.log_deriv(z))
    }

    fn derivative_fn(&self) -> Option<AnalyticFn> {
        let expr = parse(self.source()).expect("builtin source parses");
        Some(AnalyticFn::from_expr(crate::exprlang::differentiate(&expr)))
    }

    fn describe(&self) -> String {
        self.name().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcore::ExprFn;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_forms_match_expressions() {
        let pts = [c(0.0, 0.0), c(0.3, 0.1), c(-0.7, 0.2), c(0.05, -0.02), c(0.1, 0.9)];
        for fam in BuiltinFamily::ALL {
            let e = ExprFn::new(parse(fam.source()).unwrap());
            for z in pts {
                let tol = 1e-12 * fam.deriv(z).unwrap().norm().max(1.0);
                assert!((fam.value(z).unwrap() - e.value(z).unwrap()).norm() < tol, "{fam} value");
                assert!((fam.deriv(z).unwrap() - e.deriv(z).unwrap()).norm() < tol, "{fam} deriv");
                let p = fam.pre_schwarzian(z).unwrap();
                assert!((p - e.pre_schwarzian(z).unwrap()).norm() < 1e-10 * p.norm().max(1.0), "{fam} pre");
            }
        }
    }

    #[test]
    fn logs_match_tracked_branches() {
        #[derive(Debug)]
        struct Plain(BuiltinFamily);
        impl Analytic for Plain {
            fn value(&self, z: Complex64) -> Result<Complex64, EvalError> {
                self.0.value(z)
            }
            fn deriv(&self, z: Complex64) -> Result<Complex64, EvalError> {
                self.0.deriv(z)
            }
            fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, EvalError> {
                self.0.pre_schwarzian(z)
            }
            fn describe(&self) -> String {
                String::new()
            }
        }
        for fam in BuiltinFamily::ALL {
            let p = Plain(fam);
            for z in [c(0.9, 0.3), c(-0.95, 0.0), c(0.0, -0.99), c(0.02, 0.01)] {
                assert!((p.log_ratio(z).unwrap() - fam.log_ratio(z).unwrap()).norm() < 1e-11, "{fam}");
                assert!((p.log_deriv(z).unwrap() - fam.log_deriv(z).unwrap()).norm() < 1e-11, "{fam}");
            }
        }
    }

    #[test]
    fn singularities_are_reported() {
        assert!(matches!(BuiltinFamily::Cayley.value(ONE), Err(EvalError::Pole { .. })));
        assert!(matches!(
            BuiltinFamily::Koebe.pre_schwarzian(-ONE),
            Err(EvalError::CriticalPoint { .. })
        ));
        assert!(BuiltinFamily::Logmap.value(ONE).is_err());
    }

    #[test]
    fn names_round_trip() {
        for fam in BuiltinFamily::ALL {
            assert_eq!(fam.name().parse::<BuiltinFamily>().unwrap(), fam);
        }
        assert!("mobius".parse::<BuiltinFamily>().is_err());
    }
}
