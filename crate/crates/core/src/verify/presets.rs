//! Shear families with closed-form transforms, used as oracles.
//!
//! Each family has `φ(ζ)/ζ = (1-ζ)^{-k}`, so `C_{αβ}[φ]' = (1-ζ)^{-a}` with
//! `a = α(k+β)` and `C_{αβ}[φ] = (1 - (1-z)^{1-a})/(1-a)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::funcore::{rotate_fn, AnalyticFn, BuiltinFamily};
use crate::shear::{build_f, HarmonicShear};
use crate::transforms::TransformSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `φ = z/(1-z)`, `w = -z`.
    CayleyNegZ,
    /// `φ = z`, `w = (2z+1)/(2+z)`.
    IdentityMobius,
    /// `φ = z/(1-z)^2`, `w = cos(πc) z/2`.
    KoebeCosine,
    /// `φ = z/(1-z)`, `w = z/2`.
    CayleyHalf,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::CayleyNegZ, Preset::IdentityMobius, Preset::KoebeCosine, Preset::CayleyHalf];

    pub fn name(self) -> &'static str {
        match self {
            Preset::CayleyNegZ => "cayley-neg-z",
            Preset::IdentityMobius => "identity-mobius",
            Preset::KoebeCosine => "koebe-cosine",
            Preset::CayleyHalf => "cayley-half",
        }
    }

    pub fn phi(self) -> BuiltinFamily {
        match self {
            Preset::CayleyNegZ | Preset::CayleyHalf => BuiltinFamily::Cayley,
            Preset::IdentityMobius => BuiltinFamily::Identity,
            Preset::KoebeCosine => BuiltinFamily::Koebe,
        }
    }

    /// Source of the dilatation generator `w`.
    pub fn w_source(self, c: f64) -> String {
        match self {
            Preset::CayleyNegZ => "-z".into(),
            Preset::IdentityMobius => "(2*z + 1)/(2 + z)".into(),
            Preset::KoebeCosine => format!("({})*z/2", (std::f64::consts::PI * c).cos()),
            Preset::CayleyHalf => "z/2".into(),
        }
    }

    pub fn w(self, c: f64) -> AnalyticFn {
        AnalyticFn::parse(&self.w_source(c)).expect("preset source parses")
    }

    /// Power of `1/(1-ζ)` in `φ(ζ)/ζ`.
    fn k(self) -> f64 {
        match self {
            Preset::IdentityMobius => 0.0,
            Preset::CayleyNegZ | Preset::CayleyHalf => 1.0,
            Preset::KoebeCosine => 2.0,
        }
    }

    /// `a` with `C_{αβ}[φ]' = (1-ζ)^{-a}`.
    pub fn exponent(self, alpha: f64, beta: f64) -> f64 {
        alpha * (self.k() + beta)
    }

    /// Closed form of `rotate(C_{αβ}[φ], θ)`.
    pub fn closed_form(self, alpha: f64, beta: f64, theta: f64) -> AnalyticFn {
        rotate_fn(&power_closed_form(self.exponent(alpha, beta)), theta)
    }

    pub fn spec(self, alpha: f64, beta: f64, theta: f64) -> TransformSpec {
        TransformSpec::real(AnalyticFn::builtin(self.phi()), alpha, beta, theta)
    }

    pub fn shear(self, alpha: f64, beta: f64, theta: f64, c: f64) -> HarmonicShear {
        build_f(&self.spec(alpha, beta, theta), &self.w(c))
    }

    /// Closed-form `H'` at θ = 0: `(1-z)^{-a} / (1 - α(1+β) w(z))`.
    pub fn h_prime(self, alpha: f64, beta: f64, c: f64, z: Complex64) -> Complex64 {
        let a = self.exponent(alpha, beta);
        let s = alpha * (1.0 + beta);
        let w = match self {
            Preset::CayleyNegZ => -z,
            Preset::IdentityMobius => (2.0 * z + 1.0) / (2.0 + z),
            Preset::KoebeCosine => (std::f64::consts::PI * c).cos() * z / 2.0,
            Preset::CayleyHalf => z / 2.0,
        };
        (1.0 - z).powf(-a) / (1.0 - s * w)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset `{s}`"))
    }
}

/// `∫_0^z (1-ζ)^{-a} dζ` in closed form, as an expression.
pub fn power_closed_form(a: f64) -> AnalyticFn {
    let src = if a == 1.0 {
        "-log(1 - z)".to_string()
    } else {
        let e = 1.0 - a;
        format!("(1 - (1 - z)^({e}))/({e})")
    };
    AnalyticFn::parse(&src).expect("closed form parses")
}
