//! Parameter bounds of the univalence theorems, as printed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParamError;

/// `α ≤ 1/(2(2+|β|))`: Becker-type bound for `C_{αβ}[φ]`, φ univalent.
pub fn thm31(beta: f64) -> f64 {
    1.0 / (2.0 * (2.0 + beta.abs()))
}

/// `α(β + 2(1-δ)) ≤ 3`: `C^θ_{αβ}[φ]` convex in one direction for φ starlike of order δ.
pub fn thm34(alpha: f64, beta: f64, delta: f64) -> bool {
    alpha * (beta + 2.0 * (1.0 - delta)) <= 3.0
}

/// `α(β + 2(1-δ)) ≤ 2` and `α(1+β)‖w‖ < 1/3`.
pub fn thm37(alpha: f64, beta: f64, delta: f64, norm_w: f64) -> bool {
    alpha * (beta + 2.0 * (1.0 - delta)) <= 2.0 && alpha * (1.0 + beta) * norm_w < 1.0 / 3.0
}

/// Stable univalence: `α ≤ 1/(2(2 + β + (1+β)‖w*‖(1+‖w‖)))`.
pub fn shu(beta: f64, norm_w: f64, norm_w_star: f64) -> f64 {
    1.0 / (2.0 * (2.0 + beta + (1.0 + beta) * norm_w_star * (1.0 + norm_w)))
}

/// `α(1+β) ≤ 1` and `α(2(1-δ) + β) ≤ -2c`.
pub fn ctc(alpha: f64, beta: f64, delta: f64, c: f64) -> bool {
    alpha * (1.0 + beta) <= 1.0 && alpha * (2.0 * (1.0 - delta) + beta) <= -2.0 * c
}

/// `α ≤ 1/((1+β)√2)`.
pub fn shcc(beta: f64) -> f64 {
    1.0 / ((1.0 + beta) * std::f64::consts::SQRT_2)
}

/// `2 arcsin(r α (1+β))`.
pub fn arcsin_bound(r: f64, alpha: f64, beta: f64) -> Result<f64, ParamError> {
    let x = r * alpha * (1.0 + beta);
    if !(-1.0..=1.0).contains(&x) {
        return Err(ParamError {
            name: "r*alpha*(1+beta)",
            value: x,
            expected: "in [-1, 1]",
        });
    }
    Ok(2.0 * x.asin())
}

/// Which branch of a case-split bound applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LifCase {
    /// `β ≥ 1`.
    BetaAtLeastOne,
    /// `0 ≤ β < 1` with the case (a) hypothesis.
    CaseA,
    /// `0 ≤ β < 1` without it.
    CaseB,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifBound {
    pub alpha_max: f64,
    pub case: LifCase,
    pub formula: &'static str,
}

fn lif_case(beta: f64, norm_w: f64, norm_w_star: f64) -> LifCase {
    if beta >= 1.0 {
        LifCase::BetaAtLeastOne
    } else if beta + 2.0 * (1.0 + beta) * norm_w_star * (1.0 + norm_w) <= 2.0 * (1.0 - beta) {
        LifCase::CaseA
    } else {
        LifCase::CaseB
    }
}

/// Univalence bound for φ in a linear invariant family of order γ.
pub fn lif_univ(gamma: f64, beta: f64, norm_w: f64, norm_w_star: f64) -> LifBound {
    let case = lif_case(beta, norm_w, norm_w_star);
    let k = (1.0 + beta) * norm_w_star * (1.0 + norm_w);
    match case {
        LifCase::CaseA => {
            let s = beta + k;
            LifBound {
                alpha_max: 4.0 * (1.0 - beta)
                    / (4.0 * (2.0 * gamma + 1.0) * (1.0 - beta)
                        + s * s
                        + 4.0 * (1.0 - beta * beta) * norm_w_star),
                case,
                formula: "alpha <= 4(1-beta)/(4(2gamma+1)(1-beta) + (beta+K)^2 + 4(1-beta^2)||w*||), K = (1+beta)||w*||(1+||w||)",
            }
        }
        _ => LifBound {
            alpha_max: 1.0 / (2.0 * gamma + 2.0 * beta + k),
            case,
            formula: "alpha <= 1/(2gamma + 2beta + (1+beta)||w*||(1+||w||))",
        },
    }
}

/// Stable univalence bound for φ in a linear invariant family of order γ.
pub fn lif_shu(gamma: f64, beta: f64, norm_w: f64, norm_w_star: f64) -> LifBound {
    let case = lif_case(beta, norm_w, norm_w_star);
    let k = (1.0 + beta) * norm_w_star * (1.0 + norm_w);
    match case {
        LifCase::CaseA => {
            let s = beta + 2.0 * k;
            LifBound {
                alpha_max: 4.0 * (1.0 - beta) / (4.0 * (2.0 * gamma + 1.0) * (1.0 - beta) + s * s),
                case,
                formula: "alpha <= 4(1-beta)/(4(2gamma+1)(1-beta) + (beta+2K)^2), K = (1+beta)||w*||(1+||w||)",
            }
        }
        _ => LifBound {
            alpha_max: 1.0 / (2.0 * (gamma + beta + k)),
            case,
            formula: "alpha <= 1/(2(gamma + beta + (1+beta)||w*||(1+||w||)))",
        },
    }
}

/// Theorems with a bound calculator, by command-line name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Thm31,
    Thm34,
    Thm37,
    LifUniv,
    Shu,
    LifShu,
    Ctc,
    Shcc,
    Arcsin,
}

impl Theorem {
    pub const ALL: [Theorem; 9] = [
        Theorem::Thm31,
        Theorem::Thm34,
        Theorem::Thm37,
        Theorem::LifUniv,
        Theorem::Shu,
        Theorem::LifShu,
        Theorem::Ctc,
        Theorem::Shcc,
        Theorem::Arcsin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Thm31 => "thm31",
            Theorem::Thm34 => "thm34",
            Theorem::Thm37 => "thm37",
            Theorem::LifUniv => "lif-univ",
            Theorem::Shu => "shu",
            Theorem::LifShu => "lif-shu",
            Theorem::Ctc => "ctc",
            Theorem::Shcc => "shcc",
            Theorem::Arcsin => "arcsin",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('_', "-");
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == norm)
            .ok_or_else(|| {
                let names: Vec<_> = Theorem::ALL.iter().map(|t| t.name()).collect();
                format!("unknown theorem `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Inputs shared by all calculators; unused ones are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub gamma: f64,
    pub c: f64,
    pub r: f64,
    pub norm_w: f64,
    pub norm_w_star: f64,
}

impl Default for BoundInputs {
    fn default() -> Self {
        BoundInputs {
            alpha: 0.0,
            beta: 0.0,
            delta: 0.0,
            gamma: 2.0,
            c: 0.0,
            r: 1.0,
            norm_w: 1.0,
            norm_w_star: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub theorem: Theorem,
    /// Largest admissible α, for calculators that give one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_max: Option<f64>,
    /// Whether the supplied α satisfies the theorem's condition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<LifCase>,
    pub formula: String,
}

impl BoundResult {
    /// The headline number: α bound, computed value, or 1/0 for a condition.
    pub fn headline(&self) -> f64 {
        self.alpha_max
            .or(self.value)
            .unwrap_or(if self.holds == Some(true) { 1.0 } else { 0.0 })
    }
}

fn check_range(name: &'static str, value: f64, ok: bool, expected: &'static str) -> Result<(), ParamError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ParamError { name, value, expected })
    }
}

fn validate(t: Theorem, i: &BoundInputs) -> Result<(), ParamError> {
    check_range("alpha", i.alpha, i.alpha >= 0.0, ">= 0")?;
    if t != Theorem::Thm31 {
        check_range("beta", i.beta, i.beta >= 0.0, ">= 0")?;
    }
    match t {
        Theorem::Thm34 | Theorem::Thm37 | Theorem::Ctc => {
            check_range("delta", i.delta, (0.0..1.0).contains(&i.delta), "in [0, 1)")?
        }
        Theorem::LifUniv | Theorem::LifShu => check_range("gamma", i.gamma, i.gamma >= 1.0, ">= 1")?,
        _ => {}
    }
    if t == Theorem::Ctc {
        check_range("c", i.c, i.c > -0.5 && i.c <= 0.0, "in (-1/2, 0]")?;
    }
    if matches!(t, Theorem::Thm37 | Theorem::Shu | Theorem::LifUniv | Theorem::LifShu) {
        check_range("norm_w", i.norm_w, (0.0..=1.0).contains(&i.norm_w), "in [0, 1]")?;
    }
    if matches!(t, Theorem::Shu | Theorem::LifUniv | Theorem::LifShu) {
        check_range("norm_w_star", i.norm_w_star, (0.0..=1.0).contains(&i.norm_w_star), "in [0, 1]")?;
    }
    if t == Theorem::Arcsin {
        check_range("r", i.r, (0.0..=1.0).contains(&i.r), "in [0, 1]")?;
    }
    Ok(())
}

/// Evaluate one calculator after range validation.
pub fn evaluate(t: Theorem, i: &BoundInputs) -> Result<BoundResult, ParamError> {
    validate(t, i)?;
    let mut r = BoundResult {
        theorem: t,
        alpha_max: None,
        holds: None,
        value: None,
        case: None,
        formula: String::new(),
    };
    match t {
        Theorem::Thm31 => {
            r.alpha_max = Some(thm31(i.beta));
            r.formula = "alpha <= 1/(2(2+|beta|))".into();
        }
        Theorem::Thm34 => {
            r.holds = Some(thm34(i.alpha, i.beta, i.delta));
            r.alpha_max = Some(3.0 / (i.beta + 2.0 * (1.0 - i.delta)));
            r.formula = "alpha(beta + 2(1-delta)) <= 3".into();
        }
        Theorem::Thm37 => {
            r.holds = Some(thm37(i.alpha, i.beta, i.delta, i.norm_w));
            r.formula = "alpha(beta + 2(1-delta)) <= 2 and alpha(1+beta)||w|| < 1/3".into();
        }
        Theorem::LifUniv | Theorem::LifShu => {
            let b = if t == Theorem::LifUniv {
                lif_univ(i.gamma, i.beta, i.norm_w, i.norm_w_star)
            } else {
                lif_shu(i.gamma, i.beta, i.norm_w, i.norm_w_star)
            };
            r.alpha_max = Some(b.alpha_max);
            r.holds = Some(i.alpha <= b.alpha_max);
            r.case = Some(b.case);
            r.formula = b.formula.into();
        }
        Theorem::Shu => {
            let a = shu(i.beta, i.norm_w, i.norm_w_star);
            r.alpha_max = Some(a);
            r.holds = Some(i.alpha <= a);
            r.formula = "alpha <= 1/(2(2 + beta + (1+beta)||w*||(1+||w||)))".into();
        }
        Theorem::Ctc => {
            r.holds = Some(ctc(i.alpha, i.beta, i.delta, i.c));
            r.alpha_max = Some((1.0 / (1.0 + i.beta)).min(-2.0 * i.c / (2.0 * (1.0 - i.delta) + i.beta)));
            r.formula = "alpha(1+beta) <= 1 and alpha(2(1-delta) + beta) <= -2c".into();
        }
        Theorem::Shcc => {
            r.alpha_max = Some(shcc(i.beta));
            r.holds = Some(i.alpha <= shcc(i.beta));
            r.formula = "alpha <= 1/((1+beta) sqrt 2)".into();
        }
        Theorem::Arcsin => {
            r.value = Some(arcsin_bound(i.r, i.alpha, i.beta)?);
            r.formula = "2 arcsin(r alpha (1+beta))".into();
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn table_values() {
        assert!(rel(thm31(0.0), 0.25) <= 1e-15);
        assert!(rel(thm31(1.0), 1.0 / 6.0) <= 1e-15);
        assert!(rel(shcc(0.0), 1.0 / 2f64.sqrt()) <= 1e-15);
        assert!(rel(shcc(1.0), 1.0 / (2.0 * 2f64.sqrt())) <= 1e-15);
        assert!(rel(shu(1.0, 1.0, 1.0), 1.0 / 14.0) <= 1e-15);
    }

    #[test]
    fn arcsin_values() {
        assert!((arcsin_bound(1.0, 1.0 / 2f64.sqrt(), 0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(arcsin_bound(0.7, 0.0, 3.0).unwrap(), 0.0);
        assert!((arcsin_bound(1.0, 0.25, 1.0).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!(arcsin_bound(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn lif_cases() {
        // β ≥ 1: 1/(2γ + 2β + (1+β)‖w*‖(1+‖w‖))
        let b = lif_univ(2.0, 1.0, 1.0, 1.0);
        assert_eq!(b.case, LifCase::BetaAtLeastOne);
        assert!(rel(b.alpha_max, 1.0 / 10.0) < 1e-15);
        // β = 0, ‖w*‖ = 0: case (a), 4/(4(2γ+1)) = 1/(2γ+1)
        let b = lif_univ(2.0, 0.0, 0.5, 0.0);
        assert_eq!(b.case, LifCase::CaseA);
        assert!(rel(b.alpha_max, 0.2) < 1e-15);
        let b = lif_shu(2.0, 0.5, 1.0, 1.0);
        assert_eq!(b.case, LifCase::CaseB);
        assert!(rel(b.alpha_max, 1.0 / (2.0 * (2.0 + 0.5 + 3.0))) < 1e-15);
    }

    #[test]
    fn validation() {
        let i = BoundInputs { c: -0.6, ..Default::default() };
        assert!(evaluate(Theorem::Ctc, &i).is_err());
        let i = BoundInputs { beta: -0.5, ..Default::default() };
        assert!(evaluate(Theorem::Shcc, &i).is_err());
        assert!(evaluate(Theorem::Thm31, &i).is_ok());
        assert_eq!("lif_shu".parse::<Theorem>().unwrap(), Theorem::LifShu);
    }
}
