use num_complex::Complex64;
use thiserror::Error;

use crate::exprlang::ParseError;

/// Failure while evaluating an analytic function or one of its derivatives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at z = {at}")]
    Pole { at: Complex64 },
    #[error("branch point hit at z = {at} ({what})")]
    BranchPoint { at: Complex64, what: &'static str },
    #[error("derivative vanishes at z = {at}")]
    CriticalPoint { at: Complex64 },
    #[error("branch continuation failed near z = {at}: {reason}")]
    BranchTracking { at: Complex64, reason: &'static str },
    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate}, error {error:e}, {nodes} nodes)")]
    Convergence {
        estimate: Complex64,
        error: f64,
        tol: f64,
        nodes: usize,
    },
    #[error("non-finite value at z = {at}")]
    NonFinite { at: Complex64 },
    #[error("{what}: |{value}| >= 1 at z = {at}")]
    NotSelfMap {
        at: Complex64,
        value: f64,
        what: &'static str,
    },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Rejected parameter combination.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("parameter `{name}` = {value} out of range: {expected}")]
pub struct ParamError {
    pub name: &'static str,
    pub value: f64,
    pub expected: &'static str,
}

/// Crate-level error used by the command-line layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn finite(at: Complex64, v: Complex64) -> Result<Complex64, EvalError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { at })
    }
}
