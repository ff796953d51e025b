//! JSON report written by `geoshear check`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use crate::criteria::bounds::BoundResult;
use crate::criteria::{CheckReport, Verdict};
use crate::verify::{BoundaryReport, CompareReport, DirectionReport, InjectivityReport};

pub const SCHEMA_VERSION: u32 = 1;

/// A functional evaluated at a user-requested point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub z: Complex64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    /// Absent when the check failed to run (see `error`).
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injectivity: Option<InjectivityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<DirectionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundResult>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<Probe>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub seconds: f64,
}

impl CheckEntry {
    pub fn new(name: &str) -> Self {
        CheckEntry {
            name: name.to_string(),
            verdict: None,
            report: None,
            injectivity: None,
            boundary: None,
            direction: None,
            compare: None,
            bounds: None,
            probes: Vec::new(),
            notes: Vec::new(),
            error: None,
            seconds: 0.0,
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let verdict = match (self.verdict, &self.error) {
            (Some(v), _) => v.to_string(),
            (None, Some(e)) => format!("error: {e}"),
            (None, None) => "not run".into(),
        };
        let mut s = format!("{:<16} {verdict}", self.name);
        if let Some(r) = &self.report {
            let what = match r.kind {
                crate::criteria::ExtremumKind::Sup => "sup",
                crate::criteria::ExtremumKind::Inf => "inf",
            };
            s += &format!("  {what} = {:.9} at {:.6} (bound {} {})", r.sup_value, r.argmax, r.bound.relation, r.bound.value);
        }
        if let Some(i) = &self.injectivity {
            match &i.collision {
                Some(c) => s += &format!(
                    "  collision z1 = {:.9}, z2 = {:.9}, |f(z1)-f(z2)| = {:.2e}",
                    c.z1, c.z2, c.image_distance
                ),
                None => s += &format!("  no collision found among {} samples (not a proof)", i.samples),
            }
        }
        if let Some(b) = &self.boundary {
            match &b.intersection {
                Some(p) => s += &format!("  segments {} and {} cross at {:.6}", p.first, p.second, p.point),
                None => s += &format!("  simple closed polyline ({} segments)", b.segments),
            }
        }
        if let Some(d) = &self.direction {
            s += &format!("  max crossings {} over {} levels ({} skipped)", d.max_crossings, d.levels, d.skipped_levels);
        }
        if let Some(c) = &self.compare {
            s += &format!("  max error {:.3e} over {} points", c.max_error, c.samples);
        }
        for p in &self.probes {
            s += &format!("\n    at z = {}: {:.12}", p.z, p.value);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub scenario: Scenario,
    pub checks: Vec<CheckEntry>,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub exit_code: i32,
    pub wall_time_s: f64,
}
