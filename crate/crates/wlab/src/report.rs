//! Run configuration and deterministic JSON verification reports shared by
//! the command-line front end and the integration suites.

use crate::{Result, WlabError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Scan windows for the parameterized suites.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScanRanges {
    pub c_min: f64,
    pub c_max: f64,
    pub c_step: f64,
    pub genus_min: u32,
    pub genus_max: u32,
}

impl Default for ScanRanges {
    fn default() -> Self {
        ScanRanges {
            c_min: 3f64.sqrt() / 2.0,
            c_max: 8.0,
            c_step: 0.01,
            genus_min: 2,
            genus_max: 6,
        }
    }
}

/// Where artifacts go; `None` means stdout only.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct OutputPaths {
    pub report: Option<String>,
    pub mesh: Option<String>,
}

/// Everything that determines a run. Two runs with equal configs must emit
/// byte-identical reports.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    /// Named tolerances; a BTreeMap keeps serialization order fixed.
    pub tolerances: BTreeMap<String, f64>,
    pub scan: ScanRanges,
    pub output: OutputPaths,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut tolerances = BTreeMap::new();
        for (name, value) in [
            ("closed_vs_numeric", 1e-6),
            ("identity", 1e-8),
            ("margin_floor", 1e-3),
            ("period_cross_check", 1e-7),
            ("residue", 1e-8),
            ("symmetry", 1e-10),
        ] {
            tolerances.insert(name.to_string(), value);
        }
        RunConfig {
            tolerances,
            scan: ScanRanges::default(),
            output: OutputPaths::default(),
            seed: 42,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, &v) in &self.tolerances {
            if !(v > 0.0) || !v.is_finite() {
                return Err(WlabError::InvalidInput(format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        let s = &self.scan;
        if !(s.c_min < s.c_max) || !(s.c_step > 0.0) {
            return Err(WlabError::InvalidInput(format!(
                "bad scan window [{}, {}] step {}",
                s.c_min, s.c_max, s.c_step
            )));
        }
        if s.genus_min < 2 || s.genus_max < s.genus_min {
            return Err(WlabError::InvalidInput(format!(
                "bad genus window [{}, {}]",
                s.genus_min, s.genus_max
            )));
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> Result<f64> {
        self.tolerances
            .get(name)
            .copied()
            .ok_or_else(|| WlabError::InvalidInput(format!("unknown tolerance {name}")))
    }
}

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Anomaly,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Anomaly => "anomaly",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Named margin; a Vec of these keeps insertion order in the JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Margin {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub inputs: serde_json::Value,
    pub computed: serde_json::Value,
    pub margins: Vec<Margin>,
    pub verdict: Verdict,
}

/// Report for one suite run. Field order is part of the schema; do not
/// reorder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    pub toolkit_version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, config: RunConfig) -> Self {
        VerificationReport {
            schema: "1".to_string(),
            suite: suite.into(),
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn push(
        &mut self,
        id: impl Into<String>,
        inputs: serde_json::Value,
        computed: serde_json::Value,
        margins: Vec<(&str, f64)>,
        verdict: Verdict,
    ) {
        self.checks.push(CheckRecord {
            id: id.into(),
            inputs,
            computed,
            margins: margins
                .into_iter()
                .map(|(name, value)| Margin {
                    name: name.to_string(),
                    value,
                })
                .collect(),
            verdict,
        });
        self.verdict = self.aggregate();
    }

    /// Worst verdict over all checks: any fail dominates, then anomaly, then
    /// inconclusive; pass only when every record passes.
    pub fn aggregate(&self) -> Verdict {
        let mut out = Verdict::Pass;
        for rec in &self.checks {
            out = match (out, rec.verdict) {
                (_, Verdict::Fail) | (Verdict::Fail, _) => Verdict::Fail,
                (_, Verdict::Anomaly) | (Verdict::Anomaly, _) => Verdict::Anomaly,
                (_, Verdict::Inconclusive) | (Verdict::Inconclusive, _) => Verdict::Inconclusive,
                _ => Verdict::Pass,
            };
        }
        out
    }

    pub fn all_pass(&self) -> bool {
        self.aggregate() == Verdict::Pass
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.all_pass())
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| WlabError::InvalidInput(format!("report serialization failed: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

/// Serializes a complex value as a two-entry [re, im] array.
pub fn json_complex(z: num_complex::Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}
