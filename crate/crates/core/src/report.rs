//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::vanishing::sha256_hex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "UNCONVERGED")]
    Unconverged,
    #[serde(rename = "INFO")]
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unconverged => "UNCONVERGED",
            Status::Info => "INFO",
        }
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

impl CheckRecord {
    /// `FAIL` exactly when `slack < -tolerance`.
    pub fn from_slack(name: impl Into<String>, lhs: f64, rhs: f64, slack: f64, tolerance: f64) -> Self {
        let status = if slack < -tolerance || slack.is_nan() { Status::Fail } else { Status::Pass };
        Self { name: name.into(), lhs: finite(lhs), rhs: finite(rhs), slack: finite(slack), status, detail: None, certificate: None }
    }

    pub fn flag(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            lhs: None,
            rhs: None,
            slack: None,
            status: if pass { Status::Pass } else { Status::Fail },
            detail: Some(detail.into()),
            certificate: None,
        }
    }

    pub fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), lhs: None, rhs: None, slack: None, status: Status::Info, detail: Some(detail.into()), certificate: None }
    }

    pub fn with_status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn with_certificate(mut self, c: serde_json::Value) -> Self {
        self.certificate = Some(c);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub inputs_digest: String,
    pub checks: Vec<CheckRecord>,
    pub seeds: Vec<u64>,
    pub versions: BTreeMap<String, String>,
    /// Kept apart so the rest of the report is reproducible byte for byte.
    pub timing: Timing,
}

/// SHA-256 over length-prefixed parts.
pub fn inputs_digest(parts: &[&[u8]]) -> String {
    let mut buf = Vec::new();
    for p in parts {
        buf.extend_from_slice(&(p.len() as u64).to_le_bytes());
        buf.extend_from_slice(p);
    }
    sha256_hex(&buf)
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, inputs_digest: String) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("hjoints".into(), env!("CARGO_PKG_VERSION").into());
        Self { command: command.into(), inputs_digest, checks: Vec::new(), seeds: Vec::new(), versions, timing: Timing::default() }
    }

    pub fn push(&mut self, c: CheckRecord) {
        self.checks.push(c);
    }

    pub fn has_failure(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.has_failure())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Digest of the report with timing removed.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.timing = Timing::default();
        sha256_hex(c.to_json().as_bytes())
    }

    pub fn render_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "{}  [{}]", self.command, &self.inputs_digest[..self.inputs_digest.len().min(12)]);
        let _ = writeln!(out, "{:<width$}  {:<11}  {:>14}  {:>14}  {:>12}", "check", "status", "lhs", "rhs", "slack");
        let num = |x: Option<f64>| x.map(|v| format!("{v:.6e}")).unwrap_or_else(|| "-".into());
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<width$}  {:<11}  {:>14}  {:>14}  {:>12}",
                c.name,
                c.status.as_str(),
                num(c.lhs),
                num(c.rhs),
                num(c.slack)
            );
            if let Some(d) = &c.detail {
                let _ = writeln!(out, "{:<width$}    {d}", "");
            }
        }
        out
    }
}
