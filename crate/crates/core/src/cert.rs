//! Verification certificates and reports.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::bipoly::{BiPoly, TauLaurent};
use crate::poly::PolyZ;
use crate::series::LaurentZ;

pub const REPORT_SCHEMA: &str = "tmcf.report/1";

/// One checked statement inside a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    /// `"0"` when the residual vanishes, otherwise a short digest of it.
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl Certificate {
    pub fn new(name: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            pass: true,
            notes: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn with(mut self, check: Check) -> Self {
        self.push(check);
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// A check that passes iff `ok`, with a free-form residual description.
    pub fn assert(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let residual = if ok { "0".to_string() } else { detail.into() };
        self.push(Check {
            label: label.into(),
            pass: ok,
            residual,
        });
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Runs `f` and records its wall time.
    pub fn timed(f: impl FnOnce() -> Certificate) -> Certificate {
        let t = std::time::Instant::now();
        let mut c = f();
        c.wall_time = t.elapsed();
        c
    }
}

/// Values whose vanishing is checked.
pub trait Residual {
    fn is_zero_residual(&self) -> bool;
    fn digest(&self) -> String;
}

impl Residual for BiPoly {
    fn is_zero_residual(&self) -> bool {
        self.is_zero()
    }
    fn digest(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        format!(
            "{} terms, deg_a {}, deg_b {}",
            self.len(),
            self.deg_a().unwrap_or(0),
            self.deg_b().unwrap_or(0)
        )
    }
}

impl Residual for TauLaurent {
    fn is_zero_residual(&self) -> bool {
        self.is_zero()
    }
    fn digest(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        format!("{} · τ^{}", self.numerator().digest(), self.tau_exponent())
    }
}

impl Residual for PolyZ {
    fn is_zero_residual(&self) -> bool {
        self.is_zero()
    }
    fn digest(&self) -> String {
        match self.deg() {
            None => "0".into(),
            Some(d) => format!("degree {d}, weight {}", self.weight()),
        }
    }
}

impl Residual for LaurentZ {
    fn is_zero_residual(&self) -> bool {
        self.is_zero()
    }
    fn digest(&self) -> String {
        match self.top() {
            None => format!("0 + O(z^{})", self.horizon()),
            Some(t) => format!("leading z^{t}, horizon {}", self.horizon()),
        }
    }
}

impl Check {
    pub fn residual<R: Residual>(label: impl Into<String>, r: &R) -> Check {
        let pass = r.is_zero_residual();
        Check {
            label: label.into(),
            pass,
            residual: if pass { "0".into() } else { r.digest() },
        }
    }
}

/// Top-level output of a CLI command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub certificates: Vec<Certificate>,
    pub overall_pass: bool,
    pub tool_version: String,
    /// SHA-256 of the canonical JSON of every field above.
    pub payload_sha256: String,
    /// Wall times in milliseconds by certificate name; not hashed.
    #[serde(default)]
    pub timing_ms: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct Payload<'a> {
    schema: &'a str,
    command: &'a str,
    params: &'a BTreeMap<String, Value>,
    certificates: &'a [Certificate],
    overall_pass: bool,
    tool_version: &'a str,
}

impl Report {
    pub fn new(
        command: impl Into<String>,
        params: BTreeMap<String, Value>,
        mut certificates: Vec<Certificate>,
    ) -> Report {
        certificates.sort_by(|x, y| x.name.cmp(&y.name));
        let overall_pass = certificates.iter().all(|c| c.pass);
        let timing_ms = certificates
            .iter()
            .map(|c| (c.name.clone(), c.wall_time.as_secs_f64() * 1e3))
            .collect();
        let mut r = Report {
            schema: REPORT_SCHEMA.to_string(),
            command: command.into(),
            params,
            certificates,
            overall_pass,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            payload_sha256: String::new(),
            timing_ms,
        };
        r.payload_sha256 = r.payload_hash();
        r
    }

    pub fn payload_hash(&self) -> String {
        let payload = Payload {
            schema: &self.schema,
            command: &self.command,
            params: &self.params,
            certificates: &self.certificates,
            overall_pass: self.overall_pass,
            tool_version: &self.tool_version,
        };
        let bytes = serde_json::to_vec(&payload).expect("payload serializes");
        Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_tracks_checks() {
        let mut c = Certificate::new("x").param("k", 1);
        c.push(Check::residual("zero", &BiPoly::zero()));
        assert!(c.pass);
        c.push(Check::residual("tau", &BiPoly::tau()));
        assert!(!c.pass);
        assert_eq!(c.failed_checks().count(), 1);
        assert_eq!(c.checks[1].residual, "3 terms, deg_a 1, deg_b 1");
    }

    #[test]
    fn report_hash_ignores_timing() {
        let mut a = Certificate::new("b").with(Check::residual("r", &PolyZ::zero()));
        a.wall_time = Duration::from_millis(5);
        let c2 = Certificate::new("a");
        let r1 = Report::new("cmd", BTreeMap::new(), vec![a.clone(), c2.clone()]);
        a.wall_time = Duration::from_secs(9);
        let r2 = Report::new("cmd", BTreeMap::new(), vec![c2, a]);
        assert_eq!(r1.payload_sha256, r2.payload_sha256);
        assert_eq!(r1.certificates[0].name, "a");
        assert!(r1.overall_pass);
        assert_eq!(r1.payload_sha256.len(), 64);
    }
}
