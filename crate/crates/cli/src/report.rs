use std::time::{Duration, SystemTime, UNIX_EPOCH};

use kappamu_core::{CheckRecord, VerificationReport};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Machine-readable result of one invocation.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// `sha256:<hex>` over the input files in argument order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub subject: String,
    pub passed: bool,
    pub records: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(command: String, digest: Option<String>, result: VerificationReport) -> Self {
        Self {
            tool: "kappamu",
            version: env!("CARGO_PKG_VERSION"),
            command,
            input_digest: digest,
            subject: result.subject.clone(),
            passed: result.passed(),
            records: result.checks,
            wall_time_ms: None,
            timestamp: None,
        }
    }

    /// Attaches timing fields; skipped under `--no-timestamp` so that
    /// repeated runs are byte-identical.
    pub fn stamp(&mut self, elapsed: Duration) {
        self.wall_time_ms = Some(elapsed.as_secs_f64() * 1e3);
        self.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One verdict line per record, then the overall verdict.
    pub fn verdict_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{}: {}", r.status, r.name));
            for (k, v) in &r.scalars {
                out.push_str(&format!(" {k}={}", v.exact));
            }
            if let Some(res) = &r.residual {
                out.push_str(&format!(" (residual {})", res.exact));
            }
            out.push('\n');
        }
        out.push_str(if self.passed { "PASS\n" } else { "FAIL\n" });
        out
    }
}

pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        // Length prefix keeps file boundaries unambiguous.
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}
