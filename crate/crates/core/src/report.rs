//! Structured pass/fail results shared by every verifier.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    Indeterminate,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
            Status::Indeterminate => "indeterminate",
        })
    }
}

/// A scalar in both lossless and float form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarValue {
    /// Canonical exact string (`p/q+r/s*r2`) or a 17-digit float string.
    pub exact: String,
    pub float: f64,
}

impl ScalarValue {
    pub fn of<S: Scalar>(s: &S) -> Self {
        Self {
            exact: s.to_exact_string(),
            float: s.to_f64(),
        }
    }

    pub fn float(v: f64) -> Self {
        Self {
            exact: format!("{v:.16e}"),
            float: v,
        }
    }
}

mod ordered_map {
    use std::fmt;

    use serde::de::{MapAccess, Visitor};
    use serde::ser::SerializeMap;
    use serde::{Deserializer, Serializer};

    use super::ScalarValue;

    pub fn serialize<S: Serializer>(v: &[(String, ScalarValue)], s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(v.len()))?;
        for (k, x) in v {
            m.serialize_entry(k, x)?;
        }
        m.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(String, ScalarValue)>, D::Error> {
        struct Ordered;
        impl<'de> Visitor<'de> for Ordered {
            type Value = Vec<(String, ScalarValue)>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map of named scalars")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = a.next_entry()? {
                    out.push(entry);
                }
                Ok(out)
            }
        }
        d.deserialize_map(Ordered)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    /// Worst residual (max-norm) seen by this check, when meaningful.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<ScalarValue>,
    /// Named derived constants, serialized as an ordered object.
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "ordered_map")]
    pub scalars: Vec<(String, ScalarValue)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Self {
            name: name.into(),
            status,
            residual: None,
            scalars: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, Status::Pass)
    }

    pub fn fail(name: impl Into<String>) -> Self {
        Self::new(name, Status::Fail)
    }

    pub fn with_residual<S: Scalar>(mut self, r: &S) -> Self {
        self.residual = Some(ScalarValue::of(r));
        self
    }

    pub fn with_scalar<S: Scalar>(mut self, name: impl Into<String>, v: &S) -> Self {
        self.scalars.push((name.into(), ScalarValue::of(v)));
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Ordered list of checks. Passes when no check has status `Fail`;
/// `NotApplicable` and `Indeterminate` records are informational.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, rec: CheckRecord) {
        self.checks.push(rec);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    /// All checks pass outright (no indeterminate / not-applicable records).
    pub fn strictly_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            write!(f, "  [{}] {}", c.status, c.name)?;
            if let Some(r) = &c.residual {
                write!(f, " (residual {})", r.exact)?;
            }
            for w in &c.witnesses {
                write!(f, " <{w}>")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QSqrt2;

    #[test]
    fn record_round_trips_with_ordered_scalars() {
        let v: QSqrt2 = "-3/2+1/4*r2".parse().unwrap();
        let rec = CheckRecord::pass("demo")
            .with_scalar("zeta", &v)
            .with_scalar("alpha", &QSqrt2::one())
            .with_residual(&QSqrt2::zero())
            .with_witness("w");
        let text = serde_json::to_string(&rec).unwrap();
        assert!(text.find("zeta").unwrap() < text.find("alpha").unwrap());
        let back: CheckRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.scalars[0].1.exact.parse::<QSqrt2>().unwrap(), v);
    }

    #[test]
    fn status_strings_are_the_four_enumerated_values() {
        let all = [Status::Pass, Status::Fail, Status::NotApplicable, Status::Indeterminate];
        let names: Vec<String> = all.iter().map(|s| serde_json::to_string(s).unwrap()).collect();
        assert_eq!(
            names,
            ["\"pass\"", "\"fail\"", "\"not-applicable\"", "\"indeterminate\""]
        );
        for s in all {
            assert_eq!(format!("\"{s}\""), serde_json::to_string(&s).unwrap());
        }
    }
}
