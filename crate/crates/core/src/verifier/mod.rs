//! Verification pipelines and the certificates they emit.
//!
//! A pipeline never stops at the first failure. Every comparison becomes a
//! [`Check`] with inputs, verdict and, on failure, a witness; errors raised
//! while computing a check are recorded as failures of that check.

mod characters;
mod consistency;
mod deform;
mod elc;
mod fit;
mod mpy;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Result;
use crate::linalg::Arithmetic;

pub use characters::{characters, elementary_symmetric, factorial};
pub use consistency::{consistency, ConsistencyRanges};
pub use deform::{deform, random_samples};
pub use elc::{elc_bound, verify_elc, ELC_BOUNDS};
pub use fit::{fit, fit_battery, fitted_pattern};
pub use mpy::verify_mpy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub inputs: Value,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub code_version: String,
    pub arithmetic: Arithmetic,
    pub jobs: usize,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub pipeline: String,
    pub params: Value,
    pub checks: Vec<Check>,
    pub environment: Environment,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// The certificate without its environment block, which is the part
    /// expected to be identical across runs.
    pub fn reproducible_part(&self) -> Value {
        json!({
            "pipeline": self.pipeline,
            "params": self.params,
            "checks": self.checks,
        })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

/// What a check found.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub witness: Option<Value>,
    pub detail: Option<Value>,
}

impl Outcome {
    pub fn pass() -> Self {
        Outcome {
            pass: true,
            ..Outcome::default()
        }
    }

    pub fn fail(witness: Value) -> Self {
        Outcome {
            pass: false,
            witness: Some(witness),
            detail: None,
        }
    }

    /// Pass iff `pass`, with `witness` kept only on failure.
    pub fn verdict(pass: bool, witness: impl FnOnce() -> Value) -> Self {
        if pass {
            Outcome::pass()
        } else {
            Outcome::fail(witness())
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

/// Collects checks for one pipeline run.
pub struct Recorder {
    pipeline: String,
    params: Value,
    arith: Arithmetic,
    checks: Vec<Check>,
    started: Instant,
}

impl Recorder {
    pub fn new(pipeline: &str, params: Value, arith: Arithmetic) -> Self {
        Recorder {
            pipeline: pipeline.to_string(),
            params,
            arith,
            checks: Vec::new(),
            started: Instant::now(),
        }
    }

    /// Runs one check. An error becomes a failed check carrying the message.
    pub fn check(&mut self, name: &str, inputs: Value, f: impl FnOnce() -> Result<Outcome>) -> bool {
        let (verdict, witness, detail) = match f() {
            Ok(o) => (if o.pass { Verdict::Pass } else { Verdict::Fail }, o.witness, o.detail),
            Err(e) => (Verdict::Fail, Some(json!({ "error": e.to_string() })), None),
        };
        self.checks.push(Check {
            name: name.to_string(),
            inputs,
            verdict,
            witness,
            detail,
        });
        verdict == Verdict::Pass
    }

    /// Adds checks produced elsewhere, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, cert: Certificate) -> bool {
        let passed = cert.passed();
        for mut c in cert.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
        passed
    }

    pub fn finish(self) -> Certificate {
        Certificate {
            pipeline: self.pipeline,
            params: self.params,
            checks: self.checks,
            environment: Environment {
                code_version: env!("CARGO_PKG_VERSION").to_string(),
                arithmetic: self.arith,
                jobs: rayon::current_num_threads(),
                wall_time_ms: self.started.elapsed().as_millis() as u64,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn errors_become_failures() {
        let mut r = Recorder::new("t", json!({}), Arithmetic::Rational);
        assert!(r.check("ok", json!(1), || Ok(Outcome::pass())));
        assert!(!r.check("boom", json!(2), || Err(Error::InvalidParameter("x".into()))));
        let cert = r.finish();
        assert!(!cert.passed());
        assert_eq!(cert.failures().count(), 1);
        let w = cert.checks[1].witness.as_ref().unwrap();
        assert!(w["error"].as_str().unwrap().contains('x'));
        let v: Value = serde_json::from_str(&cert.to_json_pretty()).unwrap();
        for key in ["pipeline", "params", "checks", "environment"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
