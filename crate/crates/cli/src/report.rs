//! Run reports: the deterministic verdict body plus a separate timing field.

use std::collections::BTreeMap;
use std::time::Duration;

use peirce_lie::json::{element_to_json, to_canonical_string};
use peirce_lie::{Algebra, Element, MapVerdict};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Verdict {
    pub fn new(check: impl Into<String>, pass: bool) -> Self {
        Self { check: check.into(), pass, witness: None }
    }

    pub fn failed(check: impl Into<String>, witness: Value) -> Self {
        Self { check: check.into(), pass: false, witness: Some(witness) }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 of every input file, keyed by its role.
    pub inputs: BTreeMap<String, String>,
    pub verdicts: Vec<Verdict>,
    pub outputs: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_status: i32,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self { command, ..Self::default() }
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn output(&mut self, key: &str, value: Value) {
        self.outputs.insert(key.to_owned(), value);
    }

    /// Sets the exit status from the error and verdicts.
    pub fn finish(&mut self) {
        self.exit_status = if self.error.is_some() {
            EXIT_INPUT
        } else if self.verdicts.iter().all(|v| v.pass) {
            EXIT_PASS
        } else {
            EXIT_FAIL
        };
    }

    pub fn body(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    /// `{"report", "report_sha256", "timing"}`; only `timing` varies between
    /// identical runs.
    pub fn document(&self, elapsed: Duration) -> Value {
        let body = self.body();
        let digest = sha256_hex(to_canonical_string(&body).as_bytes());
        json!({
            "report": body,
            "report_sha256": digest,
            "timing": { "elapsed_ms": elapsed.as_millis() as u64 },
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// An element as printed text plus its coordinates.
pub fn element_json(alg: &Algebra, x: &Element) -> Value {
    json!({ "text": alg.format_element(x), "coeffs": element_to_json(x) })
}

/// Witness of a failed law check; elements are printed in the source
/// algebra, the defect in the target.
pub fn map_verdict_witness(v: &MapVerdict, source: &Algebra, target: &Algebra, rechecked: bool) -> Value {
    let mut w = serde_json::Map::new();
    if let Some(xs) = &v.witness {
        w.insert("elements".into(), Value::Array(xs.iter().map(|x| element_json(source, x)).collect()));
    }
    if let Some(roots) = &v.roots {
        w.insert("roots".into(), Value::Array(roots.iter().map(|r| Value::String(r.to_string())).collect()));
    }
    if let Some(d) = &v.defect {
        w.insert("defect".into(), element_json(target, d));
    }
    w.insert("rechecked".into(), Value::Bool(rechecked));
    Value::Object(w)
}
