use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::numeric::GaussRat;

pub const SCHEMA_VERSION: &str = "1";

/// SHA-256 over the compact serializations of the canonical input
/// documents, one per line.
pub fn input_digest(docs: &[&Value]) -> String {
    let mut hasher = Sha256::new();
    for doc in docs {
        hasher.update(doc.to_string().as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

/// Named exact rationals, each stored as a canonical `p/q` string.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExactValues(BTreeMap<String, String>);

impl ExactValues {
    pub fn insert(&mut self, key: impl Into<String>, value: &GaussRat) {
        let key = key.into();
        self.0.insert(format!("{key}.re"), value.re.to_wire());
        self.0.insert(format!("{key}.im"), value.im.to_wire());
    }

    pub fn insert_real(&mut self, key: impl Into<String>, value: &crate::numeric::BigRat) {
        self.0.insert(key.into(), value.to_wire());
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.0
    }
}

/// Wall-clock milliseconds per named phase.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings(BTreeMap<String, f64>);

impl Timings {
    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.0.entry(phase.to_string()).or_default() += start.elapsed().as_secs_f64() * 1e3;
        out
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentReport {
    pub schema_version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub exact_values: ExactValues,
    pub timings: Timings,
}

impl ExperimentReport {
    pub fn new(command: &str, input_digest: String, seed: u64) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input_digest,
            seed,
            parameters: BTreeMap::new(),
            results: Value::Null,
            exact_values: ExactValues::default(),
            timings: Timings::default(),
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.to_string(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Everything except timings, which is what reruns must reproduce
    /// byte for byte.
    pub fn reproducible_payload(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timings");
        serde_json::to_string(&v).expect("value serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::BigRat;
    use serde_json::json;

    #[test]
    fn digest_is_stable() {
        let a = json!({"terms": []});
        assert_eq!(input_digest(&[&a]), input_digest(&[&a.clone()]));
        assert_ne!(input_digest(&[&a]), input_digest(&[&a, &a]));
        assert_eq!(input_digest(&[&a]).len(), 64);
    }

    #[test]
    fn payload_excludes_timings() {
        let mut r = ExperimentReport::new("moment", "d".into(), 7);
        r.parameter("pmax", 4);
        r.exact_values.insert("moment/2", &GaussRat::from_int(2));
        r.exact_values.insert_real("p0", &BigRat::from_ratio(5, 1));
        r.timings.time("work", || ());
        let payload = r.reproducible_payload();
        assert!(!payload.contains("timings"));
        assert!(payload.contains("\"schemaVersion\":\"1\""));
        let parsed: Value = serde_json::from_str(&r.to_json_pretty()).unwrap();
        for v in parsed["exactValues"].as_object().unwrap().values() {
            assert!(BigRat::parse_canonical(v.as_str().unwrap()).is_ok());
        }
    }
}
