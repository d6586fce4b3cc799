use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Experiment;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub value: f64,
    /// Statistical standard error; None for exact quantities.
    pub stderr: Option<f64>,
}

/// Summary of one run. Metric keys are sorted so the JSON is stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: Experiment,
    pub version: String,
    pub seed: u64,
    pub shots: Option<usize>,
    pub noise: String,
    pub metrics: BTreeMap<String, Metric>,
    /// Metrics that came out non-finite (e.g. a postselected value with no surviving shots).
    #[serde(default)]
    pub undefined: Vec<String>,
}

impl Report {
    pub fn new(experiment: Experiment, version: &str, seed: u64, shots: Option<usize>, noise: &str) -> Self {
        Report {
            experiment,
            version: version.to_string(),
            seed,
            shots,
            noise: noise.to_string(),
            metrics: BTreeMap::new(),
            undefined: vec![],
        }
    }

    pub fn put(&mut self, key: impl Into<String>, value: f64, stderr: Option<f64>) {
        let key = key.into();
        if value.is_finite() && stderr.is_none_or(f64::is_finite) {
            self.metrics.insert(key, Metric { value, stderr });
        } else {
            self.undefined.push(key);
        }
    }

    pub fn exact(&mut self, key: impl Into<String>, value: f64) {
        self.put(key, value, None);
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).map(|m| m.value)
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut v = serde_json::to_vec_pretty(self).expect("report serializes");
        v.push(b'\n');
        v
    }
}
