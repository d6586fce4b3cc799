use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::report::Report;

/// Deltas beyond this many combined standard errors are flagged.
pub const SIGNIFICANCE_SIGMA: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDelta {
    pub metric: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// b − a when both sides have the metric.
    pub delta: Option<f64>,
    /// √(σa² + σb²) when both sides carry a standard error.
    pub sigma: Option<f64>,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDiff {
    pub experiment: String,
    /// Only metrics that differ; identical reports give an empty list.
    pub deltas: Vec<MetricDelta>,
}

impl ReportDiff {
    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn significant(&self) -> impl Iterator<Item = &MetricDelta> {
        self.deltas.iter().filter(|d| d.significant)
    }
}

/// Per-metric differences between two reports of the same experiment.
///
/// A delta is significant when it exceeds three combined standard errors. Exact
/// metrics (no stderr on either side) are significant whenever they differ, and
/// so is a metric present in only one report.
pub fn diff_reports(a: &Report, b: &Report) -> Result<ReportDiff, CliError> {
    if a.experiment != b.experiment {
        return Err(CliError::ExperimentMismatch { a: a.experiment.to_string(), b: b.experiment.to_string() });
    }
    let mut keys: Vec<&String> = a.metrics.keys().chain(b.metrics.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut deltas = Vec::new();
    for k in keys {
        let (ma, mb) = (a.metrics.get(k), b.metrics.get(k));
        let d = match (ma, mb) {
            (Some(x), Some(y)) => {
                if x == y {
                    continue;
                }
                let delta = y.value - x.value;
                let sigma = match (x.stderr, y.stderr) {
                    (None, None) => None,
                    (sa, sb) => Some((sa.unwrap_or(0.0).powi(2) + sb.unwrap_or(0.0).powi(2)).sqrt()),
                };
                let significant = match sigma {
                    Some(s) if s > 0.0 => delta.abs() > SIGNIFICANCE_SIGMA * s,
                    _ => delta != 0.0,
                };
                MetricDelta { metric: k.clone(), a: Some(x.value), b: Some(y.value), delta: Some(delta), sigma, significant }
            }
            _ => MetricDelta {
                metric: k.clone(),
                a: ma.map(|m| m.value),
                b: mb.map(|m| m.value),
                delta: None,
                sigma: None,
                significant: true,
            },
        };
        deltas.push(d);
    }
    Ok(ReportDiff { experiment: a.experiment.to_string(), deltas })
}
