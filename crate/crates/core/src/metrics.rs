use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::SignalTrace;

/// Mean absolute error normalised by the reference range, in percent.
pub fn nmae(reference: &SignalTrace, estimate: &SignalTrace) -> Result<f64> {
    nmae_slices(reference.samples(), estimate.samples())
}

pub fn nmae_slices(reference: &[f64], estimate: &[f64]) -> Result<f64> {
    if reference.len() != estimate.len() {
        return Err(Error::Misaligned(format!(
            "reference has {} samples, estimate has {}",
            reference.len(),
            estimate.len()
        )));
    }
    if reference.len() < 2 {
        return Err(Error::InvalidInput(
            "normalized error needs at least two samples".into(),
        ));
    }
    let max = reference.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = reference.iter().copied().fold(f64::INFINITY, f64::min);
    let range = max - min;
    if !(range > 0.0) {
        return Err(Error::UndefinedNormalization);
    }
    let mae = reference
        .iter()
        .zip(estimate)
        .map(|(r, e)| (r - e).abs())
        .sum::<f64>()
        / reference.len() as f64;
    Ok(mae / range * 100.0)
}

/// Summary of one model's rack force trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub model: String,
    pub rf_min: f64,
    pub rf_max: f64,
    pub rf_mean: f64,
    /// Wall-clock time of the run, s.
    pub runtime_s: f64,
    /// Error against the report's reference, when one is attached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmae_pct: Option<f64>,
}

impl ModelSummary {
    pub fn new(model: impl Into<String>, rf: &SignalTrace, runtime_s: f64) -> Self {
        Self {
            model: model.into(),
            rf_min: rf.min(),
            rf_max: rf.max(),
            rf_mean: rf.mean(),
            runtime_s,
            nmae_pct: None,
        }
    }
}

/// Per-run metrics written to `summary.json`.
///
/// `models` keeps the order lt, bt, rr, oracle (when present).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    pub models: Vec<ModelSummary>,
}

impl MetricReport {
    pub fn nmae_pct(&self, model: &str) -> Option<f64> {
        self.models
            .iter()
            .find(|m| m.model == model)
            .and_then(|m| m.nmae_pct)
    }
}
