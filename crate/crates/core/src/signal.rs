//! Uniformly sampled signal traces.

use crate::error::{Error, Result};

/// A uniformly sampled time series of one physical quantity.
///
/// Traces are immutable once built; every transformation returns a new trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalTrace {
    name: String,
    unit: String,
    rate_hz: f64,
    t0: f64,
    samples: Vec<f64>,
}

impl SignalTrace {
    pub fn new(
        name: impl Into<String>,
        unit: impl Into<String>,
        rate_hz: f64,
        t0: f64,
        samples: Vec<f64>,
    ) -> Result<Self> {
        let name = name.into();
        if !(rate_hz.is_finite() && rate_hz > 0.0) {
            return Err(Error::InvalidInput(format!(
                "trace `{name}`: sampling rate must be positive, got {rate_hz}"
            )));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "trace `{name}`: start time must be finite"
            )));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "trace `{name}`: sample {i} is not finite"
            )));
        }
        Ok(Self {
            name,
            unit: unit.into(),
            rate_hz,
            t0,
            samples,
        })
    }

    /// A trace holding `value` for `len` samples.
    pub fn constant(
        name: impl Into<String>,
        unit: impl Into<String>,
        rate_hz: f64,
        len: usize,
        value: f64,
    ) -> Result<Self> {
        Self::new(name, unit, rate_hz, 0.0, vec![value; len])
    }

    /// Samples `f(t)` on `len` points starting at t = 0.
    pub fn from_fn(
        name: impl Into<String>,
        unit: impl Into<String>,
        rate_hz: f64,
        len: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let samples = (0..len).map(|i| f(i as f64 / rate_hz)).collect();
        Self::new(name, unit, rate_hz, 0.0, samples)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn rate_hz(&self) -> f64 {
        self.rate_hz
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.rate_hz
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time stamp of sample `i`.
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.rate_hz
    }

    /// Time stamp of the last sample.
    pub fn end_time(&self) -> f64 {
        self.time(self.len().saturating_sub(1))
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    /// Same grid and metadata, new values.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != self.len() {
            return Err(Error::Misaligned(format!(
                "trace `{}` has {} samples, replacement has {}",
                self.name,
                self.len(),
                samples.len()
            )));
        }
        Self::new(
            self.name.clone(),
            self.unit.clone(),
            self.rate_hz,
            self.t0,
            samples,
        )
    }

    pub fn renamed(&self, name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
            ..self.clone()
        }
    }

    /// Element-wise map onto a new trace with the same grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        self.with_samples(self.samples.iter().map(|&s| f(s)).collect())
    }

    /// True when both traces share rate, start time and length.
    pub fn is_aligned_with(&self, other: &SignalTrace) -> bool {
        self.len() == other.len()
            && (self.rate_hz - other.rate_hz).abs() <= 1e-9 * self.rate_hz
            && (self.t0 - other.t0).abs() <= 0.5 / self.rate_hz
    }
}

/// Linearly interpolates `trace` onto a uniform grid at `target_hz` covering
/// the original time range. The first sample is kept; the last one is kept
/// whenever the original span is a whole number of target periods.
pub fn resample(trace: &SignalTrace, target_hz: f64) -> Result<SignalTrace> {
    if !(target_hz.is_finite() && target_hz > 0.0) {
        return Err(Error::InvalidInput(format!(
            "target rate must be positive, got {target_hz}"
        )));
    }
    if trace.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "trace `{}` needs at least two samples to resample, has {}",
            trace.name(),
            trace.len()
        )));
    }
    if target_hz == trace.rate_hz() {
        return Ok(trace.clone());
    }

    let src = trace.samples();
    let last = src.len() - 1;
    let span = last as f64 / trace.rate_hz();
    // tolerate representation error in span * rate
    let n = (span * target_hz + 1e-9).floor() as usize + 1;
    let out = (0..n)
        .map(|i| {
            let pos = i as f64 / target_hz * trace.rate_hz();
            let j = (pos.floor() as usize).min(last);
            if j == last {
                return src[last];
            }
            let frac = pos - j as f64;
            src[j] + frac * (src[j + 1] - src[j])
        })
        .collect();
    SignalTrace::new(trace.name(), trace.unit(), target_hz, trace.t0(), out)
}
