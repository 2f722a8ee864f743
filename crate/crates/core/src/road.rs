use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::SignalTrace;

/// A rectangular transverse bar on the track.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cleat {
    /// Distance of the leading edge along the track, m.
    pub position: f64,
    pub height: f64,
    pub length: f64,
}

impl Cleat {
    pub fn end(&self) -> f64 {
        self.position + self.length
    }
}

/// Road inputs for one run: lateral slope, longitudinal grade and cleats.
#[derive(Debug, Clone, PartialEq)]
pub struct RoadProfile {
    slope: SignalTrace,
    grade: SignalTrace,
    cleats: Vec<Cleat>,
}

impl RoadProfile {
    pub fn new(slope: SignalTrace, grade: SignalTrace, cleats: Vec<Cleat>) -> Result<Self> {
        if let Some((i, s)) = slope
            .samples()
            .iter()
            .enumerate()
            .find(|(_, s)| s.abs() >= FRAC_PI_2)
        {
            return Err(Error::InvalidInput(format!(
                "lateral slope {s} rad at sample {i} is not within (-pi/2, pi/2)"
            )));
        }
        if !slope.is_aligned_with(&grade) {
            return Err(Error::Misaligned(format!(
                "grade trace ({} samples @ {} Hz) does not match slope trace ({} samples @ {} Hz)",
                grade.len(),
                grade.rate_hz(),
                slope.len(),
                slope.rate_hz()
            )));
        }
        for (i, c) in cleats.iter().enumerate() {
            if !(c.height > 0.0 && c.length > 0.0 && c.position.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "cleat {i}: height and length must be positive"
                )));
            }
        }
        if let Some(i) = cleats
            .windows(2)
            .position(|w| w[1].position <= w[0].position)
        {
            return Err(Error::InvalidInput(format!(
                "cleat {} position is not strictly after cleat {i}",
                i + 1
            )));
        }
        Ok(Self {
            slope,
            grade,
            cleats,
        })
    }

    /// Zero grade, no cleats.
    pub fn from_slope(slope: SignalTrace) -> Result<Self> {
        let grade = slope.map(|_| 0.0)?.renamed("grade", "rad");
        Self::new(slope, grade, Vec::new())
    }

    /// Level road without cleats on the given grid.
    pub fn flat(rate_hz: f64, len: usize) -> Result<Self> {
        Self::from_slope(SignalTrace::constant("slope", "rad", rate_hz, len, 0.0)?)
    }

    /// A level, cleat-free road sharing this profile's grid.
    pub fn flattened(&self) -> Self {
        let zero = self.slope.map(|_| 0.0).expect("same length");
        Self {
            slope: zero.clone(),
            grade: zero.renamed("grade", "rad"),
            cleats: Vec::new(),
        }
    }

    pub fn with_cleats(&self, cleats: Vec<Cleat>) -> Result<Self> {
        Self::new(self.slope.clone(), self.grade.clone(), cleats)
    }

    pub fn slope(&self) -> &SignalTrace {
        &self.slope
    }

    /// Carried for completeness; longitudinal grade does not enter the
    /// lateral dynamics.
    pub fn grade(&self) -> &SignalTrace {
        &self.grade
    }

    pub fn cleats(&self) -> &[Cleat] {
        &self.cleats
    }
}
