//! Slip kinematics and tire kernels.
//!
//! Every kernel works per tire: forces come from the per-tire normal load,
//! and the estimator doubles them to obtain axle quantities.

mod brush;
mod envelope;
mod linear;
mod rigid_ring;

pub use brush::bt_tire;
pub use envelope::{effective_height, envelope_road, EffectiveRoadPoint, Enveloper};
pub use linear::lt_tire;
pub use rigid_ring::rr_tire;

use std::f64::consts::FRAC_PI_2;

use crate::dynamics::{check_speed, VehicleState};
use crate::error::{Error, Result};
use crate::params::VehicleParams;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SlipAngles {
    pub front: f64,
    pub rear: f64,
}

/// Per-tire kernel output. Trail and moment are zero for rear tires.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TireOutputs {
    /// Lateral force, N.
    pub fy: f64,
    /// Pneumatic trail, m.
    pub trail: f64,
    /// Aligning moment, N m.
    pub mz: f64,
}

/// Which axle a kernel is evaluated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axle {
    Front,
    Rear,
}

/// Linearised slip angles of the bicycle model.
pub fn slip_angles(
    state: VehicleState,
    u: f64,
    delta: f64,
    p: &VehicleParams,
) -> Result<SlipAngles> {
    check_speed(u, 0)?;
    Ok(SlipAngles {
        front: (state.v + p.lf * state.psi_dot) / u - delta,
        rear: (state.v - p.lr * state.psi_dot) / u,
    })
}

/// Sign with sgn(0) = 0, unlike `f64::signum`.
pub(crate) fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub(crate) fn check_slip(alpha: f64) -> Result<()> {
    if alpha.abs() < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidSlip { alpha })
    }
}

pub(crate) fn check_load(fz: f64) -> Result<()> {
    if fz > 0.0 && fz.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "normal load must be positive, got {fz}"
        )))
    }
}
