//! Higher-fidelity reference estimator.
//!
//! Compared with the estimators it keeps the steering angle rotation of the
//! front axle force, uses arctangent slip kinematics and delays the tire
//! response by a first-order relaxation length lag. It serves as the
//! comparison reference when no measured rack force is available.

use crate::dynamics::{deriv_full, normal_forces, step_rk4, VehicleState};
use crate::error::{Error, Result};
use crate::estimator::{
    axle_forces, check_inputs, decompose_with, Decomposition, EstimationResult, ResultBuilder,
};
use crate::params::{validate_params, Config, TireParams, TireParamsBT, VehicleParams};
use crate::road::RoadProfile;
use crate::signal::SignalTrace;
use crate::tire::{bt_tire, Axle, SlipAngles, TireOutputs};

/// Slip kinematics used by the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlipKinematics {
    /// `atan((v + lf r) / u) - delta`
    #[default]
    Exact,
    /// Small-angle form shared with the estimators.
    Linearized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    pub vehicle: VehicleParams,
    pub tire: TireParamsBT,
    /// Relaxation length, m.
    pub relaxation_length: f64,
    pub slip: SlipKinematics,
}

impl OracleParams {
    pub fn from_config(cfg: &Config) -> Self {
        Self {
            vehicle: cfg.vehicle,
            tire: cfg.tire_bt,
            relaxation_length: cfg.oracle.relaxation_length,
            slip: SlipKinematics::Exact,
        }
    }
}

fn oracle_slip(state: VehicleState, u: f64, delta: f64, p: &OracleParams) -> SlipAngles {
    let front = (state.v + p.vehicle.lf * state.psi_dot) / u;
    let rear = (state.v - p.vehicle.lr * state.psi_dot) / u;
    match p.slip {
        SlipKinematics::Exact => SlipAngles {
            front: front.atan() - delta,
            rear: rear.atan(),
        },
        SlipKinematics::Linearized => SlipAngles {
            front: front - delta,
            rear,
        },
    }
}

/// `(1 - exp(-z)) / z`, continuous at zero.
fn phi(z: f64) -> f64 {
    if z < 1e-12 {
        1.0
    } else {
        -(-z).exp_m1() / z
    }
}

/// Lag state of the relaxation-length filter, stored as the offset of the
/// lagged slip from the instantaneous slip.
#[derive(Debug, Clone, Copy, Default)]
struct LagOffset {
    front: f64,
    rear: f64,
}

/// Lagged slip `tau` seconds into a step.
///
/// Solves `d(lagged)/dt = (u / sigma) (slip - lagged)` exactly for a slip that
/// varies linearly from `start` to `now` over `tau`, so arbitrarily short
/// relaxation lengths stay stable at the fixed step.
fn lagged(now: f64, start: f64, offset: f64, rate: f64, tau: f64) -> f64 {
    let z = rate * tau;
    now + offset * (-z).exp() - (now - start) * phi(z)
}

fn brush_pair(
    slip: SlipAngles,
    tire: &TireParamsBT,
    loads: crate::dynamics::NormalLoads,
    t_m: f64,
) -> Result<(TireOutputs, TireOutputs)> {
    Ok((
        bt_tire(slip.front, loads.front, tire, Axle::Front, t_m)?,
        bt_tire(slip.rear, loads.rear, tire, Axle::Rear, t_m)?,
    ))
}

/// Runs the reference estimator. Output layout matches [`run_estimator`];
/// the recorded slip angles are the lagged ones that drive the tires.
///
/// [`run_estimator`]: crate::estimator::run_estimator
pub fn run_oracle(
    delta: &SignalTrace,
    road: &RoadProfile,
    speed: &SignalTrace,
    params: &OracleParams,
) -> Result<EstimationResult> {
    validate_params(&params.vehicle, &TireParams::Brush(params.tire)).into_result()?;
    if !(params.relaxation_length > 0.0) {
        return Err(Error::InvalidInput(format!(
            "relaxation length must be positive, got {}",
            params.relaxation_length
        )));
    }
    check_inputs(delta, road, speed)?;

    let vehicle = &params.vehicle;
    let n = delta.len();
    let dt = delta.dt();
    let d = delta.samples();
    let u = speed.samples();
    let th = road.slope().samples();
    let t_m = vehicle.mechanical_trail;

    let mut state = VehicleState::default();
    let mut offset = LagOffset::default();
    let mut out = ResultBuilder::with_capacity(n);

    for k in 0..n {
        let loads = normal_forces(th[k], vehicle);
        let slip = oracle_slip(state, u[k], d[k], params);
        let lag = SlipAngles {
            front: slip.front + offset.front,
            rear: slip.rear + offset.rear,
        };
        let (front, rear) = brush_pair(lag, &params.tire, loads, t_m)?;
        out.push(k, vehicle.rack_ratio, state, lag, front, rear)?;

        if k + 1 == n {
            break;
        }
        let rate = u[k] / params.relaxation_length;
        let start = slip;
        let lead = offset;
        state = step_rk4(state, dt, k, |tau, s| {
            let frac = tau / dt;
            let dk = d[k] + frac * (d[k + 1] - d[k]);
            let uk = u[k] + frac * (u[k + 1] - u[k]);
            let thk = th[k] + frac * (th[k + 1] - th[k]);
            let now = oracle_slip(s, uk, dk, params);
            let lag = SlipAngles {
                front: lagged(now.front, start.front, lead.front, rate, tau),
                rear: lagged(now.rear, start.rear, lead.rear, rate, tau),
            };
            let (f, r) = brush_pair(lag, &params.tire, normal_forces(thk, vehicle), t_m)?;
            deriv_full(s, axle_forces(&f, &r), uk, thk, dk, vehicle)
        })?;
        let next = oracle_slip(state, u[k + 1], d[k + 1], params);
        offset = LagOffset {
            front: lagged(next.front, start.front, lead.front, rate, dt) - next.front,
            rear: lagged(next.rear, start.rear, lead.rear, rate, dt) - next.rear,
        };
    }
    out.finish(delta)
}

/// Reference decomposition, built the same way as the estimators'.
pub fn decompose_oracle(
    delta: &SignalTrace,
    road: &RoadProfile,
    speed: &SignalTrace,
    params: &OracleParams,
) -> Result<Decomposition> {
    decompose_with(delta, road, |d, r| {
        run_oracle(d, r, speed, params).map(|res| res.rf)
    })
}
