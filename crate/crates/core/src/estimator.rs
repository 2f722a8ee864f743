//! Closed-loop rack force estimators and rack force decomposition.

use std::fmt;
use std::str::FromStr;

use crate::dynamics::{
    check_speed, deriv_small_angle, normal_forces, step_rk4, AxleForces, NormalLoads, VehicleState,
};
use crate::error::{Error, Result};
use crate::params::{validate_params, TireParams, VehicleParams};
use crate::road::RoadProfile;
use crate::signal::SignalTrace;
use crate::tire::{
    bt_tire, lt_tire, rr_tire, slip_angles, Axle, EffectiveRoadPoint, Enveloper, SlipAngles,
    TireOutputs,
};

/// Which tire model an estimator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    Lt,
    Bt,
    Rr,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 3] = [EstimatorKind::Lt, EstimatorKind::Bt, EstimatorKind::Rr];

    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorKind::Lt => "lt",
            EstimatorKind::Bt => "bt",
            EstimatorKind::Rr => "rr",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lt" => Ok(EstimatorKind::Lt),
            "bt" => Ok(EstimatorKind::Bt),
            "rr" => Ok(EstimatorKind::Rr),
            other => Err(Error::InvalidInput(format!(
                "unknown model `{other}`, expected lt, bt or rr"
            ))),
        }
    }
}

impl TireParams {
    pub fn kind(&self) -> EstimatorKind {
        match self {
            TireParams::Linear(_) => EstimatorKind::Lt,
            TireParams::Brush(_) => EstimatorKind::Bt,
            TireParams::RigidRing(_) => EstimatorKind::Rr,
        }
    }

    /// Evaluates the kernel for one tire.
    pub fn evaluate(
        &self,
        alpha: f64,
        fz: f64,
        eff: &EffectiveRoadPoint,
        axle: Axle,
        mechanical_trail: f64,
    ) -> Result<TireOutputs> {
        match self {
            TireParams::Linear(p) => lt_tire(alpha, fz, p, axle, mechanical_trail),
            TireParams::Brush(p) => bt_tire(alpha, fz, p, axle, mechanical_trail),
            TireParams::RigidRing(p) => {
                let out = rr_tire(alpha, fz, eff, p)?;
                Ok(match axle {
                    Axle::Front => out,
                    Axle::Rear => TireOutputs {
                        fy: out.fy,
                        ..Default::default()
                    },
                })
            }
        }
    }
}

/// Per-sample estimator output. Forces are axle totals (both tires) in the
/// kernel sign convention, so they share the sign of the slip angle.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub rf: SignalTrace,
    pub m_zf: SignalTrace,
    pub slip_f: SignalTrace,
    pub slip_r: SignalTrace,
    pub f_yf: SignalTrace,
    pub f_yr: SignalTrace,
    pub states: Vec<VehicleState>,
}

impl EstimationResult {
    pub fn len(&self) -> usize {
        self.rf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rf.is_empty()
    }
}

/// Rack force split into steering, road and interaction parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub rf_steering: SignalTrace,
    pub rf_road: SignalTrace,
    pub rf_total: SignalTrace,
    /// `rf_total - rf_steering - rf_road`, sample by sample.
    pub residual: SignalTrace,
}

impl Decomposition {
    pub fn from_components(
        rf_steering: SignalTrace,
        rf_road: SignalTrace,
        rf_total: SignalTrace,
    ) -> Result<Self> {
        let residual: Vec<f64> = rf_total
            .samples()
            .iter()
            .zip(rf_steering.samples())
            .zip(rf_road.samples())
            .map(|((t, s), r)| t - s - r)
            .collect();
        let residual = rf_total.with_samples(residual)?.renamed("residual", "N");
        Ok(Self {
            rf_steering: rf_steering.renamed("rf_steering", "N"),
            rf_road: rf_road.renamed("rf_road", "N"),
            rf_total: rf_total.renamed("rf_total", "N"),
            residual,
        })
    }

    /// `rf_steering + rf_road`.
    pub fn superposition(&self) -> SignalTrace {
        let sum = self
            .rf_steering
            .samples()
            .iter()
            .zip(self.rf_road.samples())
            .map(|(s, r)| s + r)
            .collect();
        self.rf_total
            .with_samples(sum)
            .expect("aligned")
            .renamed("rf_superposed", "N")
    }
}

/// Checks that the driver and road inputs share one grid and that the speed
/// never drops below the model's minimum.
pub(crate) fn check_inputs(
    delta: &SignalTrace,
    road: &RoadProfile,
    speed: &SignalTrace,
) -> Result<()> {
    if delta.is_empty() {
        return Err(Error::InvalidInput("steering trace is empty".into()));
    }
    for (label, t) in [("speed", speed), ("slope", road.slope())] {
        if !delta.is_aligned_with(t) {
            return Err(Error::Misaligned(format!(
                "steering has {} samples @ {} Hz but {label} has {} samples @ {} Hz",
                delta.len(),
                delta.rate_hz(),
                t.len(),
                t.rate_hz()
            )));
        }
    }
    for (i, &u) in speed.samples().iter().enumerate() {
        check_speed(u, i)?;
    }
    Ok(())
}

/// Distance travelled at each sample (trapezoidal integration of speed).
pub(crate) fn track_positions(speed: &SignalTrace) -> Vec<f64> {
    let dt = speed.dt();
    let mut x = 0.0;
    let mut out = Vec::with_capacity(speed.len());
    let s = speed.samples();
    for i in 0..s.len() {
        if i > 0 {
            x += 0.5 * (s[i - 1] + s[i]) * dt;
        }
        out.push(x);
    }
    out
}

fn lerp(a: &[f64], k: usize, frac: f64) -> f64 {
    if frac == 0.0 {
        a[k]
    } else {
        a[k] + frac * (a[k + 1] - a[k])
    }
}

/// Body-frame axle forces from per-tire kernel outputs.
///
/// The kernels return force along the slip direction (`F_y = C α` near zero
/// slip), which opposes the sliding motion on the vehicle; feeding it in
/// unsigned would make the closed loop diverge.
pub(crate) fn axle_forces(front: &TireOutputs, rear: &TireOutputs) -> AxleForces {
    AxleForces {
        fyf: -2.0 * front.fy,
        fyr: -2.0 * rear.fy,
        fxf: 0.0,
    }
}

/// Collects per-sample outputs into traces.
pub(crate) struct ResultBuilder {
    rf: Vec<f64>,
    m_zf: Vec<f64>,
    slip_f: Vec<f64>,
    slip_r: Vec<f64>,
    f_yf: Vec<f64>,
    f_yr: Vec<f64>,
    states: Vec<VehicleState>,
}

impl ResultBuilder {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            rf: Vec::with_capacity(n),
            m_zf: Vec::with_capacity(n),
            slip_f: Vec::with_capacity(n),
            slip_r: Vec::with_capacity(n),
            f_yf: Vec::with_capacity(n),
            f_yr: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn push(
        &mut self,
        sample: usize,
        rack_ratio: f64,
        state: VehicleState,
        slip: SlipAngles,
        front: TireOutputs,
        rear: TireOutputs,
    ) -> Result<()> {
        // lumped axle: both tires of an axle carry the same force and moment
        let m_zf = 2.0 * front.mz;
        let rf = rack_ratio * m_zf;
        let values = [rf, m_zf, slip.front, slip.rear, front.fy, rear.fy];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericFailure { sample });
        }
        self.rf.push(rf);
        self.m_zf.push(m_zf);
        self.slip_f.push(slip.front);
        self.slip_r.push(slip.rear);
        self.f_yf.push(2.0 * front.fy);
        self.f_yr.push(2.0 * rear.fy);
        self.states.push(state);
        Ok(())
    }

    pub(crate) fn finish(self, grid: &SignalTrace) -> Result<EstimationResult> {
        let trace = |name: &str, unit: &str, v: Vec<f64>| {
            SignalTrace::new(name, unit, grid.rate_hz(), grid.t0(), v)
        };
        Ok(EstimationResult {
            rf: trace("rf", "N", self.rf)?,
            m_zf: trace("m_zf", "N m", self.m_zf)?,
            slip_f: trace("slip_f", "rad", self.slip_f)?,
            slip_r: trace("slip_r", "rad", self.slip_r)?,
            f_yf: trace("f_yf", "N", self.f_yf)?,
            f_yr: trace("f_yr", "N", self.f_yr)?,
            states: self.states,
        })
    }
}

/// Static load plus the road-induced contact load increment, re-evaluated
/// for a different static load within a step.
fn shifted(eff: &EffectiveRoadPoint, fz_at_sample: f64, fz: f64) -> EffectiveRoadPoint {
    EffectiveRoadPoint {
        contact_load: (fz + eff.contact_load - fz_at_sample).max(0.0),
        ..*eff
    }
}

/// Runs one estimator over the full input record.
///
/// Each sample evaluates slip angles from the current state, normal loads
/// from the lateral slope, the tire kernel (with the enveloped road for the
/// rigid ring model), records the rack force, then advances the state with
/// one RK4 step. The run starts from rest (`v = 0`, yaw rate 0).
pub fn run_estimator(
    tire: &TireParams,
    delta: &SignalTrace,
    road: &RoadProfile,
    speed: &SignalTrace,
    vehicle: &VehicleParams,
) -> Result<EstimationResult> {
    validate_params(vehicle, tire).into_result()?;
    check_inputs(delta, road, speed)?;

    let n = delta.len();
    let dt = delta.dt();
    let d = delta.samples();
    let u = speed.samples();
    let th = road.slope().samples();
    let cleats = road.cleats();
    let positions = track_positions(speed);
    let t_m = vehicle.mechanical_trail;
    let rr = match tire {
        TireParams::RigidRing(p) => Some(p),
        _ => None,
    };
    let mut env_front = Enveloper::new();
    let mut env_rear = Enveloper::new();

    let mut state = VehicleState::default();
    let mut out = ResultBuilder::with_capacity(n);

    for k in 0..n {
        let loads = normal_forces(th[k], vehicle);
        let (eff_f, eff_r) = match rr {
            Some(p) => (
                env_front.update(cleats, positions[k], u[k], loads.front, p),
                env_rear.update(
                    cleats,
                    positions[k] - vehicle.wheelbase(),
                    u[k],
                    loads.rear,
                    p,
                ),
            ),
            None => (
                EffectiveRoadPoint::flat(loads.front),
                EffectiveRoadPoint::flat(loads.rear),
            ),
        };

        let slip = slip_angles(state, u[k], d[k], vehicle)?;
        let front = tire.evaluate(slip.front, loads.front, &eff_f, Axle::Front, t_m)?;
        let rear = tire.evaluate(slip.rear, loads.rear, &eff_r, Axle::Rear, t_m)?;
        out.push(k, vehicle.rack_ratio, state, slip, front, rear)?;

        if k + 1 == n {
            break;
        }
        state = step_rk4(state, dt, k, |tau, s| {
            let frac = tau / dt;
            let (dk, uk, thk) = (lerp(d, k, frac), lerp(u, k, frac), lerp(th, k, frac));
            let stage_loads: NormalLoads = normal_forces(thk, vehicle);
            let slip = slip_angles(s, uk, dk, vehicle)?;
            let ef = shifted(&eff_f, loads.front, stage_loads.front);
            let er = shifted(&eff_r, loads.rear, stage_loads.rear);
            let f = tire.evaluate(slip.front, stage_loads.front, &ef, Axle::Front, t_m)?;
            let r = tire.evaluate(slip.rear, stage_loads.rear, &er, Axle::Rear, t_m)?;
            deriv_small_angle(s, axle_forces(&f, &r), uk, thk, vehicle)
        })?;
    }
    out.finish(delta)
}

/// Splits rack force by evaluating `run` three times: steering only on a
/// level cleat-free road, road only with zero steering, and both inputs.
///
/// The runs are independent and execute on separate threads.
pub fn decompose_with<F>(delta: &SignalTrace, road: &RoadProfile, run: F) -> Result<Decomposition>
where
    F: Fn(&SignalTrace, &RoadProfile) -> Result<SignalTrace> + Sync,
{
    let zero_delta = delta.map(|_| 0.0)?;
    let flat = road.flattened();
    let (steering, road_only, total) = std::thread::scope(|scope| {
        let steering = scope.spawn(|| run(delta, &flat));
        let road_only = scope.spawn(|| run(&zero_delta, road));
        let total = run(delta, road);
        (
            steering.join().expect("steering run panicked"),
            road_only.join().expect("road run panicked"),
            total,
        )
    });
    Decomposition::from_components(steering?, road_only?, total?)
}

/// Rack force decomposition for one estimator.
pub fn decompose(
    tire: &TireParams,
    delta: &SignalTrace,
    road: &RoadProfile,
    speed: &SignalTrace,
    vehicle: &VehicleParams,
) -> Result<Decomposition> {
    decompose_with(delta, road, |d, r| {
        run_estimator(tire, d, r, speed, vehicle).map(|res| res.rf)
    })
}
