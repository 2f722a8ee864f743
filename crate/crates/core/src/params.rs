//! Physical parameter sets and the JSON run configuration.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lumped bicycle-model vehicle constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleParams {
    /// kg
    pub mass: f64,
    /// kg m^2
    pub yaw_inertia: f64,
    /// CG to front axle, m
    pub lf: f64,
    /// CG to rear axle, m
    pub lr: f64,
    /// Aligning moment to rack force transmission ratio, 1/m.
    pub rack_ratio: f64,
    /// Front mechanical (caster) trail, m.
    pub mechanical_trail: f64,
    /// m/s^2
    pub gravity: f64,
}

impl VehicleParams {
    /// Lincoln MKX style test vehicle: 1972 kg, 3600 kg m^2, 2.88 m wheelbase.
    ///
    /// The axle split, rack ratio and mechanical trail are not published for
    /// this vehicle; the values here are a plausible example only.
    pub fn test_vehicle() -> Self {
        Self {
            mass: 1972.0,
            yaw_inertia: 3600.0,
            lf: 1.30,
            lr: 1.58,
            rack_ratio: 6.5,
            mechanical_trail: 0.03,
            gravity: 9.81,
        }
    }

    /// Simulated SUV counterpart: 2257 kg, 3525 kg m^2, 2.95 m wheelbase.
    pub fn simulated_suv() -> Self {
        Self {
            mass: 2257.0,
            yaw_inertia: 3525.0,
            lf: 1.33,
            lr: 1.62,
            ..Self::test_vehicle()
        }
    }

    pub fn wheelbase(&self) -> f64 {
        self.lf + self.lr
    }
}

/// Linear tire: constant cornering stiffness per tire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TireParamsLT {
    /// N/rad, per front tire
    pub c_alpha_front: f64,
    /// N/rad, per rear tire
    pub c_alpha_rear: f64,
    /// Pneumatic trail at zero front slip, m.
    pub trail_zero_slip: f64,
    pub mu: f64,
}

impl Default for TireParamsLT {
    fn default() -> Self {
        Self {
            c_alpha_front: 80_000.0,
            c_alpha_rear: 80_000.0,
            trail_zero_slip: 0.1 / 3.0,
            mu: 1.0,
        }
    }
}

/// Brush (elastic foundation) tire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TireParamsBT {
    /// Tread stiffness per unit length, N/m^2.
    pub tread_stiffness: f64,
    /// Half of the contact patch length, m.
    pub half_length: f64,
    pub mu: f64,
}

impl TireParamsBT {
    /// Saturation parameter `(2/3) c_p a^2 / (mu F_z)`; full sliding starts
    /// at |alpha| = 1 / theta_s.
    pub fn theta_s(&self, fz: f64) -> f64 {
        2.0 / 3.0 * self.tread_stiffness * self.half_length * self.half_length / (self.mu * fz)
    }

    /// Small-slip cornering stiffness `2 c_p a^2`.
    pub fn cornering_stiffness(&self) -> f64 {
        2.0 * self.tread_stiffness * self.half_length * self.half_length
    }
}

impl Default for TireParamsBT {
    fn default() -> Self {
        Self {
            tread_stiffness: 4.0e6,
            half_length: 0.1,
            mu: 1.0,
        }
    }
}

/// Magic Formula lateral force coefficients. Peak is `d * F_cN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfLateral {
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub sh: f64,
    /// Vertical shift, N.
    pub sv: f64,
}

/// Magic Formula pneumatic trail coefficients. Peak trail is `d * a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfTrail {
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub sh: f64,
}

/// Residual aligning moment coefficients. Peak is `d * a * (F_cN - F_z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfResidual {
    pub b: f64,
    pub d: f64,
}

/// Rigid ring tire with enveloping geometry and vertical spring-damper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TireParamsRR {
    pub lateral: MfLateral,
    pub trail: MfTrail,
    pub residual: MfResidual,
    /// N/m
    pub vertical_stiffness: f64,
    /// N s/m
    pub vertical_damping: f64,
    /// Unloaded radius, m.
    pub radius: f64,
    /// Contact half-length, m.
    pub half_length: f64,
    /// Distance between the two enveloping probes, m.
    pub tandem_length: f64,
}

impl Default for TireParamsRR {
    /// Coefficients fitted to the default brush tire at the nominal front
    /// load of the test vehicle. The trail peak includes the mechanical
    /// trail since the rigid ring moment has no separate caster term.
    fn default() -> Self {
        Self {
            lateral: MfLateral {
                b: 11.19,
                c: 1.348,
                d: 1.0,
                e: 0.367,
                sh: 0.0,
                sv: 0.0,
            },
            trail: MfTrail {
                b: 18.4,
                c: 1.15,
                d: 0.6333,
                e: 1.0,
                sh: 0.0,
            },
            residual: MfResidual { b: 8.0, d: 0.5 },
            vertical_stiffness: 250_000.0,
            vertical_damping: 400.0,
            radius: 0.37,
            half_length: 0.1,
            tandem_length: 0.16,
        }
    }
}

/// The three tire model parameterisations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TireParams {
    Linear(TireParamsLT),
    Brush(TireParamsBT),
    RigidRing(TireParamsRR),
}

/// A single violated parameter constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub constraint: &'static str,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fields(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.field.as_str()).collect()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidParams(self))
        }
    }

    fn check(&mut self, field: &str, ok: bool, constraint: &'static str) {
        if !ok {
            self.violations.push(Violation {
                field: field.to_owned(),
                constraint,
            });
        }
    }

    fn positive(&mut self, field: &str, value: f64) {
        self.check(field, value.is_finite() && value > 0.0, "must be > 0");
    }

    fn non_negative(&mut self, field: &str, value: f64) {
        self.check(field, value.is_finite() && value >= 0.0, "must be >= 0");
    }

    fn finite(&mut self, field: &str, value: f64) {
        self.check(field, value.is_finite(), "must be finite");
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} {}", v.field, v.constraint))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_vehicle(v: &VehicleParams) -> ValidationReport {
    let mut r = ValidationReport::default();
    vehicle_into(&mut r, v);
    r
}

fn vehicle_into(r: &mut ValidationReport, v: &VehicleParams) {
    r.positive("vehicle.mass", v.mass);
    r.positive("vehicle.yaw_inertia", v.yaw_inertia);
    r.positive("vehicle.lf", v.lf);
    r.positive("vehicle.lr", v.lr);
    r.positive("vehicle.rack_ratio", v.rack_ratio);
    r.non_negative("vehicle.mechanical_trail", v.mechanical_trail);
    r.positive("vehicle.gravity", v.gravity);
}

pub fn validate_tire(tire: &TireParams) -> ValidationReport {
    let mut r = ValidationReport::default();
    match tire {
        TireParams::Linear(p) => {
            r.positive("tire_lt.c_alpha_front", p.c_alpha_front);
            r.positive("tire_lt.c_alpha_rear", p.c_alpha_rear);
            r.positive("tire_lt.trail_zero_slip", p.trail_zero_slip);
            r.positive("tire_lt.mu", p.mu);
        }
        TireParams::Brush(p) => {
            r.positive("tire_bt.tread_stiffness", p.tread_stiffness);
            r.positive("tire_bt.half_length", p.half_length);
            r.positive("tire_bt.mu", p.mu);
        }
        TireParams::RigidRing(p) => {
            r.positive("tire_rr.lateral.b", p.lateral.b);
            r.check(
                "tire_rr.lateral.c",
                p.lateral.c.is_finite() && p.lateral.c >= 1.0,
                "must be >= 1",
            );
            r.positive("tire_rr.lateral.d", p.lateral.d);
            r.finite("tire_rr.lateral.e", p.lateral.e);
            r.finite("tire_rr.lateral.sh", p.lateral.sh);
            r.finite("tire_rr.lateral.sv", p.lateral.sv);
            r.positive("tire_rr.trail.b", p.trail.b);
            r.check(
                "tire_rr.trail.c",
                p.trail.c.is_finite() && p.trail.c >= 1.0,
                "must be >= 1",
            );
            r.positive("tire_rr.trail.d", p.trail.d);
            r.finite("tire_rr.trail.e", p.trail.e);
            r.finite("tire_rr.trail.sh", p.trail.sh);
            r.positive("tire_rr.residual.b", p.residual.b);
            r.positive("tire_rr.residual.d", p.residual.d);
            r.positive("tire_rr.vertical_stiffness", p.vertical_stiffness);
            r.non_negative("tire_rr.vertical_damping", p.vertical_damping);
            r.positive("tire_rr.half_length", p.half_length);
            r.check(
                "tire_rr.radius",
                p.radius.is_finite() && p.radius > p.half_length,
                "must exceed half_length",
            );
            r.positive("tire_rr.tandem_length", p.tandem_length);
        }
    }
    r
}

/// Checks a vehicle and tire parameter set, listing every violated field.
pub fn validate_params(v: &VehicleParams, tire: &TireParams) -> ValidationReport {
    let mut r = validate_vehicle(v);
    r.violations.extend(validate_tire(tire).violations);
    r
}

/// Simulation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub rate_hz: f64,
    /// s
    pub duration: f64,
    /// Hand-wheel to road-wheel ratio. When set, `delta.csv` is read as a
    /// hand-wheel angle and divided by this ratio.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steering_ratio: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            rate_hz: 250.0,
            duration: 60.0,
            steering_ratio: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Tire relaxation length, m.
    pub relaxation_length: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            relaxation_length: 0.5,
        }
    }
}

/// The full JSON run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub vehicle: VehicleParams,
    pub tire_lt: TireParamsLT,
    pub tire_bt: TireParamsBT,
    pub tire_rr: TireParamsRR,
    pub sim: SimConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
}

impl Config {
    /// Test-vehicle configuration with the example axle split.
    pub fn example() -> Self {
        Self {
            vehicle: VehicleParams::test_vehicle(),
            tire_lt: TireParamsLT::default(),
            tire_bt: TireParamsBT::default(),
            tire_rr: TireParamsRR::default(),
            sim: SimConfig::default(),
            oracle: OracleConfig::default(),
        }
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Config {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn tire(&self, kind: crate::EstimatorKind) -> TireParams {
        match kind {
            crate::EstimatorKind::Lt => TireParams::Linear(self.tire_lt),
            crate::EstimatorKind::Bt => TireParams::Brush(self.tire_bt),
            crate::EstimatorKind::Rr => TireParams::RigidRing(self.tire_rr),
        }
    }

    /// Validates every section.
    pub fn validate(&self) -> ValidationReport {
        let mut r = validate_vehicle(&self.vehicle);
        for t in [
            TireParams::Linear(self.tire_lt),
            TireParams::Brush(self.tire_bt),
            TireParams::RigidRing(self.tire_rr),
        ] {
            r.violations.extend(validate_tire(&t).violations);
        }
        r.positive("sim.rate_hz", self.sim.rate_hz);
        r.positive("sim.duration", self.sim.duration);
        if let Some(ratio) = self.sim.steering_ratio {
            r.positive("sim.steering_ratio", ratio);
        }
        r.positive("oracle.relaxation_length", self.oracle.relaxation_length);
        r
    }
}
