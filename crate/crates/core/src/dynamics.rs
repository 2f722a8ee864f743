//! Two degree-of-freedom bicycle model: lateral speed and yaw rate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::VehicleParams;

/// Lowest forward speed the slip kinematics accept, m/s.
pub const MIN_SPEED: f64 = 1.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct VehicleState {
    /// Lateral speed, m/s.
    pub v: f64,
    /// Yaw rate, rad/s.
    pub psi_dot: f64,
}

impl VehicleState {
    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.psi_dot.is_finite()
    }

    fn advanced(self, d: StateDerivative, h: f64) -> Self {
        Self {
            v: self.v + h * d.v_dot,
            psi_dot: self.psi_dot + h * d.psi_ddot,
        }
    }
}

/// Time derivative of a [`VehicleState`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StateDerivative {
    pub v_dot: f64,
    pub psi_ddot: f64,
}

impl StateDerivative {
    pub fn is_finite(&self) -> bool {
        self.v_dot.is_finite() && self.psi_ddot.is_finite()
    }
}

/// Axle-level forces acting on the bicycle, N.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AxleForces {
    pub fyf: f64,
    pub fyr: f64,
    pub fxf: f64,
}

/// Per-tire normal loads, N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalLoads {
    pub front: f64,
    pub rear: f64,
}

pub(crate) fn check_speed(u: f64, sample: usize) -> Result<()> {
    if u >= MIN_SPEED {
        Ok(())
    } else {
        Err(Error::SpeedTooLow {
            speed: u,
            min: MIN_SPEED,
            sample,
        })
    }
}

/// Small steering angle lateral dynamics on a road with lateral slope
/// `theta`. With `theta = 0` this is the flat-road model.
pub fn deriv_small_angle(
    state: VehicleState,
    forces: AxleForces,
    u: f64,
    theta: f64,
    p: &VehicleParams,
) -> Result<StateDerivative> {
    check_speed(u, 0)?;
    Ok(StateDerivative {
        v_dot: (forces.fyf + forces.fyr) / p.mass - u * state.psi_dot - p.gravity * theta.sin(),
        psi_ddot: (p.lf * forces.fyf - p.lr * forces.fyr) / p.yaw_inertia,
    })
}

/// Lateral dynamics without the small steering angle reduction; the front
/// axle forces are rotated through `delta` into the body frame.
pub fn deriv_full(
    state: VehicleState,
    forces: AxleForces,
    u: f64,
    theta: f64,
    delta: f64,
    p: &VehicleParams,
) -> Result<StateDerivative> {
    check_speed(u, 0)?;
    let (sd, cd) = delta.sin_cos();
    let front_lateral = forces.fxf * sd + forces.fyf * cd;
    Ok(StateDerivative {
        v_dot: (front_lateral + forces.fyr) / p.mass - u * state.psi_dot - p.gravity * theta.sin(),
        psi_ddot: (p.lf * front_lateral - p.lr * forces.fyr) / p.yaw_inertia,
    })
}

/// Static per-tire normal loads on a laterally sloped road.
pub fn normal_forces(theta: f64, p: &VehicleParams) -> NormalLoads {
    let k = p.mass * p.gravity * theta.cos() / (2.0 * p.wheelbase());
    NormalLoads {
        front: k * p.lr,
        rear: k * p.lf,
    }
}

/// One classical fourth-order Runge-Kutta step.
///
/// `deriv` receives the stage time offset within the step (0, dt/2 or dt)
/// so callers can interpolate their inputs. `sample` only labels errors.
pub fn step_rk4<F>(
    state: VehicleState,
    dt: f64,
    sample: usize,
    mut deriv: F,
) -> Result<VehicleState>
where
    F: FnMut(f64, VehicleState) -> Result<StateDerivative>,
{
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!(
            "step must be positive, got {dt}"
        )));
    }
    let half = 0.5 * dt;
    let mut eval = |tau: f64, s: VehicleState| -> Result<StateDerivative> {
        let d = deriv(tau, s)?;
        if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::NumericFailure { sample })
        }
    };
    let k1 = eval(0.0, state)?;
    let k2 = eval(half, state.advanced(k1, half))?;
    let k3 = eval(half, state.advanced(k2, half))?;
    let k4 = eval(dt, state.advanced(k3, dt))?;
    let next = VehicleState {
        v: state.v + dt / 6.0 * (k1.v_dot + 2.0 * k2.v_dot + 2.0 * k3.v_dot + k4.v_dot),
        psi_dot: state.psi_dot
            + dt / 6.0 * (k1.psi_ddot + 2.0 * k2.psi_ddot + 2.0 * k3.psi_ddot + k4.psi_ddot),
    };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::NumericFailure { sample })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> VehicleParams {
        VehicleParams::test_vehicle()
    }

    #[test]
    fn equilibrium() {
        let d = deriv_small_angle(
            VehicleState::default(),
            AxleForces::default(),
            10.0,
            0.0,
            &params(),
        )
        .unwrap();
        assert_eq!(d, StateDerivative::default());
    }

    #[test]
    fn centripetal_coupling() {
        let s = VehicleState {
            v: 0.0,
            psi_dot: 0.1,
        };
        let d = deriv_small_angle(s, AxleForces::default(), 10.0, 0.0, &params()).unwrap();
        assert_relative_eq!(d.v_dot, -1.0, epsilon = 1e-15);
        assert_eq!(d.psi_ddot, 0.0);
    }

    #[test]
    fn gravity_on_eleven_degree_slope() {
        let p = VehicleParams {
            mass: 2000.0,
            ..params()
        };
        let d = deriv_small_angle(
            VehicleState::default(),
            AxleForces::default(),
            10.0,
            0.1919,
            &p,
        )
        .unwrap();
        // -9.81 * sin(0.1919)
        assert_relative_eq!(d.v_dot, -1.871_01, epsilon = 1e-5);
    }

    #[test]
    fn low_speed_is_rejected() {
        let e = deriv_small_angle(
            VehicleState::default(),
            AxleForces::default(),
            0.5,
            0.0,
            &params(),
        );
        assert!(matches!(e, Err(Error::SpeedTooLow { .. })));
        let e = deriv_full(
            VehicleState::default(),
            AxleForces::default(),
            0.5,
            0.0,
            0.0,
            &params(),
        );
        assert!(matches!(e, Err(Error::SpeedTooLow { .. })));
    }

    #[test]
    fn full_trig_with_longitudinal_force() {
        let p = VehicleParams {
            mass: 1000.0,
            lf: 1.4,
            yaw_inertia: 3500.0,
            ..params()
        };
        let f = AxleForces {
            fxf: 1000.0,
            ..Default::default()
        };
        let d = deriv_full(
            VehicleState::default(),
            f,
            10.0,
            0.0,
            std::f64::consts::FRAC_PI_2,
            &p,
        )
        .unwrap();
        assert_relative_eq!(d.v_dot, 1.0, epsilon = 1e-12);
        assert_relative_eq!(d.psi_ddot, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn full_trig_small_delta_is_second_order_close() {
        let p = params();
        let s = VehicleState {
            v: 0.3,
            psi_dot: 0.05,
        };
        let f = AxleForces {
            fyf: 3000.0,
            fyr: 2500.0,
            fxf: 0.0,
        };
        let delta = 0.01;
        let a = deriv_small_angle(s, f, 8.0, 0.05, &p).unwrap();
        let b = deriv_full(s, f, 8.0, 0.05, delta, &p).unwrap();
        // only the cos(delta) term differs: fyf (1 - cos delta) ~ fyf delta^2 / 2
        let bound_v = f.fyf * delta * delta / p.mass;
        let bound_r = p.lf * f.fyf * delta * delta / p.yaw_inertia;
        assert!((a.v_dot - b.v_dot).abs() <= bound_v);
        assert!((a.psi_ddot - b.psi_ddot).abs() <= bound_r);
    }

    #[test]
    fn normal_loads() {
        let p = VehicleParams {
            lf: 1.44,
            lr: 1.44,
            ..params()
        };
        let n = normal_forces(0.0, &p);
        assert_relative_eq!(n.front, p.mass * p.gravity / 4.0, max_relative = 1e-15);
        assert_relative_eq!(n.front, n.rear);
        assert_relative_eq!(n.front, 4836.33, epsilon = 0.01);

        let slope = 11f64.to_radians();
        let s = normal_forces(slope, &p);
        assert_relative_eq!(s.front / n.front, 0.981_627, epsilon = 1e-6);
        assert_relative_eq!(s.rear / n.rear, 0.981_627, epsilon = 1e-6);
    }

    #[test]
    fn rk4_fixed_point_and_constant_rate() {
        let s = VehicleState {
            v: 0.7,
            psi_dot: -0.2,
        };
        let same = step_rk4(s, 0.004, 0, |_, _| Ok(StateDerivative::default())).unwrap();
        assert_eq!(same, s);

        let c = 2.5;
        let next = step_rk4(s, 0.004, 0, |_, _| {
            Ok(StateDerivative {
                v_dot: c,
                psi_ddot: 0.0,
            })
        })
        .unwrap();
        assert_relative_eq!(next.v, 0.7 + c * 0.004, epsilon = 1e-15);
    }

    #[test]
    fn rk4_exponential_decay() {
        let s = VehicleState {
            v: 1.0,
            psi_dot: 1.0,
        };
        let dt = 0.004;
        let next = step_rk4(s, dt, 0, |_, x| {
            Ok(StateDerivative {
                v_dot: -x.v,
                psi_ddot: -x.psi_dot,
            })
        })
        .unwrap();
        let exact = (-dt).exp();
        assert!(((next.v - exact) / exact).abs() <= 1e-10);
    }

    #[test]
    fn rk4_reports_nonfinite_with_sample() {
        let e = step_rk4(VehicleState::default(), 0.004, 17, |_, _| {
            Ok(StateDerivative {
                v_dot: f64::NAN,
                psi_ddot: 0.0,
            })
        });
        assert!(matches!(e, Err(Error::NumericFailure { sample: 17 })));
    }
}
