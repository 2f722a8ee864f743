use super::{check_load, sgn, Axle, TireOutputs};
use crate::error::Result;
use crate::params::TireParamsBT;

/// Brush tire with a parabolic pressure distribution.
///
/// The cubic adhesion law applies for `theta_s |alpha| <= 1`; beyond that the
/// whole patch slides, the force saturates at `mu F_z` and the pneumatic
/// trail is zero.
pub fn bt_tire(
    alpha: f64,
    fz: f64,
    params: &TireParamsBT,
    axle: Axle,
    mechanical_trail: f64,
) -> Result<TireOutputs> {
    check_load(fz)?;
    let sigma = params.theta_s(fz) * alpha.abs();
    let peak = params.mu * fz;
    let (fy, trail) = if sigma <= 1.0 {
        let fy = sgn(alpha) * peak * (3.0 * sigma - 3.0 * sigma * sigma + sigma * sigma * sigma);
        let trail = params.half_length / 3.0
            * (1.0 - 3.0 * sigma + 3.0 * sigma * sigma - sigma * sigma * sigma)
            / (1.0 - sigma + sigma * sigma / 3.0);
        (fy, trail)
    } else {
        (sgn(alpha) * peak, 0.0)
    };
    Ok(match axle {
        Axle::Rear => TireOutputs {
            fy,
            ..Default::default()
        },
        Axle::Front => TireOutputs {
            fy,
            trail,
            mz: -(trail + mechanical_trail) * fy,
        },
    })
}
