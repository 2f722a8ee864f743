use super::{check_load, check_slip, sgn, Axle, TireOutputs};
use crate::error::Result;
use crate::params::TireParamsLT;

/// Linear tire: force proportional to slip, trail shrinking with `tan(alpha)`.
pub fn lt_tire(
    alpha: f64,
    fz: f64,
    params: &TireParamsLT,
    axle: Axle,
    mechanical_trail: f64,
) -> Result<TireOutputs> {
    check_load(fz)?;
    check_slip(alpha)?;
    match axle {
        Axle::Rear => Ok(TireOutputs {
            fy: params.c_alpha_rear * alpha,
            ..Default::default()
        }),
        Axle::Front => {
            let fy = params.c_alpha_front * alpha;
            let trail = params.trail_zero_slip
                * (1.0 - sgn(alpha) * params.c_alpha_front / (3.0 * params.mu * fz) * alpha.tan());
            Ok(TireOutputs {
                fy,
                trail,
                mz: -(trail + mechanical_trail) * fy,
            })
        }
    }
}
