use super::{check_load, check_slip, EffectiveRoadPoint, TireOutputs};
use crate::error::{Error, Result};
use crate::params::TireParamsRR;

/// `sin`/`cos` argument of the Magic Formula family.
fn mf_angle(b: f64, c: f64, e: f64, x: f64) -> f64 {
    let bx = b * x;
    c * (bx - e * (bx - bx.atan())).atan()
}

/// Rigid ring tire forces from slip, static load and the enveloped
/// contact-patch load.
///
/// The lateral peak and the residual moment follow the contact-patch load
/// `F_cN`, so obstacle-induced load transients reach the aligning moment.
/// The residual moment scales with the load deviation `F_cN - F_z` and
/// vanishes on a smooth road.
pub fn rr_tire(
    alpha: f64,
    fz: f64,
    eff: &EffectiveRoadPoint,
    params: &TireParamsRR,
) -> Result<TireOutputs> {
    check_load(fz)?;
    check_slip(alpha)?;
    if !(eff.contact_load >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "contact patch load must be non-negative, got {}",
            eff.contact_load
        )));
    }
    let lat = &params.lateral;
    let tr = &params.trail;
    let res = &params.residual;

    let tan_a = alpha.tan();
    let alpha_y = lat.sh + tan_a;
    let alpha_t = tr.sh + tan_a;
    let alpha_r = tan_a;

    let dy = lat.d * eff.contact_load;
    let fy = dy * mf_angle(lat.b, lat.c, lat.e, alpha_y).sin() + lat.sv;

    let dt = tr.d * params.half_length;
    let trail = dt * mf_angle(tr.b, tr.c, tr.e, alpha_t).cos();

    let dr = res.d * params.half_length * (eff.contact_load - fz);
    let residual = dr * (res.b * alpha_r).atan().cos();

    Ok(TireOutputs {
        fy,
        trail,
        mz: -trail * fy + residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FZ: f64 = 5306.5;

    fn flat() -> EffectiveRoadPoint {
        EffectiveRoadPoint::flat(FZ)
    }

    #[test]
    fn zero_slip() {
        let p = TireParamsRR::default();
        let o = rr_tire(0.0, FZ, &flat(), &p).unwrap();
        assert_eq!(o.fy, 0.0);
        assert_eq!(o.trail, p.trail.d * p.half_length);
        assert_eq!(o.mz, 0.0);

        // residual moment appears at zero slip once the contact load deviates
        let bump = EffectiveRoadPoint {
            contact_load: FZ + 1000.0,
            ..flat()
        };
        let o = rr_tire(0.0, FZ, &bump, &p).unwrap();
        let dr = p.residual.d * p.half_length * 1000.0;
        assert!((o.mz - dr).abs() < 1e-12);
    }

    #[test]
    fn bounded_by_peak() {
        let p = TireParamsRR::default();
        for i in -200..=200 {
            let a = i as f64 * 0.007;
            let o = rr_tire(a, FZ, &flat(), &p).unwrap();
            assert!((o.fy - p.lateral.sv).abs() <= p.lateral.d * FZ + 1e-9);
        }
    }

    #[test]
    fn odd_without_shifts() {
        let p = TireParamsRR::default();
        for a in [1e-3, 0.05, 0.2, 0.7] {
            let pos = rr_tire(a, FZ, &flat(), &p).unwrap();
            let neg = rr_tire(-a, FZ, &flat(), &p).unwrap();
            assert_eq!(pos.fy, -neg.fy);
            assert_eq!(pos.mz, -neg.mz);
        }
    }

    #[test]
    fn rejects_negative_contact_load() {
        let eff = EffectiveRoadPoint {
            contact_load: -1.0,
            ..flat()
        };
        assert!(rr_tire(0.0, FZ, &eff, &TireParamsRR::default()).is_err());
    }
}
