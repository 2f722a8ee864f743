//! Effective road profile seen by a tire rolling over cleats.
//!
//! A rigid circle of the tire radius rolled over each rectangular cleat
//! gives the basic curve (a rounded, widened image of the cleat). Two probes
//! a tandem length apart follow that curve; their mean height and height
//! difference give the effective height and forward slope. The contact
//! patch load then follows from a quasi-static vertical spring-damper.

use crate::params::TireParamsRR;
use crate::road::Cleat;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveRoadPoint {
    /// Effective road height, m.
    pub height: f64,
    /// Effective forward slope, rad.
    pub slope: f64,
    /// Contact patch normal load, N.
    pub contact_load: f64,
}

impl EffectiveRoadPoint {
    /// Smooth road under static load `fz`.
    pub fn flat(fz: f64) -> Self {
        Self {
            height: 0.0,
            slope: 0.0,
            contact_load: fz,
        }
    }
}

/// Height of the rigid-circle basic curve at track position `x`.
fn basic_curve(cleats: &[Cleat], x: f64, radius: f64) -> f64 {
    // cleats are sorted by position and do not overlap meaningfully, so only
    // those within one radius of x can contribute
    let first = cleats.partition_point(|c| c.end() + radius <= x);
    cleats[first..]
        .iter()
        .take_while(|c| c.position - radius < x)
        .map(|c| {
            let d = if x < c.position {
                c.position - x
            } else if x > c.end() {
                x - c.end()
            } else {
                0.0
            };
            let drop = radius - (radius * radius - d * d).max(0.0).sqrt();
            (c.height - drop).max(0.0)
        })
        .fold(0.0, f64::max)
}

/// Effective height and forward slope at track position `x`.
pub fn effective_height(cleats: &[Cleat], x: f64, params: &TireParamsRR) -> (f64, f64) {
    let half = 0.5 * params.tandem_length;
    let front = basic_curve(cleats, x + half, params.radius);
    let rear = basic_curve(cleats, x - half, params.radius);
    (
        0.5 * (front + rear),
        ((front - rear) / params.tandem_length).atan(),
    )
}

/// Tracks one tire along the road, remembering the previous effective height
/// to form the deflection rate.
#[derive(Debug, Clone, Default)]
pub struct Enveloper {
    prev: Option<(f64, f64)>,
}

impl Enveloper {
    pub fn new() -> Self {
        Self::default()
    }

    /// Effective road point at position `x` for forward speed `x_dot` and
    /// static load `fz`.
    pub fn update(
        &mut self,
        cleats: &[Cleat],
        x: f64,
        x_dot: f64,
        fz: f64,
        params: &TireParamsRR,
    ) -> EffectiveRoadPoint {
        if cleats.is_empty() {
            self.prev = Some((x, 0.0));
            return EffectiveRoadPoint::flat(fz);
        }
        let (height, slope) = effective_height(cleats, x, params);
        let rate = match self.prev {
            Some((px, ph)) if x > px => (height - ph) / (x - px) * x_dot,
            _ => 0.0,
        };
        self.prev = Some((x, height));
        // static deflection fz / k_z plus the road-induced part
        let load = fz + params.vertical_stiffness * height + params.vertical_damping * rate;
        EffectiveRoadPoint {
            height,
            slope,
            contact_load: load.max(0.0),
        }
    }
}

/// Stateless evaluation with no deflection-rate history.
pub fn envelope_road(
    cleats: &[Cleat],
    x: f64,
    x_dot: f64,
    fz: f64,
    params: &TireParamsRR,
) -> EffectiveRoadPoint {
    Enveloper::new().update(cleats, x, x_dot, fz, params)
}
