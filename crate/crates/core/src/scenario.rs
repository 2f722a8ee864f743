//! Synthetic recreations of the three driving experiments.
//!
//! Steering traces are road-wheel angles in radians. Every scenario starts
//! with a straight lead-in so the zero initial state settles before the
//! first event.

use std::f64::consts::PI;

use crate::error::Result;
use crate::road::{Cleat, RoadProfile};
use crate::signal::SignalTrace;

/// Inputs for one estimator run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub delta: SignalTrace,
    pub speed: SignalTrace,
    pub road: RoadProfile,
}

impl Scenario {
    pub fn rate_hz(&self) -> f64 {
        self.delta.rate_hz()
    }

    pub fn duration(&self) -> f64 {
        self.delta.end_time() - self.delta.t0()
    }

    /// Same scenario with the steering replaced.
    pub fn with_delta(&self, delta: SignalTrace) -> Self {
        Self {
            delta,
            ..self.clone()
        }
    }

    /// Same scenario with a different road.
    pub fn with_road(&self, road: RoadProfile) -> Self {
        Self {
            road,
            ..self.clone()
        }
    }
}

fn kmh(v: f64) -> f64 {
    v / 3.6
}

fn sample_count(duration: f64, rate_hz: f64) -> usize {
    (duration * rate_hz).round() as usize + 1
}

/// Smooth 0 -> 1 transition over `[start, start + width]`.
fn raised_cosine(t: f64, start: f64, width: f64) -> f64 {
    if t <= start {
        0.0
    } else if t >= start + width {
        1.0
    } else {
        0.5 * (1.0 - (PI * (t - start) / width).cos())
    }
}

fn build(
    name: &str,
    rate_hz: f64,
    duration: f64,
    speed: f64,
    delta: impl Fn(f64) -> f64,
    slope: impl Fn(f64) -> f64,
    cleats: Vec<Cleat>,
) -> Result<Scenario> {
    let n = sample_count(duration, rate_hz);
    let delta = SignalTrace::from_fn("delta", "rad", rate_hz, n, delta)?;
    let speed = SignalTrace::constant("speed", "m/s", rate_hz, n, speed)?;
    let slope = SignalTrace::from_fn("slope", "rad", rate_hz, n, slope)?;
    let road = RoadProfile::from_slope(slope)?.with_cleats(cleats)?;
    Ok(Scenario {
        name: name.to_owned(),
        delta,
        speed,
        road,
    })
}

/// Crossing a crowned road: the lateral slope rises to `+slope`, holds, then
/// swings through the crown to `-slope`. The driver adds a slow, small
/// corrective steering sinusoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp1Config {
    pub rate_hz: f64,
    pub speed_kmh: f64,
    pub slope_deg: f64,
    pub lead_in_s: f64,
    /// Time to climb onto the first side of the crown.
    pub ramp_s: f64,
    pub crossing_start_s: f64,
    /// Time to cross from one side of the crown to the other.
    pub crossing_s: f64,
    pub duration_s: f64,
    pub steer_amplitude_deg: f64,
    pub steer_period_s: f64,
}

impl Default for Exp1Config {
    fn default() -> Self {
        Self {
            rate_hz: 250.0,
            speed_kmh: 20.0,
            slope_deg: 11.0,
            lead_in_s: 2.0,
            ramp_s: 2.0,
            crossing_start_s: 12.0,
            crossing_s: 4.0,
            duration_s: 30.0,
            steer_amplitude_deg: 4.0,
            steer_period_s: 8.0,
        }
    }
}

pub fn gen_experiment1(cfg: &Exp1Config) -> Result<Scenario> {
    let c = *cfg;
    let slope = c.slope_deg.to_radians();
    let amp = c.steer_amplitude_deg.to_radians();
    build(
        "exp1",
        c.rate_hz,
        c.duration_s,
        kmh(c.speed_kmh),
        move |t| {
            if t < c.lead_in_s {
                0.0
            } else {
                amp * (2.0 * PI * (t - c.lead_in_s) / c.steer_period_s).sin()
            }
        },
        move |t| {
            let up = raised_cosine(t, c.lead_in_s, c.ramp_s);
            let across = raised_cosine(t, c.crossing_start_s, c.crossing_s);
            slope * (up - 2.0 * across)
        },
        Vec::new(),
    )
}

/// Aggressive sinusoidal slalom on a constant lateral slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp2Config {
    pub rate_hz: f64,
    pub speed_kmh: f64,
    pub slope_deg: f64,
    /// Road-wheel steering amplitude.
    pub amplitude_deg: f64,
    pub period_s: f64,
    pub lead_in_s: f64,
    pub slalom_s: f64,
    pub lead_out_s: f64,
}

impl Default for Exp2Config {
    fn default() -> Self {
        Self {
            rate_hz: 250.0,
            speed_kmh: 15.0,
            slope_deg: 11.0,
            amplitude_deg: 60.0,
            period_s: 4.0,
            lead_in_s: 2.0,
            slalom_s: 20.0,
            lead_out_s: 2.0,
        }
    }
}

pub fn gen_experiment2(cfg: &Exp2Config) -> Result<Scenario> {
    let c = *cfg;
    let slope = c.slope_deg.to_radians();
    let amp = c.amplitude_deg.to_radians();
    build(
        "exp2",
        c.rate_hz,
        c.lead_in_s + c.slalom_s + c.lead_out_s,
        kmh(c.speed_kmh),
        move |t| {
            let s = t - c.lead_in_s;
            if s <= 0.0 || s >= c.slalom_s {
                0.0
            } else {
                amp * (2.0 * PI * s / c.period_s).sin()
            }
        },
        move |_| slope,
        Vec::new(),
    )
}

/// Slalom over thirteen cleats on a level road.
#[derive(Debug, Clone, PartialEq)]
pub struct Exp3Config {
    pub rate_hz: f64,
    pub speed_kmh: f64,
    pub amplitude_deg: f64,
    pub period_s: f64,
    /// Constant steering offset applied over the whole run.
    pub steer_bias_deg: f64,
    pub lead_in_s: f64,
    pub first_cleat_m: f64,
    pub cleat_spacing_m: f64,
    pub cleat_heights: Vec<f64>,
    pub cleat_length: f64,
    pub lead_out_s: f64,
}

impl Default for Exp3Config {
    fn default() -> Self {
        let mut heights = vec![0.01; 4];
        heights.extend([0.02; 5]);
        heights.extend([0.03; 4]);
        Self {
            rate_hz: 250.0,
            speed_kmh: 30.0,
            amplitude_deg: 30.0,
            period_s: 3.0,
            steer_bias_deg: 0.0,
            lead_in_s: 2.0,
            first_cleat_m: 25.0,
            cleat_spacing_m: 8.0,
            cleat_heights: heights,
            cleat_length: 0.04,
            lead_out_s: 3.0,
        }
    }
}

pub fn gen_experiment3(cfg: &Exp3Config) -> Result<Scenario> {
    let c = cfg.clone();
    let u = kmh(c.speed_kmh);
    let cleats: Vec<Cleat> = c
        .cleat_heights
        .iter()
        .enumerate()
        .map(|(i, &height)| Cleat {
            position: c.first_cleat_m + i as f64 * c.cleat_spacing_m,
            height,
            length: c.cleat_length,
        })
        .collect();
    let last = cleats.last().map_or(c.first_cleat_m, |l| l.end());
    let duration = (last / u + c.lead_out_s).max(c.lead_in_s + c.lead_out_s);
    let amp = c.amplitude_deg.to_radians();
    let bias = c.steer_bias_deg.to_radians();
    build(
        "exp3",
        c.rate_hz,
        duration,
        u,
        move |t| {
            let s = t - c.lead_in_s;
            if s <= 0.0 {
                bias
            } else {
                bias + amp * (2.0 * PI * s / c.period_s).sin()
            }
        },
        |_| 0.0,
        cleats,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn peaks(x: &[f64]) -> usize {
        x.windows(3)
            .filter(|w| w[1] > 0.0 && w[1] > w[0] && w[1] >= w[2])
            .count()
    }

    #[test]
    fn exp1_defaults() {
        let s = gen_experiment1(&Exp1Config::default()).unwrap();
        let slope = s.road.slope();
        assert!((slope.max() - 11f64.to_radians()).abs() < 1e-15);
        assert!((slope.min() + 11f64.to_radians()).abs() < 1e-15);
        assert!((slope.max() - 0.1919).abs() < 1e-4);
        assert!(s.speed.samples().iter().all(|&u| (u - 5.56).abs() < 0.005));
        assert!(s.road.cleats().is_empty());
        assert!((s.duration() - 30.0).abs() < 1e-9);
        // lead-in is straight and level
        assert!(s.delta.samples()[..500].iter().all(|&d| d == 0.0));
        assert!(s.road.slope().samples()[..500].iter().all(|&d| d == 0.0));
    }

    #[test]
    fn exp1_flat() {
        let s = gen_experiment1(&Exp1Config {
            slope_deg: 0.0,
            ..Default::default()
        })
        .unwrap();
        assert!(s.road.slope().samples().iter().all(|&t| t == 0.0));
    }

    #[test]
    fn exp2_defaults() {
        let s = gen_experiment2(&Exp2Config::default()).unwrap();
        let max = s.delta.samples().iter().fold(0.0f64, |m, d| m.max(d.abs()));
        assert!((max - 60f64.to_radians()).abs() < 1e-9);
        assert!(s
            .road
            .slope()
            .samples()
            .iter()
            .all(|&t| t == 11f64.to_radians()));
        assert!(s.road.cleats().is_empty());
    }

    #[test]
    fn exp2_cycle_count() {
        let s = gen_experiment2(&Exp2Config {
            period_s: 4.0,
            slalom_s: 20.0,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(peaks(s.delta.samples()), 5);
        let neg: Vec<f64> = s.delta.samples().iter().map(|d| -d).collect();
        assert_eq!(peaks(&neg), 5);
    }

    #[test]
    fn exp2_zero_amplitude() {
        let s = gen_experiment2(&Exp2Config {
            amplitude_deg: 0.0,
            ..Default::default()
        })
        .unwrap();
        assert!(s.delta.samples().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn exp3_cleats() {
        let s = gen_experiment3(&Exp3Config::default()).unwrap();
        let cleats = s.road.cleats();
        assert_eq!(cleats.len(), 13);
        let heights: Vec<f64> = cleats.iter().map(|c| c.height).collect();
        let mut expected = vec![0.01; 4];
        expected.extend([0.02; 5]);
        expected.extend([0.03; 4]);
        assert_eq!(heights, expected);
        assert!(cleats.iter().all(|c| c.length == 0.04));
        assert!(s.road.slope().samples().iter().all(|&t| t == 0.0));
        let max = s.delta.samples().iter().fold(0.0f64, |m, d| m.max(d.abs()));
        assert!((max - 30f64.to_radians()).abs() < 1e-4);
        // the track covers every cleat
        let u = s.speed.samples()[0];
        assert!(s.duration() * u > cleats[12].end());
    }

    #[test]
    fn exp3_hit_spacing() {
        let cfg = Exp3Config {
            cleat_spacing_m: 5.0,
            speed_kmh: 36.0,
            ..Default::default()
        };
        let s = gen_experiment3(&cfg).unwrap();
        let u = s.speed.samples()[0];
        let hits: Vec<f64> = s.road.cleats().iter().map(|c| c.position / u).collect();
        for w in hits.windows(2) {
            assert!((w[1] - w[0] - 0.5).abs() < 1e-12);
        }
    }
}
