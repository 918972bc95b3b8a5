//! Bicycle-model vehicle kinematics and area-of-interest prediction.
//!
//! Axis convention: a heading of zero points along `+y`, and positive
//! headings rotate toward `+x`, so the instantaneous velocity is
//! `(v sin(heading), v cos(heading))`. The yaw rate `v tan(steer) / l` is
//! evaluated once at the start of a propagation and held for the whole
//! interval while the speed ramps linearly with the acceleration input.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this |tan(steer)| the motion is integrated as a straight line.
pub const STRAIGHT_TAN_EPS: f64 = 1e-12;

/// Default quadrature step in seconds.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    pub x: f64,
    pub y: f64,
    pub v: f64,
    pub heading: f64,
}

impl VehicleState {
    pub fn new(x: f64, y: f64, v: f64, heading: f64) -> Self {
        VehicleState {
            x,
            y,
            v: v.max(0.0),
            heading: normalize_angle(heading),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlInput {
    pub accel: f64,
    pub steer: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleGeometry {
    pub wheelbase: f64,
    pub safety_radius: f64,
}

impl VehicleGeometry {
    pub fn new(wheelbase: f64, safety_radius: f64) -> Result<Self> {
        if !(wheelbase > 0.0) || !(safety_radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wheelbase ({wheelbase}) and safety radius ({safety_radius}) must be positive"
            )));
        }
        Ok(VehicleGeometry {
            wheelbase,
            safety_radius,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `(time, state)` pairs; the first is the initial state.
    pub samples: Vec<(f64, VehicleState)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    /// Displacement from the initial vehicle position along x.
    pub dx: f64,
    /// Displacement along y (the initial driving axis when heading is zero).
    pub dy: f64,
    pub radius: f64,
}

/// Area of interest: the safety disk swept along the predicted path,
/// sampled at the stage boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Aoi {
    pub waypoints: Vec<Waypoint>,
}

/// Wraps an angle into (-pi, pi].
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

fn check_steer(steer: f64) -> Result<()> {
    if !steer.is_finite() || steer.abs() >= FRAC_PI_2 {
        return Err(Error::InvalidSteer(steer));
    }
    Ok(())
}

pub fn heading_rate(state: &VehicleState, input: &ControlInput, geometry: &VehicleGeometry) -> Result<f64> {
    check_steer(input.steer)?;
    let t = input.steer.tan();
    if t.abs() < STRAIGHT_TAN_EPS {
        return Ok(0.0);
    }
    Ok(state.v * t / geometry.wheelbase)
}

/// Fixed-step Simpson integrator for the displacement integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub max_step: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            max_step: DEFAULT_STEP,
        }
    }
}

impl Integrator {
    pub fn new(max_step: f64) -> Result<Self> {
        if !(max_step > 0.0) {
            return Err(Error::InvalidParameter(format!("quadrature step {max_step} must be positive")));
        }
        Ok(Integrator { max_step })
    }

    /// State after `dt` seconds.
    pub fn propagate(
        &self,
        state: &VehicleState,
        input: &ControlInput,
        geometry: &VehicleGeometry,
        dt: f64,
    ) -> Result<VehicleState> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
        }
        let rate = heading_rate(state, input, geometry)?;
        let speed = |t: f64| (state.v + input.accel * t).max(0.0);
        let heading = |t: f64| state.heading + rate * t;

        let mut n = (dt / self.max_step).ceil() as usize;
        n = n.max(2);
        if n % 2 == 1 {
            n += 1;
        }
        let h = dt / n as f64;
        let (mut sx, mut sy) = (0.0, 0.0);
        for i in 0..=n {
            let t = i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let (s, c) = heading(t).sin_cos();
            let v = speed(t);
            sx += w * s * v;
            sy += w * c * v;
        }
        Ok(VehicleState {
            x: state.x + sx * h / 3.0,
            y: state.y + sy * h / 3.0,
            v: speed(dt),
            heading: normalize_angle(heading(dt)),
        })
    }

    /// Samples the predicted path at `stages + 1` evenly spaced instants.
    pub fn predict_trajectory(
        &self,
        state: &VehicleState,
        input: &ControlInput,
        geometry: &VehicleGeometry,
        horizon: f64,
        stages: usize,
    ) -> Result<Trajectory> {
        check_steer(input.steer)?;
        if stages == 0 {
            return Err(Error::ZeroStages);
        }
        if !(horizon > 0.0) {
            return Err(Error::InvalidParameter(format!("horizon {horizon} must be positive")));
        }
        let mut samples = Vec::with_capacity(stages + 1);
        samples.push((0.0, *state));
        for k in 1..=stages {
            let t = horizon * k as f64 / stages as f64;
            samples.push((t, self.propagate(state, input, geometry, t)?));
        }
        Ok(Trajectory { samples })
    }
}

pub fn propagate(
    state: &VehicleState,
    input: &ControlInput,
    geometry: &VehicleGeometry,
    dt: f64,
) -> Result<VehicleState> {
    Integrator::default().propagate(state, input, geometry, dt)
}

pub fn predict_trajectory(
    state: &VehicleState,
    input: &ControlInput,
    geometry: &VehicleGeometry,
    horizon: f64,
    stages: usize,
) -> Result<Trajectory> {
    Integrator::default().predict_trajectory(state, input, geometry, horizon, stages)
}

/// Disk centers at the non-initial samples, relative to the start position.
pub fn predict_aoi(trajectory: &Trajectory, geometry: &VehicleGeometry) -> Result<Aoi> {
    if trajectory.samples.len() < 2 {
        return Err(Error::EmptyTrajectory);
    }
    let origin = trajectory.samples[0].1;
    let waypoints = trajectory.samples[1..]
        .iter()
        .map(|(_, s)| Waypoint {
            dx: s.x - origin.x,
            dy: s.y - origin.y,
            radius: geometry.safety_radius,
        })
        .collect();
    Ok(Aoi { waypoints })
}
