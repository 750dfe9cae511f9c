//! Per-vessel kinematics and identified surge/sway/yaw dynamics, integrated
//! with classical RK4 under zero-order-hold actuator commands.
//!
//! Body-frame convention: surge `w` forward (m/s), sway `v` transverse
//! (m/s), heading `psi` (rad, kept unwrapped on the real line), yaw rate
//! `r` (rad/s). Actuators are the propeller speed `tau1` (RPM) and the
//! steering (nozzle) angle `tau2` (rad).

use crate::Vec2;
use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("non-finite {0} passed to dynamics")]
    NonFinite(&'static str),
    #[error("numerical blow-up: integration produced a non-finite state")]
    Blowup,
    #[error("invalid dynamics parameters: {0}")]
    InvalidParams(String),
}

/// Full state of one vessel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VesselState {
    /// Planar position (m).
    pub position: Vec2,
    /// Heading angle (rad), continuous across steps (never re-wrapped).
    pub heading: f64,
    /// Surge (forward) velocity (m/s).
    pub surge: f64,
    /// Sway (transverse) velocity (m/s).
    pub sway: f64,
    /// Yaw angular velocity (rad/s).
    pub yaw_rate: f64,
}

impl VesselState {
    pub fn at_rest(position: Vec2, heading: f64) -> Self {
        Self {
            position,
            heading,
            surge: 0.0,
            sway: 0.0,
            yaw_rate: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.position.x.is_finite()
            && self.position.y.is_finite()
            && self.heading.is_finite()
            && self.surge.is_finite()
            && self.sway.is_finite()
            && self.yaw_rate.is_finite()
    }

    fn advanced(&self, d: &StateDerivative, dt: f64) -> Self {
        Self {
            position: self.position + d.velocity * dt,
            heading: self.heading + d.heading_rate * dt,
            surge: self.surge + d.surge_accel * dt,
            sway: self.sway + d.sway_accel * dt,
            yaw_rate: self.yaw_rate + d.yaw_accel * dt,
        }
    }
}

/// Time derivative of [`VesselState`].
#[derive(Debug, Clone, Copy)]
pub struct StateDerivative {
    pub velocity: Vec2,
    pub heading_rate: f64,
    pub surge_accel: f64,
    pub sway_accel: f64,
    pub yaw_accel: f64,
}

impl StateDerivative {
    fn weighted_sum(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        Self {
            velocity: (a.velocity + b.velocity * 2.0 + c.velocity * 2.0 + d.velocity) / 6.0,
            heading_rate: (a.heading_rate + 2.0 * b.heading_rate + 2.0 * c.heading_rate
                + d.heading_rate)
                / 6.0,
            surge_accel: (a.surge_accel + 2.0 * b.surge_accel + 2.0 * c.surge_accel
                + d.surge_accel)
                / 6.0,
            sway_accel: (a.sway_accel + 2.0 * b.sway_accel + 2.0 * c.sway_accel + d.sway_accel)
                / 6.0,
            yaw_accel: (a.yaw_accel + 2.0 * b.yaw_accel + 2.0 * c.yaw_accel + d.yaw_accel) / 6.0,
        }
    }
}

/// Identified model coefficients and actuator limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    pub k6: f64,
    pub k7: f64,
    /// Propeller speed limits (RPM), inclusive.
    pub tau1_range: (f64, f64),
    /// Steering angle limits (rad), inclusive.
    pub tau2_range: (f64, f64),
}

impl DynamicsParams {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let all = [
            self.k1, self.k2, self.k3, self.k4, self.k5, self.k6, self.k7,
        ];
        if all.iter().any(|k| !k.is_finite()) {
            return Err(DynamicsError::InvalidParams("non-finite coefficient".into()));
        }
        if self.k3 == 0.0 || self.k5 == 0.0 {
            return Err(DynamicsError::InvalidParams(
                "k3 and k5 must be nonzero (control laws divide by them)".into(),
            ));
        }
        for (name, (lo, hi)) in [("tau1", self.tau1_range), ("tau2", self.tau2_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(DynamicsError::InvalidParams(format!(
                    "{name}_range must be a nonempty finite interval"
                )));
            }
        }
        Ok(())
    }
}

/// Actuator command pair: propeller speed `tau1` (RPM) and steering angle
/// `tau2` (rad).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ActuatorCommand {
    pub tau1: f64,
    pub tau2: f64,
}

impl ActuatorCommand {
    pub fn new(tau1: f64, tau2: f64) -> Self {
        Self { tau1, tau2 }
    }

    pub fn is_finite(&self) -> bool {
        self.tau1.is_finite() && self.tau2.is_finite()
    }
}

/// Which actuator channels were clipped by [`saturate`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SaturationFlags {
    pub tau1: bool,
    pub tau2: bool,
}

impl SaturationFlags {
    pub fn any(&self) -> bool {
        self.tau1 || self.tau2
    }
}

/// Planar rotation matrix `S(a) = [[cos a, -sin a], [sin a, cos a]]`.
pub fn rotation(a: f64) -> Matrix2<f64> {
    let (s, c) = a.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Right-hand side of the vessel model:
///
/// ```text
/// x'   = S(psi) [w; v]
/// psi' = r
/// w'   = k1 w + k2 v r + k3 tau1
/// r'   = k4 r + k5 tau2
/// v'   = k6 v + k7 w r
/// ```
pub fn state_derivative(
    s: &VesselState,
    u: &ActuatorCommand,
    p: &DynamicsParams,
) -> Result<StateDerivative, DynamicsError> {
    if !s.is_finite() {
        return Err(DynamicsError::NonFinite("state"));
    }
    if !u.is_finite() {
        return Err(DynamicsError::NonFinite("command"));
    }
    Ok(derivative_unchecked(s, u, p))
}

fn derivative_unchecked(s: &VesselState, u: &ActuatorCommand, p: &DynamicsParams) -> StateDerivative {
    StateDerivative {
        velocity: rotation(s.heading) * Vec2::new(s.surge, s.sway),
        heading_rate: s.yaw_rate,
        surge_accel: p.k1 * s.surge + p.k2 * s.sway * s.yaw_rate + p.k3 * u.tau1,
        sway_accel: p.k6 * s.sway + p.k7 * s.surge * s.yaw_rate,
        yaw_accel: p.k4 * s.yaw_rate + p.k5 * u.tau2,
    }
}

/// One classical RK4 step of the vessel model with the command held
/// constant over the step. The heading stays on the real line (the
/// integrator never wraps it).
pub fn step(
    s: &VesselState,
    u: &ActuatorCommand,
    p: &DynamicsParams,
    dt: f64,
) -> Result<VesselState, DynamicsError> {
    debug_assert!(dt > 0.0);
    let k1 = state_derivative(s, u, p)?;
    let k2 = derivative_unchecked(&s.advanced(&k1, dt / 2.0), u, p);
    let k3 = derivative_unchecked(&s.advanced(&k2, dt / 2.0), u, p);
    let k4 = derivative_unchecked(&s.advanced(&k3, dt), u, p);
    let next = s.advanced(&StateDerivative::weighted_sum(&k1, &k2, &k3, &k4), dt);
    if !next.is_finite() {
        return Err(DynamicsError::Blowup);
    }
    Ok(next)
}

/// Clamp a command into the configured actuator ranges, recording which
/// channels were clipped.
pub fn saturate(u: &ActuatorCommand, p: &DynamicsParams) -> (ActuatorCommand, SaturationFlags) {
    let tau1 = u.tau1.clamp(p.tau1_range.0, p.tau1_range.1);
    let tau2 = u.tau2.clamp(p.tau2_range.0, p.tau2_range.1);
    (
        ActuatorCommand { tau1, tau2 },
        SaturationFlags {
            tau1: tau1 != u.tau1,
            tau2: tau2 != u.tau2,
        },
    )
}
