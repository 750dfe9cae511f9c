//! Bridges between the collective level and the vessel level: Cartesian
//! velocity commands to surge/heading references (with drift-angle
//! correction), polar commands to Cartesian, the tracking perturbation
//! `e`, and the causal construction of reference-signal derivatives.

use crate::dynamics::{rotation, VesselState};
use crate::geometry::unwrap_angle;
use crate::protocols::{PolarState, RHO_MIN};
use crate::Vec2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConversionError {
    /// `||u|| <= |v|`: no feasible surge/heading pair reproduces the
    /// commanded velocity. The caller holds the previous heading reference
    /// and commands zero surge for the tick.
    #[error("infeasible command: ||u|| = {u_norm} <= |v| = {v}")]
    InfeasibleCommand { u_norm: f64, v: f64 },
    #[error("degenerate radius: vessel within {RHO_MIN} m of the target")]
    DegenerateRadius,
}

/// Desired surge/heading trajectory handed to the regulators, together
/// with the derivative and bounding signals the backstepping law needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSignal {
    /// Desired surge speed (m/s).
    pub w_r: f64,
    /// Desired heading (rad), unwrapped.
    pub psi_r: f64,
    /// Desired sway (m/s); set to the measured sway each tick so the
    /// unactuated channel is trivially regulated.
    pub v_r: f64,
    pub dw_r: f64,
    pub ddw_r: f64,
    pub dpsi_r: f64,
    pub ddpsi_r: f64,
    /// Bounding signal, >= max(1, |w_r|).
    pub varpi: f64,
    pub dvarpi: f64,
    pub ddvarpi: f64,
}

impl ReferenceSignal {
    /// Constant reference with all derivatives zero and the smallest
    /// admissible bounding signal.
    pub fn constant(w_r: f64, psi_r: f64) -> Self {
        Self {
            w_r,
            psi_r,
            v_r: 0.0,
            dw_r: 0.0,
            ddw_r: 0.0,
            dpsi_r: 0.0,
            ddpsi_r: 0.0,
            varpi: w_r.abs().max(1.0),
            dvarpi: 0.0,
            ddvarpi: 0.0,
        }
    }
}

/// Tracking perturbation of one vessel: the Cartesian velocity error `e`
/// and its polar decomposition into radial/angular reference errors.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerturbationRecord {
    pub e: Vec2,
    pub eta_tilde_r: f64,
    pub omega_tilde_r: f64,
}

/// Convert a Cartesian velocity command into a surge/heading reference:
///
/// ```text
/// w_r   = sqrt(||u||^2 - v_r^2)
/// psi_r = angle(u) - atan(v_r / w_r)      (unwrapped against prev_psi_r)
/// ```
///
/// so that `S(psi_r) [w_r; v_r] = u`. The first call of a trajectory
/// passes `prev_psi_r = None` and takes the raw angle (revolution count
/// starts at zero).
pub fn cartesian_to_reference(
    u: &Vec2,
    v_r: f64,
    prev_psi_r: Option<f64>,
) -> Result<(f64, f64), ConversionError> {
    let u_norm = u.norm();
    if u_norm <= v_r.abs() {
        return Err(ConversionError::InfeasibleCommand { u_norm, v: v_r });
    }
    let w_r = (u_norm * u_norm - v_r * v_r).sqrt();
    let raw = u.y.atan2(u.x) - (v_r / w_r).atan();
    let psi_r = match prev_psi_r {
        None => raw,
        Some(prev) => unwrap_angle(prev, raw),
    };
    Ok((w_r, psi_r))
}

/// Cartesian velocity command realizing radial speed `eta` and angular
/// speed `omega` at polar position `(rho, theta)`: `S(theta) [eta; rho*omega]`.
pub fn polar_to_cartesian_command(eta: f64, omega: f64, rho: f64, theta: f64) -> Vec2 {
    rotation(theta) * Vec2::new(eta, rho * omega)
}

/// Polar coordinates of `x_i` about `x_o`, with the angle unwrapped
/// against `prev_theta` (first observation passes `None`).
pub fn cartesian_to_polar(
    x_i: &Vec2,
    x_o: &Vec2,
    prev_theta: Option<f64>,
) -> Result<PolarState, ConversionError> {
    let d = x_i - x_o;
    let rho = d.norm();
    if rho <= RHO_MIN {
        return Err(ConversionError::DegenerateRadius);
    }
    let raw = d.y.atan2(d.x);
    let theta = match prev_theta {
        None => raw,
        Some(prev) => unwrap_angle(prev, raw),
    };
    Ok(PolarState { rho, theta })
}

/// Cartesian tracking perturbation
///
/// ```text
/// e = [S(psi) - S(psi_r)] [w_r; v_r] + S(psi) [w - w_r; 0]
/// ```
///
/// (the sway error vanishes under the `v_r = v` convention).
pub fn perturbation_cartesian(s: &VesselState, rf: &ReferenceSignal) -> Vec2 {
    let ref_vel = Vec2::new(rf.w_r, rf.v_r);
    (rotation(s.heading) - rotation(rf.psi_r)) * ref_vel
        + rotation(s.heading) * Vec2::new(s.surge - rf.w_r, 0.0)
}

/// Full perturbation record including the polar decomposition
/// `[eta_tilde; omega_tilde] = diag(1, 1/rho) S(theta)^-1 e`.
pub fn perturbation(
    s: &VesselState,
    rf: &ReferenceSignal,
    rho: f64,
    theta: f64,
) -> Result<PerturbationRecord, ConversionError> {
    if rho <= RHO_MIN {
        return Err(ConversionError::DegenerateRadius);
    }
    let e = perturbation_cartesian(s, rf);
    let body = rotation(theta).transpose() * e;
    Ok(PerturbationRecord {
        e,
        eta_tilde_r: body.x,
        omega_tilde_r: body.y / rho,
    })
}

/// First-order low-pass with time constant `tau`.
#[derive(Debug, Clone, Copy, Default)]
struct LowPass {
    state: f64,
}

impl LowPass {
    fn update(&mut self, x: f64, dt: f64, tau: f64) -> f64 {
        let alpha = dt / (tau + dt);
        self.state += alpha * (x - self.state);
        self.state
    }
}

/// Causal differentiator: backward difference followed by a low-pass.
/// Outputs zero until two samples have been seen.
#[derive(Debug, Clone, Copy, Default)]
struct SmoothedDiff {
    prev: Option<f64>,
    filter: LowPass,
}

impl SmoothedDiff {
    fn update(&mut self, x: f64, dt: f64, tau: f64) -> f64 {
        let raw = match self.prev {
            None => 0.0,
            Some(p) => (x - p) / dt,
        };
        self.prev = Some(x);
        self.filter.update(raw, dt, tau)
    }
}

/// Events raised while building a reference for one tick.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ConversionFlags {
    /// The commanded velocity could not beat the measured sway; the
    /// previous heading was held and zero surge commanded.
    pub infeasible: bool,
}

/// Per-vessel builder that turns a stream of Cartesian velocity commands
/// into [`ReferenceSignal`]s, maintaining heading continuity, smoothed
/// derivative estimates, and the bounding signal envelope.
///
/// Derivatives are causal backward differences low-passed with the
/// configured time constant; the bounding signal is a running envelope of
/// `|w_r|` that jumps up immediately (preserving `varpi >= max(1, |w_r|)`)
/// and relaxes with the same time constant.
#[derive(Debug, Clone)]
pub struct ReferenceBuilder {
    dt: f64,
    tau: f64,
    psi_r: Option<f64>,
    w_diff: SmoothedDiff,
    w_diff2: SmoothedDiff,
    psi_diff: SmoothedDiff,
    psi_diff2: SmoothedDiff,
    envelope: Option<f64>,
    varpi_diff: SmoothedDiff,
    varpi_diff2: SmoothedDiff,
}

/// Low-pass time constant (s) for reference derivative estimation and the
/// bounding-signal envelope.
pub const REFERENCE_FILTER_TAU: f64 = 0.4;

impl ReferenceBuilder {
    pub fn new(dt_ctrl: f64) -> Self {
        Self {
            dt: dt_ctrl,
            tau: REFERENCE_FILTER_TAU,
            psi_r: None,
            w_diff: SmoothedDiff::default(),
            w_diff2: SmoothedDiff::default(),
            psi_diff: SmoothedDiff::default(),
            psi_diff2: SmoothedDiff::default(),
            envelope: None,
            varpi_diff: SmoothedDiff::default(),
            varpi_diff2: SmoothedDiff::default(),
        }
    }

    /// Last heading reference issued, if any.
    pub fn last_psi_r(&self) -> Option<f64> {
        self.psi_r
    }

    /// Build the reference for this tick from the commanded velocity `u`
    /// and the measured sway (taken as `v_r`). On an infeasible command
    /// the previous heading is held, zero surge is commanded, and the
    /// event is flagged.
    pub fn build(&mut self, u: &Vec2, v_meas: f64, fallback_psi: f64) -> (ReferenceSignal, ConversionFlags) {
        let mut flags = ConversionFlags::default();
        let (w_r, psi_r, v_r) = match cartesian_to_reference(u, v_meas, self.psi_r) {
            Ok((w_r, psi_r)) => (w_r, psi_r, v_meas),
            Err(_) => {
                flags.infeasible = true;
                (0.0, self.psi_r.unwrap_or(fallback_psi), v_meas)
            }
        };
        self.psi_r = Some(psi_r);

        let dw_r = self.w_diff.update(w_r, self.dt, self.tau);
        let ddw_r = self.w_diff2.update(dw_r, self.dt, self.tau);
        let dpsi_r = self.psi_diff.update(psi_r, self.dt, self.tau);
        let ddpsi_r = self.psi_diff2.update(dpsi_r, self.dt, self.tau);

        let env = match self.envelope {
            None => w_r.abs(),
            Some(e) => {
                let alpha = self.dt / (self.tau + self.dt);
                w_r.abs().max(e + alpha * (w_r.abs() - e))
            }
        };
        self.envelope = Some(env);
        let varpi = env.max(1.0);
        let dvarpi = self.varpi_diff.update(varpi, self.dt, self.tau);
        let ddvarpi = self.varpi_diff2.update(dvarpi, self.dt, self.tau);

        (
            ReferenceSignal {
                w_r,
                psi_r,
                v_r,
                dw_r,
                ddw_r,
                dpsi_r,
                ddpsi_r,
                varpi,
                dvarpi,
                ddvarpi,
            },
            flags,
        )
    }
}
