//! Lower-level trajectory regulation: backstepping surge/heading laws,
//! their simplified PI/PD forms for slowly varying references, and the
//! decay-rate monitor for the closed-loop error subsystems.
//!
//! Under the backstepping laws the error subsystems are, exactly,
//!
//! ```text
//! eta_tilde' = -kappa1 w_tilde        w_tilde' = -kappa2 w_tilde + eta_tilde
//! phi'       = -kappa3 phi + r_tilde  r_tilde' = -kappa4 r_tilde
//! ```
//!
//! with `phi = psi_tilde * varpi`, so the surge pair decays at the roots
//! of `s^2 + kappa2 s + kappa1` and `r_tilde` at exactly `kappa4`.

use crate::conversion::ReferenceSignal;
use crate::dynamics::{DynamicsParams, VesselState};
use crate::fit;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RegulationError {
    #[error("invalid regulation gains: {0}")]
    InvalidGains(String),
    #[error("error-subsystem trace too short: {0} ticks (need at least 10)")]
    TraceTooShort(usize),
}

/// Backstepping/PID gains. Constructed through [`RegGains::new`] so the
/// stability condition `kappa1 > kappa2^2 / 4` fails fast.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegGains {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa4: f64,
}

impl RegGains {
    pub fn new(kappa1: f64, kappa2: f64, kappa3: f64, kappa4: f64) -> Result<Self, RegulationError> {
        let g = Self {
            kappa1,
            kappa2,
            kappa3,
            kappa4,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), RegulationError> {
        for (name, v) in [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("kappa3", self.kappa3),
            ("kappa4", self.kappa4),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(RegulationError::InvalidGains(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.kappa1 <= self.kappa2 * self.kappa2 / 4.0 {
            return Err(RegulationError::InvalidGains(format!(
                "kappa1 = {} must exceed kappa2^2/4 = {} for a stable surge pair",
                self.kappa1,
                self.kappa2 * self.kappa2 / 4.0
            )));
        }
        Ok(())
    }
}

/// Integrator memory of one vessel's regulator. `eta` backs the
/// backstepping surge law, `integral` the PI form; both advance
/// trapezoidally and are frozen by the engine while the propeller command
/// saturates (anti-windup).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RegulatorState {
    /// Internal state of the backstepping surge law (m/s^2 integrated).
    pub eta: f64,
    /// Accumulated surge error for the PI law (m).
    pub integral: f64,
    prev_eta_dot: Option<f64>,
    prev_w_tilde: Option<f64>,
}

impl RegulatorState {
    /// Regulator starting from rest with empty integrators.
    pub fn new() -> Self {
        Self::default()
    }

    /// Fresh regulator with a preset backstepping integrator value.
    pub fn with_eta(eta: f64) -> Self {
        Self {
            eta,
            ..Self::default()
        }
    }
}

/// Backstepping propeller law:
///
/// ```text
/// eta' = -kappa1 w_tilde + ddw_r
/// tau1 = (-k1 w - k2 v r + eta - kappa2 w_tilde) / k3
/// ```
///
/// The command uses the integrator state at the current tick; `eta` is
/// then advanced one tick by a trapezoidal rule over the last two
/// derivative samples. Returns the unsaturated command and the advanced
/// regulator state; the caller decides whether to commit the state
/// (anti-windup policy).
pub fn backstepping_tau1(
    s: &VesselState,
    rf: &ReferenceSignal,
    rs: &RegulatorState,
    g: &RegGains,
    p: &DynamicsParams,
    dt: f64,
) -> (f64, RegulatorState) {
    let w_tilde = s.surge - rf.w_r;
    let tau1 =
        (-p.k1 * s.surge - p.k2 * s.sway * s.yaw_rate + rs.eta - g.kappa2 * w_tilde) / p.k3;
    let eta_dot = -g.kappa1 * w_tilde + rf.ddw_r;
    let next = RegulatorState {
        eta: rs.eta + dt / 2.0 * (rs.prev_eta_dot.unwrap_or(eta_dot) + eta_dot),
        integral: rs.integral,
        prev_eta_dot: Some(eta_dot),
        prev_w_tilde: rs.prev_w_tilde,
    };
    (tau1, next)
}

/// Backstepping steering law
///
/// ```text
/// tau2 = [ k4 r varpi + 2 r dvarpi - ddpsi_r varpi - 2 dpsi_r dvarpi
///          + psi_tilde ddvarpi - kappa3^2 psi_tilde varpi
///          + (kappa3 + kappa4) r_tilde ] / (-k5 varpi)
/// ```
///
/// with `r_tilde` from [`ErrorCoordinates`]. The bounding signal keeps the
/// denominator away from zero (`varpi >= 1`).
pub fn backstepping_tau2(
    s: &VesselState,
    rf: &ReferenceSignal,
    g: &RegGains,
    p: &DynamicsParams,
) -> f64 {
    let ec = ErrorCoordinates::new(s, rf, g);
    let numerator = p.k4 * s.yaw_rate * rf.varpi
        + 2.0 * s.yaw_rate * rf.dvarpi
        - rf.ddpsi_r * rf.varpi
        - 2.0 * rf.dpsi_r * rf.dvarpi
        + ec.psi_tilde * rf.ddvarpi
        - g.kappa3 * g.kappa3 * ec.psi_tilde * rf.varpi
        + (g.kappa3 + g.kappa4) * ec.r_tilde;
    numerator / (-p.k5 * rf.varpi)
}

/// PI propeller law with model feedforward (the backstepping law under
/// zero reference derivatives):
///
/// ```text
/// tau1 = -(k1/k3) w - (k2/k3) v r - (kappa1/k3) ∫ w_tilde - (kappa2/k3) w_tilde
/// ```
pub fn pid_tau1(
    s: &VesselState,
    rf: &ReferenceSignal,
    rs: &RegulatorState,
    g: &RegGains,
    p: &DynamicsParams,
    dt: f64,
) -> (f64, RegulatorState) {
    let w_tilde = s.surge - rf.w_r;
    let tau1 = (-p.k1 * s.surge - p.k2 * s.sway * s.yaw_rate
        - g.kappa1 * rs.integral
        - g.kappa2 * w_tilde)
        / p.k3;
    let next = RegulatorState {
        eta: rs.eta,
        integral: rs.integral + dt / 2.0 * (rs.prev_w_tilde.unwrap_or(w_tilde) + w_tilde),
        prev_eta_dot: rs.prev_eta_dot,
        prev_w_tilde: Some(w_tilde),
    };
    (tau1, next)
}

/// PD steering law:
///
/// ```text
/// tau2 = -((k4 + kappa3 + kappa4)/k5) r + ((kappa3^2 - (kappa3+kappa4) kappa3)/k5) psi_tilde
/// ```
pub fn pid_tau2(s: &VesselState, rf: &ReferenceSignal, g: &RegGains, p: &DynamicsParams) -> f64 {
    let psi_tilde = s.heading - rf.psi_r;
    -(p.k4 + g.kappa3 + g.kappa4) / p.k5 * s.yaw_rate
        + (g.kappa3 * g.kappa3 - (g.kappa3 + g.kappa4) * g.kappa3) / p.k5 * psi_tilde
}

/// Which propeller/steering law pair regulates the vessel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegulatorLaw {
    Backstepping,
    Pid,
}

/// Evaluate the propeller law for a given regulator state without
/// advancing it.
pub fn evaluate_tau1(
    law: RegulatorLaw,
    s: &VesselState,
    rf: &ReferenceSignal,
    rs: &RegulatorState,
    g: &RegGains,
    p: &DynamicsParams,
) -> f64 {
    match law {
        RegulatorLaw::Backstepping => backstepping_tau1(s, rf, rs, g, p, 0.0).0,
        RegulatorLaw::Pid => pid_tau1(s, rf, rs, g, p, 0.0).0,
    }
}

/// Conditional anti-windup: while the propeller demand is clamped, an
/// integrator update is committed only if it moves the demand back toward
/// the admissible range (a blanket freeze can deadlock saturated).
pub fn windup_commit_allowed(raw: f64, range: (f64, f64), after_update: f64) -> bool {
    if raw > range.1 {
        after_update < raw
    } else if raw < range.0 {
        after_update > raw
    } else {
        true
    }
}

/// Tracking-error coordinates of the backstepping construction. Heading
/// errors are differences of unwrapped angles (never re-wrapped).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorCoordinates {
    pub w_tilde: f64,
    pub psi_tilde: f64,
    /// Scaled heading error `phi = psi_tilde * varpi`.
    pub phi: f64,
    /// Virtual yaw-rate error
    /// `r_tilde = r varpi - dpsi_r varpi + psi_tilde dvarpi + kappa3 psi_tilde varpi`.
    pub r_tilde: f64,
}

impl ErrorCoordinates {
    pub fn new(s: &VesselState, rf: &ReferenceSignal, g: &RegGains) -> Self {
        let w_tilde = s.surge - rf.w_r;
        let psi_tilde = s.heading - rf.psi_r;
        let phi = psi_tilde * rf.varpi;
        let r_tilde = s.yaw_rate * rf.varpi - rf.dpsi_r * rf.varpi
            + psi_tilde * rf.dvarpi
            + g.kappa3 * psi_tilde * rf.varpi;
        Self {
            w_tilde,
            psi_tilde,
            phi,
            r_tilde,
        }
    }
}

/// Fit of one error channel against its analytic decay rate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChannelFit {
    /// Measured decay rate (1/s), absent when the channel never left zero
    /// or the fit is not applicable.
    pub fitted_rate: Option<f64>,
    /// Analytic rate implied by the gains.
    pub expected_rate: f64,
    /// Channel was already at zero over the whole trace.
    pub exact_convergence: bool,
}

/// Decay-rate comparison of the simulated error subsystems against their
/// analytic rates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayFitReport {
    /// `|r_tilde|` against `kappa4`.
    pub r_tilde: ChannelFit,
    /// `|phi|` against `kappa3` (the slow pole once `r_tilde` has died;
    /// meaningful when `kappa3 < kappa4`).
    pub phi: ChannelFit,
    /// Surge-pair envelope against the dominant root of
    /// `s^2 + kappa2 s + kappa1`.
    pub surge: ChannelFit,
}

fn fit_channel(
    ts: &[f64],
    vs: &[f64],
    expected: f64,
    oscillatory: bool,
    tail_only: bool,
) -> ChannelFit {
    let peak = vs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak <= 1e-12 {
        return ChannelFit {
            fitted_rate: None,
            expected_rate: expected,
            exact_convergence: true,
        };
    }
    let fitted = if oscillatory {
        fit::peak_envelope_rate(ts, vs)
    } else if tail_only {
        let half = ts.len() / 2;
        fit::decay_rate(&ts[half..], &vs[half..], 1e-9)
    } else {
        fit::decay_rate(ts, vs, 1e-9)
    };
    ChannelFit {
        fitted_rate: fitted,
        expected_rate: expected,
        exact_convergence: false,
    }
}

/// Least-squares decay-rate fits of a recorded error trace. Requires at
/// least 10 samples. Channels that stayed at zero are reported as exact
/// convergence.
pub fn error_subsystem_monitor(
    samples: &[(f64, ErrorCoordinates)],
    g: &RegGains,
) -> Result<DecayFitReport, RegulationError> {
    if samples.len() < 10 {
        return Err(RegulationError::TraceTooShort(samples.len()));
    }
    let ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let r_tilde: Vec<f64> = samples.iter().map(|s| s.1.r_tilde).collect();
    let phi: Vec<f64> = samples.iter().map(|s| s.1.phi).collect();
    let w_tilde: Vec<f64> = samples.iter().map(|s| s.1.w_tilde).collect();

    let surge_oscillatory = g.kappa2 * g.kappa2 < 4.0 * g.kappa1;
    Ok(DecayFitReport {
        r_tilde: fit_channel(&ts, &r_tilde, g.kappa4, false, false),
        phi: fit_channel(&ts, &phi, g.kappa3, false, true),
        surge: fit_channel(
            &ts,
            &w_tilde,
            fit::dominant_rate_quadratic(g.kappa2, g.kappa1),
            surge_oscillatory,
            true,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{identified_gains, identified_params};
    use crate::Vec2;
    use approx::assert_abs_diff_eq;

    fn state(w: f64, v: f64, r: f64, psi: f64) -> VesselState {
        VesselState {
            position: Vec2::zeros(),
            heading: psi,
            surge: w,
            sway: v,
            yaw_rate: r,
        }
    }

    #[test]
    fn gain_validation_rejects_undamped_pair() {
        assert!(RegGains::new(0.02, 0.001, 0.076, 0.418).is_ok());
        // kappa1 <= kappa2^2/4 rejected
        assert!(RegGains::new(0.0001, 0.1, 0.076, 0.418).is_err());
        assert!(RegGains::new(0.02, -0.1, 0.076, 0.418).is_err());
        assert!(RegGains::new(0.02, 0.001, 0.0, 0.418).is_err());
    }

    #[test]
    fn tau1_pure_feedforward_at_perfect_tracking() {
        let p = identified_params();
        let g = identified_gains();
        let rf = ReferenceSignal::constant(1.4, 0.0);
        let s = state(1.4, 0.0, 0.0, 0.0);
        // eta = dw_r = 0 at steady state
        let (tau1, _) = backstepping_tau1(&s, &rf, &RegulatorState::new(), &g, &p, 0.2);
        assert_abs_diff_eq!(tau1, -p.k1 * 1.4 / p.k3, epsilon = 1e-12);
    }

    #[test]
    fn tau1_zero_at_origin() {
        let p = identified_params();
        let g = identified_gains();
        let rf = ReferenceSignal::constant(0.0, 0.0);
        let (tau1, _) = backstepping_tau1(
            &state(0.0, 0.0, 0.0, 0.0),
            &rf,
            &RegulatorState::new(),
            &g,
            &p,
            0.2,
        );
        assert_eq!(tau1, 0.0);
    }

    #[test]
    fn tau1_substitution_example() {
        let p = identified_params();
        let g = identified_gains();
        // w = 2 tracking w_r = 1.5 (w_tilde = 0.5), v = 0.1, r = 0.2, eta = 0
        let rf = ReferenceSignal::constant(1.5, 0.0);
        let s = state(2.0, 0.1, 0.2, 0.0);
        let (tau1, _) = backstepping_tau1(&s, &rf, &RegulatorState::new(), &g, &p, 0.2);
        let expected = (0.098 * 2.0 - 0.003 * 0.02 - 0.001 * 0.5) / 0.005;
        assert_abs_diff_eq!(tau1, expected, epsilon = 1e-9);
    }

    #[test]
    fn tau2_equilibrium_is_zero() {
        let p = identified_params();
        let g = identified_gains();
        let rf = ReferenceSignal::constant(1.0, 0.3);
        let s = state(1.0, 0.0, 0.0, 0.3);
        assert_abs_diff_eq!(backstepping_tau2(&s, &rf, &g, &p), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn tau2_substitution_example() {
        // psi_tilde = 0.1, varpi = 1, everything else at rest:
        // r_tilde = kappa3 * 0.1, numerator = -kappa3^2*0.1 + (kappa3+kappa4)*kappa3*0.1
        let p = identified_params();
        let g = identified_gains();
        let mut rf = ReferenceSignal::constant(0.0, 0.0);
        rf.varpi = 1.0;
        let s = state(0.0, 0.0, 0.0, 0.1);
        let num = -g.kappa3 * g.kappa3 * 0.1 + (g.kappa3 + g.kappa4) * g.kappa3 * 0.1;
        let expected = num / (-p.k5);
        assert_abs_diff_eq!(backstepping_tau2(&s, &rf, &g, &p), expected, epsilon = 1e-12);
        // numerically: (-0.00057760 + 0.00375440) / (-0.019)
        assert_abs_diff_eq!(expected, -0.16720, epsilon = 1e-5);
    }

    #[test]
    fn pid_tau1_integral_accumulation() {
        let p = identified_params();
        let g = identified_gains();
        let rf = ReferenceSignal::constant(1.0, 0.0);
        // constant w_tilde = 1 with all other terms zero: after T seconds
        // the integral term contributes -kappa1 T / k3
        let s = state(2.0, 0.0, 0.0, 0.0);
        let mut rs = RegulatorState::new();
        let dt = 0.2;
        let mut tau1 = 0.0;
        for _ in 0..50 {
            let (t, next) = pid_tau1(&s, &rf, &rs, &g, &p, dt);
            tau1 = t;
            rs = next;
        }
        // the 50th command sees the integral accumulated over 49 ticks
        let t_total = 49.0 * dt;
        let expected =
            (-p.k1 * 2.0 - g.kappa1 * t_total * 1.0 - g.kappa2 * 1.0) / p.k3;
        assert_abs_diff_eq!(tau1, expected, epsilon = 1e-9);
    }

    #[test]
    fn pid_tau1_zero_history() {
        let p = identified_params();
        let g = identified_gains();
        let rf = ReferenceSignal::constant(0.0, 0.0);
        let (tau1, _) = pid_tau1(
            &state(0.0, 0.0, 0.0, 0.0),
            &rf,
            &RegulatorState::new(),
            &g,
            &p,
            0.2,
        );
        assert_eq!(tau1, 0.0);
    }

    #[test]
    fn pid_tau2_cases() {
        let p = identified_params();
        let g = identified_gains();
        let rf = ReferenceSignal::constant(0.0, 0.0);
        assert_eq!(pid_tau2(&state(0.0, 0.0, 0.0, 0.0), &rf, &g, &p), 0.0);

        // r = 0.1, psi_tilde = 0
        let tau2 = pid_tau2(&state(0.0, 0.0, 0.1, 0.0), &rf, &g, &p);
        let expected = -(-0.1055 + 0.076 + 0.418) / 0.019 * 0.1;
        assert_abs_diff_eq!(tau2, expected, epsilon = 1e-12);
    }

    /// With zero reference derivatives and constant varpi the backstepping
    /// laws reduce exactly to the PI/PD forms (eta standing in for the
    /// integral term).
    #[test]
    fn pid_laws_equal_backstepping_for_constant_references() {
        let p = identified_params();
        let g = identified_gains();
        let mut rf = ReferenceSignal::constant(1.2, 0.7);
        rf.varpi = 2.5; // any constant >= max(1, |w_r|)

        for (w, v, r, psi) in [
            (0.9, 0.05, 0.02, 0.5),
            (1.5, -0.1, -0.3, 1.2),
            (0.0, 0.0, 0.0, 0.0),
        ] {
            let s = state(w, v, r, psi);
            let bs = backstepping_tau2(&s, &rf, &g, &p);
            let pd = pid_tau2(&s, &rf, &g, &p);
            assert_abs_diff_eq!(bs, pd, epsilon = 1e-12);

            // tau1: run both integrators from matching initial conditions
            // over a few ticks of the same error history
            let mut rs_b = RegulatorState::new();
            let mut rs_p = RegulatorState::new();
            let mut last = (0.0, 0.0);
            for _ in 0..5 {
                let (b, nb) = backstepping_tau1(&s, &rf, &rs_b, &g, &p, 0.2);
                let (q, np) = pid_tau1(&s, &rf, &rs_p, &g, &p, 0.2);
                rs_b = nb;
                rs_p = np;
                last = (b, q);
            }
            // eta integrates -kappa1 w_tilde; the PI integral integrates
            // w_tilde, scaled by -kappa1 in the law: identical commands
            assert_abs_diff_eq!(last.0, last.1, epsilon = 1e-9);
        }
    }

    /// The surge error pair contracts for any admissible gain set: the
    /// energy kappa1 w_tilde^2 + eta_tilde^2 decays under the closed loop
    /// for 100 random gain/initialization draws.
    #[test]
    fn surge_pair_converges_for_random_initializations() {
        use rand::{Rng, SeedableRng};
        let p = identified_params();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5e1);
        for case in 0..100 {
            let kappa2: f64 = rng.random_range(0.05..1.0);
            let kappa1: f64 = rng.random_range(kappa2 * kappa2 / 4.0 * 1.1..2.0);
            let g = RegGains::new(kappa1, kappa2, 0.2, 0.5).unwrap();
            let w_r: f64 = rng.random_range(-1.5..1.5);
            let rf = ReferenceSignal::constant(w_r, 0.0);
            let mut w = w_r + rng.random_range(-2.0..2.0);
            let mut eta = rng.random_range(-0.5..0.5);
            let energy = |w: f64, eta: f64| {
                kappa1 * (w - w_r).powi(2) + eta * eta
            };
            let e0 = energy(w, eta);
            if e0 < 1e-12 {
                continue;
            }
            // closed loop with the propeller law evaluated continuously
            let rate = crate::fit::dominant_rate_quadratic(kappa2, kappa1);
            let horizon = 6.0 / rate;
            let dt = 0.05;
            let f = |w: f64, eta: f64| {
                let (tau1, _) = backstepping_tau1(
                    &state(w, 0.0, 0.0, 0.0),
                    &rf,
                    &RegulatorState::with_eta(eta),
                    &g,
                    &p,
                    0.0,
                );
                (p.k1 * w + p.k3 * tau1, -g.kappa1 * (w - w_r))
            };
            let steps = (horizon / dt) as usize;
            for _ in 0..steps {
                let k1 = f(w, eta);
                let k2 = f(w + dt / 2.0 * k1.0, eta + dt / 2.0 * k1.1);
                let k3 = f(w + dt / 2.0 * k2.0, eta + dt / 2.0 * k2.1);
                let k4 = f(w + dt * k3.0, eta + dt * k3.1);
                w += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
                eta += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            }
            let ef = energy(w, eta);
            assert!(
                ef < 0.05 * e0,
                "case {case}: kappa1={kappa1}, kappa2={kappa2}: energy {e0} -> {ef}"
            );
        }
    }

    #[test]
    fn monitor_requires_history_and_flags_exact_zero() {
        let g = identified_gains();
        let short = vec![
            (
                0.0,
                ErrorCoordinates {
                    w_tilde: 0.0,
                    psi_tilde: 0.0,
                    phi: 0.0,
                    r_tilde: 0.0,
                },
            );
            5
        ];
        assert_eq!(
            error_subsystem_monitor(&short, &g).unwrap_err(),
            RegulationError::TraceTooShort(5)
        );

        let flat = vec![
            (
                0.0,
                ErrorCoordinates {
                    w_tilde: 0.0,
                    psi_tilde: 0.0,
                    phi: 0.0,
                    r_tilde: 0.0,
                },
            );
            20
        ];
        let report = error_subsystem_monitor(&flat, &g).unwrap();
        assert!(report.r_tilde.exact_convergence);
        assert!(report.phi.exact_convergence);
        assert!(report.surge.exact_convergence);
    }

    #[test]
    fn monitor_fits_synthetic_decays() {
        let g = identified_gains();
        // synthesize traces obeying the analytic subsystems
        let samples: Vec<(f64, ErrorCoordinates)> = (0..2000)
            .map(|i| {
                let t = i as f64 * 0.05;
                let r_tilde = 0.8 * (-g.kappa4 * t).exp();
                (
                    t,
                    ErrorCoordinates {
                        w_tilde: 0.0,
                        psi_tilde: 0.0,
                        phi: 0.3 * (-g.kappa3 * t).exp(),
                        r_tilde,
                    },
                )
            })
            .collect();
        let report = error_subsystem_monitor(&samples, &g).unwrap();
        let r_rate = report.r_tilde.fitted_rate.unwrap();
        assert!((r_rate - g.kappa4).abs() / g.kappa4 < 0.02);
        let phi_rate = report.phi.fitted_rate.unwrap();
        assert!((phi_rate - g.kappa3).abs() / g.kappa3 < 0.02);
        assert!(report.surge.exact_convergence);
    }
}
