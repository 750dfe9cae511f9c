//! Scenario orchestration: the full two-level control stack (protocols at
//! the control tick, dynamics at the physics step, zero-order hold in
//! between) and the kinematic "ideal mode" used by the verification
//! suites, with Lyapunov monitors recorded on every control tick.

use crate::conversion::{
    perturbation, ConversionFlags, PerturbationRecord, ReferenceBuilder, ReferenceSignal,
};
use crate::dynamics::{
    saturate, step, ActuatorCommand, SaturationFlags, VesselState,
};
use crate::fit;
use crate::geometry::{hull_distance, AngleTracker};
use crate::conversion::polar_to_cartesian_command;
use crate::protocols::{
    equal_surround_control, estimator_step, lyapunov_p, lyapunov_v, surrounding_control,
    EstimatorState, PolarState, SwarmConfig, RHO_MIN,
};
use crate::regulation::{
    backstepping_tau1, backstepping_tau2, pid_tau1, pid_tau2, RegulatorState,
};
use crate::scenario::{ControlMode, RegulatorLaw, Scenario, ScenarioError, VesselSetup};
use crate::Vec2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Hull-distance threshold for the surrounding outcome (m).
pub const EPS_HULL: f64 = 0.1;
/// Radius tolerance for the equally-surrounding outcome (m).
pub const EPS_RHO: f64 = 0.2;
/// Adjacent phase-gap tolerance for the equally-surrounding outcome (deg).
pub const EPS_PHASE_DEG: f64 = 5.0;
/// The outcome conditions must hold over at least this trailing window (s).
pub const SUSTAIN_WINDOW: f64 = 5.0;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("numerical blow-up at t = {t:.3} s on vessel {vessel}")]
    Blowup { t: f64, vessel: usize },
}

/// Everything recorded about one vessel at one control tick.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VesselRecord {
    pub state: VesselState,
    pub command: ActuatorCommand,
    pub saturation: SaturationFlags,
    pub reference: ReferenceSignal,
    pub perturbation: PerturbationRecord,
    /// Distance to the target (m).
    pub rho: f64,
    /// Unwrapped angle about the target (rad).
    pub theta: f64,
    /// This vessel's estimate of the target position (the true position
    /// outside decentralized mode).
    pub estimate: Vec2,
    pub conversion: ConversionFlags,
    /// Vessel was inside the degenerate radius this tick; the previous
    /// reference was held.
    pub degenerate: bool,
}

/// One control tick of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub target: Vec2,
    pub vessels: Vec<VesselRecord>,
    /// Convex-hull distance monitor.
    pub hull_distance: f64,
    /// Surrounding potential monitor.
    pub lyapunov_v: f64,
    /// Angular-spacing potential monitor.
    pub lyapunov_p: f64,
}

/// Recorded run: one [`TraceRecord`] per control tick.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub scenario: String,
    pub n: usize,
    pub dt_ctrl: f64,
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    /// Wrapped pairwise angle differences `θ_i - θ_j` for `i < j`, one
    /// vector per record, in lexicographic pair order.
    pub fn theta_pairs(record: &TraceRecord) -> Vec<f64> {
        let n = record.vessels.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(crate::geometry::wrapped_diff(
                    record.vessels[i].theta,
                    record.vessels[j].theta,
                ));
            }
        }
        out
    }
}

/// Steady-state figures over the final sustain window of a run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SteadyState {
    /// Mean hull distance (m).
    pub hull_distance: f64,
    /// Worst radius error `max_i |rho_i - rho_o|` (m).
    pub max_rho_error: f64,
    /// Worst adjacent phase-gap deviation from `360/N` (deg).
    pub max_gap_error_deg: f64,
}

/// Mission outcome detected from a trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeReport {
    /// Earliest time from which the hull distance stays below
    /// [`EPS_HULL`] through the end of the trace (holding at least
    /// [`SUSTAIN_WINDOW`]).
    pub surrounded_at: Option<f64>,
    /// Earliest time from which all radii stay within [`EPS_RHO`] of
    /// `rho_o` and all adjacent phase gaps within [`EPS_PHASE_DEG`] of
    /// `360/N`, through the end of the trace.
    pub equally_surrounded_at: Option<f64>,
    pub steady_state: SteadyState,
    /// Fitted decay rate of the centroid-to-target distance (1/s).
    pub centroid_rate: Option<f64>,
    /// Fitted decay rate of the worst estimator error (decentralized runs).
    pub estimator_rate: Option<f64>,
}

/// Run a scenario (full stack, or kinematic if `ideal` is set) and detect
/// its outcome.
pub fn run(sc: &Scenario) -> Result<(Trace, OutcomeReport), EngineError> {
    sc.validate()?;
    let trace = if sc.ideal {
        ideal_mode_run(sc)?
    } else {
        full_run(sc)?
    };
    let outcome = detect_outcomes(&trace, &sc.swarm);
    Ok((trace, outcome))
}

/// Seeded initial states: positions uniform over the configured area,
/// headings uniform in `[-π, π)`, zero velocities. Draw order (per vessel:
/// x, y, heading) is part of the determinism contract.
pub fn initial_states(sc: &Scenario) -> Vec<VesselState> {
    match &sc.vessels {
        VesselSetup::Explicit(states) => states.clone(),
        VesselSetup::Random { count, area } => {
            let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
            (0..*count)
                .map(|_| {
                    let x = rng.random_range(area[0]..area[1]);
                    let y = rng.random_range(area[2]..area[3]);
                    let heading = rng.random_range(-PI..PI);
                    VesselState::at_rest(Vec2::new(x, y), heading)
                })
                .collect()
        }
    }
}

struct VesselMemory {
    builder: ReferenceBuilder,
    regulator: RegulatorState,
    theta: AngleTracker,
    last_reference: Option<ReferenceSignal>,
    last_perturbation: PerturbationRecord,
}

fn full_run(sc: &Scenario) -> Result<Trace, EngineError> {
    let n = sc.swarm.n;
    let substeps = sc.substeps();
    let ticks = (sc.duration / sc.dt_ctrl).round() as usize;

    let mut states = initial_states(sc);
    let mut memory: Vec<VesselMemory> = (0..n)
        .map(|_| VesselMemory {
            builder: ReferenceBuilder::new(sc.dt_ctrl),
            regulator: RegulatorState::new(),
            theta: AngleTracker::new(),
            last_reference: None,
            last_perturbation: PerturbationRecord::default(),
        })
        .collect();
    let decentralized = sc.mode.is_decentralized();
    let mut estimator = EstimatorState::from_positions(
        &states.iter().map(|s| s.position).collect::<Vec<_>>(),
    );

    let mut records = Vec::with_capacity(ticks + 1);
    for k in 0..=ticks {
        let t = k as f64 * sc.dt_ctrl;
        let target = sc.target.position(t);
        // sense -> estimate: bring the consensus estimates up to this tick
        // (zero-order hold on the previous target sample).
        if decentralized && k > 0 {
            let prev_target = sc.target.position((k - 1) as f64 * sc.dt_ctrl);
            estimator = estimator_step(&estimator, &prev_target, &sc.swarm, sc.dt_ctrl);
        }

        let positions: Vec<Vec2> = states.iter().map(|s| s.position).collect();
        // polar snapshot first: the equally-surrounding law needs every
        // vessel's angle
        let mut rhos = vec![0.0; n];
        let mut thetas = vec![0.0; n];
        let mut degenerate = vec![false; n];
        for i in 0..n {
            let d = positions[i] - target;
            rhos[i] = d.norm();
            if rhos[i] > RHO_MIN {
                thetas[i] = memory[i].theta.update(d.y.atan2(d.x));
            } else {
                degenerate[i] = true;
                thetas[i] = memory[i].theta.value().unwrap_or(0.0);
            }
        }

        // protocol -> conversion -> regulation -> saturation, per vessel
        let mut vessel_records = Vec::with_capacity(n);
        let mut commands = Vec::with_capacity(n);
        for i in 0..n {
            let estimate = if decentralized {
                estimator.estimates[i]
            } else {
                target
            };
            let (reference, flags) = if degenerate[i] {
                // hold the previous reference through the singularity
                let held = memory[i]
                    .last_reference
                    .unwrap_or_else(|| ReferenceSignal::constant(0.0, states[i].heading));
                (held, ConversionFlags::default())
            } else {
                let u = match sc.mode {
                    ControlMode::Approach1Centralized | ControlMode::Approach1Decentralized => {
                        surrounding_control(&positions, i, &estimate, &sc.swarm)
                    }
                    ControlMode::Approach2 => {
                        let polar = PolarState {
                            rho: rhos[i],
                            theta: thetas[i],
                        };
                        let (eta, omega) =
                            equal_surround_control(i, &polar, &thetas, &sc.swarm)
                                .expect("degenerate radius handled above");
                        polar_to_cartesian_command(eta, omega, rhos[i], thetas[i])
                    }
                };
                memory[i]
                    .builder
                    .build(&u, states[i].sway, states[i].heading)
            };
            memory[i].last_reference = Some(reference);

            let (tau1, regulator_next) = match sc.law {
                RegulatorLaw::Backstepping => backstepping_tau1(
                    &states[i],
                    &reference,
                    &memory[i].regulator,
                    &sc.gains,
                    &sc.params,
                    sc.dt_ctrl,
                ),
                RegulatorLaw::Pid => pid_tau1(
                    &states[i],
                    &reference,
                    &memory[i].regulator,
                    &sc.gains,
                    &sc.params,
                    sc.dt_ctrl,
                ),
            };
            let tau2 = match sc.law {
                RegulatorLaw::Backstepping => {
                    backstepping_tau2(&states[i], &reference, &sc.gains, &sc.params)
                }
                RegulatorLaw::Pid => pid_tau2(&states[i], &reference, &sc.gains, &sc.params),
            };
            let (command, saturation) =
                saturate(&ActuatorCommand::new(tau1, tau2), &sc.params);
            // conditional anti-windup on the propeller channel
            let commit = !saturation.tau1 || {
                let after = crate::regulation::evaluate_tau1(
                    sc.law,
                    &states[i],
                    &reference,
                    &regulator_next,
                    &sc.gains,
                    &sc.params,
                );
                crate::regulation::windup_commit_allowed(tau1, sc.params.tau1_range, after)
            };
            if commit {
                memory[i].regulator = regulator_next;
            }

            let pert = if degenerate[i] {
                memory[i].last_perturbation
            } else {
                perturbation(&states[i], &reference, rhos[i], thetas[i])
                    .expect("degenerate radius handled above")
            };
            memory[i].last_perturbation = pert;

            commands.push(command);
            vessel_records.push(VesselRecord {
                state: states[i],
                command,
                saturation,
                reference,
                perturbation: pert,
                rho: rhos[i],
                theta: thetas[i],
                estimate,
                conversion: flags,
                degenerate: degenerate[i],
            });
        }

        let record = TraceRecord {
            t,
            target,
            vessels: vessel_records,
            hull_distance: hull_distance(&target, &positions),
            lyapunov_v: lyapunov_v(&positions, &target, &sc.swarm),
            lyapunov_p: lyapunov_p(&thetas, &sc.swarm),
        };
        // the monitors square distances, so they can overflow while the
        // raw states are still finite; both count as blow-up
        if !(record.hull_distance.is_finite()
            && record.lyapunov_v.is_finite()
            && record.lyapunov_p.is_finite())
        {
            let vessel = (0..n)
                .max_by(|&a, &b| rhos[a].total_cmp(&rhos[b]))
                .unwrap_or(0);
            return Err(EngineError::Blowup { t, vessel });
        }
        records.push(record);

        // dynamics substeps under zero-order-hold commands
        if k < ticks {
            for i in 0..n {
                for j in 0..substeps {
                    states[i] = step(&states[i], &commands[i], &sc.params, sc.dt_phys)
                        .map_err(|_| EngineError::Blowup {
                            t: t + (j + 1) as f64 * sc.dt_phys,
                            vessel: i,
                        })?;
                }
            }
        }
    }

    Ok(Trace {
        scenario: sc.name.clone(),
        n,
        dt_ctrl: sc.dt_ctrl,
        records,
    })
}

/// Kinematic oracle run: integrate the commanded velocities directly
/// (perturbation identically zero), bypassing conversion, regulation and
/// dynamics. Cartesian modes integrate `x' = u(x)`; the polar mode
/// integrates `rho' = eta`, `theta' = omega`. Used by the property suites
/// to isolate upper-level behavior.
pub fn ideal_mode_run(sc: &Scenario) -> Result<Trace, EngineError> {
    sc.validate()?;
    let n = sc.swarm.n;
    let substeps = sc.substeps();
    let ticks = (sc.duration / sc.dt_ctrl).round() as usize;
    let decentralized = sc.mode.is_decentralized();

    let init = initial_states(sc);
    let mut estimator = EstimatorState::from_positions(
        &init.iter().map(|s| s.position).collect::<Vec<_>>(),
    );

    enum IdealState {
        Cartesian(Vec<Vec2>),
        Polar(Vec<PolarState>),
    }

    let mut state = match sc.mode {
        ControlMode::Approach2 => {
            let target0 = sc.target.position(0.0);
            IdealState::Polar(
                init.iter()
                    .map(|s| {
                        let d = s.position - target0;
                        PolarState {
                            // clamp spawn-inside-the-guard cases away from
                            // the polar singularity
                            rho: d.norm().max(RHO_MIN * 2.0),
                            theta: d.y.atan2(d.x),
                        }
                    })
                    .collect(),
            )
        }
        _ => IdealState::Cartesian(init.iter().map(|s| s.position).collect()),
    };

    let mut records = Vec::with_capacity(ticks + 1);
    for k in 0..=ticks {
        let t = k as f64 * sc.dt_ctrl;
        let target = sc.target.position(t);
        if decentralized && k > 0 {
            let prev_target = sc.target.position((k - 1) as f64 * sc.dt_ctrl);
            estimator = estimator_step(&estimator, &prev_target, &sc.swarm, sc.dt_ctrl);
        }

        // current positions/angles for recording and monitors
        let (positions, rhos, thetas): (Vec<Vec2>, Vec<f64>, Vec<f64>) = match &state {
            IdealState::Cartesian(xs) => {
                let rhos: Vec<f64> = xs.iter().map(|x| (x - target).norm()).collect();
                let thetas: Vec<f64> = xs
                    .iter()
                    .map(|x| {
                        let d = x - target;
                        d.y.atan2(d.x)
                    })
                    .collect();
                (xs.clone(), rhos, thetas)
            }
            IdealState::Polar(ps) => {
                let xs: Vec<Vec2> = ps
                    .iter()
                    .map(|p| target + Vec2::new(p.theta.cos(), p.theta.sin()) * p.rho)
                    .collect();
                (
                    xs,
                    ps.iter().map(|p| p.rho).collect(),
                    ps.iter().map(|p| p.theta).collect(),
                )
            }
        };

        let commanded: Vec<Vec2> = match &state {
            IdealState::Cartesian(xs) => (0..n)
                .map(|i| {
                    let est = if decentralized {
                        estimator.estimates[i]
                    } else {
                        target
                    };
                    surrounding_control(xs, i, &est, &sc.swarm)
                })
                .collect(),
            IdealState::Polar(ps) => (0..n)
                .map(|i| {
                    let (eta, omega) = equal_surround_control(i, &ps[i], &thetas, &sc.swarm)
                        .unwrap_or((0.0, 0.0));
                    polar_to_cartesian_command(eta, omega, ps[i].rho, ps[i].theta)
                })
                .collect(),
        };

        let vessel_records: Vec<VesselRecord> = (0..n)
            .map(|i| {
                let speed = commanded[i].norm();
                let heading = if speed > 1e-12 {
                    commanded[i].y.atan2(commanded[i].x)
                } else {
                    0.0
                };
                VesselRecord {
                    state: VesselState {
                        position: positions[i],
                        heading,
                        surge: speed,
                        sway: 0.0,
                        yaw_rate: 0.0,
                    },
                    command: ActuatorCommand::default(),
                    saturation: SaturationFlags::default(),
                    reference: ReferenceSignal::constant(speed, heading),
                    perturbation: PerturbationRecord::default(),
                    rho: rhos[i],
                    theta: thetas[i],
                    estimate: if decentralized {
                        estimator.estimates[i]
                    } else {
                        target
                    },
                    conversion: ConversionFlags::default(),
                    degenerate: false,
                }
            })
            .collect();

        records.push(TraceRecord {
            t,
            target,
            vessels: vessel_records,
            hull_distance: hull_distance(&target, &positions),
            lyapunov_v: lyapunov_v(&positions, &target, &sc.swarm),
            lyapunov_p: lyapunov_p(&thetas, &sc.swarm),
        });

        if k < ticks {
            for _ in 0..substeps {
                match &mut state {
                    IdealState::Cartesian(xs) => {
                        let est: Vec<Vec2> = (0..n)
                            .map(|i| {
                                if decentralized {
                                    estimator.estimates[i]
                                } else {
                                    target
                                }
                            })
                            .collect();
                        *xs = rk4_cartesian(xs, &est, &sc.swarm, sc.dt_phys);
                    }
                    IdealState::Polar(ps) => {
                        *ps = rk4_polar(ps, &sc.swarm, sc.dt_phys);
                    }
                }
            }
        }
    }

    Ok(Trace {
        scenario: sc.name.clone(),
        n,
        dt_ctrl: sc.dt_ctrl,
        records,
    })
}

fn rk4_cartesian(xs: &[Vec2], estimates: &[Vec2], cfg: &SwarmConfig, dt: f64) -> Vec<Vec2> {
    let f = |state: &[Vec2]| -> Vec<Vec2> {
        (0..state.len())
            .map(|i| surrounding_control(state, i, &estimates[i], cfg))
            .collect()
    };
    let adv = |state: &[Vec2], dir: &[Vec2], h: f64| -> Vec<Vec2> {
        state.iter().zip(dir).map(|(x, d)| x + d * h).collect()
    };
    let k1 = f(xs);
    let k2 = f(&adv(xs, &k1, dt / 2.0));
    let k3 = f(&adv(xs, &k2, dt / 2.0));
    let k4 = f(&adv(xs, &k3, dt));
    (0..xs.len())
        .map(|i| xs[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
        .collect()
}

fn rk4_polar(ps: &[PolarState], cfg: &SwarmConfig, dt: f64) -> Vec<PolarState> {
    let f = |state: &[PolarState]| -> Vec<(f64, f64)> {
        let thetas: Vec<f64> = state.iter().map(|p| p.theta).collect();
        (0..state.len())
            .map(|i| equal_surround_control(i, &state[i], &thetas, cfg).unwrap_or((0.0, 0.0)))
            .collect()
    };
    let adv = |state: &[PolarState], dir: &[(f64, f64)], h: f64| -> Vec<PolarState> {
        state
            .iter()
            .zip(dir)
            .map(|(p, d)| PolarState {
                rho: p.rho + d.0 * h,
                theta: p.theta + d.1 * h,
            })
            .collect()
    };
    let k1 = f(ps);
    let k2 = f(&adv(ps, &k1, dt / 2.0));
    let k3 = f(&adv(ps, &k2, dt / 2.0));
    let k4 = f(&adv(ps, &k3, dt));
    (0..ps.len())
        .map(|i| PolarState {
            rho: ps[i].rho + (k1[i].0 + 2.0 * k2[i].0 + 2.0 * k3[i].0 + k4[i].0) * dt / 6.0,
            theta: ps[i].theta + (k1[i].1 + 2.0 * k2[i].1 + 2.0 * k3[i].1 + k4[i].1) * dt / 6.0,
        })
        .collect()
}

/// Adjacent phase gaps of the sorted vessel angles (rad); always sums to
/// 2π.
pub fn phase_gaps(thetas: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = thetas.iter().map(|t| t.rem_euclid(TAU)).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    (0..n)
        .map(|i| {
            if i + 1 < n {
                sorted[i + 1] - sorted[i]
            } else {
                sorted[0] + TAU - sorted[n - 1]
            }
        })
        .collect()
}

fn record_equally_ok(record: &TraceRecord, swarm: &SwarmConfig) -> bool {
    let sector = TAU / swarm.n as f64;
    let rho_ok = record
        .vessels
        .iter()
        .all(|v| (v.rho - swarm.rho_o).abs() < EPS_RHO);
    let thetas: Vec<f64> = record.vessels.iter().map(|v| v.theta).collect();
    let gaps_ok = phase_gaps(&thetas)
        .iter()
        .all(|g| (g - sector).abs().to_degrees() < EPS_PHASE_DEG);
    rho_ok && gaps_ok
}

/// Earliest record time from which `ok` holds through the end of the
/// trace, provided that span covers the sustain window.
fn sustained_from(trace: &Trace, ok: impl Fn(&TraceRecord) -> bool) -> Option<f64> {
    let records = &trace.records;
    let end = records.last()?.t;
    let mut start: Option<f64> = None;
    for r in records {
        if ok(r) {
            start.get_or_insert(r.t);
        } else {
            start = None;
        }
    }
    match start {
        Some(s) if end - s >= SUSTAIN_WINDOW - 1e-9 => Some(s),
        _ => None,
    }
}

/// Sustained-threshold outcome detection over a recorded trace.
pub fn detect_outcomes(trace: &Trace, swarm: &SwarmConfig) -> OutcomeReport {
    let surrounded_at = sustained_from(trace, |r| r.hull_distance < EPS_HULL);
    let equally_surrounded_at = sustained_from(trace, |r| record_equally_ok(r, swarm));
    debug_assert!(
        equally_surrounded_at.is_none() || surrounded_at.is_some(),
        "equally surrounded implies surrounded"
    );

    let end = trace.records.last().map(|r| r.t).unwrap_or(0.0);
    let tail: Vec<&TraceRecord> = trace
        .records
        .iter()
        .filter(|r| r.t >= end - SUSTAIN_WINDOW)
        .collect();
    let sector = TAU / swarm.n.max(1) as f64;
    let steady_state = SteadyState {
        hull_distance: tail.iter().map(|r| r.hull_distance).sum::<f64>() / tail.len().max(1) as f64,
        max_rho_error: tail
            .iter()
            .flat_map(|r| r.vessels.iter().map(|v| (v.rho - swarm.rho_o).abs()))
            .fold(0.0, f64::max),
        max_gap_error_deg: tail
            .iter()
            .flat_map(|r| {
                let thetas: Vec<f64> = r.vessels.iter().map(|v| v.theta).collect();
                phase_gaps(&thetas)
                    .into_iter()
                    .map(|g| (g - sector).abs().to_degrees())
            })
            .fold(0.0, f64::max),
    };

    let ts = trace.times();
    let centroid_err: Vec<f64> = trace
        .records
        .iter()
        .map(|r| {
            let centroid = r
                .vessels
                .iter()
                .fold(Vec2::zeros(), |acc, v| acc + v.state.position)
                / r.vessels.len() as f64;
            (centroid - r.target).norm()
        })
        .collect();
    let estimator_err: Vec<f64> = trace
        .records
        .iter()
        .map(|r| {
            r.vessels
                .iter()
                .map(|v| (v.estimate - r.target).norm())
                .fold(0.0, f64::max)
        })
        .collect();

    OutcomeReport {
        surrounded_at,
        equally_surrounded_at,
        steady_state,
        centroid_rate: fit::decay_rate(&ts, &centroid_err, 1e-6),
        estimator_rate: if estimator_err.iter().any(|e| *e > 0.0) {
            fit::decay_rate(&ts, &estimator_err, 1e-6)
        } else {
            None
        },
    }
}

/// Extract the error trace of one vessel for the regulation monitor.
pub fn error_trace(
    trace: &Trace,
    vessel: usize,
    gains: &crate::regulation::RegGains,
) -> Vec<(f64, crate::regulation::ErrorCoordinates)> {
    trace
        .records
        .iter()
        .map(|r| {
            let v = &r.vessels[vessel];
            (
                r.t,
                crate::regulation::ErrorCoordinates::new(&v.state, &v.reference, gains),
            )
        })
        .collect()
}
