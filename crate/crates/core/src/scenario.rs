//! Scenario definitions, bundled presets, the JSON file schema, and
//! `key=value` overrides.
//!
//! Config-file convention: angles are degrees in files (human-facing) and
//! radians everywhere inside the library; conversion happens only at this
//! boundary.

use crate::dynamics::{DynamicsParams, VesselState};
use crate::protocols::{CommGraph, SwarmConfig};
use crate::regulation::RegGains;
use crate::Vec2;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Supported scenario-file schema version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario parse error at {path}: {message} (line {line}, column {column})")]
    Parse {
        path: String,
        message: String,
        line: usize,
        column: usize,
    },
    #[error("unsupported schema_version {0} (this build reads version {SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("unknown override key '{0}'")]
    UnknownOverride(String),
    #[error("invalid value '{value}' for override '{key}': {message}")]
    BadOverrideValue {
        key: String,
        value: String,
        message: String,
    },
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
}

/// How the vessel team is initialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum VesselSetup {
    /// Seeded uniform placement over a rectangle `[x0, x1] x [y0, y1]`
    /// with uniform headings and zero initial velocities.
    Random { count: usize, area: [f64; 4] },
    /// Explicit initial states.
    Explicit(Vec<VesselState>),
}

impl VesselSetup {
    pub fn count(&self) -> usize {
        match self {
            VesselSetup::Random { count, .. } => *count,
            VesselSetup::Explicit(v) => v.len(),
        }
    }
}

/// Target trajectory. The target is kinematic only; nothing chases back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TargetSpec {
    Static(Vec2),
    ConstantVelocity { start: Vec2, velocity: Vec2 },
    /// Piecewise-linear path: start at the first point, travel each leg at
    /// the paired speed (m/s), then hold the final point.
    Waypoints { points: Vec<Vec2>, speeds: Vec<f64> },
}

impl TargetSpec {
    pub fn position(&self, t: f64) -> Vec2 {
        match self {
            TargetSpec::Static(p) => *p,
            TargetSpec::ConstantVelocity { start, velocity } => start + velocity * t,
            TargetSpec::Waypoints { points, speeds } => {
                let mut pos = points[0];
                let mut remaining = t;
                for (leg, &speed) in points.windows(2).zip(speeds) {
                    let span = leg[1] - leg[0];
                    let len = span.norm();
                    if speed <= 0.0 || len == 0.0 {
                        continue;
                    }
                    let dt_leg = len / speed;
                    if remaining < dt_leg {
                        return leg[0] + span * (remaining / dt_leg);
                    }
                    remaining -= dt_leg;
                    pos = leg[1];
                }
                pos
            }
        }
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        if let TargetSpec::Waypoints { points, speeds } = self {
            if points.is_empty() {
                return Err(ScenarioError::Invalid("waypoint list is empty".into()));
            }
            if speeds.len() + 1 != points.len() {
                return Err(ScenarioError::Invalid(format!(
                    "waypoints need one speed per leg: {} points, {} speeds",
                    points.len(),
                    speeds.len()
                )));
            }
        }
        Ok(())
    }
}

/// Which upper-level protocol drives the team.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControlMode {
    /// Cartesian surrounding control, target known to every vessel.
    Approach1Centralized,
    /// Cartesian surrounding control on consensus estimates of the target.
    Approach1Decentralized,
    /// Polar equally-surrounding control.
    Approach2,
}

impl ControlMode {
    pub fn is_decentralized(&self) -> bool {
        matches!(self, ControlMode::Approach1Decentralized)
    }
}

pub use crate::regulation::RegulatorLaw;

/// A complete, runnable experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub vessels: VesselSetup,
    pub target: TargetSpec,
    pub mode: ControlMode,
    pub law: RegulatorLaw,
    /// Integrate the commanded kinematics directly (perturbation held at
    /// zero), bypassing dynamics and regulation.
    pub ideal: bool,
    pub swarm: SwarmConfig,
    pub gains: RegGains,
    pub params: DynamicsParams,
    pub duration: f64,
    pub dt_phys: f64,
    pub dt_ctrl: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(ScenarioError::Invalid(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        if !(self.dt_phys > 0.0 && self.dt_ctrl > 0.0) {
            return Err(ScenarioError::Invalid("time steps must be positive".into()));
        }
        let ratio = self.dt_ctrl / self.dt_phys;
        if (ratio - ratio.round()).abs() > 1e-9 || ratio < 1.0 - 1e-9 {
            return Err(ScenarioError::Invalid(format!(
                "dt_ctrl = {} must be an integer multiple of dt_phys = {}",
                self.dt_ctrl, self.dt_phys
            )));
        }
        let n = self.vessels.count();
        if self.swarm.n != n {
            return Err(ScenarioError::Invalid(format!(
                "swarm.n = {} does not match vessel count {n}",
                self.swarm.n
            )));
        }
        if let VesselSetup::Random { area, .. } = &self.vessels {
            if !(area[0] < area[1] && area[2] < area[3]) {
                return Err(ScenarioError::Invalid(
                    "placement area must satisfy x0 < x1 and y0 < y1".into(),
                ));
            }
        }
        if let VesselSetup::Explicit(states) = &self.vessels {
            if states.iter().any(|s| !s.is_finite()) {
                return Err(ScenarioError::Invalid(
                    "explicit vessel state is not finite".into(),
                ));
            }
        }
        self.target.validate()?;
        self.swarm
            .validate(self.mode.is_decentralized())
            .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        self.gains
            .validate()
            .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        self.params
            .validate()
            .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        Ok(())
    }

    /// Physics substeps per control tick.
    pub fn substeps(&self) -> usize {
        (self.dt_ctrl / self.dt_phys).round() as usize
    }

    /// Apply a `key=value` override. Unknown keys and unparsable values
    /// are rejected with the key named.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<(), ScenarioError> {
        fn num(key: &str, value: &str) -> Result<f64, ScenarioError> {
            value
                .parse::<f64>()
                .map_err(|e| ScenarioError::BadOverrideValue {
                    key: key.into(),
                    value: value.into(),
                    message: e.to_string(),
                })
        }
        match key {
            "duration" => self.duration = num(key, value)?,
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|e| ScenarioError::BadOverrideValue {
                        key: key.into(),
                        value: value.into(),
                        message: e.to_string(),
                    })?
            }
            "ideal" => {
                self.ideal = value
                    .parse::<bool>()
                    .map_err(|e| ScenarioError::BadOverrideValue {
                        key: key.into(),
                        value: value.into(),
                        message: e.to_string(),
                    })?
            }
            "dt_phys" => self.dt_phys = num(key, value)?,
            "dt_ctrl" => self.dt_ctrl = num(key, value)?,
            "kappa1" => self.gains.kappa1 = num(key, value)?,
            "kappa2" => self.gains.kappa2 = num(key, value)?,
            "kappa3" => self.gains.kappa3 = num(key, value)?,
            "kappa4" => self.gains.kappa4 = num(key, value)?,
            "beta1" => self.swarm.beta1 = num(key, value)?,
            "beta2" => self.swarm.beta2 = num(key, value)?,
            "gamma1" => self.swarm.gamma1 = num(key, value)?,
            "gamma2" => self.swarm.gamma2 = num(key, value)?,
            "gamma3" => self.swarm.gamma3 = num(key, value)?,
            "mu" => self.swarm.mu = num(key, value)?,
            "rho_o" => self.swarm.rho_o = num(key, value)?,
            "tau1_min" => self.params.tau1_range.0 = num(key, value)?,
            "tau1_max" => self.params.tau1_range.1 = num(key, value)?,
            "tau2_min_deg" => self.params.tau2_range.0 = num(key, value)?.to_radians(),
            "tau2_max_deg" => self.params.tau2_range.1 = num(key, value)?.to_radians(),
            "law" => {
                self.law = match value {
                    "backstepping" => RegulatorLaw::Backstepping,
                    "pid" => RegulatorLaw::Pid,
                    _ => {
                        return Err(ScenarioError::BadOverrideValue {
                            key: key.into(),
                            value: value.into(),
                            message: "expected 'backstepping' or 'pid'".into(),
                        })
                    }
                }
            }
            _ => return Err(ScenarioError::UnknownOverride(key.into())),
        }
        Ok(())
    }
}

/// Model coefficients identified for the experimental vessels, with a
/// symmetric propeller range (the waterjet has a reversing bucket) and the
/// ±20° nozzle limits.
pub fn identified_params() -> DynamicsParams {
    DynamicsParams {
        k1: -0.098,
        k2: 0.003,
        k3: 0.005,
        k4: -0.1055,
        k5: 0.019,
        k6: -0.091,
        k7: -0.0175,
        tau1_range: (-11000.0, 11000.0),
        tau2_range: (-20f64.to_radians(), 20f64.to_radians()),
    }
}

/// Regulation gains used in the reported field experiments.
pub fn identified_gains() -> RegGains {
    RegGains {
        kappa1: 0.02,
        kappa2: 0.001,
        kappa3: 0.076,
        kappa4: 0.418,
    }
}

/// Well-damped regulation gains for simulation presets: surge pair poles
/// near critical damping, heading poles fast enough to follow rotating
/// references within the nozzle authority.
pub fn tuned_gains() -> RegGains {
    RegGains {
        kappa1: 0.025,
        kappa2: 0.3,
        kappa3: 0.2,
        kappa4: 0.5,
    }
}

fn swarm(n: usize, mu: f64, g: [f64; 3], b: [f64; 2], rho_o: f64, leaders: &[usize]) -> SwarmConfig {
    SwarmConfig {
        n,
        mu,
        gamma1: g[0],
        gamma2: g[1],
        gamma3: g[2],
        beta1: b[0],
        beta2: b[1],
        rho_o,
        comm_graph: CommGraph::line(n),
        leaders: leaders.iter().copied().collect::<BTreeSet<_>>(),
    }
}

fn base_scenario(name: &str) -> Scenario {
    Scenario {
        name: name.into(),
        vessels: VesselSetup::Random {
            count: 3,
            area: [-20.0, 20.0, -20.0, 20.0],
        },
        target: TargetSpec::Static(Vec2::zeros()),
        mode: ControlMode::Approach2,
        law: RegulatorLaw::Backstepping,
        ideal: false,
        swarm: swarm(3, 5.0, [0.05, 0.05, 1.0], [0.13, 0.06], 10.0, &[0, 1, 2]),
        gains: identified_gains(),
        params: identified_params(),
        duration: 200.0,
        dt_phys: 0.01,
        dt_ctrl: 0.2,
        seed: 1,
    }
}

/// Names and one-line descriptions of the bundled presets.
pub fn preset_catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "surround-sec6",
            "Equally-surrounding replica of the reported field experiment: 3 vessels in a 40x40 m area, static target, beta1=0.13 beta2=0.06 rho_o=10, backstepping with the experiment's kappa gains",
        ),
        (
            "surround-tuned",
            "Equally-surrounding mission with gentler protocol gains and well-damped regulators; converges to the 10 m circle at 120 deg spacing",
        ),
        (
            "surround-tuned-moving",
            "Equally-surrounding with a slowly drifting target (constant velocity)",
        ),
        (
            "surround-approach1",
            "Cartesian surrounding control, target position known to all vessels",
        ),
        (
            "surround-approach1-decentralized",
            "Cartesian surrounding control with the consensus target estimator on a line graph, one sensing vessel",
        ),
    ]
}

/// Look up a bundled preset by name.
pub fn preset(name: &str) -> Result<Scenario, ScenarioError> {
    let sc = match name {
        "surround-sec6" => base_scenario(name),
        "surround-tuned" => {
            let mut sc = base_scenario(name);
            sc.swarm.beta1 = 0.02;
            sc.swarm.beta2 = 0.012;
            sc.gains = tuned_gains();
            sc.duration = 700.0;
            sc
        }
        "surround-tuned-moving" => {
            let mut sc = preset("surround-tuned")?;
            sc.name = name.into();
            sc.target = TargetSpec::ConstantVelocity {
                start: Vec2::zeros(),
                velocity: Vec2::new(0.03, 0.015),
            };
            sc
        }
        "surround-approach1" => {
            let mut sc = base_scenario(name);
            sc.mode = ControlMode::Approach1Centralized;
            sc.swarm = swarm(3, 6.0, [0.001, 0.02, 0.5], [0.02, 0.012], 10.0, &[0, 1, 2]);
            sc.gains = tuned_gains();
            sc.duration = 500.0;
            sc
        }
        "surround-approach1-decentralized" => {
            let mut sc = preset("surround-approach1")?;
            sc.name = name.into();
            sc.mode = ControlMode::Approach1Decentralized;
            sc.swarm.leaders = BTreeSet::from([0]);
            sc
        }
        _ => return Err(ScenarioError::UnknownPreset(name.into())),
    };
    debug_assert!(sc.validate().is_ok());
    Ok(sc)
}

// ---------------------------------------------------------------------
// File schema (schema_version 1, angles in degrees)
// ---------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema_version: u32,
    name: String,
    vessels: VesselSetupFile,
    target: TargetFile,
    mode: ControlMode,
    law: RegulatorLaw,
    #[serde(default)]
    ideal: bool,
    swarm: SwarmFile,
    gains: RegGains,
    params: ParamsFile,
    duration: f64,
    dt_phys: f64,
    dt_ctrl: f64,
    seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
enum VesselSetupFile {
    Random { count: usize, area: [f64; 4] },
    Explicit(Vec<VesselStateFile>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VesselStateFile {
    x: f64,
    y: f64,
    heading_deg: f64,
    #[serde(default)]
    surge: f64,
    #[serde(default)]
    sway: f64,
    #[serde(default)]
    yaw_rate_deg_s: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
enum TargetFile {
    Static([f64; 2]),
    ConstantVelocity { start: [f64; 2], velocity: [f64; 2] },
    Waypoints { points: Vec<[f64; 2]>, speeds: Vec<f64> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SwarmFile {
    mu: f64,
    gamma1: f64,
    gamma2: f64,
    gamma3: f64,
    beta1: f64,
    beta2: f64,
    rho_o: f64,
    comm_edges: Vec<[usize; 2]>,
    leaders: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    k1: f64,
    k2: f64,
    k3: f64,
    k4: f64,
    k5: f64,
    k6: f64,
    k7: f64,
    tau1_range: [f64; 2],
    tau2_range_deg: [f64; 2],
}

/// Parse a scenario from the documented JSON schema. Errors carry the
/// offending field path and source location. The parsed scenario is
/// validated before being returned.
pub fn parse_scenario(json: &str) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        ScenarioError::Parse {
            path: e.path().to_string(),
            message: inner.to_string(),
            line: inner.line(),
            column: inner.column(),
        }
    })?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(ScenarioError::SchemaVersion(file.schema_version));
    }

    let vessels = match file.vessels {
        VesselSetupFile::Random { count, area } => VesselSetup::Random { count, area },
        VesselSetupFile::Explicit(list) => VesselSetup::Explicit(
            list.into_iter()
                .map(|s| VesselState {
                    position: Vec2::new(s.x, s.y),
                    heading: s.heading_deg.to_radians(),
                    surge: s.surge,
                    sway: s.sway,
                    yaw_rate: s.yaw_rate_deg_s.to_radians(),
                })
                .collect(),
        ),
    };
    let n = vessels.count();
    let target = match file.target {
        TargetFile::Static(p) => TargetSpec::Static(Vec2::new(p[0], p[1])),
        TargetFile::ConstantVelocity { start, velocity } => TargetSpec::ConstantVelocity {
            start: Vec2::new(start[0], start[1]),
            velocity: Vec2::new(velocity[0], velocity[1]),
        },
        TargetFile::Waypoints { points, speeds } => TargetSpec::Waypoints {
            points: points.iter().map(|p| Vec2::new(p[0], p[1])).collect(),
            speeds,
        },
    };
    let mut comm_graph = CommGraph::new(n);
    for [a, b] in &file.swarm.comm_edges {
        if *a >= n || *b >= n {
            return Err(ScenarioError::Invalid(format!(
                "comm edge [{a}, {b}] out of range for {n} vessels"
            )));
        }
        comm_graph.add_edge(*a, *b);
    }
    let sc = Scenario {
        name: file.name,
        vessels,
        target,
        mode: file.mode,
        law: file.law,
        ideal: file.ideal,
        swarm: SwarmConfig {
            n,
            mu: file.swarm.mu,
            gamma1: file.swarm.gamma1,
            gamma2: file.swarm.gamma2,
            gamma3: file.swarm.gamma3,
            beta1: file.swarm.beta1,
            beta2: file.swarm.beta2,
            rho_o: file.swarm.rho_o,
            comm_graph,
            leaders: file.swarm.leaders.into_iter().collect(),
        },
        gains: file.gains,
        params: DynamicsParams {
            k1: file.params.k1,
            k2: file.params.k2,
            k3: file.params.k3,
            k4: file.params.k4,
            k5: file.params.k5,
            k6: file.params.k6,
            k7: file.params.k7,
            tau1_range: (file.params.tau1_range[0], file.params.tau1_range[1]),
            tau2_range: (
                file.params.tau2_range_deg[0].to_radians(),
                file.params.tau2_range_deg[1].to_radians(),
            ),
        },
        duration: file.duration,
        dt_phys: file.dt_phys,
        dt_ctrl: file.dt_ctrl,
        seed: file.seed,
    };
    sc.validate()?;
    Ok(sc)
}

/// Serialize a scenario into the documented JSON schema (pretty-printed).
pub fn scenario_to_json(sc: &Scenario) -> String {
    let vessels = match &sc.vessels {
        VesselSetup::Random { count, area } => VesselSetupFile::Random {
            count: *count,
            area: *area,
        },
        VesselSetup::Explicit(list) => VesselSetupFile::Explicit(
            list.iter()
                .map(|s| VesselStateFile {
                    x: s.position.x,
                    y: s.position.y,
                    heading_deg: s.heading.to_degrees(),
                    surge: s.surge,
                    sway: s.sway,
                    yaw_rate_deg_s: s.yaw_rate.to_degrees(),
                })
                .collect(),
        ),
    };
    let target = match &sc.target {
        TargetSpec::Static(p) => TargetFile::Static([p.x, p.y]),
        TargetSpec::ConstantVelocity { start, velocity } => TargetFile::ConstantVelocity {
            start: [start.x, start.y],
            velocity: [velocity.x, velocity.y],
        },
        TargetSpec::Waypoints { points, speeds } => TargetFile::Waypoints {
            points: points.iter().map(|p| [p.x, p.y]).collect(),
            speeds: speeds.clone(),
        },
    };
    let file = ScenarioFile {
        schema_version: SCHEMA_VERSION,
        name: sc.name.clone(),
        vessels,
        target,
        mode: sc.mode,
        law: sc.law,
        ideal: sc.ideal,
        swarm: SwarmFile {
            mu: sc.swarm.mu,
            gamma1: sc.swarm.gamma1,
            gamma2: sc.swarm.gamma2,
            gamma3: sc.swarm.gamma3,
            beta1: sc.swarm.beta1,
            beta2: sc.swarm.beta2,
            rho_o: sc.swarm.rho_o,
            comm_edges: (0..sc.swarm.n)
                .flat_map(|i| {
                    sc.swarm
                        .comm_graph
                        .neighbors(i)
                        .into_iter()
                        .filter(move |&j| j > i)
                        .map(move |j| [i, j])
                })
                .collect(),
            leaders: sc.swarm.leaders.iter().copied().collect(),
        },
        gains: sc.gains,
        params: ParamsFile {
            k1: sc.params.k1,
            k2: sc.params.k2,
            k3: sc.params.k3,
            k4: sc.params.k4,
            k5: sc.params.k5,
            k6: sc.params.k6,
            k7: sc.params.k7,
            tau1_range: [sc.params.tau1_range.0, sc.params.tau1_range.1],
            tau2_range_deg: [
                sc.params.tau2_range.0.to_degrees(),
                sc.params.tau2_range.1.to_degrees(),
            ],
        },
        duration: sc.duration,
        dt_phys: sc.dt_phys,
        dt_ctrl: sc.dt_ctrl,
        seed: sc.seed,
    };
    serde_json::to_string_pretty(&file).expect("scenario serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for (name, _) in preset_catalog() {
            let sc = preset(name).unwrap();
            sc.validate().unwrap();
            assert_eq!(sc.name, name);
        }
        assert!(matches!(
            preset("no-such-preset"),
            Err(ScenarioError::UnknownPreset(_))
        ));
    }

    #[test]
    fn json_round_trip_preserves_scenario() {
        for (name, _) in preset_catalog() {
            let sc = preset(name).unwrap();
            let json = scenario_to_json(&sc);
            let back = parse_scenario(&json).unwrap();
            assert_eq!(back, sc, "round trip changed preset {name}");
        }
    }

    #[test]
    fn parse_reports_field_path() {
        let sc = preset("surround-tuned").unwrap();
        let bad = scenario_to_json(&sc).replace("\"mu\": 5.0", "\"mu\": \"five\"");
        let err = parse_scenario(&bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("swarm"), "message should name the field: {msg}");
    }

    #[test]
    fn schema_version_checked() {
        let sc = preset("surround-tuned").unwrap();
        let bad = scenario_to_json(&sc).replace("\"schema_version\": 1", "\"schema_version\": 99");
        assert!(matches!(
            parse_scenario(&bad),
            Err(ScenarioError::SchemaVersion(99))
        ));
    }

    #[test]
    fn overrides_apply_and_reject() {
        let mut sc = preset("surround-tuned").unwrap();
        sc.apply_override("duration", "42.5").unwrap();
        assert_eq!(sc.duration, 42.5);
        sc.apply_override("seed", "9").unwrap();
        assert_eq!(sc.seed, 9);
        sc.apply_override("tau2_max_deg", "15").unwrap();
        assert!((sc.params.tau2_range.1 - 15f64.to_radians()).abs() < 1e-12);
        sc.apply_override("law", "pid").unwrap();
        assert_eq!(sc.law, RegulatorLaw::Pid);

        let err = sc.apply_override("no_such_key", "1").unwrap_err();
        assert!(err.to_string().contains("no_such_key"));
        let err = sc.apply_override("duration", "abc").unwrap_err();
        assert!(err.to_string().contains("duration"));

        // duration = 0 passes the parse but fails validation
        sc.apply_override("duration", "0").unwrap();
        assert!(sc.validate().is_err());
    }

    #[test]
    fn waypoint_target_walks_legs() {
        let t = TargetSpec::Waypoints {
            points: vec![Vec2::zeros(), Vec2::new(10.0, 0.0), Vec2::new(10.0, 5.0)],
            speeds: vec![2.0, 1.0],
        };
        assert_eq!(t.position(0.0), Vec2::zeros());
        assert_eq!(t.position(2.5), Vec2::new(5.0, 0.0));
        assert_eq!(t.position(5.0), Vec2::new(10.0, 0.0));
        assert_eq!(t.position(7.0), Vec2::new(10.0, 2.0));
        // holds the final point
        assert_eq!(t.position(100.0), Vec2::new(10.0, 5.0));
    }
}
