//! Upper-level collective laws: surrounding control with proximity-based
//! repulsion (optionally driven by a decentralized consensus estimate of
//! the target), equally-surrounding control in polar coordinates, and the
//! potential functions used as runtime Lyapunov monitors.

use crate::geometry::wrapped_diff;
use crate::Vec2;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::TAU;
use thiserror::Error;

/// Below this target distance (m) the polar conversion is declared
/// degenerate; the engine holds the vessel's previous reference for the
/// tick instead of commanding through the singularity.
pub const RHO_MIN: f64 = 0.1;

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("invalid swarm configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate radius: vessel within {RHO_MIN} m of the target")]
    DegenerateRadius,
}

/// Undirected communication graph over vessel indices `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CommGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
        }
    }

    /// Path graph 0 - 1 - ... - (n-1).
    pub fn line(n: usize) -> Self {
        let mut g = Self::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// Insert the undirected edge `{i, j}`. Self-loops are ignored.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "edge endpoint out of range");
        if i != j {
            self.edges.insert((i.min(j), i.max(j)));
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).len()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in self.neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Gains, radii and network structure of the collective protocols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmConfig {
    /// Vessel count (>= 3 for a meaningful surround).
    pub n: usize,
    /// Proximity radius for the repulsion neighborhood (m).
    pub mu: f64,
    /// Repulsion gain of the surrounding controller.
    pub gamma1: f64,
    /// Attraction gain toward the (estimated) target.
    pub gamma2: f64,
    /// Consensus gain of the decentralized target estimator.
    pub gamma3: f64,
    /// Radial gain of the equally-surrounding controller.
    pub beta1: f64,
    /// Angular-spacing gain of the equally-surrounding controller.
    pub beta2: f64,
    /// Target circle radius (m).
    pub rho_o: f64,
    /// Communication graph used by the estimator.
    pub comm_graph: CommGraph,
    /// Vessels that sense the target directly (estimator leaders).
    pub leaders: BTreeSet<usize>,
}

impl SwarmConfig {
    /// Validate the structural invariants. `decentralized` additionally
    /// requires a connected communication graph and at least one leader.
    pub fn validate(&self, decentralized: bool) -> Result<(), ProtocolError> {
        if self.n < 3 {
            return Err(ProtocolError::InvalidConfig(format!(
                "need at least 3 vessels, got {}",
                self.n
            )));
        }
        for (name, v) in [
            ("mu", self.mu),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("rho_o", self.rho_o),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ProtocolError::InvalidConfig(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.comm_graph.len() != self.n {
            return Err(ProtocolError::InvalidConfig(
                "communication graph size does not match vessel count".into(),
            ));
        }
        if self.leaders.iter().any(|&i| i >= self.n) {
            return Err(ProtocolError::InvalidConfig(
                "leader index out of range".into(),
            ));
        }
        if decentralized {
            if self.leaders.is_empty() {
                return Err(ProtocolError::InvalidConfig(
                    "decentralized mode needs at least one vessel that senses the target".into(),
                ));
            }
            if !self.comm_graph.is_connected() {
                return Err(ProtocolError::InvalidConfig(
                    "decentralized mode needs a connected communication graph".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Polar coordinates of one vessel relative to the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarState {
    /// Distance to the target (m), > 0.
    pub rho: f64,
    /// Angle about the target (rad), unwrapped.
    pub theta: f64,
}

/// Indices `j != i` with `||x_i - x_j|| < mu` (strict inequality; a pair
/// at exactly `mu` is not a neighbor).
pub fn proximity_neighbors(xs: &[Vec2], i: usize, mu: f64) -> Vec<usize> {
    (0..xs.len())
        .filter(|&j| j != i && (xs[i] - xs[j]).norm() < mu)
        .collect()
}

/// Surrounding control command for vessel `i`:
///
/// ```text
/// u_i = gamma1 * sum_{j in N_i} (mu^2 - ||x_ij||^2) x_ij + gamma2 (target - x_i)
/// ```
///
/// with `x_ij = x_i - x_j`. Pass the true target position for the
/// centralized law or the vessel's consensus estimate for the
/// decentralized variant.
pub fn surrounding_control(xs: &[Vec2], i: usize, target_est: &Vec2, cfg: &SwarmConfig) -> Vec2 {
    let mut u = (target_est - xs[i]) * cfg.gamma2;
    for j in proximity_neighbors(xs, i, cfg.mu) {
        let xij = xs[i] - xs[j];
        u += xij * (cfg.gamma1 * (cfg.mu * cfg.mu - xij.norm_squared()));
    }
    u
}

/// Per-vessel estimates of the target position.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorState {
    pub estimates: Vec<Vec2>,
}

impl EstimatorState {
    /// Each vessel starts from its own position as its best prior.
    pub fn from_positions(xs: &[Vec2]) -> Self {
        Self {
            estimates: xs.to_vec(),
        }
    }

    fn derivative(&self, x_o: &Vec2, cfg: &SwarmConfig) -> Vec<Vec2> {
        self.estimates
            .iter()
            .enumerate()
            .map(|(i, yi)| {
                let mut d = Vec2::zeros();
                for j in cfg.comm_graph.neighbors(i) {
                    d += self.estimates[j] - yi;
                }
                if cfg.leaders.contains(&i) {
                    d += x_o - yi;
                }
                d * cfg.gamma3
            })
            .collect()
    }
}

/// Advance the linear consensus estimator by one RK4 step of length `dt`:
/// leaders blend neighbor consensus with the measured target, followers
/// run consensus only.
pub fn estimator_step(
    est: &EstimatorState,
    x_o: &Vec2,
    cfg: &SwarmConfig,
    dt: f64,
) -> EstimatorState {
    debug_assert!(dt > 0.0);
    let advance = |base: &EstimatorState, dir: &[Vec2], h: f64| EstimatorState {
        estimates: base
            .estimates
            .iter()
            .zip(dir)
            .map(|(y, d)| y + d * h)
            .collect(),
    };
    let k1 = est.derivative(x_o, cfg);
    let k2 = advance(est, &k1, dt / 2.0).derivative(x_o, cfg);
    let k3 = advance(est, &k2, dt / 2.0).derivative(x_o, cfg);
    let k4 = advance(est, &k3, dt).derivative(x_o, cfg);
    EstimatorState {
        estimates: est
            .estimates
            .iter()
            .enumerate()
            .map(|(i, y)| y + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
            .collect(),
    }
}

/// Indices `j != i` whose wrapped angular separation from vessel `i` is
/// strictly less than `2π/n`.
pub fn angular_neighbors(thetas: &[f64], i: usize, n: usize) -> Vec<usize> {
    let sector = TAU / n as f64;
    (0..thetas.len())
        .filter(|&j| j != i && wrapped_diff(thetas[i], thetas[j]).abs() < sector)
        .collect()
}

/// Equally-surrounding command pair for vessel `i`:
///
/// * radial speed `eta = beta1 (rho_o - rho_i)`,
/// * angular speed `omega = beta2 * sum_{j in Theta_i} (2π/N - |θ_ij|) sign(θ_ij)`.
///
/// Coincident angles (`θ_ij = 0`) are resolved by a deterministic index
/// tie-break (`i < j` pushes positive) so coincident vessels repel in
/// opposite directions. Fails when the vessel is within [`RHO_MIN`] of the
/// target.
pub fn equal_surround_control(
    i: usize,
    polar: &PolarState,
    thetas: &[f64],
    cfg: &SwarmConfig,
) -> Result<(f64, f64), ProtocolError> {
    if polar.rho <= RHO_MIN {
        return Err(ProtocolError::DegenerateRadius);
    }
    let eta = cfg.beta1 * (cfg.rho_o - polar.rho);
    let sector = TAU / cfg.n as f64;
    let mut omega = 0.0;
    for j in angular_neighbors(thetas, i, cfg.n) {
        let tij = wrapped_diff(thetas[i], thetas[j]);
        let sign = if tij > 0.0 {
            1.0
        } else if tij < 0.0 {
            -1.0
        } else if i < j {
            1.0
        } else {
            -1.0
        };
        omega += cfg.beta2 * (sector - tij.abs()) * sign;
    }
    Ok((eta, omega))
}

/// Aggregate surrounding potential `V = V1 + V2` where
///
/// * `V1 = (gamma1/4) * sum over ordered pairs of (||x_ij||^2 - mu^2)^2`
///   inside the proximity radius (0 at and beyond `mu`, continuously),
/// * `V2 = gamma2 * sum_i ||target - x_i||^2`.
pub fn lyapunov_v(xs: &[Vec2], x_o: &Vec2, cfg: &SwarmConfig) -> f64 {
    let mu2 = cfg.mu * cfg.mu;
    let mut v1 = 0.0;
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            if i == j {
                continue;
            }
            let d2 = (xs[i] - xs[j]).norm_squared();
            if d2 < mu2 {
                v1 += (d2 - mu2).powi(2);
            }
        }
    }
    let v2: f64 = xs.iter().map(|x| (x_o - x).norm_squared()).sum();
    cfg.gamma1 / 4.0 * v1 + cfg.gamma2 * v2
}

/// Angular-spacing potential `P = sum over ordered pairs of P_o(θ_ij)`
/// with `P_o = (beta2/2)(|θ_ij| - 2π/N)^2` inside the `2π/N` sector and 0
/// outside (continuous at the boundary).
pub fn lyapunov_p(thetas: &[f64], cfg: &SwarmConfig) -> f64 {
    let sector = TAU / cfg.n as f64;
    let mut p = 0.0;
    for i in 0..thetas.len() {
        for j in 0..thetas.len() {
            if i == j {
                continue;
            }
            let a = wrapped_diff(thetas[i], thetas[j]).abs();
            if a < sector {
                p += cfg.beta2 / 2.0 * (a - sector).powi(2);
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn test_cfg(n: usize) -> SwarmConfig {
        SwarmConfig {
            n,
            mu: 2.0,
            gamma1: 1.0,
            gamma2: 1.0,
            gamma3: 1.0,
            beta1: 0.13,
            beta2: 0.06,
            rho_o: 10.0,
            comm_graph: CommGraph::line(n),
            leaders: BTreeSet::from([0]),
        }
    }

    #[test]
    fn proximity_strict_boundary() {
        let xs = [v(0.0, 0.0), v(1.0, 0.0), v(2.0, 0.0), v(5.0, 0.0)];
        assert_eq!(proximity_neighbors(&xs, 0, 2.0), vec![1]);
        // exactly mu away -> excluded
        assert_eq!(proximity_neighbors(&xs, 0, 1.0), Vec::<usize>::new());
        // everything far away
        assert_eq!(proximity_neighbors(&xs, 3, 2.0), Vec::<usize>::new());
    }

    #[test]
    fn surrounding_control_pure_attraction() {
        let cfg = test_cfg(3);
        let xs = [v(0.0, 0.0), v(10.0, 0.0), v(0.0, 10.0)];
        let u = surrounding_control(&xs, 0, &v(1.0, 0.0), &cfg);
        assert_abs_diff_eq!(u.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.y, 0.0, epsilon = 1e-15);
        // at the target with no neighbors: equilibrium
        let u0 = surrounding_control(&xs, 0, &v(0.0, 0.0), &cfg);
        assert_eq!(u0, Vec2::zeros());
    }

    #[test]
    fn surrounding_control_repulsion_term() {
        let mut cfg = test_cfg(3);
        cfg.gamma2 = 0.0; // isolate the repulsion term
        let xs = [v(0.0, 0.0), v(1.0, 0.0), v(100.0, 100.0)];
        let u = surrounding_control(&xs, 0, &v(0.0, 0.0), &cfg);
        // (mu^2 - 1) * (x_0 - x_1) = 3 * (-1, 0)
        assert_abs_diff_eq!(u.x, -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn estimator_fixed_point_and_initial_rates() {
        let mut cfg = test_cfg(3);
        cfg.comm_graph = CommGraph::line(3);
        let x_o = v(1.0, 0.0);
        let fixed = EstimatorState {
            estimates: vec![x_o; 3],
        };
        let next = estimator_step(&fixed, &x_o, &cfg, 0.2);
        for y in &next.estimates {
            assert_abs_diff_eq!((y - x_o).norm(), 0.0, epsilon = 1e-15);
        }

        // two-vessel chain: leader sees the innovation, follower is idle
        // while the estimates agree
        let mut cfg2 = cfg.clone();
        cfg2.n = 2;
        cfg2.comm_graph = CommGraph::line(2);
        let est = EstimatorState {
            estimates: vec![v(0.0, 0.0), v(0.0, 0.0)],
        };
        let d = est.derivative(&x_o, &cfg2);
        assert_abs_diff_eq!(d[0].x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[0].y, 0.0, epsilon = 1e-15);
        assert_eq!(d[1], Vec2::zeros());
    }

    #[test]
    fn angular_neighbors_equilibrium_is_empty() {
        // 0, 120, 240 degrees: separations exactly 2π/3, strictly excluded
        let thetas = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
        for i in 0..3 {
            assert!(angular_neighbors(&thetas, i, 3).is_empty());
        }
        // four vessels at 90 degrees
        let t4: Vec<f64> = (0..4).map(|i| i as f64 * FRAC_PI_2).collect();
        for i in 0..4 {
            assert!(angular_neighbors(&t4, i, 4).is_empty());
        }
    }

    #[test]
    fn angular_neighbors_picks_close_vessel() {
        let thetas = [0.0, 30f64.to_radians(), 200f64.to_radians()];
        assert_eq!(angular_neighbors(&thetas, 0, 3), vec![1]);
    }

    #[test]
    fn equal_surround_examples() {
        let cfg = test_cfg(3);
        // on the circle with no angular neighbors: equilibrium
        let polar = PolarState {
            rho: 10.0,
            theta: 0.0,
        };
        let thetas = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
        let (eta, omega) = equal_surround_control(0, &polar, &thetas, &cfg).unwrap();
        assert_eq!(eta, 0.0);
        assert_eq!(omega, 0.0);

        // radial error
        let polar12 = PolarState {
            rho: 12.0,
            theta: 0.0,
        };
        let (eta, _) = equal_surround_control(0, &polar12, &thetas, &cfg).unwrap();
        assert_abs_diff_eq!(eta, -0.26, epsilon = 1e-12);

        // one angular neighbor 30 degrees behind
        let th = [30f64.to_radians(), 0.0, PI];
        let (_, omega) = equal_surround_control(0, &polar, &th, &cfg).unwrap();
        assert_abs_diff_eq!(omega, 0.06 * FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn equal_surround_tie_break_and_degenerate() {
        let cfg = test_cfg(3);
        let polar = PolarState {
            rho: 10.0,
            theta: 0.0,
        };
        let coincident = [0.0, 0.0, PI];
        let (_, w0) = equal_surround_control(0, &polar, &coincident, &cfg).unwrap();
        let (_, w1) = equal_surround_control(1, &polar, &coincident, &cfg).unwrap();
        assert!(w0 > 0.0 && w1 < 0.0);
        assert_abs_diff_eq!(w0, -w1, epsilon = 1e-15);

        let near = PolarState {
            rho: 0.05,
            theta: 0.0,
        };
        assert_eq!(
            equal_surround_control(0, &near, &coincident, &cfg).unwrap_err(),
            ProtocolError::DegenerateRadius
        );
    }

    #[test]
    fn lyapunov_v_cases() {
        let mut cfg = test_cfg(3);
        cfg.mu = 2.0;
        cfg.gamma1 = 4.0;
        cfg.gamma2 = 1.0;
        // spread out and on target: V = 0
        let xs = [v(0.0, 0.0), v(5.0, 0.0), v(0.0, 5.0)];
        let on_target: Vec<Vec2> = vec![v(0.0, 0.0); 1];
        assert_eq!(lyapunov_v(&on_target, &v(0.0, 0.0), &cfg), 0.0);
        assert!(lyapunov_v(&xs, &v(0.0, 0.0), &cfg) > 0.0);

        // two vessels at exactly mu: repulsion term contributes 0
        let at_mu = [v(0.0, 0.0), v(2.0, 0.0)];
        let v_at_mu = lyapunov_v(&at_mu, &v(0.0, 0.0), &cfg);
        assert_abs_diff_eq!(v_at_mu, cfg.gamma2 * (0.0 + 4.0), epsilon = 1e-12);

        // two vessels at distance 1, gamma2 negligible:
        // (gamma1/4) * 2 * (1 - 4)^2 = 18
        let mut cfg2 = cfg.clone();
        cfg2.gamma2 = 0.0;
        let close = [v(0.0, 0.0), v(1.0, 0.0)];
        assert_abs_diff_eq!(lyapunov_v(&close, &v(0.0, 0.0), &cfg2), 18.0, epsilon = 1e-9);
    }

    #[test]
    fn lyapunov_p_cases() {
        let cfg = test_cfg(3);
        let equal = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
        assert_eq!(lyapunov_p(&equal, &cfg), 0.0);

        // |θ_ij| exactly at the sector boundary contributes 0
        let boundary = [0.0, TAU / 3.0, TAU / 3.0 * 2.0];
        assert_eq!(lyapunov_p(&boundary, &cfg), 0.0);

        // brute-force cross-check for an uneven configuration
        let thetas = [0.0, FRAC_PI_3, PI];
        let sector = TAU / 3.0;
        let mut expected = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let a = wrapped_diff(thetas[i], thetas[j]).abs();
                    if a < sector {
                        expected += 0.06 / 2.0 * (a - sector).powi(2);
                    }
                }
            }
        }
        // only the (0,1) pair is inside the sector: 2 * (β2/2) (π/3)^2
        assert_abs_diff_eq!(expected, 0.06 * FRAC_PI_3 * FRAC_PI_3, epsilon = 1e-12);
        assert_abs_diff_eq!(lyapunov_p(&thetas, &cfg), expected, epsilon = 1e-15);
    }

    #[test]
    fn config_validation() {
        let cfg = test_cfg(3);
        assert!(cfg.validate(false).is_ok());
        assert!(cfg.validate(true).is_ok());

        let mut bad = cfg.clone();
        bad.gamma1 = 0.0;
        assert!(bad.validate(false).is_err());

        let mut two = cfg.clone();
        two.n = 2;
        assert!(two.validate(false).is_err());

        let mut no_leader = cfg.clone();
        no_leader.leaders.clear();
        assert!(no_leader.validate(false).is_ok());
        assert!(no_leader.validate(true).is_err());

        let mut disconnected = cfg.clone();
        disconnected.comm_graph = CommGraph::new(3);
        assert!(disconnected.validate(true).is_err());
        assert!(disconnected.validate(false).is_ok());
    }

    #[test]
    fn graph_helpers() {
        let g = CommGraph::line(4);
        assert_eq!(g.neighbors(0), vec![1]);
        assert_eq!(g.neighbors(1), vec![0, 2]);
        assert!(g.is_connected());
        assert_eq!(g.degree(2), 2);
        let mut h = CommGraph::new(4);
        h.add_edge(0, 1);
        h.add_edge(2, 3);
        assert!(!h.is_connected());
        assert_eq!(CommGraph::complete(4).degree(1), 3);
    }
}
