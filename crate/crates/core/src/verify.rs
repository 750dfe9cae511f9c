//! Numerical verification suites with independent oracles.
//!
//! Each suite cross-checks one part of the implementation against a
//! different computational route: simplex-grid minimization for the hull
//! distance, central finite differences for the control/potential gradient
//! identity, analytic exponentials and grounded-Laplacian eigenvalues for
//! the decay rates, and repeated runs for determinism. The oracles here
//! deliberately avoid the code paths they check.

use crate::conversion::ReferenceSignal;
use crate::dynamics::{saturate, step, ActuatorCommand, DynamicsParams, VesselState};
use crate::engine::{ideal_mode_run, run, Trace};
use crate::fit;
use crate::geometry::hull_distance;
use crate::protocols::{
    estimator_step, lyapunov_v, surrounding_control, CommGraph, EstimatorState, SwarmConfig,
};
use crate::regulation::{
    backstepping_tau1, backstepping_tau2, error_subsystem_monitor, pid_tau1, pid_tau2,
    ErrorCoordinates, RegGains, RegulatorState,
};
use crate::scenario::{
    identified_gains, identified_params, preset, ControlMode, RegulatorLaw, Scenario, VesselSetup,
};
use crate::{trace, Vec2};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Outcome of one verification check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn bounded(name: &str, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            passed: measured.is_finite() && measured <= tolerance,
            detail: detail.into(),
        }
    }

    fn boolean(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            measured: if ok { 1.0 } else { 0.0 },
            tolerance: 0.5,
            passed: ok,
            detail: detail.into(),
        }
    }
}

/// All checks of one named suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn available_suites() -> &'static [&'static str] {
    &[
        "geometry",
        "gradient",
        "lyapunov",
        "centroid",
        "regulation",
        "estimator",
        "determinism",
    ]
}

/// Run a named suite (or every suite for `"all"`). `None` for unknown
/// names.
pub fn run_suite(name: &str) -> Option<Vec<SuiteReport>> {
    match name {
        "geometry" => Some(vec![geometry_suite()]),
        "gradient" => Some(vec![gradient_suite()]),
        "lyapunov" => Some(vec![lyapunov_suite()]),
        "centroid" => Some(vec![centroid_suite()]),
        "regulation" => Some(vec![regulation_suite()]),
        "estimator" => Some(vec![estimator_suite()]),
        "determinism" => Some(vec![determinism_suite()]),
        "all" => Some(
            available_suites()
                .iter()
                .flat_map(|s| run_suite(s).unwrap())
                .collect(),
        ),
        _ => None,
    }
}

// ---------------------------------------------------------------------
// Simplex-grid hull-distance oracle
// ---------------------------------------------------------------------

fn eval_combination(target: &Vec2, pts: &[Vec2], lambda: &[f64]) -> f64 {
    let mut p = Vec2::zeros();
    for (x, l) in pts.iter().zip(lambda) {
        p += x * *l;
    }
    (target - p).norm()
}

fn compositions(n: usize, total: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(slot: usize, left: usize, buf: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if slot == buf.len() - 1 {
            buf[slot] = left;
            visit(buf);
            return;
        }
        for v in 0..=left {
            buf[slot] = v;
            rec(slot + 1, left - v, buf, visit);
        }
    }
    let mut buf = vec![0usize; n];
    rec(0, total, &mut buf, &mut visit);
}

/// Brute-force distance from `target` to the convex hull of `pts`:
/// grid-search the convex-combination weights on a simplex mesh, then
/// refine the best weight vector by pairwise weight transfers with a
/// shrinking step. Independent of the geometric hull construction.
pub fn simplex_grid_distance(target: &Vec2, pts: &[Vec2]) -> f64 {
    let n = pts.len();
    if n == 1 {
        return (target - pts[0]).norm();
    }
    const GRID: usize = 8;
    let mut best = vec![0.0; n];
    let mut best_d = f64::INFINITY;
    compositions(n, GRID, |c| {
        let lambda: Vec<f64> = c.iter().map(|&v| v as f64 / GRID as f64).collect();
        let d = eval_combination(target, pts, &lambda);
        if d < best_d {
            best_d = d;
            best = lambda;
        }
    });

    let mut step = 1.0 / GRID as f64;
    while step > 1e-13 {
        loop {
            let mut improved = false;
            for from in 0..n {
                if best[from] < step {
                    continue;
                }
                for to in 0..n {
                    if to == from {
                        continue;
                    }
                    let mut cand = best.clone();
                    cand[from] -= step;
                    cand[to] += step;
                    let d = eval_combination(target, pts, &cand);
                    if d < best_d {
                        best_d = d;
                        best = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    best_d
}

/// Containment verdict of the oracle: refined distance at rounding scale.
pub fn simplex_grid_contains(target: &Vec2, pts: &[Vec2]) -> bool {
    simplex_grid_distance(target, pts) <= 1e-9
}

fn geometry_suite() -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e0);
    let mut max_dist_err: f64 = 0.0;
    let mut verdict_mismatches = 0usize;
    let mut membership_violation: f64 = 0.0;
    let mut contained = 0usize;
    for _ in 0..200 {
        let n = rng.random_range(1..=6usize);
        let pts: Vec<Vec2> = (0..n)
            .map(|_| Vec2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
            .collect();
        let target = loop {
            let t = Vec2::new(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0));
            // keep clearly away from the boundary so both routes agree on
            // the verdict
            let d = hull_distance(&t, &pts);
            if d == 0.0 || d > 1e-5 {
                break t;
            }
        };
        let ours = hull_distance(&target, &pts);
        let oracle = simplex_grid_distance(&target, &pts);
        max_dist_err = max_dist_err.max((ours - oracle).abs());
        let ours_inside = ours == 0.0;
        let oracle_inside = simplex_grid_contains(&target, &pts);
        if ours_inside != oracle_inside {
            verdict_mismatches += 1;
        }
        if ours_inside {
            contained += 1;
        }
        // every input point is a convex combination of the hull vertices
        let hull = crate::geometry::convex_hull(&pts);
        for p in &pts {
            membership_violation = membership_violation.max(simplex_grid_distance(p, &hull));
        }
    }
    SuiteReport {
        suite: "geometry".into(),
        checks: vec![
            CheckResult::bounded(
                "hull-distance-vs-simplex-oracle",
                max_dist_err,
                1e-3,
                "max |hull_distance - simplex grid minimum| over 200 random instances (N <= 6)",
            ),
            CheckResult::bounded(
                "containment-verdict-agreement",
                verdict_mismatches as f64,
                0.0,
                format!(
                    "verdict mismatches over 200 instances ({contained} contained cases exercised)"
                ),
            ),
            CheckResult::bounded(
                "inputs-inside-own-hull",
                membership_violation,
                1e-9,
                "max oracle distance from an input point to its own hull's vertex set",
            ),
        ],
    }
}

// ---------------------------------------------------------------------
// Gradient identity: u_i = -1/2 dV/dx_i
// ---------------------------------------------------------------------

fn gradient_suite() -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9aad);
    let h = 1e-5;
    let mut max_rel_err: f64 = 0.0;
    let mut configs = 0usize;
    while configs < 100 {
        let n = rng.random_range(2..=6usize);
        let mu = 2.0;
        let cfg = SwarmConfig {
            n: n.max(3),
            mu,
            gamma1: rng.random_range(0.2..1.5),
            gamma2: rng.random_range(0.2..1.5),
            gamma3: 1.0,
            beta1: 0.1,
            beta2: 0.1,
            rho_o: 10.0,
            comm_graph: CommGraph::complete(n.max(3)),
            leaders: BTreeSet::from([0]),
        };
        let xs: Vec<Vec2> = (0..n)
            .map(|_| Vec2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
            .collect();
        let x_o = Vec2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        // stay away from the nonsmooth proximity boundary
        let near_boundary = (0..n).any(|i| {
            (0..n).any(|j| j != i && ((xs[i] - xs[j]).norm() - mu).abs() < 1e-2)
        });
        if near_boundary {
            continue;
        }
        configs += 1;
        for i in 0..n {
            let u = surrounding_control(&xs, i, &x_o, &cfg);
            let mut grad = Vec2::zeros();
            for axis in 0..2 {
                let mut plus = xs.clone();
                let mut minus = xs.clone();
                plus[i][axis] += h;
                minus[i][axis] -= h;
                grad[axis] =
                    (lyapunov_v(&plus, &x_o, &cfg) - lyapunov_v(&minus, &x_o, &cfg)) / (2.0 * h);
            }
            let u_fd = -grad / 2.0;
            let rel = (u - u_fd).norm() / u_fd.norm().max(1e-6);
            max_rel_err = max_rel_err.max(rel);
        }
    }
    SuiteReport {
        suite: "gradient".into(),
        checks: vec![CheckResult::bounded(
            "control-equals-half-negative-gradient",
            max_rel_err,
            1e-5,
            "max relative error between the surrounding command and -1/2 of the central-difference \
             potential gradient, 100 random configurations away from the proximity boundary",
        )],
    }
}

// ---------------------------------------------------------------------
// Lyapunov descent and centroid law on kinematic runs
// ---------------------------------------------------------------------

fn random_ideal_scenario(mode: ControlMode, seed: u64, rng: &mut ChaCha8Rng) -> Scenario {
    let n = rng.random_range(3..=5usize);
    Scenario {
        name: format!("ideal-{seed}"),
        vessels: VesselSetup::Random {
            count: n,
            area: [-15.0, 15.0, -15.0, 15.0],
        },
        target: crate::scenario::TargetSpec::Static(Vec2::zeros()),
        mode,
        law: RegulatorLaw::Backstepping,
        ideal: true,
        swarm: SwarmConfig {
            n,
            mu: rng.random_range(4.0..8.0),
            gamma1: rng.random_range(0.001..0.01),
            gamma2: rng.random_range(0.1..0.5),
            gamma3: 1.0,
            beta1: rng.random_range(0.05..0.2),
            beta2: rng.random_range(0.02..0.1),
            rho_o: 10.0,
            comm_graph: CommGraph::complete(n),
            leaders: (0..n).collect(),
        },
        gains: crate::scenario::tuned_gains(),
        params: identified_params(),
        duration: 60.0,
        dt_phys: 0.02,
        dt_ctrl: 0.2,
        seed,
    }
}

fn max_monitor_increase(trace: &Trace, monitor: impl Fn(&crate::engine::TraceRecord) -> f64) -> f64 {
    let values: Vec<f64> = trace.records.iter().map(monitor).collect();
    let peak = values.iter().cloned().fold(0.0f64, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    values
        .windows(2)
        .map(|w| (w[1] - w[0]) / peak)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn lyapunov_suite() -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x17ab);
    let mut worst_v = f64::NEG_INFINITY;
    for k in 0..20 {
        let sc = random_ideal_scenario(ControlMode::Approach1Centralized, 100 + k, &mut rng);
        let trace = ideal_mode_run(&sc).expect("ideal run");
        worst_v = worst_v.max(max_monitor_increase(&trace, |r| r.lyapunov_v));
    }
    let mut worst_p = f64::NEG_INFINITY;
    for k in 0..20 {
        let sc = random_ideal_scenario(ControlMode::Approach2, 200 + k, &mut rng);
        let trace = ideal_mode_run(&sc).expect("ideal run");
        worst_p = worst_p.max(max_monitor_increase(&trace, |r| r.lyapunov_p));
    }
    SuiteReport {
        suite: "lyapunov".into(),
        checks: vec![
            CheckResult::bounded(
                "surrounding-potential-descent",
                worst_v,
                1e-6,
                "max per-tick increase of V relative to its peak, 20 random kinematic surrounding runs",
            ),
            CheckResult::bounded(
                "spacing-potential-descent",
                worst_p,
                1e-6,
                "max per-tick increase of P relative to its peak, 20 random kinematic equally-surrounding runs",
            ),
        ],
    }
}

fn centroid_suite() -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xcec0);
    let mut sc = random_ideal_scenario(ControlMode::Approach1Centralized, 77, &mut rng);
    sc.swarm.gamma2 = 0.5;
    sc.duration = 5.0 / sc.swarm.gamma2;
    let trace = ideal_mode_run(&sc).expect("ideal run");

    let target = |r: &crate::engine::TraceRecord| r.target;
    let centroid = |r: &crate::engine::TraceRecord| {
        r.vessels
            .iter()
            .fold(Vec2::zeros(), |acc, v| acc + v.state.position)
            / r.vessels.len() as f64
    };
    let d0 = (centroid(&trace.records[0]) - target(&trace.records[0])).norm();
    let mut max_rel: f64 = 0.0;
    for r in &trace.records {
        let expected = d0 * (-sc.swarm.gamma2 * r.t).exp();
        let actual = (centroid(r) - target(r)).norm();
        max_rel = max_rel.max((actual - expected).abs() / expected);
    }
    SuiteReport {
        suite: "centroid".into(),
        checks: vec![CheckResult::bounded(
            "centroid-exponential-decay",
            max_rel,
            0.01,
            format!(
                "max pointwise relative deviation of the centroid-target distance from \
                 d0*exp(-gamma2 t) over {} control ticks (5 time constants)",
                trace.records.len()
            ),
        )],
    }
}

// ---------------------------------------------------------------------
// Regulation decay rates (continuous-feedback closed loops)
// ---------------------------------------------------------------------

fn vessel(psi: f64, r: f64, w: f64) -> VesselState {
    VesselState {
        position: Vec2::zeros(),
        heading: psi,
        surge: w,
        sway: 0.0,
        yaw_rate: r,
    }
}

/// Closed-loop heading subsystem under the backstepping steering law with
/// the control evaluated continuously (inside every integrator stage).
/// Returns `(t, ErrorCoordinates)` samples.
fn simulate_heading_loop(
    g: &RegGains,
    p: &DynamicsParams,
    rf: &ReferenceSignal,
    psi0: f64,
    r0: f64,
    duration: f64,
    dt: f64,
) -> Vec<(f64, ErrorCoordinates)> {
    let f = |s: [f64; 2]| -> [f64; 2] {
        let tau2 = backstepping_tau2(&vessel(s[0], s[1], 0.0), rf, g, p);
        [s[1], p.k4 * s[1] + p.k5 * tau2]
    };
    let mut s = [psi0, r0];
    let steps = (duration / dt).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 * dt;
        out.push((t, ErrorCoordinates::new(&vessel(s[0], s[1], 0.0), rf, g)));
        let k1 = f(s);
        let k2 = f([s[0] + dt / 2.0 * k1[0], s[1] + dt / 2.0 * k1[1]]);
        let k3 = f([s[0] + dt / 2.0 * k2[0], s[1] + dt / 2.0 * k2[1]]);
        let k4 = f([s[0] + dt * k3[0], s[1] + dt * k3[1]]);
        s = [
            s[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            s[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
    }
    out
}

/// Closed-loop surge subsystem `(w, eta)` under the backstepping
/// propeller law, control evaluated continuously.
fn simulate_surge_loop(
    g: &RegGains,
    p: &DynamicsParams,
    rf: &ReferenceSignal,
    w0: f64,
    duration: f64,
    dt: f64,
) -> Vec<(f64, ErrorCoordinates)> {
    let f = |s: [f64; 2]| -> [f64; 2] {
        let rs = RegulatorState::with_eta(s[1]);
        // dt = 0: evaluate the law without advancing the discrete state
        let (tau1, _) = backstepping_tau1(&vessel(0.0, 0.0, s[0]), rf, &rs, g, p, 0.0);
        [p.k1 * s[0] + p.k3 * tau1, -g.kappa1 * (s[0] - rf.w_r)]
    };
    let mut s = [w0, 0.0];
    let steps = (duration / dt).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 * dt;
        out.push((t, ErrorCoordinates::new(&vessel(0.0, 0.0, s[0]), rf, g)));
        let k1 = f(s);
        let k2 = f([s[0] + dt / 2.0 * k1[0], s[1] + dt / 2.0 * k1[1]]);
        let k3 = f([s[0] + dt / 2.0 * k2[0], s[1] + dt / 2.0 * k2[1]]);
        let k4 = f([s[0] + dt * k3[0], s[1] + dt * k3[1]]);
        s = [
            s[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            s[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
    }
    out
}

fn regulation_suite() -> SuiteReport {
    let g = identified_gains();
    let p = identified_params();
    let mut rf = ReferenceSignal::constant(1.0, 0.5);
    rf.varpi = 1.5;

    // exact r_tilde decay over 10 s
    let dt = 0.01;
    let samples = simulate_heading_loop(&g, &p, &rf, 0.55, 0.005, 10.0, dt);
    let r0 = samples[0].1.r_tilde;
    let mut max_rel_dev: f64 = 0.0;
    for (t, ec) in &samples {
        let expected = r0 * (-g.kappa4 * t).exp();
        max_rel_dev = max_rel_dev.max((ec.r_tilde - expected).abs() / r0.abs());
    }

    // phi ODE residual by central differences
    let mut max_residual: f64 = 0.0;
    for win in samples.windows(3) {
        let dphi = (win[2].1.phi - win[0].1.phi) / (2.0 * dt);
        let rhs = -g.kappa3 * win[1].1.phi + win[1].1.r_tilde;
        max_residual = max_residual.max((dphi - rhs).abs());
    }

    // monitor rates on a long heading run (r_tilde dies, phi tail shows kappa3)
    let long = simulate_heading_loop(&g, &p, &rf, 0.55, 0.005, 80.0, 0.01);
    let report = error_subsystem_monitor(&long, &g).expect("enough samples");
    let r_rate_err = report
        .r_tilde
        .fitted_rate
        .map(|r| (r - g.kappa4).abs() / g.kappa4)
        .unwrap_or(f64::INFINITY);
    let phi_rate_err = report
        .phi
        .fitted_rate
        .map(|r| (r - g.kappa3).abs() / g.kappa3)
        .unwrap_or(f64::INFINITY);

    // surge pair envelope over many oscillation periods
    let surge = simulate_surge_loop(&g, &p, &rf, 0.5, 1200.0, 0.01);
    let surge_report = error_subsystem_monitor(&surge, &g).expect("enough samples");
    let expected_rate = fit::dominant_rate_quadratic(g.kappa2, g.kappa1);
    let surge_rate_err = surge_report
        .surge
        .fitted_rate
        .map(|r| (r - expected_rate).abs() / expected_rate)
        .unwrap_or(f64::INFINITY);

    SuiteReport {
        suite: "regulation".into(),
        checks: vec![
            CheckResult::bounded(
                "r-tilde-exact-exponential",
                max_rel_dev,
                1e-4,
                "max |r_tilde(t) - r_tilde(0) exp(-kappa4 t)| / |r_tilde(0)| over 10 s of the \
                 closed heading loop (RK4, dt = 0.01)",
            ),
            CheckResult::bounded(
                "phi-ode-residual",
                max_residual,
                1e-6,
                "max residual of phi' = -kappa3 phi + r_tilde by central differences",
            ),
            CheckResult::bounded(
                "r-tilde-monitor-rate",
                r_rate_err,
                0.02,
                "relative error of the fitted r_tilde decay rate against kappa4",
            ),
            CheckResult::bounded(
                "phi-monitor-rate",
                phi_rate_err,
                0.02,
                "relative error of the fitted phi tail rate against kappa3",
            ),
            CheckResult::bounded(
                "surge-envelope-rate",
                surge_rate_err,
                0.02,
                "relative error of the fitted surge-pair envelope rate against the dominant root \
                 of s^2 + kappa2 s + kappa1",
            ),
        ],
    }
}

// ---------------------------------------------------------------------
// Estimator convergence rate vs grounded-Laplacian eigenvalue
// ---------------------------------------------------------------------

/// Smallest eigenvalue of the grounded Laplacian `L + diag(leader
/// indicators)`, computed by an eigendecomposition (independent of the
/// estimator integration).
pub fn grounded_laplacian_min_eigenvalue(graph: &CommGraph, leaders: &BTreeSet<usize>) -> f64 {
    let n = graph.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in graph.neighbors(i) {
            m[(i, i)] += 1.0;
            m[(i, j)] -= 1.0;
        }
        if leaders.contains(&i) {
            m[(i, i)] += 1.0;
        }
    }
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Measured decay rate of the worst estimator error on a given
/// configuration, fitted over the late window where the slowest mode
/// dominates.
pub fn estimator_decay_rate(cfg: &SwarmConfig, x_o: &Vec2, y0: &[Vec2], duration: f64) -> Option<f64> {
    let dt = 0.2;
    let steps = (duration / dt).round() as usize;
    let mut est = EstimatorState {
        estimates: y0.to_vec(),
    };
    let mut ts = Vec::new();
    let mut errs = Vec::new();
    for k in 0..=steps {
        let t = k as f64 * dt;
        let err = est
            .estimates
            .iter()
            .map(|y| (y - x_o).norm())
            .fold(0.0, f64::max);
        if t >= duration / 3.0 && t <= duration * 0.9 {
            ts.push(t);
            errs.push(err);
        }
        est = estimator_step(&est, x_o, cfg, dt);
    }
    fit::decay_rate(&ts, &errs, 1e-12)
}

fn estimator_suite() -> SuiteReport {
    let cfg = SwarmConfig {
        n: 3,
        mu: 5.0,
        gamma1: 0.1,
        gamma2: 0.1,
        gamma3: 1.0,
        beta1: 0.1,
        beta2: 0.1,
        rho_o: 10.0,
        comm_graph: CommGraph::line(3),
        leaders: BTreeSet::from([0]),
    };
    let x_o = Vec2::new(4.0, -2.0);
    let y0 = [Vec2::new(1.0, 5.0), Vec2::new(-3.0, 2.0), Vec2::new(6.0, 0.0)];
    let measured = estimator_decay_rate(&cfg, &x_o, &y0, 60.0).unwrap_or(f64::NAN);
    let expected = cfg.gamma3 * grounded_laplacian_min_eigenvalue(&cfg.comm_graph, &cfg.leaders);
    let rel = (measured - expected).abs() / expected;

    let mut disconnected = cfg.clone();
    disconnected.comm_graph = CommGraph::new(3);
    let mut leaderless = cfg.clone();
    leaderless.leaders.clear();

    SuiteReport {
        suite: "estimator".into(),
        checks: vec![
            CheckResult::bounded(
                "decay-rate-vs-grounded-laplacian",
                rel,
                0.05,
                format!(
                    "relative error of the fitted worst-estimate decay rate ({measured:.6}) \
                     against gamma3 * lambda_min ({expected:.6}), 3-vessel line graph, one leader"
                ),
            ),
            CheckResult::boolean(
                "rejects-disconnected-graph",
                disconnected.validate(true).is_err(),
                "decentralized validation must reject a disconnected communication graph",
            ),
            CheckResult::boolean(
                "rejects-empty-leader-set",
                leaderless.validate(true).is_err(),
                "decentralized validation must reject an empty leader set",
            ),
        ],
    }
}

// ---------------------------------------------------------------------
// Determinism
// ---------------------------------------------------------------------

fn determinism_suite() -> SuiteReport {
    let mut checks = Vec::new();
    for name in ["surround-approach1", "surround-tuned", "surround-sec6"] {
        let mut sc = preset(name).expect("preset");
        sc.duration = 25.0;
        let (a, _) = run(&sc).expect("run");
        let (b, _) = run(&sc).expect("run");
        let identical = trace::to_csv(&a) == trace::to_csv(&b) && a == b;
        checks.push(CheckResult::boolean(
            &format!("identical-trace-{name}"),
            identical,
            "two 25 s runs with the same seed must serialize byte-identically",
        ));
    }
    SuiteReport {
        suite: "determinism".into(),
        checks,
    }
}

// ---------------------------------------------------------------------
// Step-response metrics (speed / heading steps on a single vessel)
// ---------------------------------------------------------------------

/// Metrics of a reference-step experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepResponse {
    /// Peak overshoot above the speed setpoint, as a fraction of the step.
    pub speed_overshoot: f64,
    /// Earliest time after which the surge stays inside the +-0.5% band.
    pub speed_settling: Option<f64>,
    /// Peak overshoot beyond the heading setpoint, as a fraction of the step.
    pub heading_overshoot: f64,
    /// Earliest time after which the heading stays inside the +-0.5% band.
    pub heading_settling: Option<f64>,
}

/// Single-vessel reference-step experiment: constant surge/heading
/// setpoints applied from rest through the discrete control stack
/// (zero-order hold at `dt_ctrl`, saturation, anti-windup).
pub struct StepExperiment {
    pub law: RegulatorLaw,
    pub gains: RegGains,
    pub params: DynamicsParams,
    /// Surge setpoint (m/s).
    pub w_set: f64,
    /// Heading setpoint (rad).
    pub psi_set: f64,
    pub duration: f64,
    pub dt_phys: f64,
    pub dt_ctrl: f64,
}

impl StepExperiment {
    /// Simulate the experiment and extract overshoot/settling figures.
    /// Settling bands are +-0.5% of the respective setpoints, held
    /// through the end of the horizon.
    pub fn run(&self) -> StepResponse {
        let rf = ReferenceSignal::constant(self.w_set, self.psi_set);
        let mut state = VesselState::at_rest(Vec2::zeros(), 0.0);
        let mut reg = RegulatorState::new();
        let substeps = (self.dt_ctrl / self.dt_phys).round() as usize;
        let ticks = (self.duration / self.dt_ctrl).round() as usize;

        let mut times = Vec::with_capacity(ticks + 1);
        let mut speeds = Vec::with_capacity(ticks + 1);
        let mut headings = Vec::with_capacity(ticks + 1);
        for k in 0..=ticks {
            times.push(k as f64 * self.dt_ctrl);
            speeds.push(state.surge);
            headings.push(state.heading);
            if k == ticks {
                break;
            }
            let (tau1, reg_next) = match self.law {
                RegulatorLaw::Backstepping => {
                    backstepping_tau1(&state, &rf, &reg, &self.gains, &self.params, self.dt_ctrl)
                }
                RegulatorLaw::Pid => {
                    pid_tau1(&state, &rf, &reg, &self.gains, &self.params, self.dt_ctrl)
                }
            };
            let tau2 = match self.law {
                RegulatorLaw::Backstepping => {
                    backstepping_tau2(&state, &rf, &self.gains, &self.params)
                }
                RegulatorLaw::Pid => pid_tau2(&state, &rf, &self.gains, &self.params),
            };
            let (command, sat) = saturate(&ActuatorCommand::new(tau1, tau2), &self.params);
            let commit = !sat.tau1 || {
                let after = crate::regulation::evaluate_tau1(
                    self.law, &state, &rf, &reg_next, &self.gains, &self.params,
                );
                crate::regulation::windup_commit_allowed(tau1, self.params.tau1_range, after)
            };
            if commit {
                reg = reg_next;
            }
            for _ in 0..substeps {
                state = step(&state, &command, &self.params, self.dt_phys)
                    .expect("step response blow-up");
            }
        }

        let overshoot = |vals: &[f64], set: f64| -> f64 {
            vals.iter()
                .map(|v| (v - set) / set)
                .fold(f64::NEG_INFINITY, f64::max)
                .max(0.0)
        };
        let settling = |vals: &[f64], set: f64| -> Option<f64> {
            let band = 0.005 * set.abs();
            let mut settled_from: Option<f64> = None;
            for (t, v) in times.iter().zip(vals) {
                if (v - set).abs() <= band {
                    settled_from.get_or_insert(*t);
                } else {
                    settled_from = None;
                }
            }
            settled_from
        };
        StepResponse {
            speed_overshoot: overshoot(&speeds, self.w_set),
            speed_settling: settling(&speeds, self.w_set),
            heading_overshoot: overshoot(&headings, self.psi_set),
            heading_settling: settling(&headings, self.psi_set),
        }
    }
}
