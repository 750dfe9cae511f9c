//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line with the measured values (run with `-- --nocapture` to
//! see the lines for passing criteria).
//!
//! Criteria 1 and 2 replay the field experiment's gain set on the
//! identified model and are expected to fail: with exact model
//! cancellation the surge error pair has poles at `-kappa2/2 ± i sqrt(...)`
//! (a ~2000 s settling horizon for kappa2 = 0.001), and the ±20° nozzle on
//! the identified yaw channel caps the turn rate at
//! `k5 * 20° / |k4| ≈ 3.6 °/s`, far below the heading slew the maneuvers
//! demand. The tests assert the stated bounds anyway and report the
//! measured values; the remaining criteria pass.

use std::process::Command;
use std::time::Instant;
use usv_swarm::engine::run;
use usv_swarm::scenario::{identified_gains, identified_params, preset, RegulatorLaw};
use usv_swarm::verify::{self, StepExperiment, SuiteReport};

fn report(id: u32, label: &str, pass: bool, details: &str) -> bool {
    println!(
        "acceptance {id:02} ({label}): {} — {details}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn suite_details(rep: &SuiteReport) -> String {
    rep.checks
        .iter()
        .map(|c| {
            format!(
                "{}={:.3e} (tol {:.1e}{})",
                c.name,
                c.measured,
                c.tolerance,
                if c.passed { "" } else { ", VIOLATED" }
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn assert_suite(id: u32, label: &str, suite: &str) {
    let reports = verify::run_suite(suite).expect("suite exists");
    let pass = reports.iter().all(|r| r.passed());
    let details = reports
        .iter()
        .map(suite_details)
        .collect::<Vec<_>>()
        .join("; ");
    assert!(
        report(id, label, pass, &details),
        "criterion {id} failed: {details}"
    );
}

/// Criterion 1: equally-surrounding replica of the field experiment
/// (3 vessels seeded in a 40 m x 40 m area, static target, beta1 = 0.13,
/// beta2 = 0.06, rho_o = 10 m, backstepping with the experiment's kappa
/// gains and identified coefficients). Required: all radii within
/// 10 ± 0.2 m and all adjacent phase gaps within 120° ± 5°, sustained 5 s,
/// within 200 s simulated, under 10 s wall clock.
#[test]
fn acceptance_01_sec6_equally_surrounding_replica() {
    let sc = preset("surround-sec6").expect("preset");
    assert_eq!(sc.duration, 200.0);
    let start = Instant::now();
    let outcome = run(&sc).map(|(_, o)| o);
    let wall = start.elapsed().as_secs_f64();

    let (achieved_at, steady) = match &outcome {
        Ok(o) => (o.equally_surrounded_at, format!("{:?}", o.steady_state)),
        Err(e) => (None, format!("aborted: {e}")),
    };
    let pass = wall <= 10.0 && achieved_at.is_some_and(|t| t <= 200.0);
    let details = format!(
        "equally_surrounded_at={} (required <= 200 s), wall={wall:.2} s (limit 10 s), steady state: {steady}",
        achieved_at.map_or("never".into(), |t| format!("{t:.1} s")),
    );
    assert!(
        report(1, "equally-surrounding replica, experiment gain set", pass, &details),
        "criterion 1 failed: {details}. The experiment's kappa2 = 0.001 leaves the surge error \
         pair (poles -0.0005 ± 0.141i after exact model cancellation) essentially undamped for \
         ~2000 s, and the ±20° nozzle caps the yaw rate at k5*20°/|k4| ≈ 3.6 °/s, below the \
         heading slew this maneuver requires — the closed loop cannot settle within 200 s on \
         the identified model."
    );
}

/// Criterion 2: speed and heading steps under the PI/PD laws with the
/// experiment's gains (w_r = 2 m/s, psi_r = 300° from rest). Required:
/// speed overshoot <= 5% and ±0.5%-band settling <= 15 s; heading
/// overshoot <= 3% and settling <= 20 s.
#[test]
fn acceptance_02_pid_step_response() {
    let r = StepExperiment {
        law: RegulatorLaw::Pid,
        gains: identified_gains(),
        params: identified_params(),
        w_set: 2.0,
        psi_set: 300f64.to_radians(),
        duration: 600.0,
        dt_phys: 0.01,
        dt_ctrl: 0.2,
    }
    .run();
    let speed_ok = r.speed_overshoot <= 0.05 && r.speed_settling.is_some_and(|t| t <= 15.0);
    let heading_ok = r.heading_overshoot <= 0.03 && r.heading_settling.is_some_and(|t| t <= 20.0);
    let details = format!(
        "speed overshoot={:.1}% (limit 5%), speed settling={} (limit 15 s), heading overshoot={:.1}% \
         (limit 3%), heading settling={} (limit 20 s) over a 600 s horizon",
        100.0 * r.speed_overshoot,
        r.speed_settling.map_or("never".into(), |t| format!("{t:.1} s")),
        100.0 * r.heading_overshoot,
        r.heading_settling.map_or("never".into(), |t| format!("{t:.1} s")),
    );
    assert!(
        report(2, "PI/PD step response, experiment gain set", speed_ok && heading_ok, &details),
        "criterion 2 failed: {details}. With kappa1 = 0.02, kappa2 = 0.001 the speed loop is a \
         near-undamped oscillator (poles -0.0005 ± 0.141i), and the 300° turn cannot finish \
         inside 20 s at the nozzle-limited 3.6 °/s yaw rate."
    );
}

/// Criterion 3: the surrounding command equals -1/2 of the
/// finite-difference potential gradient on 100 random configurations.
#[test]
fn acceptance_03_gradient_oracle() {
    assert_suite(3, "control = -1/2 potential gradient", "gradient");
}

/// Criterion 4: V and P never increase along kinematic runs (20 random
/// scenarios each, 1e-6 of the peak per tick).
#[test]
fn acceptance_04_lyapunov_descent() {
    assert_suite(4, "Lyapunov descent in kinematic mode", "lyapunov");
}

/// Criterion 5: kinematic centroid-target distance matches
/// `d0 * exp(-gamma2 t)` within 1% over five time constants.
#[test]
fn acceptance_05_centroid_law() {
    assert_suite(5, "centroid exponential decay", "centroid");
}

/// Criterion 6: closed-loop `r_tilde` matches its exact exponential within
/// 1e-4 relative over 10 s, and the surge-pair envelope rate matches the
/// roots of `s^2 + kappa2 s + kappa1` within 2%.
#[test]
fn acceptance_06_error_subsystem_decay() {
    assert_suite(6, "exact error-subsystem decay rates", "regulation");
}

/// Criterion 7: estimator decay rate matches `gamma3 * lambda_min` of the
/// grounded Laplacian within 5% on a 3-vessel line graph with one leader;
/// disconnected graphs and empty leader sets are rejected.
#[test]
fn acceptance_07_estimator_rate_and_validation() {
    assert_suite(7, "estimator rate vs grounded Laplacian", "estimator");
}

/// Criterion 8: hull distance agrees with the simplex-grid oracle within
/// 1e-3 on 200 random instances, with exactly matching containment
/// verdicts.
#[test]
fn acceptance_08_geometry_oracle_equivalence() {
    assert_suite(8, "hull distance vs simplex-grid oracle", "geometry");
}

/// Criterion 9: the Cartesian surrounding scenarios (centralized and
/// decentralized) drive the hull distance below 0.1 m, sustained, for 20
/// random seeds each.
#[test]
fn acceptance_09_surrounding_20_seeds() {
    let mut worst: f64 = 0.0;
    let mut failures: Vec<String> = Vec::new();
    for name in ["surround-approach1", "surround-approach1-decentralized"] {
        for seed in 1..=20u64 {
            let mut sc = preset(name).expect("preset");
            sc.seed = seed;
            match run(&sc) {
                Ok((_, outcome)) => match outcome.surrounded_at {
                    Some(t) => worst = worst.max(t),
                    None => failures.push(format!("{name}/seed {seed}: never surrounded")),
                },
                Err(e) => failures.push(format!("{name}/seed {seed}: {e}")),
            }
        }
    }
    let pass = failures.is_empty();
    let details = format!(
        "40 runs (2 modes x 20 seeds), worst surrounded_at={worst:.1} s{}",
        if pass {
            String::new()
        } else {
            format!(", failures: {failures:?}")
        }
    );
    assert!(
        report(9, "surrounding sustained for 20 seeds", pass, &details),
        "criterion 9 failed: {details}"
    );
}

/// Criterion 10: identical seed and preset produce byte-identical CSV
/// traces end to end through the CLI.
#[test]
fn acceptance_10_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut all_equal = true;
    let mut details = Vec::new();
    for preset_name in ["surround-approach1", "surround-sec6"] {
        let mut bytes = Vec::new();
        for sub in ["a", "b"] {
            let out = Command::new(env!("CARGO_BIN_EXE_usv-swarm"))
                .current_dir(dir.path())
                .args([
                    "run",
                    preset_name,
                    "--duration",
                    "50",
                    "--seed",
                    "7",
                    "--out",
                    &format!("{preset_name}-{sub}"),
                ])
                .output()
                .expect("spawn usv-swarm");
            assert!(
                out.status.success(),
                "run failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            bytes.push(
                std::fs::read(dir.path().join(format!("{preset_name}-{sub}/trace.csv"))).unwrap(),
            );
        }
        let equal = bytes[0] == bytes[1];
        all_equal &= equal;
        details.push(format!(
            "{preset_name}: {} bytes, identical={equal}",
            bytes[0].len()
        ));
    }
    let details = details.join("; ");
    assert!(
        report(10, "byte-identical traces for equal seeds", all_equal, &details),
        "criterion 10 failed: {details}"
    );
}
