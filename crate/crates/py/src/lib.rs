//! Python bindings: scenario loading and overrides, full/kinematic runs
//! with trace access, the hull-distance monitor, and the verification
//! suites.
//!
//! Build the extension with `cargo build -p usv-swarm-py --release` and
//! import the produced `libusv_swarm_py.so` as `usv_swarm_py` (see
//! `python/smoke_test.py`).

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use usv_swarm::engine;
use usv_swarm::scenario::{self, Scenario as CoreScenario};
use usv_swarm::trace;
use usv_swarm::verify;
use usv_swarm::Vec2;

/// A runnable scenario (bundled preset or parsed JSON).
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Scenario {
    inner: CoreScenario,
}

#[pymethods]
impl Scenario {
    /// Load a bundled preset by name.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        scenario::preset(name)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Parse a scenario from the documented JSON schema.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        scenario::parse_scenario(text)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Serialize into the documented JSON schema.
    fn to_json(&self) -> String {
        scenario::scenario_to_json(&self.inner)
    }

    /// Apply a `key=value` override (same keys as the CLI `--set` flag).
    fn set(&mut self, key: &str, value: &str) -> PyResult<()> {
        self.inner
            .apply_override(key, value)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn duration(&self) -> f64 {
        self.inner.duration
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn vessel_count(&self) -> usize {
        self.inner.swarm.n
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(name='{}', vessels={}, duration={}, seed={})",
            self.inner.name, self.inner.swarm.n, self.inner.duration, self.inner.seed
        )
    }
}

/// Recorded run with its outcome report.
#[pyclass]
struct RunResult {
    trace: engine::Trace,
    outcome: engine::OutcomeReport,
}

#[pymethods]
impl RunResult {
    #[getter]
    fn surrounded_at(&self) -> Option<f64> {
        self.outcome.surrounded_at
    }

    #[getter]
    fn equally_surrounded_at(&self) -> Option<f64> {
        self.outcome.equally_surrounded_at
    }

    #[getter]
    fn steady_hull_distance(&self) -> f64 {
        self.outcome.steady_state.hull_distance
    }

    #[getter]
    fn steady_max_rho_error(&self) -> f64 {
        self.outcome.steady_state.max_rho_error
    }

    #[getter]
    fn steady_max_gap_error_deg(&self) -> f64 {
        self.outcome.steady_state.max_gap_error_deg
    }

    /// Control-tick time base (s).
    fn times(&self) -> Vec<f64> {
        self.trace.times()
    }

    fn hull_distance(&self) -> Vec<f64> {
        self.trace.records.iter().map(|r| r.hull_distance).collect()
    }

    fn lyapunov_v(&self) -> Vec<f64> {
        self.trace.records.iter().map(|r| r.lyapunov_v).collect()
    }

    fn lyapunov_p(&self) -> Vec<f64> {
        self.trace.records.iter().map(|r| r.lyapunov_p).collect()
    }

    /// Target distance of one vessel over time.
    fn rho(&self, vessel: usize) -> PyResult<Vec<f64>> {
        self.check_vessel(vessel)?;
        Ok(self
            .trace
            .records
            .iter()
            .map(|r| r.vessels[vessel].rho)
            .collect())
    }

    /// Planar positions of one vessel over time.
    fn positions(&self, vessel: usize) -> PyResult<Vec<(f64, f64)>> {
        self.check_vessel(vessel)?;
        Ok(self
            .trace
            .records
            .iter()
            .map(|r| {
                let p = r.vessels[vessel].state.position;
                (p.x, p.y)
            })
            .collect())
    }

    /// Full trace in the documented CSV format.
    fn to_csv(&self) -> String {
        trace::to_csv(&self.trace)
    }

    fn write_csv(&self, path: &str) -> PyResult<()> {
        std::fs::write(path, trace::to_csv(&self.trace))
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Outcome report as JSON.
    fn outcome_json(&self) -> String {
        serde_json::to_string_pretty(&self.outcome).expect("outcome serializes")
    }

    fn __repr__(&self) -> String {
        format!(
            "RunResult(scenario='{}', ticks={}, surrounded_at={:?})",
            self.trace.scenario,
            self.trace.records.len(),
            self.outcome.surrounded_at
        )
    }
}

impl RunResult {
    fn check_vessel(&self, vessel: usize) -> PyResult<()> {
        if vessel >= self.trace.n {
            return Err(PyIndexError::new_err(format!(
                "vessel {vessel} out of range for {} vessels",
                self.trace.n
            )));
        }
        Ok(())
    }
}

/// Names and descriptions of the bundled presets.
#[pyfunction]
fn presets() -> Vec<(String, String)> {
    scenario::preset_catalog()
        .into_iter()
        .map(|(n, d)| (n.to_string(), d.to_string()))
        .collect()
}

/// Run a scenario (kinematic if its `ideal` flag is set) and return the
/// recorded trace with its outcome report.
#[pyfunction]
fn run(scenario: &Scenario) -> PyResult<RunResult> {
    engine::run(&scenario.inner)
        .map(|(trace, outcome)| RunResult { trace, outcome })
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Distance from a target point to the convex hull of a point set (zero
/// when the target is enclosed).
#[pyfunction]
fn hull_distance(target: (f64, f64), points: Vec<(f64, f64)>) -> PyResult<f64> {
    if points.is_empty() {
        return Err(PyValueError::new_err("point set is empty"));
    }
    let pts: Vec<Vec2> = points.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
    Ok(usv_swarm::geometry::hull_distance(
        &Vec2::new(target.0, target.1),
        &pts,
    ))
}

/// Run a verification suite and return its JSON report.
#[pyfunction]
fn verify_suite(name: &str) -> PyResult<String> {
    let reports = verify::run_suite(name).ok_or_else(|| {
        PyValueError::new_err(format!(
            "unknown suite '{name}'; available: {}, all",
            verify::available_suites().join(", ")
        ))
    })?;
    let passed = reports.iter().all(|r| r.passed());
    serde_json::to_string_pretty(&serde_json::json!({
        "suite": name,
        "passed": passed,
        "reports": reports,
    }))
    .map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn usv_swarm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scenario>()?;
    m.add_class::<RunResult>()?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(hull_distance, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    Ok(())
}
