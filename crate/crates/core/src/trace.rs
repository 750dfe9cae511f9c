//! Trace serialization: one CSV row per control tick with a fixed,
//! documented column order, preceded by a single metadata comment line.
//!
//! Layout:
//!
//! ```text
//! # usv-swarm-trace-v1 n=<N> dt_ctrl=<value> scenario=<name>
//! t,target_x,target_y,hull_dist,lyap_v,lyap_p,<per-vessel block 0>,...
//! <numeric rows>
//! ```
//!
//! For each vessel `i` the block is (in order):
//! `x_i, y_i, psi_i, w_i, v_i, r_i, tau1_i, tau2_i, sat1_i, sat2_i,
//! w_r_i, psi_r_i, v_r_i, dw_r_i, ddw_r_i, dpsi_r_i, ddpsi_r_i,
//! varpi_i, dvarpi_i, ddvarpi_i, e1_i, e2_i, eta_tilde_i, omega_tilde_i,
//! rho_i, theta_i, est_x_i, est_y_i, infeasible_i, degenerate_i`.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! finite `f64` exactly; flags are `0`/`1`. The column order is part of
//! the public contract and must not be reordered.

use crate::conversion::{ConversionFlags, PerturbationRecord, ReferenceSignal};
use crate::dynamics::{ActuatorCommand, SaturationFlags, VesselState};
use crate::engine::{Trace, TraceRecord, VesselRecord};
use crate::Vec2;
use thiserror::Error;

const MAGIC: &str = "# usv-swarm-trace-v1";
const VESSEL_COLUMNS: [&str; 30] = [
    "x", "y", "psi", "w", "v", "r", "tau1", "tau2", "sat1", "sat2", "w_r", "psi_r", "v_r",
    "dw_r", "ddw_r", "dpsi_r", "ddpsi_r", "varpi", "dvarpi", "ddvarpi", "e1", "e2", "eta_tilde",
    "omega_tilde", "rho", "theta", "est_x", "est_y", "infeasible", "degenerate",
];

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace file is missing the metadata line '{MAGIC} ...'")]
    MissingMetadata,
    #[error("malformed trace metadata: {0}")]
    BadMetadata(String),
    #[error("trace header does not match the documented column order")]
    BadHeader,
    #[error("row {row}: expected {expected} fields, found {found}")]
    FieldCount {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column}: {message}")]
    BadValue {
        row: usize,
        column: String,
        message: String,
    },
}

/// Format a float with 17 significant digits (exact `f64` round trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Header row for an `n`-vessel trace, in the documented order.
pub fn header(n: usize) -> String {
    let mut cols = vec![
        "t".to_string(),
        "target_x".to_string(),
        "target_y".to_string(),
        "hull_dist".to_string(),
        "lyap_v".to_string(),
        "lyap_p".to_string(),
    ];
    for i in 0..n {
        for c in VESSEL_COLUMNS {
            cols.push(format!("{c}_{i}"));
        }
    }
    cols.join(",")
}

/// Serialize a trace to CSV text (metadata line, header row, one row per
/// control tick). Byte-deterministic for equal traces.
pub fn to_csv(trace: &Trace) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{MAGIC} n={} dt_ctrl={} scenario={}\n",
        trace.n,
        fmt_f64(trace.dt_ctrl),
        trace.scenario
    ));
    out.push_str(&header(trace.n));
    out.push('\n');
    for r in &trace.records {
        let mut fields: Vec<String> = vec![
            fmt_f64(r.t),
            fmt_f64(r.target.x),
            fmt_f64(r.target.y),
            fmt_f64(r.hull_distance),
            fmt_f64(r.lyapunov_v),
            fmt_f64(r.lyapunov_p),
        ];
        for v in &r.vessels {
            fields.extend([
                fmt_f64(v.state.position.x),
                fmt_f64(v.state.position.y),
                fmt_f64(v.state.heading),
                fmt_f64(v.state.surge),
                fmt_f64(v.state.sway),
                fmt_f64(v.state.yaw_rate),
                fmt_f64(v.command.tau1),
                fmt_f64(v.command.tau2),
                fmt_flag(v.saturation.tau1).to_string(),
                fmt_flag(v.saturation.tau2).to_string(),
                fmt_f64(v.reference.w_r),
                fmt_f64(v.reference.psi_r),
                fmt_f64(v.reference.v_r),
                fmt_f64(v.reference.dw_r),
                fmt_f64(v.reference.ddw_r),
                fmt_f64(v.reference.dpsi_r),
                fmt_f64(v.reference.ddpsi_r),
                fmt_f64(v.reference.varpi),
                fmt_f64(v.reference.dvarpi),
                fmt_f64(v.reference.ddvarpi),
                fmt_f64(v.perturbation.e.x),
                fmt_f64(v.perturbation.e.y),
                fmt_f64(v.perturbation.eta_tilde_r),
                fmt_f64(v.perturbation.omega_tilde_r),
                fmt_f64(v.rho),
                fmt_f64(v.theta),
                fmt_f64(v.estimate.x),
                fmt_f64(v.estimate.y),
                fmt_flag(v.conversion.infeasible).to_string(),
                fmt_flag(v.degenerate).to_string(),
            ]);
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

struct RowReader<'a> {
    fields: Vec<&'a str>,
    cursor: usize,
    row: usize,
}

impl<'a> RowReader<'a> {
    fn f64(&mut self, column: &str) -> Result<f64, TraceError> {
        let raw = self.fields[self.cursor];
        self.cursor += 1;
        raw.parse::<f64>().map_err(|e| TraceError::BadValue {
            row: self.row,
            column: column.into(),
            message: e.to_string(),
        })
    }

    fn flag(&mut self, column: &str) -> Result<bool, TraceError> {
        let raw = self.fields[self.cursor];
        self.cursor += 1;
        match raw {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(TraceError::BadValue {
                row: self.row,
                column: column.into(),
                message: format!("expected 0 or 1, found '{other}'"),
            }),
        }
    }
}

/// Parse a trace previously produced by [`to_csv`]. The round trip is
/// exact: `parse_csv(to_csv(t)) == t` for every recorded trace.
pub fn parse_csv(text: &str) -> Result<Trace, TraceError> {
    let mut lines = text.lines();
    let meta = lines.next().ok_or(TraceError::MissingMetadata)?;
    let rest = meta
        .strip_prefix(MAGIC)
        .ok_or(TraceError::MissingMetadata)?
        .trim_start();
    let rest = rest
        .strip_prefix("n=")
        .ok_or_else(|| TraceError::BadMetadata("missing n=".into()))?;
    let (n_str, rest) = rest
        .split_once(' ')
        .ok_or_else(|| TraceError::BadMetadata("truncated metadata".into()))?;
    let n: usize = n_str
        .parse()
        .map_err(|e| TraceError::BadMetadata(format!("bad vessel count: {e}")))?;
    let rest = rest
        .strip_prefix("dt_ctrl=")
        .ok_or_else(|| TraceError::BadMetadata("missing dt_ctrl=".into()))?;
    let (dt_str, rest) = rest
        .split_once(' ')
        .ok_or_else(|| TraceError::BadMetadata("truncated metadata".into()))?;
    let dt_ctrl: f64 = dt_str
        .parse()
        .map_err(|e| TraceError::BadMetadata(format!("bad dt_ctrl: {e}")))?;
    let scenario = rest
        .strip_prefix("scenario=")
        .ok_or_else(|| TraceError::BadMetadata("missing scenario=".into()))?
        .to_string();

    let head = lines.next().ok_or(TraceError::BadHeader)?;
    if head != header(n) {
        return Err(TraceError::BadHeader);
    }
    let expected_fields = 6 + n * VESSEL_COLUMNS.len();

    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected_fields {
            return Err(TraceError::FieldCount {
                row: idx + 1,
                expected: expected_fields,
                found: fields.len(),
            });
        }
        let mut rd = RowReader {
            fields,
            cursor: 0,
            row: idx + 1,
        };
        let t = rd.f64("t")?;
        let target = Vec2::new(rd.f64("target_x")?, rd.f64("target_y")?);
        let hull_distance = rd.f64("hull_dist")?;
        let lyapunov_v = rd.f64("lyap_v")?;
        let lyapunov_p = rd.f64("lyap_p")?;
        let mut vessels = Vec::with_capacity(n);
        for _ in 0..n {
            vessels.push(VesselRecord {
                state: VesselState {
                    position: Vec2::new(rd.f64("x")?, rd.f64("y")?),
                    heading: rd.f64("psi")?,
                    surge: rd.f64("w")?,
                    sway: rd.f64("v")?,
                    yaw_rate: rd.f64("r")?,
                },
                command: ActuatorCommand {
                    tau1: rd.f64("tau1")?,
                    tau2: rd.f64("tau2")?,
                },
                saturation: SaturationFlags {
                    tau1: rd.flag("sat1")?,
                    tau2: rd.flag("sat2")?,
                },
                reference: ReferenceSignal {
                    w_r: rd.f64("w_r")?,
                    psi_r: rd.f64("psi_r")?,
                    v_r: rd.f64("v_r")?,
                    dw_r: rd.f64("dw_r")?,
                    ddw_r: rd.f64("ddw_r")?,
                    dpsi_r: rd.f64("dpsi_r")?,
                    ddpsi_r: rd.f64("ddpsi_r")?,
                    varpi: rd.f64("varpi")?,
                    dvarpi: rd.f64("dvarpi")?,
                    ddvarpi: rd.f64("ddvarpi")?,
                },
                perturbation: PerturbationRecord {
                    e: Vec2::new(rd.f64("e1")?, rd.f64("e2")?),
                    eta_tilde_r: rd.f64("eta_tilde")?,
                    omega_tilde_r: rd.f64("omega_tilde")?,
                },
                rho: rd.f64("rho")?,
                theta: rd.f64("theta")?,
                estimate: Vec2::new(rd.f64("est_x")?, rd.f64("est_y")?),
                conversion: ConversionFlags {
                    infeasible: rd.flag("infeasible")?,
                },
                degenerate: rd.flag("degenerate")?,
            });
        }
        records.push(TraceRecord {
            t,
            target,
            vessels,
            hull_distance,
            lyapunov_v,
            lyapunov_p,
        });
    }
    Ok(Trace {
        scenario,
        n,
        dt_ctrl,
        records,
    })
}
