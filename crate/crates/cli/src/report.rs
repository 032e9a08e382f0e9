use std::collections::BTreeMap;
use std::path::Path;

use fracsource_core::estimates::{ContractionSummary, EstimateCheck, WeakResidual};
use fracsource_core::forward::SpectralField;
use fracsource_core::inverse::ConditionsReport;
use serde::Serialize;
use serde_json::Value;

use crate::config::{validate, Mode, Refine, RunConfig};
use crate::error::CliResult;

pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Status {
    pub exit_code: i32,
    pub message: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationReport {
    pub iterations: usize,
    pub w_history: Vec<f64>,
    pub ratios: Vec<f64>,
    pub warnings: Vec<String>,
    pub contraction: Option<ContractionSummary>,
    pub weak_residual: Option<WeakResidual>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorNorms {
    /// Relative `L₂(Q × Ω)` error of `u`.
    pub u_rel_l2: f64,
    /// Relative `L₂(Q)` error of `h`.
    pub h_rel_l2: Option<f64>,
    /// `u` from the forward solve with the exact `h` (mms mode).
    pub forward_u_rel_l2: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyCheck {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StudyRow {
    pub level: usize,
    pub dt: f64,
    pub dx: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub err_u_l2: f64,
    pub err_h_l2: f64,
    pub order_u: Option<f64>,
    pub order_h: Option<f64>,
    pub iters: usize,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StudySummary {
    pub refine: Refine,
    pub rows: Vec<StudyRow>,
    /// Least-squares slope over all levels.
    pub fitted_order_u: Option<f64>,
    pub fitted_order_h: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub mode: Mode,
    pub config: RunConfig,
    pub seed: u64,
    pub workers: Option<usize>,
    pub conditions: Option<ConditionsReport>,
    pub estimates: Vec<EstimateCheck>,
    pub iterations: Option<IterationReport>,
    pub errors: Option<ErrorNorms>,
    pub checks: Vec<VerifyCheck>,
    pub study: Option<StudySummary>,
    pub files: Vec<String>,
    pub status: Status,
    pub elapsed_seconds: f64,
}

impl RunReport {
    pub fn new(mode: Mode, config: RunConfig, seed: u64, workers: Option<usize>) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            tool: ToolInfo {
                name: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
            },
            mode,
            config,
            seed,
            workers,
            conditions: None,
            estimates: Vec::new(),
            iterations: None,
            errors: None,
            checks: Vec::new(),
            study: None,
            files: Vec::new(),
            status: Status {
                exit_code: 0,
                message: None,
            },
            elapsed_seconds: 0.0,
        }
    }

    /// JSON value with object keys in sorted order.
    pub fn to_value(&self) -> CliResult<Value> {
        Ok(sorted(serde_json::to_value(self)?))
    }

    /// Validate against the report schema and write `report.json`.
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let value = self.to_value()?;
        validate(&value, REPORT_SCHEMA, "report")?;
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        std::fs::write(dir.join("report.json"), text)?;
        Ok(())
    }
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let ordered: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            Value::Object(ordered.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

/// 17 significant digits; empty for a missing or non-finite value.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// `solution_u.csv`: one row per `(t, x, k)`, `k` counted from 1.
pub fn write_solution(dir: &Path, u: &SpectralField) -> CliResult<()> {
    let mut w = csv::Writer::from_path(dir.join("solution_u.csv"))?;
    w.write_record(["t", "x", "k", "value"])?;
    let (time, space) = (u.time(), u.space());
    for n in 0..time.len() {
        let t = fmt_f64(time.node(n));
        for j in 0..space.len() {
            let x = fmt_f64(space.node(j));
            for k in 0..u.modes() {
                w.write_record([t.as_str(), x.as_str(), &(k + 1).to_string(), &fmt_f64(u.get(k, n, j))])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// `h.csv`: `(t, x, value)` on the run grid.
pub fn write_h(dir: &Path, u: &SpectralField, h: &[f64]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(dir.join("h.csv"))?;
    w.write_record(["t", "x", "value"])?;
    let (time, space) = (u.time(), u.space());
    let m = space.len();
    for n in 0..time.len() {
        let t = fmt_f64(time.node(n));
        for j in 0..m {
            w.write_record([t.as_str(), &fmt_f64(space.node(j)), &fmt_f64(h[n * m + j])])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub const STUDY_COLUMNS: [&str; 10] = [
    "level", "dt", "dx", "K", "err_u_L2", "err_h_L2", "order_u", "order_h", "iters", "kappa",
];

pub fn write_study(dir: &Path, rows: &[StudyRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(dir.join("study.csv"))?;
    w.write_record(STUDY_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.level.to_string(),
            fmt_f64(r.dt),
            fmt_f64(r.dx),
            r.k.to_string(),
            fmt_f64(r.err_u_l2),
            fmt_f64(r.err_h_l2),
            fmt_opt(r.order_u),
            fmt_opt(r.order_h),
            r.iters.to_string(),
            fmt_opt(r.kappa),
        ])?;
    }
    w.flush()?;
    Ok(())
}
