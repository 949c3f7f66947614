//! Data files and manifests.
//!
//! CSV headers here are a published contract; change them only with a
//! version bump. Floats in CSV carry 17 significant digits. JSON numbers use
//! the shortest representation that parses back to the same bits.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::Format;
use crate::plan::RunPlan;
use crate::run::{Report, Rows, Status};

pub const TRAJECTORY_HEADER: [&str; 7] = ["i", "x", "dx", "y", "epsilon_max", "y_exact", "error"];
pub const STAR_HEADER: [&str; 7] = [
    "i",
    "r_cm",
    "dr_cm",
    "m_g",
    "P_erg_cm3",
    "epsilon_max",
    "flags",
];
pub const SIEVE_HEADER: [&str; 10] = [
    "P_central_erg_cm3",
    "bracket_lo",
    "bracket_hi",
    "iterations",
    "stars",
    "steps",
    "M_g",
    "M_msun",
    "R_cm",
    "R_km",
];
pub const SWEEP_HEADER: [&str; 8] = [
    "order", "tol", "steps", "M_msun", "R_km", "rel_dM", "rel_dR", "status",
];

pub const SCHEMA: &str = include_str!("../schema/output.schema.json");

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(rows: &Rows, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    match rows {
        Rows::Poly(rows) => {
            w.write_record(TRAJECTORY_HEADER)?;
            for r in rows {
                w.write_record([
                    r.i.to_string(),
                    num(r.x),
                    num(r.dx),
                    num(r.y),
                    num(r.epsilon_max),
                    num(r.y_exact),
                    num(r.error),
                ])?;
            }
        }
        Rows::Star(rows) => {
            w.write_record(STAR_HEADER)?;
            for r in rows {
                w.write_record([
                    r.i.to_string(),
                    num(r.r_cm),
                    num(r.dr_cm),
                    num(r.m_g),
                    num(r.p_erg_cm3),
                    num(r.epsilon_max),
                    r.flags.label(),
                ])?;
            }
        }
        Rows::Sieve(rows) => {
            w.write_record(SIEVE_HEADER)?;
            for r in rows {
                w.write_record([
                    num(r.p_central),
                    num(r.bracket_lo),
                    num(r.bracket_hi),
                    r.iterations.to_string(),
                    r.stars.to_string(),
                    r.steps.to_string(),
                    num(r.mass_g),
                    num(r.mass_msun),
                    num(r.radius_cm),
                    num(r.radius_km),
                ])?;
            }
        }
        Rows::Sweep(rows) => {
            w.write_record(SWEEP_HEADER)?;
            for r in rows {
                w.write_record([
                    r.order.to_string(),
                    num(r.tol),
                    r.steps.to_string(),
                    num(r.m_msun),
                    num(r.r_km),
                    num(r.rel_dm),
                    num(r.rel_dr),
                    r.status.as_str().to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn rows_value(rows: &Rows) -> serde_json::Result<Value> {
    match rows {
        Rows::Poly(r) => serde_json::to_value(r),
        Rows::Star(r) => serde_json::to_value(r),
        Rows::Sieve(r) => serde_json::to_value(r),
        Rows::Sweep(r) => serde_json::to_value(r),
    }
}

/// JSON data document. Deterministic: no clock, no paths.
pub fn data_document(plan: &RunPlan, report: &Report) -> serde_json::Result<Value> {
    Ok(json!({
        "kind": plan.name(),
        "run": plan,
        "status": report.status,
        "diagnostic": report.diagnostic,
        "summary": report.summary,
        "rows": rows_value(&report.rows)?,
    }))
}

pub fn write_data(
    plan: &RunPlan,
    report: &Report,
    format: Format,
    mut out: impl Write,
) -> anyhow::Result<()> {
    match format {
        Format::Csv => write_csv(&report.rows, &mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &data_document(plan, report)?)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: String,
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub argv: Vec<String>,
    pub run: RunPlan,
    /// Constants the run used; `null` for commands that need none.
    pub constants: Option<abm::tov::PhysicalConstants>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub status: Status,
    pub diagnostic: Option<String>,
    pub summary: Value,
}

impl Manifest {
    pub fn new(plan: &RunPlan, report: &Report, format: Format, output: Option<&Path>) -> Manifest {
        Manifest {
            kind: "manifest".into(),
            tool: "abm".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            argv: std::env::args().collect(),
            run: plan.clone(),
            constants: plan.constants().copied(),
            format,
            output: output.map(Path::to_path_buf),
            status: report.status,
            diagnostic: report.diagnostic.clone(),
            summary: report.summary.clone(),
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
