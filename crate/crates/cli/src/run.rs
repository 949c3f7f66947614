use abm::poly::{run_poly_case, PolyRow};
use abm::tov::{
    integrate_star, parameter_sweep, trinary_sieve, CellStatus, SieveError, StarFailure, StarRow,
    StarSolution, SweepRow,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::plan::RunPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
    /// A star collapsed inside its own Schwarzschild radius.
    Horizon,
}

/// The one row a sieve produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SieveRow {
    pub p_central: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: usize,
    pub stars: usize,
    pub steps: usize,
    pub mass_g: f64,
    pub mass_msun: f64,
    pub radius_cm: f64,
    pub radius_km: f64,
}

#[derive(Debug)]
pub enum Rows {
    Poly(Vec<PolyRow>),
    Star(Vec<StarRow>),
    Sieve(Vec<SieveRow>),
    Sweep(Vec<SweepRow>),
}

#[derive(Debug)]
pub struct Report {
    pub status: Status,
    pub diagnostic: Option<String>,
    /// `null` when the run failed before producing a result.
    pub summary: Value,
    pub rows: Rows,
    /// Human-readable summary lines.
    pub text: String,
}

impl Report {
    fn failed(e: &StarFailure, rows: Rows) -> Report {
        let (status, prefix) = if e.is_horizon() {
            (Status::Horizon, "horizon formation")
        } else {
            (Status::Failed, "integration failed")
        };
        let diagnostic = format!("{prefix}: {e}");
        Report {
            status,
            text: diagnostic.clone(),
            diagnostic: Some(diagnostic),
            summary: Value::Null,
            rows,
        }
    }
}

fn star_summary(s: &StarSolution) -> Value {
    json!({
        "p_central": s.p_central,
        "mass_g": s.mass_g,
        "mass_msun": s.mass_msun,
        "radius_cm": s.radius_cm,
        "radius_km": s.radius_km,
        "steps": s.steps,
        "evaluations": s.evaluations,
    })
}

pub fn execute(plan: &RunPlan) -> Report {
    match plan {
        RunPlan::Poly { case } => match run_poly_case(case) {
            Ok(run) => {
                let last = run.rows.last().expect("row 0 is always present");
                let text = format!(
                    "x = {} y = {:.17e} exact = {:.17e} error = {:.3e} steps = {} evaluations = {}",
                    last.x, last.y, last.y_exact, last.error, run.summary.steps, run.summary.evaluations
                );
                Report {
                    status: Status::Ok,
                    diagnostic: None,
                    summary: json!({
                        "steps": run.summary.steps,
                        "evaluations": run.summary.evaluations,
                        "x_final": last.x,
                        "y_final": last.y,
                        "y_exact": last.y_exact,
                        "final_error": last.error,
                    }),
                    rows: Rows::Poly(run.rows),
                    text,
                }
            }
            Err(e) => {
                let diagnostic = format!("integration failed: {e}");
                Report {
                    status: Status::Failed,
                    text: diagnostic.clone(),
                    diagnostic: Some(diagnostic),
                    summary: Value::Null,
                    rows: Rows::Poly(e.rows),
                }
            }
        },
        RunPlan::Tov { p_central, config, constants } => {
            match integrate_star(*p_central, config, constants) {
                Ok(s) => Report {
                    status: Status::Ok,
                    diagnostic: None,
                    summary: star_summary(&s),
                    text: format!(
                        "P_c = {:.7e} erg cm^-3  M = {:.8} M_sun ({:.10e} g)  R = {:.6} km ({:.10e} cm)  steps = {}  evaluations = {}",
                        s.p_central, s.mass_msun, s.mass_g, s.radius_km, s.radius_cm, s.steps, s.evaluations
                    ),
                    rows: Rows::Star(s.trajectory),
                },
                Err(e) => {
                    let rows = Rows::Star(e.trajectory.clone());
                    Report::failed(&e, rows)
                }
            }
        }
        RunPlan::Sieve { lo, hi, bracket_tolerance, config, constants, jobs } => {
            match trinary_sieve(*lo, *hi, config, constants, *bracket_tolerance, *jobs) {
                Ok(r) => {
                    let row = SieveRow {
                        p_central: r.p_central,
                        bracket_lo: r.bracket.lo,
                        bracket_hi: r.bracket.hi,
                        iterations: r.iterations,
                        stars: r.evaluations,
                        steps: r.star.steps,
                        mass_g: r.star.mass_g,
                        mass_msun: r.star.mass_msun,
                        radius_cm: r.star.radius_cm,
                        radius_km: r.star.radius_km,
                    };
                    Report {
                        status: Status::Ok,
                        diagnostic: None,
                        summary: serde_json::to_value(&row).expect("plain struct"),
                        text: format!(
                            "P_c* = {:.7e} erg cm^-3  M* = {:.8} M_sun  R* = {:.6} km  (bracket [{:.7e}, {:.7e}], {} iterations, {} stars)",
                            row.p_central, row.mass_msun, row.radius_km, row.bracket_lo, row.bracket_hi, row.iterations, row.stars
                        ),
                        rows: Rows::Sieve(vec![row]),
                    }
                }
                Err(SieveError::Star { source, .. }) => Report::failed(&source, Rows::Sieve(Vec::new())),
                Err(e) => {
                    let diagnostic = e.to_string();
                    Report {
                        status: Status::Failed,
                        text: diagnostic.clone(),
                        diagnostic: Some(diagnostic),
                        summary: Value::Null,
                        rows: Rows::Sieve(Vec::new()),
                    }
                }
            }
        }
        RunPlan::Sweep { orders, tolerances, p_central, reference, base, constants, jobs } => {
            let rows = parameter_sweep(orders, tolerances, *p_central, *reference, base, constants, *jobs);
            let failures: Vec<String> = rows
                .iter()
                .filter(|r| r.status == CellStatus::Failed)
                .map(|r| {
                    format!(
                        "order {} tol {:e}: {}",
                        r.order,
                        r.tol,
                        r.error.as_deref().unwrap_or("failed")
                    )
                })
                .collect();
            let succeeded = rows.len() - failures.len();
            let mut text = format!("{} cells, {succeeded} succeeded", rows.len());
            for f in &failures {
                text.push_str("\n  failed ");
                text.push_str(f);
            }
            Report {
                status: if succeeded > 0 { Status::Ok } else { Status::Failed },
                diagnostic: (!failures.is_empty()).then(|| failures.join("; ")),
                summary: json!({
                    "cells": rows.len(),
                    "succeeded": succeeded,
                    "failed": failures.len(),
                }),
                rows: Rows::Sweep(rows),
                text,
            }
        }
    }
}
