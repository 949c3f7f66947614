use serde::{Deserialize, Serialize};

use super::constants::PhysicalConstants;
use super::star::integrate_star;
use crate::config::IntegratorConfig;
use crate::fanout;

/// Reference mass and radius the sweep cells are compared with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub mass_msun: f64,
    pub radius_km: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Ok,
    Failed,
}

impl CellStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellStatus::Ok => "ok",
            CellStatus::Failed => "failed",
        }
    }
}

/// One (order, tolerance) cell. Failed cells carry NaN results and the error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub order: usize,
    pub tol: f64,
    pub steps: usize,
    pub m_msun: f64,
    pub r_km: f64,
    pub rel_dm: f64,
    pub rel_dr: f64,
    pub status: CellStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Integrates the same star for every (order, tolerance) pair.
///
/// Rows come back order-major, tolerance-minor, whatever `jobs` is.
pub fn parameter_sweep(
    orders: &[usize],
    tolerances: &[f64],
    p_central: f64,
    reference: Reference,
    base: &IntegratorConfig,
    constants: &PhysicalConstants,
    jobs: usize,
) -> Vec<SweepRow> {
    let cells: Vec<(usize, f64)> = orders
        .iter()
        .flat_map(|&o| tolerances.iter().map(move |&t| (o, t)))
        .collect();
    fanout::map(&cells, jobs, |&(order, tol)| {
        let config = IntegratorConfig {
            order_ab: order,
            target_correction: tol,
            ..*base
        };
        match integrate_star(p_central, &config, constants) {
            Ok(star) => SweepRow {
                order,
                tol,
                steps: star.steps,
                m_msun: star.mass_msun,
                r_km: star.radius_km,
                rel_dm: ((star.mass_msun - reference.mass_msun) / reference.mass_msun).abs(),
                rel_dr: ((star.radius_km - reference.radius_km) / reference.radius_km).abs(),
                status: CellStatus::Ok,
                error: None,
            },
            Err(e) => SweepRow {
                order,
                tol,
                steps: e.failure.partial.steps,
                m_msun: f64::NAN,
                r_km: f64::NAN,
                rel_dm: f64::NAN,
                rel_dr: f64::NAN,
                status: CellStatus::Failed,
                error: Some(e.to_string()),
            },
        }
    })
}
