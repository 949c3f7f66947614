//! Quartic test problem `y' = (x-1)(x-2)(x-3)(x-4)` with `y(0.5) = 1`.

use std::convert::Infallible;

use serde::{Deserialize, Serialize};

use crate::config::IntegratorConfig;
use crate::integrator::{integrate, IntegrationFailure, StopCondition, Trajectory};

pub const DEFAULT_X0: f64 = 0.5;
pub const DEFAULT_Y0: f64 = 1.0;
pub const DEFAULT_X_END: f64 = 5.0;
/// Fixed-grid spacing used for the reference figures.
pub const DEFAULT_FIXED_DX: f64 = 0.25;

pub fn poly_rhs(x: f64) -> f64 {
    (x - 1.0) * (x - 2.0) * (x - 3.0) * (x - 4.0)
}

/// Antiderivative of [`poly_rhs`] through `y(0.5) = 1`.
pub fn poly_exact(x: f64) -> f64 {
    // x^5/5 - 5x^4/2 + 35x^3/3 - 25x^2 + 24x - 727/120
    ((((x / 5.0 - 2.5) * x + 35.0 / 3.0) * x - 25.0) * x + 24.0) * x - 727.0 / 120.0
}

/// Exact solution through an arbitrary boundary condition `y(x0) = y0`.
pub fn poly_solution(x: f64, x0: f64, y0: f64) -> f64 {
    poly_exact(x) - poly_exact(x0) + y0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyCase {
    pub x0: f64,
    pub y0: f64,
    pub x_end: f64,
    pub config: IntegratorConfig,
}

impl PolyCase {
    pub fn new(config: IntegratorConfig) -> Self {
        PolyCase {
            x0: DEFAULT_X0,
            y0: DEFAULT_Y0,
            x_end: DEFAULT_X_END,
            config,
        }
    }

    pub fn until(mut self, x_end: f64) -> Self {
        self.x_end = x_end;
        self
    }
}

/// One row of a polynomial run; row 0 is the boundary condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyRow {
    pub i: usize,
    pub x: f64,
    pub dx: f64,
    pub y: f64,
    pub y_exact: f64,
    /// Accumulated error `y - y_exact`.
    pub error: f64,
    pub epsilon_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyRun {
    pub case: PolyCase,
    pub summary: Trajectory,
    pub rows: Vec<PolyRow>,
}

impl PolyRun {
    pub fn final_error(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.error)
    }
}

#[derive(Debug)]
pub struct PolyFailure {
    pub failure: IntegrationFailure<Infallible>,
    pub rows: Vec<PolyRow>,
}

impl std::fmt::Display for PolyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.failure.fmt(f)
    }
}

impl std::error::Error for PolyFailure {}

pub fn run_poly_case(case: &PolyCase) -> Result<PolyRun, PolyFailure> {
    let (x0, y0) = (case.x0, case.y0);
    let mut rows = vec![PolyRow {
        i: 0,
        x: x0,
        dx: 0.0,
        y: y0,
        y_exact: y0,
        error: 0.0,
        epsilon_max: 0.0,
    }];
    let result = integrate(
        |x, _y: &[f64]| Ok::<_, Infallible>(vec![poly_rhs(x)]),
        x0,
        &[y0],
        StopCondition::ReachX(case.x_end),
        &case.config,
        |r| {
            let y = r.state()[0];
            let y_exact = poly_solution(r.x_next, x0, y0);
            rows.push(PolyRow {
                i: r.index,
                x: r.x_next,
                dx: r.dx,
                y,
                y_exact,
                error: y - y_exact,
                epsilon_max: r.epsilon_max,
            });
        },
    );
    match result {
        Ok(summary) => Ok(PolyRun {
            case: *case,
            summary,
            rows,
        }),
        Err(failure) => Err(PolyFailure { failure, rows }),
    }
}
