use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::constants::PhysicalConstants;
use super::eos::energy_density_at_pressure;
use super::TovError;
use crate::config::{IntegratorConfig, Mode};
use crate::error::IntegrationError;
use crate::integrator::{integrate, IntegrationFailure, StopCondition, Termination};

/// Initial and minimum radial step, cm.
pub const DEFAULT_STEP_CM: f64 = 10.0;

/// `(dm/dr, dP/dr)` for hydrostatic equilibrium in general relativity.
///
/// `m` is in grams and `P` in erg cm^-3; the energy density comes from the
/// equation of state at `P`. The centre `r = 0` returns the regular limit
/// `(0, 0)`.
pub fn tov_derivatives(
    r: f64,
    m: f64,
    pressure: f64,
    k: &PhysicalConstants,
) -> Result<(f64, f64), TovError> {
    if pressure < 0.0 {
        return Err(TovError::SurfaceReached { r });
    }
    if !(r >= 0.0) || !(m >= 0.0) || !pressure.is_finite() {
        return Err(TovError::State { r, m, pressure });
    }
    if r == 0.0 {
        return Ok((0.0, 0.0));
    }
    let c2 = k.c2();
    let compactness = 2.0 * k.g * m / (c2 * r);
    if compactness >= 1.0 {
        return Err(TovError::Horizon { r, m });
    }
    let rho = energy_density_at_pressure(pressure, k)?;
    let dm_dr = 4.0 * PI / c2 * r * r * rho;
    let dp_dr = -k.g / (c2 * r * r) * (rho + pressure) * (m + 4.0 * PI / c2 * r * r * r * pressure)
        / (1.0 - compactness);
    Ok((dm_dr, dp_dr))
}

/// Right-hand side used while integrating a star.
///
/// A predicted pressure at or below zero lies outside the star; it is treated
/// as vacuum so the corrector can finish the terminal step.
pub fn star_rhs(r: f64, state: &[f64], k: &PhysicalConstants) -> Result<Vec<f64>, TovError> {
    let (dm, dp) = tov_derivatives(r, state[0].max(0.0), state[1].max(0.0), k)?;
    Ok(vec![dm, dp])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StepFlags {
    /// Taken below the configured order.
    pub bootstrap: bool,
    /// Taken at the minimum step.
    pub floored: bool,
    /// The last step; its pressure is at or below zero.
    pub terminal: bool,
}

impl StepFlags {
    pub fn label(&self) -> String {
        let names = [
            (self.bootstrap, "bootstrap"),
            (self.floored, "floored"),
            (self.terminal, "terminal"),
        ];
        names
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, n)| *n)
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarRow {
    pub i: usize,
    pub r_cm: f64,
    pub dr_cm: f64,
    pub m_g: f64,
    pub p_erg_cm3: f64,
    pub epsilon_max: f64,
    pub flags: StepFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarSolution {
    pub p_central: f64,
    pub mass_g: f64,
    pub mass_msun: f64,
    pub radius_cm: f64,
    pub radius_km: f64,
    pub steps: usize,
    pub evaluations: usize,
    /// Row 0 is the centre; each later row is one accepted step.
    pub trajectory: Vec<StarRow>,
}

impl StarSolution {
    pub fn compactness_ok(&self, k: &PhysicalConstants) -> bool {
        self.trajectory
            .iter()
            .filter(|row| row.r_cm > 0.0)
            .all(|row| 2.0 * k.g * row.m_g / (k.c2() * row.r_cm) < 1.0)
    }
}

#[derive(Debug)]
pub struct StarFailure {
    pub failure: IntegrationFailure<TovError>,
    pub trajectory: Vec<StarRow>,
}

impl StarFailure {
    pub fn is_horizon(&self) -> bool {
        matches!(
            self.failure.error,
            IntegrationError::Derivative {
                source: TovError::Horizon { .. },
                ..
            }
        )
    }
}

impl std::fmt::Display for StarFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.failure.fmt(f)
    }
}

impl std::error::Error for StarFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.failure)
    }
}

/// Default star settings: adaptive, 10 cm initial and minimum step.
pub fn star_config(order_ab: usize, target_correction: f64) -> IntegratorConfig {
    IntegratorConfig::adaptive(order_ab, target_correction, DEFAULT_STEP_CM)
        .with_dx_min(DEFAULT_STEP_CM)
}

/// Integrates `(m, P)` outward from the centre until the pressure reaches or
/// crosses zero. Mass and radius are the last accepted values.
pub fn integrate_star(
    p_central: f64,
    config: &IntegratorConfig,
    k: &PhysicalConstants,
) -> Result<StarSolution, StarFailure> {
    let mut trajectory = vec![StarRow {
        i: 0,
        r_cm: 0.0,
        dr_cm: 0.0,
        m_g: 0.0,
        p_erg_cm3: p_central,
        epsilon_max: 0.0,
        flags: StepFlags::default(),
    }];

    let invalid = |error: TovError| StarFailure {
        failure: IntegrationFailure {
            error: IntegrationError::Derivative {
                x: 0.0,
                source: error,
            },
            partial: crate::integrator::Trajectory {
                x0: 0.0,
                y0: vec![0.0, p_central].into(),
                x_final: 0.0,
                y_final: vec![0.0, p_central].into(),
                steps: 0,
                evaluations: 0,
                termination: Termination::Predicate,
            },
        },
        trajectory: Vec::new(),
    };
    if !(p_central > 0.0) || !p_central.is_finite() {
        return Err(invalid(TovError::Pressure(p_central)));
    }
    if !k.is_valid() {
        return Err(invalid(TovError::Constants));
    }

    let config = IntegratorConfig {
        mode: Mode::AbmAdaptive,
        ..*config
    };
    let result = integrate(
        |r, y: &[f64]| star_rhs(r, y, k),
        0.0,
        &[0.0, p_central],
        StopCondition::when(|_r, y| y[1] <= 0.0),
        &config,
        |rec| {
            let y = rec.state();
            trajectory.push(StarRow {
                i: rec.index,
                r_cm: rec.x_next,
                dr_cm: rec.dx,
                m_g: y[0],
                p_erg_cm3: y[1],
                epsilon_max: rec.epsilon_max,
                flags: StepFlags {
                    bootstrap: rec.effective_order < config.order_ab,
                    floored: rec.dx <= config.dx_min,
                    terminal: y[1] <= 0.0,
                },
            });
        },
    );

    match result {
        Ok(summary) => {
            let mass_g = summary.y_final[0];
            let radius_cm = summary.x_final;
            Ok(StarSolution {
                p_central,
                mass_g,
                mass_msun: mass_g / k.m_sun,
                radius_cm,
                radius_km: radius_cm / 1e5,
                steps: summary.steps,
                evaluations: summary.evaluations,
                trajectory,
            })
        }
        Err(failure) => Err(StarFailure {
            failure,
            trajectory,
        }),
    }
}
