use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Largest supported Adams-Bashforth order.
pub const MAX_ORDER: usize = 20;

pub const DEFAULT_GROWTH_CAP: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Fixed grid, prediction only; one derivative evaluation per step.
    AbFixed,
    /// Fixed grid, predict-evaluate-correct-evaluate.
    AbmFixed,
    /// Predict-evaluate-correct-evaluate with the step set from the
    /// fractional correction.
    AbmAdaptive,
}

impl Mode {
    pub fn corrects(self) -> bool {
        !matches!(self, Mode::AbFixed)
    }
}

/// Integrator settings.
///
/// In the corrected modes the Adams-Moulton order is always `order_ab + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub order_ab: usize,
    /// Desired fractional correction per step, `E`.
    pub target_correction: f64,
    pub dx_initial: f64,
    pub dx_min: f64,
    pub growth_cap: f64,
    pub mode: Mode,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            order_ab: 4,
            target_correction: 1e-8,
            dx_initial: 1e-2,
            dx_min: 0.0,
            growth_cap: DEFAULT_GROWTH_CAP,
            mode: Mode::AbmAdaptive,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn fixed(mode: Mode, order_ab: usize, dx: f64) -> Self {
        IntegratorConfig {
            order_ab,
            dx_initial: dx,
            mode,
            ..Default::default()
        }
    }

    pub fn adaptive(order_ab: usize, target_correction: f64, dx_initial: f64) -> Self {
        IntegratorConfig {
            order_ab,
            target_correction,
            dx_initial,
            mode: Mode::AbmAdaptive,
            ..Default::default()
        }
    }

    pub fn with_dx_min(mut self, dx_min: f64) -> Self {
        self.dx_min = dx_min;
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn order_am(&self) -> usize {
        self.order_ab + 1
    }

    /// Nodes the history must retain: the full Adams-Bashforth window.
    pub fn history_capacity(&self) -> usize {
        self.order_ab
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.order_ab == 0 || self.order_ab > MAX_ORDER {
            return Err(ConfigError::Order {
                order: self.order_ab,
                max: MAX_ORDER,
            });
        }
        if !(self.dx_initial.is_finite() && self.dx_initial > 0.0) {
            return Err(ConfigError::InitialStep(self.dx_initial));
        }
        if !(self.dx_min.is_finite() && self.dx_min >= 0.0) {
            return Err(ConfigError::MinimumStep(self.dx_min));
        }
        if self.dx_initial < self.dx_min {
            return Err(ConfigError::InitialBelowMinimum {
                initial: self.dx_initial,
                minimum: self.dx_min,
            });
        }
        if self.mode == Mode::AbmAdaptive {
            if !(self.target_correction.is_finite() && self.target_correction > 0.0) {
                return Err(ConfigError::TargetCorrection(self.target_correction));
            }
            if !(self.growth_cap > 1.0) {
                return Err(ConfigError::GrowthCap(self.growth_cap));
            }
        }
        if self.max_steps == 0 {
            return Err(ConfigError::MaxSteps);
        }
        Ok(())
    }
}
