//! Variable-step, variable-order Adams-Bashforth-Moulton stepping.
//!
//! Each step rebuilds the quadrature weights from the current node spacing
//! and applies one set of weights to every state component. The order ramps
//! up from one during the first steps: step `s` (1-based) uses
//! `min(s, order_ab)` history nodes for the prediction and one more, the
//! predicted future node, for the correction. No starter method is needed.
//!
//! In the corrected modes every step performs exactly two derivative
//! evaluations: one at the prediction and one at the correction, the latter
//! stored in the history. A run of `s` steps costs `2 s + 1` evaluations,
//! the extra one being at the initial point. The halting step evaluates at
//! its corrected state too, so the callback must accept the final state.

use serde::{Deserialize, Serialize};

use crate::config::{IntegratorConfig, Mode};
use crate::control::{fractional_correction, next_step_size};
use crate::error::IntegrationError;
use crate::history::{Node, NodeHistory, StateVector};
use crate::quadrature::quadrature_weights;

/// Relative slack when deciding that the remaining interval fits in one step.
const END_SLACK: f64 = 1e-9;

/// Audit record of one accepted step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based step number; also the index of the state this step produced.
    pub index: usize,
    pub x_next: f64,
    pub dx: f64,
    pub y_ab: StateVector,
    /// Equal to `y_ab` on a prediction-only grid.
    pub y_am: StateVector,
    pub epsilon: StateVector,
    pub epsilon_max: f64,
    /// Adams-Bashforth order used for this step.
    pub effective_order: usize,
}

impl StepRecord {
    /// The accepted state at `x_next`.
    pub fn state(&self) -> &StateVector {
        &self.y_am
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ReachedEnd,
    Predicate,
}

/// Summary of a finished integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub x0: f64,
    pub y0: StateVector,
    pub x_final: f64,
    pub y_final: StateVector,
    pub steps: usize,
    pub evaluations: usize,
    pub termination: Termination,
}

/// A failed integration together with everything accepted before the failure.
#[derive(Debug)]
pub struct IntegrationFailure<E: std::error::Error + 'static> {
    pub error: IntegrationError<E>,
    pub partial: Trajectory,
}

impl<E: std::error::Error + 'static> std::fmt::Display for IntegrationFailure<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (after {} steps, x = {})",
            self.error, self.partial.steps, self.partial.x_final
        )
    }
}

impl<E: std::error::Error + 'static> std::error::Error for IntegrationFailure<E> {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Halting test on an accepted `(x, y)`.
pub type StopPredicate<'a> = Box<dyn Fn(f64, &[f64]) -> bool + 'a>;

/// When to halt.
pub enum StopCondition<'a> {
    /// Integrate up to and including `x_end`; the last step is shortened so
    /// the abscissa never overshoots.
    ReachX(f64),
    /// Halt at the first accepted step whose `(x, y)` satisfies the predicate.
    When(StopPredicate<'a>),
}

impl<'a> StopCondition<'a> {
    pub fn when(pred: impl Fn(f64, &[f64]) -> bool + 'a) -> Self {
        StopCondition::When(Box::new(pred))
    }
}

/// Adams-Bashforth prediction at `x_latest + dx` from the last
/// `min(order, history.len())` nodes.
pub fn ab_predict(
    history: &NodeHistory,
    order: usize,
    dx: f64,
) -> Result<StateVector, crate::error::QuadratureError> {
    let latest = history
        .latest()
        .ok_or(crate::error::QuadratureError::Empty)?;
    let window = history.window(order);
    let shifted: Vec<f64> = window.clone().map(|n| n.x - latest.x).collect();
    let weights = quadrature_weights(&shifted, dx)?;
    let mut increment = vec![0.0; latest.y.len()];
    weights.apply(window.map(|n| &n.dy[..]), &mut increment);
    Ok(add(&latest.y, &increment))
}

/// Adams-Moulton correction at `x_latest + dx`.
///
/// Uses the last `min(order_ab, history.len())` nodes plus the future node
/// whose derivative, `predicted_derivative`, was evaluated at the prediction.
pub fn am_correct(
    history: &NodeHistory,
    order_ab: usize,
    predicted_derivative: &[f64],
    dx: f64,
) -> Result<StateVector, crate::error::QuadratureError> {
    let latest = history
        .latest()
        .ok_or(crate::error::QuadratureError::Empty)?;
    let window = history.window(order_ab);
    let mut shifted: Vec<f64> = window.clone().map(|n| n.x - latest.x).collect();
    shifted.push(dx);
    let weights = quadrature_weights(&shifted, dx)?;
    let mut increment = vec![0.0; latest.y.len()];
    weights.apply(
        window
            .map(|n| &n.dy[..])
            .chain(std::iter::once(predicted_derivative)),
        &mut increment,
    );
    Ok(add(&latest.y, &increment))
}

fn add(a: &[f64], b: &[f64]) -> StateVector {
    a.iter()
        .zip(b)
        .map(|(x, y)| x + y)
        .collect::<Vec<_>>()
        .into()
}

/// Integrates `y' = system(x, y)` from `(x0, y0)`.
///
/// Every accepted step is passed to `sink` as it is produced. On failure the
/// returned [`IntegrationFailure`] carries the trajectory up to the last
/// accepted step.
pub fn integrate<F, E, S>(
    mut system: F,
    x0: f64,
    y0: &[f64],
    stop: StopCondition<'_>,
    config: &IntegratorConfig,
    mut sink: S,
) -> Result<Trajectory, IntegrationFailure<E>>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>, E>,
    E: std::error::Error + 'static,
    S: FnMut(&StepRecord),
{
    let mut summary = Trajectory {
        x0,
        y0: y0.into(),
        x_final: x0,
        y_final: y0.into(),
        steps: 0,
        evaluations: 0,
        termination: Termination::ReachedEnd,
    };

    macro_rules! bail {
        ($err:expr) => {
            return Err(IntegrationFailure {
                error: $err.into(),
                partial: summary,
            })
        };
    }

    if let Err(e) = config.validate() {
        bail!(e);
    }
    if y0.is_empty() || !x0.is_finite() || y0.iter().any(|v| !v.is_finite()) {
        bail!(IntegrationError::InitialState);
    }
    if let StopCondition::ReachX(x_end) = stop {
        if !(x_end > x0) {
            bail!(IntegrationError::EndBeforeStart { x0, x_end });
        }
    }

    let dim = y0.len();
    let mut evaluate =
        |x: f64, y: &[f64], count: &mut usize| -> Result<Vec<f64>, IntegrationError<E>> {
            *count += 1;
            let dy = system(x, y).map_err(|source| IntegrationError::Derivative { x, source })?;
            if dy.len() != dim {
                return Err(IntegrationError::DerivativeDimension {
                    expected: dim,
                    got: dy.len(),
                });
            }
            Ok(dy)
        };

    let mut history = match NodeHistory::new(config.history_capacity()) {
        Ok(h) => h,
        Err(e) => bail!(e),
    };
    let dy0 = match evaluate(x0, y0, &mut summary.evaluations) {
        Ok(dy) => dy,
        Err(e) => bail!(e),
    };
    if let Err(e) = history.push(Node {
        x: x0,
        y: y0.into(),
        dy: dy0.into(),
    }) {
        bail!(e);
    }

    let adaptive = config.mode == Mode::AbmAdaptive;
    let mut dx = config.dx_initial;
    let mut x = x0;

    loop {
        let index = summary.steps + 1;
        if index > config.max_steps {
            bail!(IntegrationError::MaxSteps(config.max_steps));
        }

        let mut step = dx;
        let mut at_end = false;
        if let StopCondition::ReachX(x_end) = stop {
            let remaining = x_end - x;
            if remaining <= dx * (1.0 + END_SLACK) {
                step = remaining;
                at_end = true;
            }
        }
        let x_next = if at_end {
            match stop {
                StopCondition::ReachX(x_end) => x_end,
                _ => unreachable!(),
            }
        } else {
            x + step
        };
        if !(x_next > x) {
            bail!(IntegrationError::NonFinite { x });
        }

        let order = history.len().min(config.order_ab);
        let y_ab = match ab_predict(&history, order, step) {
            Ok(y) => y,
            Err(e) => bail!(e),
        };
        if !y_ab.is_finite() {
            bail!(IntegrationError::NonFinite { x: x_next });
        }

        let (y_am, correction) = if config.mode.corrects() {
            let dy_pred = match evaluate(x_next, &y_ab, &mut summary.evaluations) {
                Ok(dy) => dy,
                Err(e) => bail!(e),
            };
            let y_am = match am_correct(&history, config.order_ab, &dy_pred, step) {
                Ok(y) => y,
                Err(e) => bail!(e),
            };
            if !y_am.is_finite() {
                bail!(IntegrationError::NonFinite { x: x_next });
            }
            let fc = fractional_correction(&y_ab, &y_am);
            (y_am, fc)
        } else {
            let fc = fractional_correction(&y_ab, &y_ab);
            (y_ab.clone(), fc)
        };

        let record = StepRecord {
            index,
            x_next,
            dx: step,
            y_ab,
            y_am,
            epsilon: correction.epsilon,
            epsilon_max: correction.max,
            effective_order: order,
        };

        let halt = at_end
            || match &stop {
                StopCondition::When(pred) => pred(x_next, &record.y_am),
                StopCondition::ReachX(_) => false,
            };

        summary.steps = index;
        summary.x_final = x_next;
        summary.y_final = record.y_am.clone();
        sink(&record);
        let dy = match evaluate(x_next, &record.y_am, &mut summary.evaluations) {
            Ok(dy) => dy,
            Err(e) => bail!(e),
        };

        if halt {
            summary.termination = if at_end {
                Termination::ReachedEnd
            } else {
                Termination::Predicate
            };
            return Ok(summary);
        }

        if let Err(e) = history.push(Node {
            x: x_next,
            y: record.y_am,
            dy: dy.into(),
        }) {
            bail!(e);
        }

        if adaptive {
            dx = next_step_size(record.epsilon_max, config, order + 1, step);
        }
        x = x_next;
    }
}

/// Collects every record passed to it.
#[derive(Debug, Default, Clone)]
pub struct Recorder {
    pub records: Vec<StepRecord>,
}

impl Recorder {
    pub fn sink(&mut self) -> impl FnMut(&StepRecord) + '_ {
        |r| self.records.push(r.clone())
    }
}
