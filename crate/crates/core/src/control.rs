//! Step-size control from the Adams-Moulton fractional correction.
//!
//! The correction `eps = (y_am - y_ab) / y_ab` scales as `dx^(p)` with `p`
//! the Adams-Moulton order. Setting the next correction equal to the target
//! `E` and assuming the unknown proportionality constants of consecutive
//! steps are equal gives `dx_next = (E / |eps|)^(1/p) * dx`. Growth is capped
//! geometrically; shrinking is not capped but is floored at `dx_min`.
//! Steps are never rejected: the estimate only shapes the next step.

use crate::config::IntegratorConfig;
use crate::history::StateVector;

/// Per-component fractional correction and its largest magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalCorrection {
    pub epsilon: StateVector,
    pub max: f64,
}

/// `(y_am - y_ab) / y_ab` per component.
///
/// A component whose prediction is zero (or subnormal) uses the absolute
/// difference instead.
pub fn fractional_correction(y_ab: &[f64], y_am: &[f64]) -> FractionalCorrection {
    assert_eq!(y_ab.len(), y_am.len(), "state dimensions differ");
    let epsilon: Vec<f64> = y_ab
        .iter()
        .zip(y_am)
        .map(|(&ab, &am)| {
            let diff = am - ab;
            if ab.abs() < f64::MIN_POSITIVE {
                diff
            } else {
                diff / ab
            }
        })
        .collect();
    let max = epsilon.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    FractionalCorrection {
        epsilon: epsilon.into(),
        max,
    }
}

/// Step size for the step after one of size `dx_current` that produced a
/// largest fractional correction `epsilon_max`.
///
/// `am_order` is the effective Adams-Moulton order of that step.
pub fn next_step_size(
    epsilon_max: f64,
    config: &IntegratorConfig,
    am_order: usize,
    dx_current: f64,
) -> f64 {
    let capped = config.growth_cap * dx_current;
    let proposed = if epsilon_max > 0.0 {
        let ratio = (config.target_correction / epsilon_max).powf(1.0 / am_order as f64);
        (ratio * dx_current).min(capped)
    } else {
        capped
    };
    proposed.max(config.dx_min)
}
