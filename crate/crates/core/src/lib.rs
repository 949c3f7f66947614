//! Adams-Bashforth-Moulton predictor-corrector integration on an adaptive
//! grid.
//!
//! The engine rebuilds Lagrange quadrature weights on the actual node spacing
//! at every step, ramps its order up from one without a starter method and
//! sizes each step from the fractional Adams-Moulton correction of the
//! previous one. Two reference problems ship with it: a quartic test ODE with
//! a closed-form solution ([`poly`]) and relativistic neutron-star structure
//! with an ideal degenerate neutron gas ([`tov`]).

// `!(a > b)` is how NaN gets rejected; failures carry their partial
// trajectory by value on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::result_large_err)]

pub mod config;
pub mod control;
pub mod error;
pub mod fanout;
pub mod history;
pub mod integrator;
pub mod poly;
pub mod quadrature;
pub mod tov;

pub use config::{IntegratorConfig, Mode, DEFAULT_GROWTH_CAP, MAX_ORDER};
pub use control::{fractional_correction, next_step_size, FractionalCorrection};
pub use error::{ConfigError, HistoryError, IntegrationError, QuadratureError};
pub use history::{Node, NodeHistory, StateVector};
pub use integrator::{
    ab_predict, am_correct, integrate, IntegrationFailure, Recorder, StepRecord, StopCondition,
    Termination, Trajectory,
};
pub use quadrature::{quadrature_weights, QuadratureWeights};
