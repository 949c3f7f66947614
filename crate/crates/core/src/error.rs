use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("no interpolation nodes supplied")]
    Empty,
    #[error("{count} interpolation nodes exceed the supported maximum of {max}")]
    TooManyNodes { count: usize, max: usize },
    #[error("duplicate interpolation node at shifted abscissa {0}")]
    DuplicateNode(f64),
    #[error("non-finite interpolation node")]
    NonFiniteNode,
    #[error("integration upper limit must be finite and non-zero, got {0}")]
    BadUpperLimit(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("order must lie in 1..={max}, got {order}")]
    Order { order: usize, max: usize },
    #[error("target correction must be finite and positive, got {0}")]
    TargetCorrection(f64),
    #[error("initial step must be finite and positive, got {0}")]
    InitialStep(f64),
    #[error("minimum step must be finite and non-negative, got {0}")]
    MinimumStep(f64),
    #[error("initial step {initial} is below the minimum step {minimum}")]
    InitialBelowMinimum { initial: f64, minimum: f64 },
    #[error("growth cap must exceed 1, got {0}")]
    GrowthCap(f64),
    #[error("max_steps must be positive")]
    MaxSteps,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HistoryError {
    #[error("abscissa {next} does not follow the most recent node at {last}")]
    NotIncreasing { last: f64, next: f64 },
    #[error("state dimension {got} does not match history dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("history capacity must be at least 1")]
    ZeroCapacity,
}

/// Why an integration stopped early.
#[derive(Debug, Error)]
pub enum IntegrationError<E: std::error::Error + 'static> {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("interpolation failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("history update failed: {0}")]
    History(#[from] HistoryError),
    #[error("initial state must be non-empty and finite")]
    InitialState,
    #[error("end point {x_end} does not lie ahead of the start {x0}")]
    EndBeforeStart { x0: f64, x_end: f64 },
    #[error("exceeded {0} steps")]
    MaxSteps(usize),
    #[error("non-finite state at x = {x}")]
    NonFinite { x: f64 },
    #[error("derivative evaluation failed at x = {x}: {source}")]
    Derivative {
        x: f64,
        #[source]
        source: E,
    },
    #[error("derivative returned dimension {got}, expected {expected}")]
    DerivativeDimension { expected: usize, got: usize },
}
