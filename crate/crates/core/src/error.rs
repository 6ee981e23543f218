use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("adjacency entry ({row}, {col}) is {value}, expected 0 or 1")]
    NonBinary { row: usize, col: usize, value: i64 },

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("invalid perturbation at ({row}, {col}): {reason}")]
    Perturbation {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("condition (A1) violated: frequencies differ within a cluster")]
    A1Violated,

    #[error("condition (A2) violated: incoming inter-cluster counts differ within a cluster")]
    A2Violated,

    #[error(
        "vector field on the torus is not separated from zero (w_min - mu*delta*c_max/gamma = {0})"
    )]
    NotSeparated(f64),

    #[error("existence conditions do not hold: {0}")]
    ConditionsFailed(String),

    #[error("state became non-finite; last valid time {last_valid_time}")]
    NonFinite { last_valid_time: f64 },

    #[error("torus iteration did not converge within {iterations} iterations (last difference {last_difference:e})")]
    NoConvergence {
        iterations: usize,
        last_difference: f64,
    },

    #[error("trajectory error: {0}")]
    Trajectory(String),

    #[error("topology search exhausted: {0}")]
    SearchExhausted(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
