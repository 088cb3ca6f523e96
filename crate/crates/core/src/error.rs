use thiserror::Error;

/// Errors produced by the surface model, controllers and simulation driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid surface configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid physics parameters: {0}")]
    InvalidPhysics(String),

    #[error("invalid control parameters: {0}")]
    InvalidControl(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error(
        "infeasible control input: actuator ({column}, {row}) would be at {height} m, outside [0, {stroke}] m"
    )]
    InfeasibleInput {
        column: usize,
        row: usize,
        height: f64,
        stroke: f64,
    },

    #[error("object position ({x}, {y}) lies outside the workspace")]
    OutsideWorkspace { x: f64, y: f64 },

    #[error("steady speed is unbounded without viscous friction (b = 0)")]
    NoFriction,

    #[error("parse error in {source_name}: {message}")]
    Parse {
        source_name: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
