//! Crate-wide error type.

use crate::positioning::PositionEstimate;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced by geometry, simulation, estimation and campaign code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value or combination of values violates an operation's contract.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration failed validation before any work was done.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// The capture window does not lie inside the arriving chirp for the
    /// given geometry, so no range estimate is possible.
    #[error(
        "infeasible capture: window [{window_start_s}, {window_end_s}] s does not lie inside \
         the chirp arriving after {arrival_s} s"
    )]
    InfeasibleCapture {
        window_start_s: f64,
        window_end_s: f64,
        arrival_s: f64,
    },

    /// The captured window carries no signal at all.
    #[error("no correlation peak: captured window is identically zero")]
    NoPeak,

    /// Fewer anchors than unknowns.
    #[error("underdetermined: need at least 4 anchors, got {have}")]
    Underdetermined { have: usize },

    /// The anchor geometry matrix is rank deficient; the closed-form linear
    /// estimate is attached so callers can still inspect it.
    #[error("degenerate anchor geometry (condition number {condition:.3e})")]
    DegenerateGeometry {
        condition: f64,
        linear: PositionEstimate,
    },

    /// A statistical fit was left with no usable samples.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// An exhaustive search was refused because it would exceed its budget.
    #[error("search budget exceeded: {combinations} combinations > budget {budget}")]
    BudgetExceeded { combinations: u128, budget: u128 },

    /// The optimizer could not produce any feasible solution.
    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse config: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error("failed to parse artifact: {0}")]
    ArtifactParse(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
