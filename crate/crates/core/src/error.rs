//! Error type shared by all engine modules.

use thiserror::Error;

/// Errors reported by the representation engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A characteristic function failed its well-formedness checks.
    #[error("invalid characteristic function: {0}")]
    InvalidFunction(String),

    /// An input value lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Iteration escaped the divergence guard.
    #[error("iteration diverged at step {step} (|x| = {magnitude:.3e})")]
    Diverged { step: usize, magnitude: f64 },

    /// A stated precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Root isolation could not refine a bracket to the required residual.
    #[error("root isolation failed on [{lo}, {hi}]: {detail}")]
    RootIsolation { lo: f64, hi: f64, detail: String },

    /// The equation being solved is degenerate (identically zero).
    #[error("degenerate equation: {0}")]
    Degenerate(String),

    /// Unitary construction requested on a ladder with a negative N_m^2.
    #[error("non-unitary ladder: nsq[{index}] = {value:.6e} < 0")]
    NonUnitary { index: usize, value: f64 },

    /// Matrix dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The operation is not defined for this function kind.
    #[error("unsupported function kind: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
