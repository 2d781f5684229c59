//! Error type shared by every module of the engine.

use thiserror::Error;

/// Errors raised by the symbolic engine, the regime pipeline and the
/// Galerkin integrator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two series with different truncation orders were combined.
    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(u32, u32),

    /// A seed violates the profile-order contract (even `m >= 4`, non-zero).
    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    /// The requested truncation order is below the profile order.
    #[error("truncation order {requested} is below the profile order {m}")]
    OrderBelowSeed { requested: u32, m: u32 },

    /// A shift amplitude could not be parsed into the supported grammar.
    #[error("shift outside the supported grammar: {0}")]
    ShiftGrammar(String),

    /// A codominance group does not dominate the truncation remainder.
    #[error("group is dominated by the remainder floor; no constraint can be extracted")]
    DominatedByFloor,

    /// The multilinear form has only zero coefficients.
    #[error("the order-{0} form is identically zero")]
    ZeroForm(u32),

    /// The multilinear form takes positive values somewhere.
    #[error("the order-{0} form is not nonpositive")]
    NotNonpositive(u32),

    /// The form is valid but not normalized so that the x2-axis is degenerate.
    #[error("form not normalized: C[{m},{m}] and C[{m},{mm1}] must vanish", mm1 = .m - 1)]
    NotNormalized { m: u32 },

    /// The profile order is outside the range supported by an operation.
    #[error("unsupported profile order m={m}: {reason}")]
    UnsupportedOrder { m: u32, reason: String },

    /// A user-supplied truncation order cannot reach the remainder floor.
    #[error("truncation order {given} is insufficient; at least {needed} is required")]
    InsufficientOrder { given: u32, needed: u32 },

    /// A numerical evaluation met symbols that carry no value.
    #[error("unbound symbols: {0}")]
    Unbound(String),

    /// Integrator step or horizon is not admissible.
    #[error("invalid integration request: {0}")]
    InvalidIntegration(String),

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
