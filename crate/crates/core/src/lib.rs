//! Exact symbolic-numeric engine for the asymptotic-expansion calculus of
//! degenerate blow-up for `∂_s v = 𝓛v + v²` in two-dimensional similarity
//! variables, where `𝓛 = Δ - (y/2)·∇ + 1` acts diagonally on products of
//! rescaled Hermite polynomials with eigenvalue `1 - (a+b)/2`.
//!
//! Module map:
//! - [`hermite`]: one-dimensional Hermite algebra (coefficients, translation,
//!   product linearization, structure constants).
//! - [`coeffs`]: exact multivariate polynomials in the named constants.
//! - [`series`]: formal series `coef·s^i·e^{(1-k/2)s}·h_a(y1)h_b(y2)` and the
//!   residual of the flow.
//! - [`expander`]: grade-by-grade construction of the expansion from a seed.
//! - [`recenter`]: recentering at a nearby point and the expanding-mode tables.
//! - [`regimes`]: form validation, exponent sets and the regime searches.
//! - [`galerkin`]: truncated mode-ODE integration and comparison with series.
//! - [`golden`]: the built-in reproduction suite.

pub mod coeffs;
pub mod error;
pub mod expander;
pub mod galerkin;
pub mod golden;
pub mod hermite;
pub mod rational;
pub mod recenter;
pub mod regimes;
pub mod series;

pub use coeffs::{Monomial, SymPoly, Symbol};
pub use error::{Error, Result};
pub use rational::Q;
