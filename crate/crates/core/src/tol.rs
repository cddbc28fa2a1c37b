//! Comparison tolerances.
//!
//! The model corpus contains irrational constants like √(2s), so all checks
//! are absolute-tolerance comparisons on f64 rather than exact arithmetic.

/// Default absolute tolerance for validity checks and identities.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default pass/fail tolerance for the string-equation residuals.
pub const STRING_EQ_TOL: f64 = 1e-8;
