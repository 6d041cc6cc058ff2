//! Centralized tolerance constants.
//!
//! Structural checks (hermiticity residuals, trace normalization) use
//! [`STRUCTURAL`]; value comparisons between two computed quantities use
//! [`COMPARE`] unless an operation documents otherwise.

/// Hermiticity residual and trace-normalization tolerance for density
/// matrices and Hamiltonians.
pub const STRUCTURAL: f64 = 1e-9;

/// Default tolerance for comparing two computed values.
pub const COMPARE: f64 = 1e-10;

/// Target relative error for adaptive quadrature.
pub const QUAD_REL: f64 = 1e-9;

/// Absolute-error floor for adaptive quadrature near zeros of the integral,
/// where a relative target is meaningless.
pub const QUAD_ABS_FLOOR: f64 = 1e-12;

/// Most negative density-matrix eigenvalue accepted without a diagnostics
/// warning. The Redfield equation is not guaranteed positive; breaches beyond
/// this are reported with their parameters rather than silently accepted.
pub const POSITIVITY_WARN: f64 = 1e-6;

/// Maximum allowed |Tr rho - 1| drift over an integrator run.
pub const TRACE_DRIFT: f64 = 1e-8;

/// Slack allowed when asserting that an optimized survival probability
/// dominates the unoptimized one.
pub const DOMINANCE: f64 = 1e-12;
