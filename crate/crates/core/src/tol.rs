//! Numerical tolerances shared across modules.

/// Amplitudes below this modulus are skipped when fixing the phase gauge.
pub const GAUGE: f64 = 1e-12;
/// Two lines are equal when their quantum angle is below this.
pub const LINE_EQ: f64 = 1e-9;
/// Third singular value threshold for collinearity.
pub const COLLINEAR: f64 = 1e-9;
/// Smallest vector norm accepted by `canonical_line`.
pub const MIN_NORM: f64 = 1e-9;
/// Boundary band for the Zero/One/Infinite classification.
pub const CARDINALITY: f64 = 1e-9;
/// Matching tolerance for the exceptional parameter triples.
pub const EXCEPTIONAL: f64 = 1e-12;
/// Margin for floating comparisons in the three-dimensional case split.
pub const CASE_MARGIN: f64 = 1e-10;
/// Orthonormality tolerance for user-supplied bases.
pub const ORTHONORMAL: f64 = 1e-10;
/// Tolerance on c^2 + d^2 = 1 for user-supplied parameters.
pub const PARAM_NORM: f64 = 1e-10;
/// Residual accepted by the local refinement as a confirmed member.
pub const CONFIRM: f64 = 1e-7;
/// Default rejection tolerance for raw cloud discovery.
pub const DISCOVERY: f64 = 1e-3;
