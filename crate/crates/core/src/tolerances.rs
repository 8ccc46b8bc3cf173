//! Shared numeric thresholds.
//!
//! Unit tests, the acceptance suite and the `verify` command all read their
//! tolerances from here so that a change in one place moves every check.

/// Largest power `n` accepted for kernel evaluation and closed-form norms.
pub const MAX_POWER: u32 = 50;

/// Largest power for which the polynomial pencil is solved in double precision.
pub const MAX_PENCIL_POWER: u32 = 12;

/// Largest polynomial degree produced by exact operator application.
pub const MAX_POLY_DEGREE: usize = 128;

/// Largest Nyström grid.
pub const MAX_GRID: usize = 8000;

/// Default Nyström grid for verification.
pub const DEFAULT_GRID: usize = 1000;

/// Relative size of the spurious real/imaginary part tolerated on a pencil root.
pub const PENCIL_CONTAMINATION: f64 = 1e-8;

/// Pencil roots below this fraction of the largest root are treated as zero.
pub const PENCIL_ZERO: f64 = 1e-13;

/// Residual bound for an exact polynomial eigenpair.
pub const PENCIL_RESIDUAL: f64 = 1e-8;

/// Roots closer than this (relative) are reported as one root of higher multiplicity.
pub const MULTIPLICITY_REL: f64 = 1e-9;

/// Default absolute residual tolerance of the transcendental root solver.
pub const ROOT_ABS_TOL: f64 = 1e-13;

/// Default iteration cap of the transcendental root solver.
pub const ROOT_MAX_ITER: usize = 200;

/// Bisection stops once the bracket is narrower than this; Newton takes over.
pub const BISECTION_WIDTH: f64 = 1e-6;

/// Offset from the poles of `cot` when bracketing roots of `cot t = -t`.
pub const COT_BRACKET_DELTA: f64 = 1e-9;

/// Residual required of every transcendental root.
pub const ROOT_RESIDUAL: f64 = 1e-12;

/// Absolute slack (times `max(1, upper)`) when sandwiching a discretized norm.
pub const SANDWICH_SLACK: f64 = 1e-3;

/// Slack separating a certified accretive matrix from a non-accretive one.
pub const ACCRETIVE_SLACK: f64 = 1e-6;

/// Points closer than this to the accretivity boundary are not required to agree.
pub const ACCRETIVE_BOUNDARY_BAND: f64 = 0.05;

/// Slack on the resolvent norm bound `‖(I + aV + bV²)⁻¹‖ ≤ 1`.
pub const RESOLVENT_SLACK: f64 = 1e-6;

/// Inflation of the numerical-range region of V when testing discretized points.
pub const BROWN_REGION_TOL: f64 = 2e-2;

/// Default number of samples on the numerical-range boundary curve of V.
pub const BROWN_CURVE_SAMPLES: usize = 2048;

/// Minimum curve resolution for membership tests.
pub const BROWN_MIN_SAMPLES: usize = 512;

/// Closed-form comparisons (pencil values, table entries, intervals).
pub const CLOSED_FORM_ABS: f64 = 1e-10;

/// Closed-form values sitting inside closed-form bounds.
pub const CLOSED_FORM_BOUND: f64 = 1e-12;

/// Algebraic identities between closed-form expressions.
pub const IDENTITY_ABS: f64 = 1e-15;

/// Discretized versus closed-form values on a 1000-cell grid.
pub const DISCRETIZED_REL: f64 = 1e-2;

/// Discretized versus analytic Im V spectrum.
pub const IMV_SPECTRUM_REL: f64 = 2e-2;

/// Quadrature of the double integral against its closed form.
pub const DOUBLE_INTEGRAL_REL: f64 = 1e-6;

/// Exact-polynomial Rayleigh probe against its closed form.
pub const RAYLEIGH_PROBE_ABS: f64 = 1e-12;

/// Discrete decomposition identity of the accretivity Rayleigh quotient.
pub const DECOMPOSITION_REL: f64 = 1e-8;
