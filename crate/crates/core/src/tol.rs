//! Centralized numerical tolerances.
//!
//! Worked reference values in the source material carry six significant
//! digits; these thresholds leave comfortable margin below that while staying
//! well above f64 rounding noise.

/// Polished roots must satisfy |g(x)| below this (scaled by 1 + |x|).
pub const ROOT_RESIDUAL: f64 = 1e-12;

/// Residual at which a cut or cycle termination is accepted.
pub const TERMINATION: f64 = 1e-8;

/// Two cycle points closer than this are considered aliased.
pub const CYCLE_DISTINCT: f64 = 1e-8;

/// Half-width of the marginal-stability band around |multiplier| = 1.
pub const MARGINAL_BAND: f64 = 1e-8;

/// Roots of the cut equation closer than this are merged (tangency guard).
pub const DUPLICATE_ROOT: f64 = 1e-7;

/// N_m^2 above -UNITARY makes a ladder entry acceptable as unitary.
pub const UNITARY: f64 = 1e-8;

/// Default pass threshold for relation residuals (dimension-normalized).
pub const RELATION_PASS: f64 = 1e-8;

/// Ladder chain consistency |alphas[m+1] - f(alphas[m])|.
pub const LADDER_CHAIN: f64 = 1e-10;

/// Iterates whose magnitude exceeds this are treated as divergent.
pub const DIVERGENCE_GUARD: f64 = 1e12;

/// Upper end of the fallback search interval for cut solutions.
pub const DEFAULT_SEARCH_HI: f64 = 1e3;

/// Largest cycle period the quadratic root-isolation machinery accepts.
/// f^d(x) - x has degree 2^d; past this the scan grid becomes unreasonable.
pub const PERIOD_CAP: usize = 10;
