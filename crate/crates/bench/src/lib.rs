//! Shared fixtures for the criterion benchmarks.

use nlsl2_core::CharFunc;

/// Quadratic in the deep two-cycle window (delta = 4.4).
pub fn two_cycle_quadratic() -> CharFunc {
    CharFunc::quadratic(1.0, 1.0, 1.1).expect("t != 0")
}

/// Quadratic past the cascade (delta = 6.2, stable 4-cycle).
pub fn cascade_quadratic() -> CharFunc {
    CharFunc::quadratic(1.0, 1.0, 1.55).expect("t != 0")
}
