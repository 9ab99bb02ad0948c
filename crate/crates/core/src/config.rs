//! Numerical tolerances shared across modules.

use crate::scalar::Real;

/// Solver and quadrature tolerances. Relative entries scale with the
/// interval length or the magnitude of the quantity they guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// |f(a)| at or below this counts as f(a) = 0.
    pub base_zero: T,
    /// Adaptive-oracle relative target.
    pub oracle_rel: T,
    /// Adaptive-oracle absolute target.
    pub oracle_abs: T,
    /// Root residual relative to the sup of the scanned function.
    pub root_rel: T,
    /// Final bracket width relative to the scanned interval (critical points).
    pub bracket_rel: T,
    /// Final bracket width relative to `x - a` for mean values.
    pub mean_bracket_rel: T,
    /// Property (P) offset tolerance relative to the window length.
    pub offset_rel: T,
    /// Threshold below which a residual counts as zero in equivalence checks.
    pub identity_zero: T,
    /// Downgrades the f(a) = 0 requirement to Caputo semantics.
    pub allow_nonzero_base: bool,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            base_zero: T::lit(1e-12).max(T::lit(16.0) * eps),
            oracle_rel: T::lit(1e-12).max(T::lit(100.0) * eps),
            oracle_abs: T::lit(1e-14).max(eps * eps),
            root_rel: T::lit(1e-8).max(T::lit(16.0) * eps),
            bracket_rel: T::lit(1e-10).max(T::lit(4.0) * eps),
            mean_bracket_rel: T::lit(1e-12).max(T::lit(4.0) * eps),
            offset_rel: T::lit(1e-6).max(T::lit(64.0) * eps),
            identity_zero: T::lit(1e-6).max(T::lit(64.0) * eps),
            allow_nonzero_base: false,
        }
    }
}
