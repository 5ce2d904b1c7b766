//! Central finite differences along a direction.

use crate::error::Result;
use crate::oracle::CountingOracle;
use crate::vecops::axpy;

/// Directional derivative and curvature estimates at `x` along `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Differences {
    /// `(f(x + r u) - f(x - r u)) / 2r`
    pub d: f64,
    /// `(f(x + r u) - 2 f(x) + f(x - r u)) / r^2`
    pub h: f64,
    pub f_plus: f64,
    pub f_minus: f64,
}

impl Differences {
    /// Builds the estimates from three already known function values.
    pub fn from_values(fx: f64, f_plus: f64, f_minus: f64, r: f64) -> Self {
        Self {
            d: (f_plus - f_minus) / (2.0 * r),
            h: (f_plus - 2.0 * fx + f_minus) / (r * r),
            f_plus,
            f_minus,
        }
    }
}

/// Queries `f(x + r u)` and `f(x - r u)` (two queries, in that order) and
/// combines them with the cached `fx = f(x)`.
pub fn central_differences(
    oracle: &mut CountingOracle<'_>,
    x: &[f64],
    fx: f64,
    u: &[f64],
    r: f64,
) -> Result<Differences> {
    debug_assert!(r > 0.0);
    let f_plus = oracle.evaluate(&axpy(x, r, u))?;
    let f_minus = oracle.evaluate(&axpy(x, -r, u))?;
    Ok(Differences::from_values(fx, f_plus, f_minus, r))
}
