//! Holder-continuity constants, the scale-free sampling-radius limit and
//! the finite-difference error bounds they imply.
//!
//! For a Hessian that is `a`-Holder with constant `L_a`:
//!
//! ```text
//! C1 = ((a+1)(a+2) / (2^(1/2+a) L_a))^(1/(1+a))
//! C2 = ((a+1)(a+2) / (4(sqrt2+1) L_a))^(1/a)
//! C  = min(C1 (gamma sqrt(2 mu eps))^(1/(1+a)), C2 mu^(1/a))
//! |d_r - u'g|   <= (r||u|| / C1)^(1+a) ||u|| / (2 sqrt2)
//! |h_r - u'Hu|  <= (r||u|| / C2)^a ||u||^2 / (2 sqrt2 + 2)
//! ```

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vecops::{dot, norm};

/// Regularity constants of the objective used in theory mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderConstants {
    /// Holder exponent, in `(0, 1]`.
    pub a: f64,
    /// Holder constant of the Hessian.
    pub l_a: f64,
    /// Strong-convexity modulus.
    pub mu: f64,
    /// Target accuracy.
    pub epsilon: f64,
    /// Cone parameter, in `(0, 1]`.
    pub gamma: f64,
}

impl HolderConstants {
    pub fn validate(&self) -> Result<()> {
        let ok = self.a > 0.0
            && self.a <= 1.0
            && self.l_a > 0.0
            && self.mu > 0.0
            && self.epsilon > 0.0
            && self.gamma > 0.0
            && self.gamma <= 1.0
            && [self.a, self.l_a, self.mu, self.epsilon, self.gamma]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConstants(format!("{self:?}")))
        }
    }

    pub fn c1(&self) -> f64 {
        c1(self.a, self.l_a)
    }

    pub fn c2(&self) -> f64 {
        c2(self.a, self.l_a)
    }

    /// Scale-free sampling-radius limit `C`.
    pub fn radius_limit(&self) -> Result<f64> {
        self.validate()?;
        let a = self.a;
        let first =
            self.c1() * (self.gamma * (2.0 * self.mu * self.epsilon).sqrt()).powf(1.0 / (1.0 + a));
        let second = self.c2() * self.mu.powf(1.0 / a);
        Ok(first.min(second))
    }

    /// Whether `u` lies in the descent event `gamma ||u|| sqrt(2 mu eps) <= |u'g|`
    /// for the true gradient `g`. Offline diagnostic only.
    pub fn good_direction(&self, u: &[f64], g: &[f64]) -> bool {
        self.gamma * norm(u) * (2.0 * self.mu * self.epsilon).sqrt() <= dot(u, g).abs()
    }
}

pub fn c1(a: f64, l_a: f64) -> f64 {
    ((a + 1.0) * (a + 2.0) / (2f64.powf(0.5 + a) * l_a)).powf(1.0 / (1.0 + a))
}

pub fn c2(a: f64, l_a: f64) -> f64 {
    ((a + 1.0) * (a + 2.0) / (4.0 * (SQRT_2 + 1.0) * l_a)).powf(1.0 / a)
}

/// Upper bound on `|d_r - u'g|` at scale-free radius `r ||u||`.
pub fn derivative_error_bound(a: f64, l_a: f64, r: f64, u_norm: f64) -> f64 {
    (r * u_norm / c1(a, l_a)).powf(1.0 + a) * u_norm / (2.0 * SQRT_2)
}

/// Upper bound on `|h_r - u'Hu|` at scale-free radius `r ||u||`.
pub fn curvature_error_bound(a: f64, l_a: f64, r: f64, u_norm: f64) -> f64 {
    (r * u_norm / c2(a, l_a)).powf(a) * u_norm * u_norm / (2.0 * SQRT_2 + 2.0)
}
