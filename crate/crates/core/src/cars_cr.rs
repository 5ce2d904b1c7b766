//! CARS with cubic regularization.
//!
//! Along a unit direction `u` the step length minimizes the cubic model
//!
//! ```text
//! P(a; d, h) = d a + h a^2 / 2 + M |a|^3 / 6
//! ```
//!
//! whose global minimizer has the closed form
//! `phi(d, h) = -2d / (h + sqrt(h^2 + 2M|d|))`. This equals the CARS step
//! with the adaptive constant `L_k = 1/2 + sqrt(1/4 + M|d| / (2h^2))`.
//! Both `x + phi u` and `x - phi u` are queried and the best of five points
//! is kept, so an iteration costs exactly four queries.

use serde::{Deserialize, Serialize};

use crate::cars::MAX_STEP_NORM;
use crate::error::{Error, Result};
use crate::finite_diff::central_differences;
use crate::oracle::{argmin, CountingOracle};
use crate::problems::Problem;
use crate::sampling::{DirectionSampler, SamplerKind};
use crate::solver::{
    minimize, Candidate, IterState, IterationReport, RunContext, RunOutput, Solver, StopRule,
};
use crate::vecops::{axpy, norm};

/// `P(alpha; d, h) = d alpha + h alpha^2 / 2 + M |alpha|^3 / 6`.
pub fn cubic_model(alpha: f64, d: f64, h: f64, m: f64) -> f64 {
    d * alpha + 0.5 * h * alpha * alpha + m / 6.0 * alpha.abs().powi(3)
}

/// Global minimizer of [`cubic_model`] for `h >= 0`, `M > 0`.
///
/// Written as `-2d / (h + sqrt(h^2 + 2M|d|))`, which has no cancellation
/// for small `M|d|` and stays defined at `h = 0`.
pub fn cubic_minimizer_phi(d: f64, h: f64, m: f64) -> f64 {
    debug_assert!(h >= 0.0 && m > 0.0);
    if d == 0.0 {
        return 0.0;
    }
    -2.0 * d / (h + (h * h + 2.0 * m * d.abs()).sqrt())
}

/// Adaptive relative-smoothness constant `1/2 + sqrt(1/4 + M|d| / (2 h^2))`.
pub fn adaptive_l_hat(d: f64, h: f64, m: f64) -> Result<f64> {
    if h == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    if !(h > 0.0) {
        return Err(Error::NonpositiveCurvature(h));
    }
    Ok(0.5 + (0.25 + m * d.abs() / (2.0 * h * h)).sqrt())
}

/// Sampling-radius schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CrRadius {
    /// `r_k = min(rho sqrt(eps) / sqrt(k + 2), R)` with `rho = R / sqrt(2B)`.
    ///
    /// When `b` is `None` it is estimated at run start as
    /// `max(L R^2, M R^3, f(x0) - f_star)`, using whichever of `L`
    /// (`smoothness`) and `f_star` are known; without `f_star`, `|f(x0)|`
    /// stands in for the initial gap.
    Schedule {
        epsilon: f64,
        r_max: f64,
        b: Option<f64>,
        smoothness: Option<f64>,
    },
    /// `r_k = c0 / (k + 2)`.
    Decreasing { c0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarsCrConfig {
    /// Hessian Lipschitz constant of the cubic model.
    pub m: f64,
    pub radius: CrRadius,
    /// Directions are normalized to unit length whatever the kind.
    pub sampler: SamplerKind,
}

impl Default for CarsCrConfig {
    /// `M = 2`, `r_k = 0.5 / (k + 2)`, uniform sphere directions.
    fn default() -> Self {
        Self {
            m: 2.0,
            radius: CrRadius::Decreasing { c0: 0.5 },
            sampler: SamplerKind::SphereUniform,
        }
    }
}

/// `max(L R^2, M R^3, gap)` over the known terms.
pub fn estimate_b(
    smoothness: Option<f64>,
    m: f64,
    r_max: f64,
    f0: f64,
    f_star: Option<f64>,
) -> f64 {
    let gap = match f_star {
        Some(fs) => f0 - fs,
        None => f0.abs(),
    };
    let mut b = m * r_max.powi(3);
    if let Some(l) = smoothness {
        b = b.max(l * r_max * r_max);
    }
    if gap.is_finite() {
        b = b.max(gap);
    }
    b
}

impl CarsCrConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.m) {
            return Err(Error::InvalidConfig(format!(
                "M must be positive, got {}",
                self.m
            )));
        }
        let ok = match self.radius {
            CrRadius::Decreasing { c0 } => positive(c0),
            CrRadius::Schedule {
                epsilon,
                r_max,
                b,
                smoothness,
            } => {
                positive(epsilon)
                    && positive(r_max)
                    && b.is_none_or(positive)
                    && smoothness.is_none_or(positive)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "invalid radius schedule {:?}",
                self.radius
            )))
        }
    }

    /// Sampling radius at iteration `k` (directions have unit norm).
    pub fn radius_at(&self, k: u64, ctx: &RunContext) -> f64 {
        match self.radius {
            CrRadius::Decreasing { c0 } => c0 / (k as f64 + 2.0),
            CrRadius::Schedule {
                epsilon,
                r_max,
                b,
                smoothness,
            } => {
                let b =
                    b.unwrap_or_else(|| estimate_b(smoothness, self.m, r_max, ctx.f0, ctx.f_star));
                let rho = r_max / (2.0 * b).sqrt();
                (rho * epsilon.sqrt() / (k as f64 + 2.0).sqrt()).min(r_max)
            }
        }
    }
}

/// One CARS-CR iteration.
pub fn cr_step(
    state: &IterState,
    ctx: &RunContext,
    config: &CarsCrConfig,
    sampler: &mut DirectionSampler,
    oracle: &mut CountingOracle<'_>,
) -> Result<(IterState, IterationReport)> {
    let start = oracle.count();
    let r = config.radius_at(state.k, ctx);
    let u = sampler.next_direction(oracle, &state.x, r)?;
    let u_norm = norm(&u);
    if !(u_norm > 0.0 && u_norm.is_finite()) {
        let next = IterState {
            k: state.k + 1,
            ..state.clone()
        };
        let report = IterationReport {
            queries: oracle.count() - start,
            radius: None,
            differences: None,
            candidates: vec![(Candidate::Current, state.fx)],
            chosen: Candidate::Current,
        };
        return Ok((next, report));
    }
    let diffs = central_differences(oracle, &state.x, state.fx, &u, r)?;
    // Nonconvex objectives can give h < 0; the model needs h >= 0.
    let h = diffs.h.max(0.0);
    let cap = MAX_STEP_NORM / u_norm;
    let phi = cubic_minimizer_phi(diffs.d, h, config.m);
    let phi = if phi.is_finite() {
        phi.clamp(-cap, cap)
    } else {
        0.0
    };

    let x_plus = axpy(&state.x, phi, &u);
    let x_minus = axpy(&state.x, -phi, &u);
    let f_plus_step = oracle.evaluate(&x_plus)?;
    let f_minus_step = oracle.evaluate(&x_minus)?;

    let candidates = vec![
        (Candidate::NewtonPlus, f_plus_step),
        (Candidate::NewtonMinus, f_minus_step),
        (Candidate::Current, state.fx),
        (Candidate::Minus, diffs.f_minus),
        (Candidate::Plus, diffs.f_plus),
    ];
    let values: Vec<f64> = candidates.iter().map(|c| c.1).collect();
    let best = argmin(&values);
    let chosen = candidates[best].0;
    let x = match chosen {
        Candidate::NewtonPlus => x_plus,
        Candidate::NewtonMinus => x_minus,
        Candidate::Minus => axpy(&state.x, -r, &u),
        Candidate::Plus => axpy(&state.x, r, &u),
        _ => state.x.clone(),
    };
    let report = IterationReport {
        queries: oracle.count() - start,
        radius: Some(r),
        differences: Some(diffs),
        candidates,
        chosen,
    };
    Ok((
        IterState {
            k: state.k + 1,
            x,
            fx: values[best],
        },
        report,
    ))
}

impl Solver for CarsCrConfig {
    fn name(&self) -> &str {
        "cars-cr"
    }

    fn validate(&self) -> Result<()> {
        CarsCrConfig::validate(self)
    }

    fn sampler(&self, dim: usize, seed: u64) -> DirectionSampler {
        DirectionSampler::new(self.sampler.clone(), dim, seed).normalized()
    }

    fn step(
        &self,
        state: &IterState,
        ctx: &RunContext,
        sampler: &mut DirectionSampler,
        oracle: &mut CountingOracle<'_>,
    ) -> Result<(IterState, IterationReport)> {
        cr_step(state, ctx, self, sampler, oracle)
    }
}

/// Runs CARS-CR on `problem` from its recommended start.
pub fn run_cars_cr(
    problem: &Problem,
    config: &CarsCrConfig,
    stop: &StopRule,
    seed: u64,
) -> Result<RunOutput> {
    minimize(
        config,
        problem.objective(),
        &problem.x0,
        problem.f_star,
        stop,
        seed,
        |_, _| {},
    )
}
