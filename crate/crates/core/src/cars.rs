//! Curvature-Aware Random Search.
//!
//! Each iteration samples a direction `u`, estimates the directional
//! derivative `d_r` and curvature `h_r` with central differences at radius
//! `r`, and proposes the damped one-dimensional Newton point
//!
//! ```text
//! x_cars = x - d_r / (L_hat * h_r) * u
//! ```
//!
//! The next iterate is the best of `x_cars`, `x`, `x - r u` and `x + r u`,
//! so the objective never increases. A full iteration costs three queries,
//! two when the curvature estimate is not positive and the Newton point is
//! skipped.
//!
//! The method only depends on the product `r * ||u||`, so the radius rules
//! below are expressed in that scale-free form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_diff::{central_differences, Differences};
use crate::holder::HolderConstants;
use crate::oracle::{argmin, CountingOracle};
use crate::problems::Problem;
use crate::sampling::{DirectionSampler, SamplerKind};
use crate::solver::{
    minimize, Candidate, IterState, IterationReport, RunContext, RunOutput, Solver, StopRule,
};
use crate::vecops::{axpy, norm};

/// Largest step length `||x_cars - x||` ever proposed.
pub const MAX_STEP_NORM: f64 = 1e12;

/// How the sampling radius is chosen after drawing `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RadiusRule {
    /// `r ||u|| = c`, with `c` typically from [`HolderConstants::radius_limit`].
    FixedLimit { c: f64 },
    /// `r ||u|| = c0 / (k + 2)`.
    Decreasing { c0: f64 },
}

impl RadiusRule {
    /// Scale-free radius `r ||u||` at iteration `k`.
    pub fn scale_free(&self, k: u64) -> f64 {
        match *self {
            RadiusRule::FixedLimit { c } => c,
            RadiusRule::Decreasing { c0 } => c0 / (k as f64 + 2.0),
        }
    }

    pub fn radius(&self, k: u64, u_norm: f64) -> f64 {
        self.scale_free(k) / u_norm
    }

    fn validate(&self) -> Result<()> {
        let v = match *self {
            RadiusRule::FixedLimit { c } => c,
            RadiusRule::Decreasing { c0 } => c0,
        };
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "radius constant must be positive, got {v}"
            )))
        }
    }
}

/// What to do when the curvature estimate is not positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvaturePolicy {
    /// Skip the Newton candidate and save its query.
    SkipNonpositive,
    /// Evaluate the (capped) Newton candidate anyway.
    AlwaysAttempt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarsConfig {
    /// Relative smoothness parameter; the Newton step is divided by it.
    pub l_hat: f64,
    pub radius: RadiusRule,
    pub sampler: SamplerKind,
    pub curvature: CurvaturePolicy,
}

impl Default for CarsConfig {
    /// `L_hat = 2`, `r_k = 0.5 / (k + 2)`, uniform sphere directions.
    fn default() -> Self {
        Self {
            l_hat: 2.0,
            radius: RadiusRule::Decreasing { c0: 0.5 },
            sampler: SamplerKind::SphereUniform,
            curvature: CurvaturePolicy::SkipNonpositive,
        }
    }
}

impl CarsConfig {
    /// Theory-mode configuration: radius fixed at the limit `C` from `hc`.
    pub fn theory(hc: &HolderConstants, l_hat: f64) -> Result<Self> {
        Ok(Self {
            l_hat,
            radius: RadiusRule::FixedLimit {
                c: hc.radius_limit()?,
            },
            ..Self::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l_hat > 0.0 && self.l_hat.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "L_hat must be positive, got {}",
                self.l_hat
            )));
        }
        self.radius.validate()
    }
}

/// Signed step length `t` of `x + t u` for the damped Newton candidate,
/// capped so that `|t| ||u|| <= MAX_STEP_NORM`.
pub fn newton_step_length(
    d: f64,
    h: f64,
    l_hat: f64,
    u_norm: f64,
    policy: CurvaturePolicy,
) -> Result<f64> {
    if !(h > 0.0) && policy == CurvaturePolicy::SkipNonpositive {
        return Err(Error::NonpositiveCurvature(h));
    }
    let t = -d / (l_hat * h);
    let cap = MAX_STEP_NORM / u_norm;
    Ok(if t.is_nan() { 0.0 } else { t.clamp(-cap, cap) })
}

/// `x - d / (L_hat h) u`, no queries.
pub fn cars_candidate(
    x: &[f64],
    u: &[f64],
    d: f64,
    h: f64,
    l_hat: f64,
    policy: CurvaturePolicy,
) -> Result<Vec<f64>> {
    let t = newton_step_length(d, h, l_hat, norm(u), policy)?;
    Ok(axpy(x, t, u))
}

/// One CARS iteration.
pub fn cars_step(
    state: &IterState,
    config: &CarsConfig,
    sampler: &mut DirectionSampler,
    oracle: &mut CountingOracle<'_>,
) -> Result<(IterState, IterationReport)> {
    let start = oracle.count();
    let u = sampler.next_direction(oracle, &state.x, config.radius.scale_free(state.k))?;
    let u_norm = norm(&u);
    if !(u_norm > 0.0 && u_norm.is_finite()) {
        // Degenerate direction: nothing to probe.
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
    let r = config.radius.radius(state.k, u_norm);
    let diffs = central_differences(oracle, &state.x, state.fx, &u, r)?;
    let Differences {
        d,
        h,
        f_plus,
        f_minus,
    } = diffs;

    let mut points: Vec<(Candidate, Option<Vec<f64>>, f64)> = Vec::with_capacity(4);
    if let Ok(xc) = cars_candidate(&state.x, &u, d, h, config.l_hat, config.curvature) {
        let fc = oracle.evaluate(&xc)?;
        points.push((Candidate::Newton, Some(xc), fc));
    }
    points.push((Candidate::Current, None, state.fx));
    points.push((Candidate::Minus, None, f_minus));
    points.push((Candidate::Plus, None, f_plus));

    let candidates: Vec<(Candidate, f64)> = points.iter().map(|p| (p.0, p.2)).collect();
    let values: Vec<f64> = points.iter().map(|p| p.2).collect();
    let (chosen, point, fx) = points.swap_remove(argmin(&values));
    let x = match (chosen, point) {
        (_, Some(x)) => x,
        (Candidate::Minus, None) => axpy(&state.x, -r, &u),
        (Candidate::Plus, None) => axpy(&state.x, r, &u),
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
            fx,
        },
        report,
    ))
}

impl Solver for CarsConfig {
    fn name(&self) -> &str {
        "cars"
    }

    fn validate(&self) -> Result<()> {
        CarsConfig::validate(self)
    }

    fn sampler(&self, dim: usize, seed: u64) -> DirectionSampler {
        DirectionSampler::new(self.sampler.clone(), dim, seed)
    }

    fn step(
        &self,
        state: &IterState,
        _ctx: &RunContext,
        sampler: &mut DirectionSampler,
        oracle: &mut CountingOracle<'_>,
    ) -> Result<(IterState, IterationReport)> {
        cars_step(state, self, sampler, oracle)
    }
}

/// Runs CARS on `problem` from its recommended start.
pub fn run_cars(
    problem: &Problem,
    config: &CarsConfig,
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
