//! Reference zeroth-order solvers used for comparison.
//!
//! All three cache `f(x_k)` from the previous iteration, so the per-iteration
//! query counts are: STP 2, Nesterov-Spokoiny 2, SPSA 3. Only STP is
//! monotone; the other two are judged by the oracle's best-seen value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{argmin, CountingOracle};
use crate::sampling::{DirectionSampler, SamplerKind};
use crate::solver::{Candidate, IterState, IterationReport, RunContext, Solver};
use crate::vecops::axpy;

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

/// Stochastic Three Points with step `alpha0 / sqrt(k + 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StpConfig {
    pub alpha0: f64,
    pub sampler: SamplerKind,
}

impl Default for StpConfig {
    fn default() -> Self {
        Self {
            alpha0: 1.0,
            sampler: SamplerKind::SphereUniform,
        }
    }
}

impl StpConfig {
    pub fn step_size(&self, k: u64) -> f64 {
        self.alpha0 / (k as f64 + 1.0).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        positive("alpha0", self.alpha0)
    }
}

/// `x_{k+1} = argmin{f(x), f(x + a u), f(x - a u)}`.
pub fn stp_step(
    state: &IterState,
    config: &StpConfig,
    sampler: &mut DirectionSampler,
    oracle: &mut CountingOracle<'_>,
) -> Result<(IterState, IterationReport)> {
    let start = oracle.count();
    let alpha = config.step_size(state.k);
    let u = sampler.next_direction(oracle, &state.x, alpha)?;
    let x_plus = axpy(&state.x, alpha, &u);
    let x_minus = axpy(&state.x, -alpha, &u);
    let f_plus = oracle.evaluate(&x_plus)?;
    let f_minus = oracle.evaluate(&x_minus)?;
    let candidates = vec![
        (Candidate::Current, state.fx),
        (Candidate::Plus, f_plus),
        (Candidate::Minus, f_minus),
    ];
    let values: Vec<f64> = candidates.iter().map(|c| c.1).collect();
    let best = argmin(&values);
    let x = match best {
        1 => x_plus,
        2 => x_minus,
        _ => state.x.clone(),
    };
    let report = IterationReport {
        queries: oracle.count() - start,
        radius: Some(alpha),
        differences: None,
        chosen: candidates[best].0,
        candidates,
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

impl Solver for StpConfig {
    fn name(&self) -> &str {
        "stp"
    }

    fn validate(&self) -> Result<()> {
        StpConfig::validate(self)
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
        stp_step(state, self, sampler, oracle)
    }
}

/// Gaussian random search with a forward difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NesterovConfig {
    /// Step size; `None` means `1 / (4 (d + 4))`.
    pub alpha: Option<f64>,
    /// Forward-difference radius.
    pub mu: f64,
    pub sampler: SamplerKind,
}

impl Default for NesterovConfig {
    fn default() -> Self {
        Self {
            alpha: None,
            mu: 1e-4,
            sampler: SamplerKind::Gaussian,
        }
    }
}

impl NesterovConfig {
    pub fn step_size(&self, dim: usize) -> f64 {
        self.alpha.unwrap_or(1.0 / (4.0 * (dim as f64 + 4.0)))
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(a) = self.alpha {
            positive("alpha", a)?;
        }
        positive("mu", self.mu)
    }
}

/// `x_{k+1} = x - alpha (f(x + mu u) - f(x)) / mu * u`, then `f(x_{k+1})`.
pub fn nesterov_spokoiny_step(
    state: &IterState,
    config: &NesterovConfig,
    sampler: &mut DirectionSampler,
    oracle: &mut CountingOracle<'_>,
) -> Result<(IterState, IterationReport)> {
    let start = oracle.count();
    let u = sampler.next_direction(oracle, &state.x, config.mu)?;
    let f_probe = oracle.evaluate(&axpy(&state.x, config.mu, &u))?;
    let slope = (f_probe - state.fx) / config.mu;
    let x = axpy(&state.x, -config.step_size(state.x.len()) * slope, &u);
    let fx = oracle.evaluate(&x)?;
    let report = IterationReport {
        queries: oracle.count() - start,
        radius: Some(config.mu),
        differences: None,
        candidates: vec![(Candidate::Plus, f_probe), (Candidate::Update, fx)],
        chosen: Candidate::Update,
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

impl Solver for NesterovConfig {
    fn name(&self) -> &str {
        "nesterov"
    }

    fn validate(&self) -> Result<()> {
        NesterovConfig::validate(self)
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
        nesterov_spokoiny_step(state, self, sampler, oracle)
    }
}

/// Simultaneous perturbation stochastic approximation with gains
/// `a_k = a / (A + k + 1)^alpha` and `c_k = c / (k + 1)^gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpsaConfig {
    pub a: f64,
    pub big_a: f64,
    pub alpha: f64,
    pub c: f64,
    pub gamma: f64,
    pub sampler: SamplerKind,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        Self {
            a: 0.16,
            big_a: 100.0,
            alpha: 0.602,
            c: 1e-4,
            gamma: 0.101,
            sampler: SamplerKind::Rademacher,
        }
    }
}

impl SpsaConfig {
    pub fn gain_a(&self, k: u64) -> f64 {
        self.a / (self.big_a + k as f64 + 1.0).powf(self.alpha)
    }

    pub fn gain_c(&self, k: u64) -> f64 {
        self.c / (k as f64 + 1.0).powf(self.gamma)
    }

    pub fn validate(&self) -> Result<()> {
        positive("a", self.a)?;
        positive("A", self.big_a)?;
        positive("alpha", self.alpha)?;
        positive("c", self.c)?;
        positive("gamma", self.gamma)
    }
}

/// SPSA gradient estimate `g_i = (f(x + c D) - f(x - c D)) / (2 c D_i)`.
pub fn spsa_gradient(f_plus: f64, f_minus: f64, c: f64, delta: &[f64]) -> Vec<f64> {
    let diff = f_plus - f_minus;
    delta.iter().map(|di| diff / (2.0 * c * di)).collect()
}

/// One SPSA iteration; three queries.
pub fn spsa_step(
    state: &IterState,
    config: &SpsaConfig,
    sampler: &mut DirectionSampler,
    oracle: &mut CountingOracle<'_>,
) -> Result<(IterState, IterationReport)> {
    let start = oracle.count();
    let ck = config.gain_c(state.k);
    let ak = config.gain_a(state.k);
    let delta = sampler.next_direction(oracle, &state.x, ck)?;
    let f_plus = oracle.evaluate(&axpy(&state.x, ck, &delta))?;
    let f_minus = oracle.evaluate(&axpy(&state.x, -ck, &delta))?;
    let g = spsa_gradient(f_plus, f_minus, ck, &delta);
    let x = axpy(&state.x, -ak, &g);
    let fx = oracle.evaluate(&x)?;
    let report = IterationReport {
        queries: oracle.count() - start,
        radius: Some(ck),
        differences: None,
        candidates: vec![
            (Candidate::Plus, f_plus),
            (Candidate::Minus, f_minus),
            (Candidate::Update, fx),
        ],
        chosen: Candidate::Update,
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

impl Solver for SpsaConfig {
    fn name(&self) -> &str {
        "spsa"
    }

    fn validate(&self) -> Result<()> {
        SpsaConfig::validate(self)
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
        spsa_step(state, self, sampler, oracle)
    }
}
