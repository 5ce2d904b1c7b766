//! The iteration interface shared by all solvers and the run driver.

use crate::error::{Error, Result};
use crate::finite_diff::Differences;
use crate::oracle::{CountingOracle, Objective};
use crate::sampling::DirectionSampler;

/// Current iterate and its cached function value.
#[derive(Debug, Clone, PartialEq)]
pub struct IterState {
    pub k: u64,
    pub x: Vec<f64>,
    pub fx: f64,
}

/// Which point a candidate value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Candidate {
    /// Curvature-aware step `x - d_r / (L_hat h_r) u`.
    Newton,
    /// Cubic-regularized steps `x -/+ phi u`; `NewtonPlus` is the descent one.
    NewtonPlus,
    NewtonMinus,
    Current,
    Minus,
    Plus,
    /// Unsafeguarded update (Nesterov-Spokoiny, SPSA).
    Update,
}

/// What happened in one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    /// Oracle queries consumed by the iteration.
    pub queries: u64,
    pub radius: Option<f64>,
    pub differences: Option<Differences>,
    /// Every candidate value considered, in the order they are compared.
    pub candidates: Vec<(Candidate, f64)>,
    pub chosen: Candidate,
}

/// Per-run facts a solver may use, fixed after `f(x0)` is queried.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunContext {
    pub f0: f64,
    pub f_star: Option<f64>,
}

/// A zeroth-order method expressed as a single iteration.
pub trait Solver: Send + Sync {
    /// Stable identifier, e.g. `cars`.
    fn name(&self) -> &str;

    /// Rejects parameter values the method cannot run with.
    fn validate(&self) -> Result<()> {
        Ok(())
    }

    /// Direction sampler for a run seeded with `seed`.
    fn sampler(&self, dim: usize, seed: u64) -> DirectionSampler;

    /// Performs iteration `state.k`. On error the state is left unchanged,
    /// although queries already served stay charged.
    fn step(
        &self,
        state: &IterState,
        ctx: &RunContext,
        sampler: &mut DirectionSampler,
        oracle: &mut CountingOracle<'_>,
    ) -> Result<(IterState, IterationReport)>;
}

/// Early-termination target for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    None,
    /// Stop once the best value seen is at or below this.
    Value(f64),
    /// Stop once `best - f_star <= eps (f(x0) - f_star)`.
    RelativeGap {
        f_star: f64,
        eps: f64,
    },
}

impl Target {
    fn threshold(&self, f0: f64) -> Option<f64> {
        match *self {
            Target::None => None,
            Target::Value(v) => Some(v),
            Target::RelativeGap { f_star, eps } => Some(f_star + eps * (f0 - f_star)),
        }
    }
}

/// When a run ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub max_queries: u64,
    pub target: Target,
}

impl StopRule {
    pub fn budget(max_queries: u64) -> Self {
        Self {
            max_queries,
            target: Target::None,
        }
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }
}

/// Outcome of [`minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub final_state: IterState,
    pub iterations: u64,
    pub queries_used: u64,
    pub best_x: Vec<f64>,
    pub best_value: f64,
    pub f0: f64,
    /// `(query, best value)` at each strict improvement.
    pub improvements: Vec<(u64, f64)>,
}

/// Runs `solver` from `x0`, charging `f(x0)` as the first query, until the
/// budget is spent or the target is met. `observe` sees every completed
/// iteration.
pub fn minimize(
    solver: &dyn Solver,
    objective: &dyn Objective,
    x0: &[f64],
    f_star: Option<f64>,
    stop: &StopRule,
    seed: u64,
    mut observe: impl FnMut(&IterState, &IterationReport),
) -> Result<RunOutput> {
    solver.validate()?;
    let mut oracle = CountingOracle::with_budget(objective, stop.max_queries);
    let f0 = oracle.evaluate(x0)?;
    let ctx = RunContext { f0, f_star };
    let mut sampler = solver.sampler(x0.len(), seed);
    let mut state = IterState {
        k: 0,
        x: x0.to_vec(),
        fx: f0,
    };
    let threshold = stop.target.threshold(f0);
    loop {
        let best = oracle.best_seen()?.1;
        if threshold.is_some_and(|t| best - t <= 0.0) {
            break;
        }
        match solver.step(&state, &ctx, &mut sampler, &mut oracle) {
            Ok((next, report)) => {
                observe(&next, &report);
                let stalled = report.queries == 0 || next.x.iter().any(|v| !v.is_finite());
                state = next;
                if stalled {
                    break;
                }
            }
            Err(Error::BudgetExhausted { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let (best_x, best_value) = oracle.best_seen()?;
    Ok(RunOutput {
        iterations: state.k,
        final_state: state,
        queries_used: oracle.count(),
        best_x: best_x.to_vec(),
        best_value,
        f0,
        improvements: oracle.improvements().to_vec(),
    })
}
