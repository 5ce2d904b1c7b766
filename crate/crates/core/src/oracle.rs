//! Black-box objective access with exact query accounting.
//!
//! Every function value a solver sees passes through a [`CountingOracle`],
//! which counts queries, enforces the budget and keeps the best point seen.
//! The log of strict improvements it records is what the benchmark harness
//! uses to compute queries-to-accuracy exactly.

use std::sync::Arc;

use crate::error::{Error, Result};

/// A deterministic scalar objective on `R^dim`.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

impl<T: Objective + ?Sized> Objective for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

/// Adapts a closure into an [`Objective`].
#[derive(Clone)]
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// Strict improvement test. Non-finite values (NaN, +inf, -inf) rank below
/// every finite value and never improve on anything.
#[inline]
pub fn is_better(candidate: f64, incumbent: f64) -> bool {
    candidate.is_finite() && (!incumbent.is_finite() || candidate < incumbent)
}

/// Index of the smallest value under [`is_better`]; ties keep the earliest.
pub fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if is_better(v, values[best]) {
            best = i;
        }
    }
    best
}

/// Query-counting wrapper around an [`Objective`].
pub struct CountingOracle<'a> {
    objective: &'a dyn Objective,
    count: u64,
    budget: Option<u64>,
    best: Option<(Vec<f64>, f64)>,
    improvements: Vec<(u64, f64)>,
}

impl<'a> CountingOracle<'a> {
    /// An oracle with no query budget.
    pub fn new(objective: &'a dyn Objective) -> Self {
        Self {
            objective,
            count: 0,
            budget: None,
            best: None,
            improvements: Vec::new(),
        }
    }

    pub fn with_budget(objective: &'a dyn Objective, budget: u64) -> Self {
        Self {
            budget: Some(budget),
            ..Self::new(objective)
        }
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    /// Number of queries served so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    /// Queries left before [`Error::BudgetExhausted`], `None` if unlimited.
    pub fn remaining(&self) -> Option<u64> {
        self.budget.map(|b| b - self.count)
    }

    /// Evaluates the objective at `x`, charging one query.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        if let Some(budget) = self.budget {
            if self.count >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
        }
        let value = self.objective.eval(x);
        self.count += 1;
        let improved = match &self.best {
            None => true,
            Some((_, best)) => is_better(value, *best),
        };
        if improved {
            self.best = Some((x.to_vec(), value));
            self.improvements.push((self.count, value));
        }
        Ok(value)
    }

    /// The best point and value over all queries served.
    pub fn best_seen(&self) -> Result<(&[f64], f64)> {
        self.best
            .as_ref()
            .map(|(x, v)| (x.as_slice(), *v))
            .ok_or(Error::NoQueriesYet)
    }

    /// `(query count, best value)` at every strict improvement of the
    /// best-seen value, starting with the first query.
    pub fn improvements(&self) -> &[(u64, f64)] {
        &self.improvements
    }
}
