//! Benchmark grids, queries-to-accuracy and performance profiles.
//!
//! A problem counts as solved at accuracy `eps` at the first query where
//! `best - f_star <= eps (f(x0) - f_star)`. Each `(problem, seed)` pair is one
//! profile instance; a solver's ratio on an instance is its query count over
//! the best count among solvers, or [`UNSOLVED_RATIO`] if it never got there.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::record::{RunRecord, TargetCount, TracePoint, RECORD_VERSION};
use crate::sampling::{derive_seed, stream_id};
use crate::solver::{minimize, Solver, StopRule, Target};

pub const UNSOLVED_RATIO: f64 = 1e20;
pub const DEFAULT_BUDGET: u64 = 20_000;
pub const DEFAULT_EPS: [f64; 3] = [1e-1, 1e-3, 1e-5];
pub const DEFAULT_SEEDS: u64 = 10;

/// Spacing of the stored trace in query count.
const TRACE_RATIO: f64 = 1.2;

/// First query at which the improvement log reaches accuracy `eps`.
///
/// `improvements` holds `(query, best value)` at each strict improvement, as
/// logged by [`CountingOracle`](crate::oracle::CountingOracle).
pub fn solved_query_count(
    improvements: &[(u64, f64)],
    f0: f64,
    f_star: f64,
    eps: f64,
) -> Result<Option<u64>> {
    if !(f0 > f_star) {
        return Err(Error::InvalidTargets { f0, f_star });
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    let threshold = eps * (f0 - f_star);
    Ok(improvements
        .iter()
        .find(|&&(_, v)| v - f_star <= threshold)
        .map(|&(q, _)| q))
}

/// Seed of the `(problem, seed)` instance under a master seed. Solvers share
/// it, so they see the same random stream on the same instance.
pub fn instance_seed(master: u64, problem: &str, seed: u64) -> u64 {
    derive_seed(derive_seed(master, stream_id(problem)), seed)
}

/// One run with master seed 0. Stops once the smallest `eps` is reached.
pub fn run_one(
    problem: &Problem,
    solver: &dyn Solver,
    seed: u64,
    budget: u64,
    eps_list: &[f64],
) -> Result<RunRecord> {
    run_instance(problem, solver, 0, seed, budget, eps_list)
}

pub fn run_instance(
    problem: &Problem,
    solver: &dyn Solver,
    master_seed: u64,
    seed: u64,
    budget: u64,
    eps_list: &[f64],
) -> Result<RunRecord> {
    if budget == 0 {
        return Err(Error::InvalidConfig("budget must be positive".into()));
    }
    if let Some(&e) = eps_list.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::InvalidConfig(format!(
            "eps must lie in (0, 1], got {e}"
        )));
    }
    let mut stop = StopRule::budget(budget);
    let smallest = eps_list.iter().copied().fold(f64::INFINITY, f64::min);
    if let (Some(f_star), true) = (problem.f_star, smallest.is_finite()) {
        stop = stop.with_target(Target::RelativeGap {
            f_star,
            eps: smallest,
        });
    }
    let out = minimize(
        solver,
        problem.objective(),
        &problem.x0,
        problem.f_star,
        &stop,
        instance_seed(master_seed, &problem.name, seed),
        |_, _| {},
    )?;
    let mut eps_sorted = eps_list.to_vec();
    eps_sorted.sort_by(|a, b| b.total_cmp(a));
    eps_sorted.dedup();
    let queries_to_target = eps_sorted
        .iter()
        .map(|&eps| {
            let queries = match problem.f_star {
                Some(fs) => solved_query_count(&out.improvements, out.f0, fs, eps)?,
                None => None,
            };
            Ok(TargetCount { eps, queries })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunRecord {
        version: RECORD_VERSION,
        problem: problem.name.clone(),
        solver: solver.name().to_string(),
        seed,
        budget,
        queries_used: out.queries_used,
        iterations: out.iterations,
        f0: out.f0,
        f_star: problem.f_star,
        queries_to_target,
        final_best: out.best_value,
        trace: downsample(&out.improvements, out.queries_used, out.best_value),
        error: None,
    })
}

/// Record for a run that could not complete: every target unsolved.
pub fn failed_record(
    problem: &Problem,
    solver: &dyn Solver,
    seed: u64,
    budget: u64,
    eps_list: &[f64],
    error: &Error,
) -> RunRecord {
    let mut eps_sorted = eps_list.to_vec();
    eps_sorted.sort_by(|a, b| b.total_cmp(a));
    eps_sorted.dedup();
    RunRecord {
        version: RECORD_VERSION,
        problem: problem.name.clone(),
        solver: solver.name().to_string(),
        seed,
        budget,
        queries_used: 0,
        iterations: 0,
        f0: f64::NAN,
        f_star: problem.f_star,
        queries_to_target: eps_sorted
            .into_iter()
            .map(|eps| TargetCount { eps, queries: None })
            .collect(),
        final_best: f64::NAN,
        trace: Vec::new(),
        error: Some(error.to_string()),
    }
}

fn downsample(improvements: &[(u64, f64)], queries_used: u64, final_best: f64) -> Vec<TracePoint> {
    let mut trace: Vec<TracePoint> = Vec::new();
    let mut next_mark = 1.0;
    for &(query, best) in improvements {
        if best.is_finite() && query as f64 >= next_mark {
            trace.push(TracePoint { query, best });
            next_mark = query as f64 * TRACE_RATIO;
        }
    }
    if final_best.is_finite() && trace.last().is_none_or(|p| p.query != queries_used) {
        trace.push(TracePoint {
            query: queries_used,
            best: final_best,
        });
    }
    trace
}

/// Runs every `(problem, solver, seed)` combination, in parallel on
/// `threads` workers (all cores if `None`). Failed runs become unsolved
/// records. The output is sorted by problem, solver and seed and does not
/// depend on the thread count.
pub fn run_grid(
    problems: &[Problem],
    solvers: &[&dyn Solver],
    seeds: &[u64],
    master_seed: u64,
    budget: u64,
    eps_list: &[f64],
    threads: Option<usize>,
) -> Result<Vec<RunRecord>> {
    if problems.is_empty() || solvers.is_empty() || seeds.is_empty() || eps_list.is_empty() {
        return Err(Error::InvalidConfig(
            "grid needs problems, solvers, seeds and eps".into(),
        ));
    }
    for s in solvers {
        s.validate()?;
    }
    let jobs: Vec<(&Problem, &dyn Solver, u64)> = problems
        .iter()
        .flat_map(|p| {
            solvers
                .iter()
                .flat_map(move |&s| seeds.iter().map(move |&k| (p, s, k)))
        })
        .collect();
    let work = || -> Vec<RunRecord> {
        jobs.par_iter()
            .map(|&(p, s, seed)| {
                run_instance(p, s, master_seed, seed, budget, eps_list)
                    .unwrap_or_else(|e| failed_record(p, s, seed, budget, eps_list, &e))
            })
            .collect()
    };
    let mut records = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(work),
        None => work(),
    };
    records.sort_by(|a, b| (&a.problem, &a.solver, a.seed).cmp(&(&b.problem, &b.solver, b.seed)));
    Ok(records)
}

/// Ratios `t / min t` per instance row; unsolved entries and rows nobody
/// solved get [`UNSOLVED_RATIO`].
pub fn ratios_from_counts(counts: &[Vec<Option<u64>>]) -> Vec<Vec<f64>> {
    counts
        .iter()
        .map(|row| {
            let best = row.iter().flatten().min().copied();
            row.iter()
                .map(|t| match (t, best) {
                    (Some(t), Some(b)) => *t as f64 / b.max(1) as f64,
                    _ => UNSOLVED_RATIO,
                })
                .collect()
        })
        .collect()
}

/// Performance ratios, one row per `(problem, seed)` instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioTable {
    pub solvers: Vec<String>,
    pub instances: Vec<(String, u64)>,
    /// `ratios[instance][solver]`.
    pub ratios: Vec<Vec<f64>>,
}

/// Distinct accuracies across `records`, largest first.
pub fn available_eps(records: &[RunRecord]) -> Vec<f64> {
    let mut eps: Vec<f64> = records
        .iter()
        .flat_map(|r| r.queries_to_target.iter().map(|t| t.eps))
        .collect();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    eps
}

/// Builds the ratio table at accuracy `eps`. A solver with no record for an
/// instance counts as unsolved there.
pub fn performance_ratios(records: &[RunRecord], eps: f64) -> Result<RatioTable> {
    if records.is_empty() {
        return Err(Error::InvalidConfig("no run records".into()));
    }
    let eps_present = available_eps(records);
    if !eps_present.contains(&eps) {
        let listed: Vec<String> = eps_present.iter().map(|e| e.to_string()).collect();
        return Err(Error::InvalidConfig(format!(
            "eps {eps} not in records; available: {}",
            listed.join(", ")
        )));
    }
    let solvers: BTreeSet<&str> = records.iter().map(|r| r.solver.as_str()).collect();
    let solvers: Vec<String> = solvers.into_iter().map(String::from).collect();
    let mut table: BTreeMap<(String, u64), Vec<Option<u64>>> = BTreeMap::new();
    for r in records {
        let s = solvers
            .iter()
            .position(|s| *s == r.solver)
            .expect("collected above");
        let row = table
            .entry((r.problem.clone(), r.seed))
            .or_insert_with(|| vec![None; solvers.len()]);
        row[s] = r.queries_for(eps).flatten();
    }
    let (instances, counts): (Vec<_>, Vec<_>) = table.into_iter().unzip();
    Ok(RatioTable {
        solvers,
        instances,
        ratios: ratios_from_counts(&counts),
    })
}

/// `rho[s][j]`: fraction of instances with ratio at most `tau_grid[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub solvers: Vec<String>,
    pub tau_grid: Vec<f64>,
    pub rho: Vec<Vec<f64>>,
}

impl ProfileTable {
    pub fn rho_of(&self, solver: &str) -> Option<&[f64]> {
        self.solvers
            .iter()
            .position(|s| s == solver)
            .map(|i| self.rho[i].as_slice())
    }

    /// `tau,<solver1>,...` header, then one row per tau.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau");
        for s in &self.solvers {
            out.push(',');
            out.push_str(s);
        }
        out.push('\n');
        for (j, tau) in self.tau_grid.iter().enumerate() {
            out.push_str(&tau.to_string());
            for rho in &self.rho {
                out.push(',');
                out.push_str(&rho[j].to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub fn performance_profile(ratios: &RatioTable, tau_grid: &[f64]) -> Result<ProfileTable> {
    if tau_grid.is_empty() || !(tau_grid[0] >= 1.0) || tau_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidConfig(
            "tau grid must be increasing and start at or above 1".into(),
        ));
    }
    let n = ratios.instances.len().max(1) as f64;
    let rho = (0..ratios.solvers.len())
        .map(|s| {
            tau_grid
                .iter()
                .map(|&tau| ratios.ratios.iter().filter(|row| row[s] <= tau).count() as f64 / n)
                .collect()
        })
        .collect();
    Ok(ProfileTable {
        solvers: ratios.solvers.clone(),
        tau_grid: tau_grid.to_vec(),
        rho,
    })
}

/// `points` log-spaced values from exactly 1 to exactly `tau_max`.
pub fn log_tau_grid(tau_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(tau_max > 1.0 && tau_max.is_finite()) || points < 2 {
        return Err(Error::InvalidConfig(format!(
            "need tau_max > 1 and at least 2 points, got {tau_max} and {points}"
        )));
    }
    let step = tau_max.ln() / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| (step * i as f64).exp()).collect();
    grid[0] = 1.0;
    grid[points - 1] = tau_max;
    Ok(grid)
}
