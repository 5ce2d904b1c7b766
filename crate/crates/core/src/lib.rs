//! Curvature-aware random search for derivative-free minimization.
//!
//! The crate provides two curvature-aware zeroth-order solvers that take a
//! one-dimensional Newton step along a random direction, using central finite
//! differences for the directional derivative and curvature:
//!
//! * [`cars`]: fixed relative-smoothness step `x - d_r / (L_hat * h_r) * u`
//!   with a three-point safeguard, so `f(x_{k+1}) <= f(x_k)` always holds.
//! * [`cars_cr`]: the cubic-regularized variant, whose step is the closed-form
//!   minimizer of `d*a + h*a^2/2 + M|a|^3/6`.
//!
//! Around them sit the pieces needed to measure query complexity honestly:
//! a [`CountingOracle`](oracle::CountingOracle) that is the only gateway to the
//! objective, seeded [`DirectionSampler`](sampling::DirectionSampler)s, the
//! baseline solvers in [`baselines`], a test-problem library in [`problems`],
//! and the benchmark harness in [`bench`] that turns runs into performance
//! profiles.
//!
//! ```
//! use cars::{bench, cars::CarsConfig, problems};
//!
//! let problem = problems::lookup("rosenbrock").unwrap();
//! let solver = CarsConfig::default();
//! let record = bench::run_one(&problem, &solver, 7, 2_000, &[1e-1, 1e-3]).unwrap();
//! assert!(record.queries_used <= 2_000);
//! ```

pub mod baselines;
pub mod bench;
pub mod cars;
pub mod cars_cr;
mod error;
pub mod finite_diff;
pub mod holder;
pub mod oracle;
pub mod problems;
pub mod record;
pub mod registry;
pub mod sampling;
pub mod solver;
pub(crate) mod vecops;

pub use error::{Error, Result};
pub use oracle::{CountingOracle, FnObjective, Objective};
pub use problems::Problem;
pub use record::RunRecord;
pub use sampling::{DirectionSampler, SamplerKind};
pub use solver::{IterState, IterationReport, Solver, StopRule, Target};
