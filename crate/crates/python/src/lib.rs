//! Python bindings: problems, solver runs (including on Python callables),
//! the scalar building blocks, direction diagnostics and profiles.

use std::io::Cursor;
use std::sync::Mutex;

use nalgebra::DMatrix;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cars::bench;
use cars::cars_cr;
use cars::finite_diff::Differences;
use cars::holder::HolderConstants;
use cars::problems;
use cars::record::read_records;
use cars::registry::{SolverSpec, SOLVER_NAMES};
use cars::sampling::{self, DirectionSampler, SamplerKind};
use cars::solver::{minimize as run_minimize, StopRule, Target};
use cars::{Objective, RunRecord};

fn to_py(e: cars::Error) -> PyErr {
    match e {
        cars::Error::Parse { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn solver_spec(name: &str, overrides: Option<Vec<(String, String)>>) -> PyResult<SolverSpec> {
    SolverSpec::with_overrides(name, &overrides.unwrap_or_default()).map_err(to_py)
}

fn record_dict<'py>(py: Python<'py>, r: &RunRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("problem", &r.problem)?;
    d.set_item("solver", &r.solver)?;
    d.set_item("seed", r.seed)?;
    d.set_item("budget", r.budget)?;
    d.set_item("queries_used", r.queries_used)?;
    d.set_item("iterations", r.iterations)?;
    d.set_item("f0", r.f0)?;
    d.set_item("f_star", r.f_star)?;
    d.set_item("final_best", r.final_best)?;
    let targets: Vec<(f64, Option<u64>)> = r
        .queries_to_target
        .iter()
        .map(|t| (t.eps, t.queries))
        .collect();
    d.set_item("queries_to_target", targets)?;
    let trace: Vec<(u64, f64)> = r.trace.iter().map(|p| (p.query, p.best)).collect();
    d.set_item("trace", trace)?;
    d.set_item("error", &r.error)?;
    Ok(d)
}

/// Registry names of the built-in problems.
#[pyfunction]
fn problem_names() -> Vec<&'static str> {
    problems::mgh_names()
}

#[pyfunction]
fn solver_names() -> Vec<&'static str> {
    SOLVER_NAMES.to_vec()
}

/// `{"name", "dim", "x0", "f_star"}` for a registry name.
#[pyfunction]
fn problem_info<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = problems::lookup(name).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("name", &p.name)?;
    d.set_item("dim", p.dim)?;
    d.set_item("x0", &p.x0)?;
    d.set_item("f_star", p.f_star)?;
    Ok(d)
}

#[pyfunction]
fn evaluate(name: &str, x: Vec<f64>) -> PyResult<f64> {
    let p = problems::lookup(name).map_err(to_py)?;
    if x.len() != p.dim {
        return Err(PyValueError::new_err(format!(
            "{name} expects dimension {}",
            p.dim
        )));
    }
    Ok(p.eval(&x))
}

/// Runs a registered solver on a registered problem and returns its record.
#[pyfunction]
#[pyo3(signature = (problem, solver="cars", seed=0, budget=20_000, eps=None, overrides=None))]
fn run<'py>(
    py: Python<'py>,
    problem: &str,
    solver: &str,
    seed: u64,
    budget: u64,
    eps: Option<Vec<f64>>,
    overrides: Option<Vec<(String, String)>>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = problems::lookup(problem).map_err(to_py)?;
    let spec = solver_spec(solver, overrides)?;
    let eps = eps.unwrap_or_else(|| bench::DEFAULT_EPS.to_vec());
    let record = py
        .detach(|| bench::run_one(&p, spec.solver(), seed, budget, &eps))
        .map_err(to_py)?;
    record_dict(py, &record)
}

/// A Python callable seen as an objective. The first exception raised by
/// the callable is kept and re-raised after the run.
struct PyObjective {
    f: Py<PyAny>,
    dim: usize,
    error: Mutex<Option<PyErr>>,
}

impl Objective for PyObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        Python::attach(|py| {
            let value = self
                .f
                .call1(py, (x.to_vec(),))
                .and_then(|v| v.extract::<f64>(py));
            value.unwrap_or_else(|e| {
                self.error.lock().unwrap().get_or_insert(e);
                f64::NAN
            })
        })
    }
}

/// Minimizes a Python callable `f(list[float]) -> float` from `x0`.
///
/// Returns `{"x", "fun", "nfev", "nit", "f0"}` where `x`/`fun` are the best
/// point seen.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (f, x0, solver="cars", seed=0, budget=10_000, target=None, overrides=None))]
fn minimize<'py>(
    py: Python<'py>,
    f: Py<PyAny>,
    x0: Vec<f64>,
    solver: &str,
    seed: u64,
    budget: u64,
    target: Option<f64>,
    overrides: Option<Vec<(String, String)>>,
) -> PyResult<Bound<'py, PyDict>> {
    if x0.is_empty() {
        return Err(PyValueError::new_err("x0 must be non-empty"));
    }
    let spec = solver_spec(solver, overrides)?;
    let objective = PyObjective {
        f,
        dim: x0.len(),
        error: Mutex::new(None),
    };
    let mut stop = StopRule::budget(budget);
    if let Some(t) = target {
        stop = stop.with_target(Target::Value(t));
    }
    let out =
        py.detach(|| run_minimize(spec.solver(), &objective, &x0, None, &stop, seed, |_, _| {}));
    if let Some(e) = objective.error.lock().unwrap().take() {
        return Err(e);
    }
    let out = out.map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("x", out.best_x)?;
    d.set_item("fun", out.best_value)?;
    d.set_item("nfev", out.queries_used)?;
    d.set_item("nit", out.iterations)?;
    d.set_item("f0", out.f0)?;
    Ok(d)
}

/// Minimizer of the one-dimensional cubic model `d a + h a^2 / 2 + M |a|^3 / 6`.
#[pyfunction]
fn cubic_phi(d: f64, h: f64, m: f64) -> f64 {
    cars_cr::cubic_minimizer_phi(d, h, m)
}

#[pyfunction]
fn adaptive_l_hat(d: f64, h: f64, m: f64) -> PyResult<f64> {
    cars_cr::adaptive_l_hat(d, h, m).map_err(to_py)
}

/// Scale-free radius limit `C` for Holder exponent `a` and constant `l_a`.
#[pyfunction]
fn radius_limit(a: f64, l_a: f64, mu: f64, epsilon: f64, gamma: f64) -> PyResult<f64> {
    HolderConstants {
        a,
        l_a,
        mu,
        epsilon,
        gamma,
    }
    .radius_limit()
    .map_err(to_py)
}

/// `(d_r, h_r)` from `f(x)`, `f(x + r u)` and `f(x - r u)`.
#[pyfunction]
fn differences(fx: f64, f_plus: f64, f_minus: f64, r: f64) -> (f64, f64) {
    let d = Differences::from_values(fx, f_plus, f_minus, r);
    (d.d, d.h)
}

fn sampler(kind: &str, dim: usize, seed: u64) -> PyResult<DirectionSampler> {
    let kind: SamplerKind = kind.parse().map_err(to_py)?;
    if dim == 0 {
        return Err(PyValueError::new_err("dim must be positive"));
    }
    Ok(DirectionSampler::new(kind, dim, seed))
}

/// `n` directions from the named sampler.
#[pyfunction]
#[pyo3(signature = (kind, dim, n, seed=0))]
fn sample_directions(kind: &str, dim: usize, n: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    let mut s = sampler(kind, dim, seed)?;
    if s.needs_oracle() {
        return Err(PyValueError::new_err(format!(
            "sampler `{kind}` needs an objective"
        )));
    }
    Ok((0..n).map(|_| s.sample_direction()).collect())
}

fn matrix(rows: Vec<Vec<f64>>, dim: usize) -> PyResult<DMatrix<f64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err(format!("H must be {dim} x {dim}")));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

/// Monte-Carlo `(mean, std_err)` of `eta(g, H)` for the named sampler.
#[pyfunction]
#[pyo3(signature = (kind, g, h, n, seed=0))]
fn estimate_eta(
    kind: &str,
    g: Vec<f64>,
    h: Vec<Vec<f64>>,
    n: usize,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let h = matrix(h, g.len())?;
    let mut s = sampler(kind, g.len(), seed)?;
    let est = sampling::estimate_eta(&mut s, &g, &h, n).map_err(to_py)?;
    Ok((est.mean, est.std_err))
}

/// Monte-Carlo `(mean, std_err)` of the probability that a direction lies in
/// the cone `|u'g| >= gamma ||u|| ||g||`.
#[pyfunction]
#[pyo3(signature = (kind, g, gamma, n, seed=0))]
fn estimate_p_gamma(
    kind: &str,
    g: Vec<f64>,
    gamma: f64,
    n: usize,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let mut s = sampler(kind, g.len(), seed)?;
    let est = sampling::estimate_p_gamma(&mut s, &g, gamma, n).map_err(to_py)?;
    Ok((est.mean, est.std_err))
}

/// Performance profile of JSONL records text at accuracy `eps`, as CSV.
#[pyfunction]
#[pyo3(signature = (records_jsonl, eps, tau_max=1e3, points=61))]
fn profile_csv(records_jsonl: &str, eps: f64, tau_max: f64, points: usize) -> PyResult<String> {
    let records = read_records(Cursor::new(records_jsonl)).map_err(to_py)?;
    let ratios = bench::performance_ratios(&records, eps).map_err(to_py)?;
    let grid = bench::log_tau_grid(tau_max, points).map_err(to_py)?;
    Ok(bench::performance_profile(&ratios, &grid)
        .map_err(to_py)?
        .to_csv())
}

/// Performance ratios from query counts, `counts[instance][solver]`, with
/// `None` for unsolved.
#[pyfunction]
fn performance_ratios(counts: Vec<Vec<Option<u64>>>) -> Vec<Vec<f64>> {
    bench::ratios_from_counts(&counts)
}

#[pymodule]
fn cars_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UNSOLVED_RATIO", bench::UNSOLVED_RATIO)?;
    m.add_function(wrap_pyfunction!(problem_names, m)?)?;
    m.add_function(wrap_pyfunction!(solver_names, m)?)?;
    m.add_function(wrap_pyfunction!(problem_info, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(minimize, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_phi, m)?)?;
    m.add_function(wrap_pyfunction!(adaptive_l_hat, m)?)?;
    m.add_function(wrap_pyfunction!(radius_limit, m)?)?;
    m.add_function(wrap_pyfunction!(differences, m)?)?;
    m.add_function(wrap_pyfunction!(sample_directions, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_eta, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_p_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(profile_csv, m)?)?;
    m.add_function(wrap_pyfunction!(performance_ratios, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_checks_shape() {
        assert!(matrix(vec![vec![1.0, 0.0], vec![0.0]], 2).is_err());
        let m = matrix(vec![vec![1.0, 2.0], vec![3.0, 4.0]], 2).unwrap();
        assert_eq!(m[(1, 0)], 3.0);
    }

    #[test]
    fn differences_of_a_parabola() {
        // f(t) = t^2 at t = 1 with r = 0.5
        assert_eq!(differences(1.0, 2.25, 0.25, 0.5), (2.0, 2.0));
    }
}
