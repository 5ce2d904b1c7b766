//! Test problems: the convex quartic, rotated quadratics and a subset of the
//! Moré-Garbow-Hillstrom least-squares collection.
//!
//! MGH problems use the collection's residual definitions and recommended
//! starting points; the objective is the sum of squared residuals. Optimal
//! values that have no closed form were obtained by multi-start
//! least-squares refinement and agree with the published values.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::oracle::Objective;

/// Optional regularity constants for theory-mode diagnostics.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Smoothness {
    pub l: Option<f64>,
    pub mu: Option<f64>,
    pub l_a: Option<f64>,
    pub a: Option<f64>,
}

/// A named objective with a recommended start and known optimal value.
#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub dim: usize,
    objective: Arc<dyn Objective>,
    pub x0: Vec<f64>,
    pub f_star: Option<f64>,
    pub x_star: Option<Vec<f64>>,
    pub diagnostics: Option<Smoothness>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("x0", &self.x0)
            .field("f_star", &self.f_star)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        objective: Arc<dyn Objective>,
        x0: Vec<f64>,
        f_star: Option<f64>,
    ) -> Self {
        assert_eq!(objective.dim(), x0.len(), "start point has wrong dimension");
        Self {
            name: name.into(),
            dim: x0.len(),
            objective,
            x0,
            f_star,
            x_star: None,
            diagnostics: None,
        }
    }

    pub fn with_minimizer(mut self, x_star: Vec<f64>) -> Self {
        self.x_star = Some(x_star);
        self
    }

    pub fn with_diagnostics(mut self, d: Smoothness) -> Self {
        self.diagnostics = Some(d);
        self
    }

    pub fn objective(&self) -> &dyn Objective {
        self.objective.as_ref()
    }

    pub fn shared_objective(&self) -> Arc<dyn Objective> {
        Arc::clone(&self.objective)
    }

    /// Direct evaluation, outside any oracle accounting.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.objective.eval(x)
    }
}

/// `f(x) = alpha sum x_i^4 + x'Ax/2 + beta ||x||^2` with `A = G'G`.
#[derive(Debug, Clone)]
pub struct Quartic {
    pub alpha: f64,
    pub beta: f64,
    pub a: DMatrix<f64>,
}

impl Quartic {
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let xv = DVector::from_column_slice(x);
        let ax = &self.a * &xv;
        x.iter()
            .zip(ax.iter())
            .map(|(xi, axi)| 4.0 * self.alpha * xi.powi(3) + axi + 2.0 * self.beta * xi)
            .collect()
    }

    pub fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut h = self.a.clone();
        for (i, xi) in x.iter().enumerate() {
            h[(i, i)] += 12.0 * self.alpha * xi * xi + 2.0 * self.beta;
        }
        h
    }
}

impl Objective for Quartic {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let xv = DVector::from_column_slice(x);
        let quad = xv.dot(&(&self.a * &xv));
        let quartic: f64 = x.iter().map(|v| v.powi(4)).sum();
        let sq: f64 = x.iter().map(|v| v * v).sum();
        self.alpha * quartic + 0.5 * quad + self.beta * sq
    }
}

fn gaussian_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

/// Convex quartic with `A = G'G`, `G_ij ~ N(0, 1)` drawn from `seed`.
/// Starts at the all-ones vector; minimum 0 at the origin.
pub fn make_quartic(d: usize, alpha: f64, beta: f64, seed: u64) -> Problem {
    assert!(d >= 1 && alpha > 0.0 && beta > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(d, &mut rng);
    let quartic = Quartic {
        alpha,
        beta,
        a: g.transpose() * g,
    };
    Problem::new(
        format!("quartic-d{d}"),
        Arc::new(quartic),
        vec![1.0; d],
        Some(0.0),
    )
    .with_minimizer(vec![0.0; d])
    .with_diagnostics(Smoothness {
        mu: Some(2.0 * beta),
        ..Smoothness::default()
    })
}

/// `f(x) = x'Hx / 2` with `H = Q diag(lambda) Q'`, eigenvalues log-spaced
/// on `[1, condition]` and `Q` a random rotation. Starts at the all-ones
/// vector.
pub fn make_quadratic(d: usize, condition: f64, seed: u64) -> Problem {
    assert!(d >= 1 && condition >= 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = gaussian_matrix(d, &mut rng).qr().q();
    let eig = DVector::from_fn(d, |i, _| {
        if d == 1 {
            1.0
        } else {
            condition.powf(i as f64 / (d - 1) as f64)
        }
    });
    let h = &q * DMatrix::from_diagonal(&eig) * q.transpose();
    let h = (&h + h.transpose()) * 0.5;
    let quad = QuadraticForm { h };
    Problem::new(
        format!("quadratic-d{d}"),
        Arc::new(quad),
        vec![1.0; d],
        Some(0.0),
    )
    .with_minimizer(vec![0.0; d])
    .with_diagnostics(Smoothness {
        l: Some(condition),
        mu: Some(1.0),
        ..Smoothness::default()
    })
}

/// `f(x) = x'Hx / 2`.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    pub h: DMatrix<f64>,
}

impl Objective for QuadraticForm {
    fn dim(&self) -> usize {
        self.h.nrows()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let xv = DVector::from_column_slice(x);
        0.5 * xv.dot(&(&self.h * &xv))
    }
}

type ResidualFn = fn(&[f64], &mut Vec<f64>);

/// Sum of squared residuals.
#[derive(Clone, Copy)]
pub struct LeastSquares {
    dim: usize,
    residuals: ResidualFn,
}

impl LeastSquares {
    pub fn residuals(&self, x: &[f64]) -> Vec<f64> {
        let mut r = Vec::new();
        (self.residuals)(x, &mut r);
        r
    }
}

impl Objective for LeastSquares {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let mut r = Vec::with_capacity(2 * self.dim + 2);
        (self.residuals)(x, &mut r);
        r.iter().map(|v| v * v).sum()
    }
}

fn rosenbrock(x: &[f64], r: &mut Vec<f64>) {
    r.extend([10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]]);
}

fn freudenstein_roth(x: &[f64], r: &mut Vec<f64>) {
    r.extend([
        -13.0 + x[0] + ((5.0 - x[1]) * x[1] - 2.0) * x[1],
        -29.0 + x[0] + ((x[1] + 1.0) * x[1] - 14.0) * x[1],
    ]);
}

fn powell_badly_scaled(x: &[f64], r: &mut Vec<f64>) {
    r.extend([
        1e4 * x[0] * x[1] - 1.0,
        (-x[0]).exp() + (-x[1]).exp() - 1.0001,
    ]);
}

fn brown_badly_scaled(x: &[f64], r: &mut Vec<f64>) {
    r.extend([x[0] - 1e6, x[1] - 2e-6, x[0] * x[1] - 2.0]);
}

fn beale(x: &[f64], r: &mut Vec<f64>) {
    for (i, y) in [1.5, 2.25, 2.625].into_iter().enumerate() {
        r.push(y - x[0] * (1.0 - x[1].powi(i as i32 + 1)));
    }
}

fn jennrich_sampson(x: &[f64], r: &mut Vec<f64>) {
    for i in 1..=10 {
        let t = f64::from(i);
        r.push(2.0 + 2.0 * t - ((t * x[0]).exp() + (t * x[1]).exp()));
    }
}

fn helical_valley(x: &[f64], r: &mut Vec<f64>) {
    let theta = if x[0] > 0.0 {
        (x[1] / x[0]).atan() / (2.0 * PI)
    } else if x[0] < 0.0 {
        (x[1] / x[0]).atan() / (2.0 * PI) + 0.5
    } else {
        0.25f64.copysign(x[1])
    };
    r.extend([
        10.0 * (x[2] - 10.0 * theta),
        10.0 * ((x[0] * x[0] + x[1] * x[1]).sqrt() - 1.0),
        x[2],
    ]);
}

const BARD_Y: [f64; 15] = [
    0.14, 0.18, 0.22, 0.25, 0.29, 0.32, 0.35, 0.39, 0.37, 0.58, 0.73, 0.96, 1.34, 2.10, 4.39,
];

fn bard(x: &[f64], r: &mut Vec<f64>) {
    for (i, y) in BARD_Y.iter().enumerate() {
        let u = (i + 1) as f64;
        let v = 16.0 - u;
        let w = u.min(v);
        r.push(y - (x[0] + u / (v * x[1] + w * x[2])));
    }
}

fn box_3d(x: &[f64], r: &mut Vec<f64>) {
    for i in 1..=10 {
        let t = 0.1 * f64::from(i);
        r.push((-t * x[0]).exp() - (-t * x[1]).exp() - x[2] * ((-t).exp() - (-10.0 * t).exp()));
    }
}

fn powell_singular(x: &[f64], r: &mut Vec<f64>) {
    for b in x.chunks_exact(4) {
        r.extend([
            b[0] + 10.0 * b[1],
            5f64.sqrt() * (b[2] - b[3]),
            (b[1] - 2.0 * b[2]).powi(2),
            10f64.sqrt() * (b[0] - b[3]).powi(2),
        ]);
    }
}

fn wood(x: &[f64], r: &mut Vec<f64>) {
    r.extend([
        10.0 * (x[1] - x[0] * x[0]),
        1.0 - x[0],
        90f64.sqrt() * (x[3] - x[2] * x[2]),
        1.0 - x[2],
        10f64.sqrt() * (x[1] + x[3] - 2.0),
        (x[1] - x[3]) / 10f64.sqrt(),
    ]);
}

const KOWALIK_Y: [f64; 11] = [
    0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
];
const KOWALIK_U: [f64; 11] = [
    4.0, 2.0, 1.0, 0.5, 0.25, 0.167, 0.125, 0.1, 0.0833, 0.0714, 0.0625,
];

fn kowalik_osborne(x: &[f64], r: &mut Vec<f64>) {
    for (y, u) in KOWALIK_Y.iter().zip(KOWALIK_U) {
        r.push(y - x[0] * (u * u + u * x[1]) / (u * u + u * x[2] + x[3]));
    }
}

fn brown_dennis(x: &[f64], r: &mut Vec<f64>) {
    for i in 1..=20 {
        let t = f64::from(i) / 5.0;
        r.push((x[0] + t * x[1] - t.exp()).powi(2) + (x[2] + x[3] * t.sin() - t.cos()).powi(2));
    }
}

fn penalty_1(x: &[f64], r: &mut Vec<f64>) {
    let s = 1e-5f64.sqrt();
    r.extend(x.iter().map(|v| s * (v - 1.0)));
    r.push(x.iter().map(|v| v * v).sum::<f64>() - 0.25);
}

fn penalty_2(x: &[f64], r: &mut Vec<f64>) {
    let n = x.len();
    let s = 1e-5f64.sqrt();
    r.push(x[0] - 0.2);
    for i in 1..n {
        let y = ((i + 1) as f64 / 10.0).exp() + (i as f64 / 10.0).exp();
        r.push(s * ((x[i] / 10.0).exp() + (x[i - 1] / 10.0).exp() - y));
    }
    for v in &x[1..] {
        r.push(s * ((v / 10.0).exp() - (-0.1f64).exp()));
    }
    r.push(
        x.iter()
            .enumerate()
            .map(|(j, v)| (n - j) as f64 * v * v)
            .sum::<f64>()
            - 1.0,
    );
}

fn extended_rosenbrock(x: &[f64], r: &mut Vec<f64>) {
    for p in x.chunks_exact(2) {
        r.extend([10.0 * (p[1] - p[0] * p[0]), 1.0 - p[0]]);
    }
}

fn trigonometric(x: &[f64], r: &mut Vec<f64>) {
    let n = x.len() as f64;
    let cos_sum: f64 = x.iter().map(|v| v.cos()).sum();
    for (i, v) in x.iter().enumerate() {
        r.push(n - cos_sum + (i + 1) as f64 * (1.0 - v.cos()) - v.sin());
    }
}

fn variably_dimensioned(x: &[f64], r: &mut Vec<f64>) {
    let s: f64 = x
        .iter()
        .enumerate()
        .map(|(j, v)| (j + 1) as f64 * (v - 1.0))
        .sum();
    r.extend(x.iter().map(|v| v - 1.0));
    r.extend([s, s * s]);
}

fn broyden_tridiagonal(x: &[f64], r: &mut Vec<f64>) {
    let n = x.len();
    for i in 0..n {
        let prev = if i > 0 { x[i - 1] } else { 0.0 };
        let next = if i + 1 < n { x[i + 1] } else { 0.0 };
        r.push((3.0 - 2.0 * x[i]) * x[i] - prev - 2.0 * next + 1.0);
    }
}

fn discrete_boundary_value(x: &[f64], r: &mut Vec<f64>) {
    let n = x.len();
    let h = 1.0 / (n + 1) as f64;
    for i in 0..n {
        let t = (i + 1) as f64 * h;
        let prev = if i > 0 { x[i - 1] } else { 0.0 };
        let next = if i + 1 < n { x[i + 1] } else { 0.0 };
        r.push(2.0 * x[i] - prev - next + h * h * (x[i] + t + 1.0).powi(3) / 2.0);
    }
}

fn brown_almost_linear(x: &[f64], r: &mut Vec<f64>) {
    let n = x.len();
    let s: f64 = x.iter().sum();
    r.extend(x[..n - 1].iter().map(|v| v + s - (n + 1) as f64));
    r.push(x.iter().product::<f64>() - 1.0);
}

struct MghEntry {
    name: &'static str,
    residuals: ResidualFn,
    x0: fn() -> Vec<f64>,
    f_star: f64,
    x_star: Option<fn() -> Vec<f64>>,
}

const MGH: &[MghEntry] = &[
    MghEntry {
        name: "rosenbrock",
        residuals: rosenbrock,
        x0: || vec![-1.2, 1.0],
        f_star: 0.0,
        x_star: Some(|| vec![1.0, 1.0]),
    },
    MghEntry {
        name: "freudenstein-roth",
        residuals: freudenstein_roth,
        x0: || vec![0.5, -2.0],
        f_star: 0.0,
        x_star: Some(|| vec![5.0, 4.0]),
    },
    MghEntry {
        name: "powell-badly-scaled",
        residuals: powell_badly_scaled,
        x0: || vec![0.0, 1.0],
        f_star: 0.0,
        x_star: None,
    },
    MghEntry {
        name: "brown-badly-scaled",
        residuals: brown_badly_scaled,
        x0: || vec![1.0, 1.0],
        f_star: 0.0,
        x_star: Some(|| vec![1e6, 2e-6]),
    },
    MghEntry {
        name: "beale",
        residuals: beale,
        x0: || vec![1.0, 1.0],
        f_star: 0.0,
        x_star: Some(|| vec![3.0, 0.5]),
    },
    MghEntry {
        name: "jennrich-sampson",
        residuals: jennrich_sampson,
        x0: || vec![0.3, 0.4],
        f_star: 124.362_182_355_614_8,
        x_star: None,
    },
    MghEntry {
        name: "helical-valley",
        residuals: helical_valley,
        x0: || vec![-1.0, 0.0, 0.0],
        f_star: 0.0,
        x_star: Some(|| vec![1.0, 0.0, 0.0]),
    },
    MghEntry {
        name: "bard",
        residuals: bard,
        x0: || vec![1.0, 1.0, 1.0],
        f_star: 8.214_877_306_578_96e-3,
        x_star: None,
    },
    MghEntry {
        name: "box-3d",
        residuals: box_3d,
        x0: || vec![0.0, 10.0, 20.0],
        f_star: 0.0,
        x_star: Some(|| vec![1.0, 10.0, 1.0]),
    },
    MghEntry {
        name: "powell-singular",
        residuals: powell_singular,
        x0: || vec![3.0, -1.0, 0.0, 1.0],
        f_star: 0.0,
        x_star: Some(|| vec![0.0; 4]),
    },
    MghEntry {
        name: "wood",
        residuals: wood,
        x0: || vec![-3.0, -1.0, -3.0, -1.0],
        f_star: 0.0,
        x_star: Some(|| vec![1.0; 4]),
    },
    MghEntry {
        name: "kowalik-osborne",
        residuals: kowalik_osborne,
        x0: || vec![0.25, 0.39, 0.415, 0.39],
        f_star: 3.075_056_038_492_363_7e-4,
        x_star: None,
    },
    MghEntry {
        name: "brown-dennis",
        residuals: brown_dennis,
        x0: || vec![25.0, 5.0, -5.0, -1.0],
        f_star: 85_822.201_626_356_5,
        x_star: None,
    },
    MghEntry {
        name: "penalty-1",
        residuals: penalty_1,
        x0: || vec![1.0, 2.0, 3.0, 4.0],
        f_star: 2.249_977_500_899_936_5e-5,
        x_star: None,
    },
    MghEntry {
        name: "penalty-2",
        residuals: penalty_2,
        x0: || vec![0.5; 4],
        f_star: 9.376_293_007_355_437e-6,
        x_star: None,
    },
    MghEntry {
        name: "extended-rosenbrock",
        residuals: extended_rosenbrock,
        x0: || [-1.2, 1.0].repeat(5),
        f_star: 0.0,
        x_star: Some(|| vec![1.0; 10]),
    },
    MghEntry {
        name: "extended-powell-singular",
        residuals: powell_singular,
        x0: || [3.0, -1.0, 0.0, 1.0].repeat(3),
        f_star: 0.0,
        x_star: Some(|| vec![0.0; 12]),
    },
    MghEntry {
        name: "trigonometric",
        residuals: trigonometric,
        x0: || vec![0.1; 10],
        f_star: 0.0,
        x_star: None,
    },
    MghEntry {
        name: "variably-dimensioned",
        residuals: variably_dimensioned,
        x0: || (1..=10).map(|j| 1.0 - f64::from(j) / 10.0).collect(),
        f_star: 0.0,
        x_star: Some(|| vec![1.0; 10]),
    },
    MghEntry {
        name: "broyden-tridiagonal",
        residuals: broyden_tridiagonal,
        x0: || vec![-1.0; 10],
        f_star: 0.0,
        x_star: None,
    },
    MghEntry {
        name: "discrete-boundary-value",
        residuals: discrete_boundary_value,
        x0: || {
            (1..=10)
                .map(|i| {
                    let t = f64::from(i) / 11.0;
                    t * (t - 1.0)
                })
                .collect()
        },
        f_star: 0.0,
        x_star: None,
    },
    MghEntry {
        name: "brown-almost-linear",
        residuals: brown_almost_linear,
        x0: || vec![0.5; 10],
        f_star: 0.0,
        x_star: Some(|| vec![1.0; 10]),
    },
];

fn build(entry: &MghEntry) -> Problem {
    let x0 = (entry.x0)();
    let objective = LeastSquares {
        dim: x0.len(),
        residuals: entry.residuals,
    };
    let p = Problem::new(entry.name, Arc::new(objective), x0, Some(entry.f_star));
    match entry.x_star {
        Some(xs) => p.with_minimizer(xs()),
        None => p,
    }
}

/// The MGH subset, in registry order.
pub fn mgh_suite() -> Vec<Problem> {
    MGH.iter().map(build).collect()
}

/// Names accepted by [`lookup`] besides the MGH entries.
pub const GENERATED: &[&str] = &[
    "quartic-d<N>[-s<seed>]",
    "quadratic-d<N>[-c<cond>][-s<seed>]",
];

/// Seed of the default quartic instance.
pub const DEFAULT_QUARTIC_SEED: u64 = 0;

pub fn mgh_names() -> Vec<&'static str> {
    MGH.iter().map(|e| e.name).collect()
}

fn parse_generated(name: &str) -> Option<Problem> {
    let (family, rest) = name.split_once("-d")?;
    let mut parts = rest.split('-');
    let d: usize = parts.next()?.parse().ok().filter(|&d| d >= 1)?;
    let mut seed = None;
    let mut cond = None;
    for part in parts {
        if let Some(s) = part.strip_prefix('s') {
            seed = Some(s.parse().ok()?);
        } else if let Some(c) = part.strip_prefix('c') {
            cond = Some(c.parse::<f64>().ok().filter(|c| *c >= 1.0)?);
        } else {
            return None;
        }
    }
    match family {
        "quartic" if cond.is_none() => {
            let mut p = make_quartic(d, 0.1, 0.01, seed.unwrap_or(DEFAULT_QUARTIC_SEED));
            p.name = name.to_string();
            Some(p)
        }
        "quadratic" => {
            let mut p = make_quadratic(d, cond.unwrap_or(10.0), seed.unwrap_or(0));
            p.name = name.to_string();
            Some(p)
        }
        _ => None,
    }
}

/// Finds a problem by registry name.
pub fn lookup(name: &str) -> Result<Problem> {
    MGH.iter()
        .find(|e| e.name == name)
        .map(build)
        .or_else(|| parse_generated(name))
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}
