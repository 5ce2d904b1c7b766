//! Search-direction distributions and Monte-Carlo quality diagnostics.
//!
//! Besides drawing directions, this module estimates two properties of a
//! direction distribution `D` at a point with gradient `g` and Hessian `H`:
//!
//! * `eta(g, H; D) = E[(u'g)^2 / ((u'Hu)(g'H^{-1}g))]`, how well `D` lines up
//!   with the Newton vector `H^{-1}g` (at most 1 by Cauchy-Schwarz);
//! * `p_gamma = P[|u'g| >= gamma ||u|| ||g||]`, the probability of drawing a
//!   direction within a cone around `g`.
//!
//! ## Seeding
//!
//! Samplers own a ChaCha8 stream seeded from a `u64`. Independent runs get
//! child seeds from [`derive_seed`], a SplitMix64 finalizer applied to
//! `master + (stream + 1) * 0x9E3779B97F4A7C15`, so a grid of runs is
//! reproducible from one master seed regardless of execution order.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::CountingOracle;
use crate::vecops::{dot, norm, scale_in_place};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for stream `stream` of `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Stable 64-bit stream id for a name (FNV-1a).
pub fn stream_id(name: &str) -> u64 {
    name.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01B3)
    })
}

/// Distribution of search directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SamplerKind {
    /// Uniform on the unit sphere.
    SphereUniform,
    /// Standard normal `N(0, I)`.
    Gaussian,
    /// Uniform over the canonical basis `e_1..e_d`.
    CoordinateUniform,
    /// Uniform over `{-1, +1}^d`.
    Rademacher,
    /// `(1/m) sum_j d_r(x; v_j) v_j` over `m` Gaussian probes, an estimate of
    /// the gradient costing `2m` queries.
    AveragedGradient { m: usize },
    /// Always the same vector. Used for forced-direction experiments.
    Fixed(Vec<f64>),
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerKind::SphereUniform => f.write_str("sphere"),
            SamplerKind::Gaussian => f.write_str("gaussian"),
            SamplerKind::CoordinateUniform => f.write_str("coordinate"),
            SamplerKind::Rademacher => f.write_str("rademacher"),
            SamplerKind::AveragedGradient { m } => write!(f, "averaged:{m}"),
            SamplerKind::Fixed(_) => f.write_str("fixed"),
        }
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(SamplerKind::SphereUniform),
            "gaussian" => Ok(SamplerKind::Gaussian),
            "coordinate" => Ok(SamplerKind::CoordinateUniform),
            "rademacher" => Ok(SamplerKind::Rademacher),
            _ => match s.strip_prefix("averaged:").map(str::parse::<usize>) {
                Some(Ok(m)) if m >= 1 => Ok(SamplerKind::AveragedGradient { m }),
                _ => Err(Error::InvalidConfig(format!(
                    "unknown sampler `{s}` (expected sphere, gaussian, coordinate, rademacher or averaged:<m>)"
                ))),
            },
        }
    }
}

/// Seeded generator of search directions.
#[derive(Debug, Clone)]
pub struct DirectionSampler {
    kind: SamplerKind,
    dim: usize,
    normalize: bool,
    rng: ChaCha8Rng,
}

impl DirectionSampler {
    pub fn new(kind: SamplerKind, dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "sampler dimension must be positive");
        if let SamplerKind::Fixed(v) = &kind {
            assert_eq!(v.len(), dim, "fixed direction has wrong dimension");
        }
        Self {
            kind,
            dim,
            normalize: false,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Rescale every returned direction to unit length.
    pub fn normalized(mut self) -> Self {
        self.normalize = true;
        self
    }

    pub fn kind(&self) -> &SamplerKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Whether drawing a direction consumes oracle queries.
    pub fn needs_oracle(&self) -> bool {
        matches!(self.kind, SamplerKind::AveragedGradient { .. })
    }

    fn gaussian(&mut self) -> Vec<f64> {
        (0..self.dim)
            .map(|_| self.rng.sample::<f64, _>(StandardNormal))
            .collect()
    }

    fn finish(&self, mut u: Vec<f64>) -> Vec<f64> {
        if self.normalize {
            let n = norm(&u);
            if n > 0.0 {
                scale_in_place(&mut u, 1.0 / n);
            }
        }
        u
    }

    /// Draws the next direction without touching an oracle.
    ///
    /// For [`SamplerKind::AveragedGradient`] this returns a single Gaussian
    /// probe; use [`next_direction`](Self::next_direction) to get the
    /// averaged estimate.
    pub fn sample_direction(&mut self) -> Vec<f64> {
        let u = match &self.kind {
            SamplerKind::SphereUniform => {
                let mut u = self.gaussian();
                let n = norm(&u);
                scale_in_place(&mut u, 1.0 / n);
                u
            }
            SamplerKind::Gaussian | SamplerKind::AveragedGradient { .. } => self.gaussian(),
            SamplerKind::CoordinateUniform => {
                let mut u = vec![0.0; self.dim];
                u[self.rng.random_range(0..self.dim)] = 1.0;
                u
            }
            SamplerKind::Rademacher => (0..self.dim)
                .map(|_| if self.rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect(),
            SamplerKind::Fixed(v) => v.clone(),
        };
        self.finish(u)
    }

    /// Averaged finite-difference gradient direction at `x` with probe
    /// radius `r`. Consumes `2m` queries.
    pub fn sample_averaged_gradient_direction(
        &mut self,
        oracle: &mut CountingOracle<'_>,
        x: &[f64],
        r: f64,
    ) -> Result<Vec<f64>> {
        let m = match self.kind {
            SamplerKind::AveragedGradient { m } => m,
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "sampler `{}` is not an averaged-gradient sampler",
                    self.kind
                )))
            }
        };
        let probes: Vec<Vec<f64>> = (0..m).map(|_| self.gaussian()).collect();
        let u = averaged_difference_direction(oracle, x, r, &probes)?;
        Ok(self.finish(u))
    }

    /// Next search direction, querying `oracle` only when the kind requires
    /// it. `r` is the probe radius for averaged-gradient sampling.
    pub fn next_direction(
        &mut self,
        oracle: &mut CountingOracle<'_>,
        x: &[f64],
        r: f64,
    ) -> Result<Vec<f64>> {
        if self.needs_oracle() {
            self.sample_averaged_gradient_direction(oracle, x, r)
        } else {
            Ok(self.sample_direction())
        }
    }
}

/// `(1/m) sum_j d_r(x; v_j) v_j` for the given probe vectors.
pub fn averaged_difference_direction(
    oracle: &mut CountingOracle<'_>,
    x: &[f64],
    r: f64,
    probes: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let mut u = vec![0.0; x.len()];
    for v in probes {
        let plus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + r * b).collect();
        let minus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - r * b).collect();
        let d = (oracle.evaluate(&plus)? - oracle.evaluate(&minus)?) / (2.0 * r);
        u.iter_mut().zip(v).for_each(|(ui, vi)| *ui += d * vi);
    }
    scale_in_place(&mut u, 1.0 / probes.len() as f64);
    Ok(u)
}

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n: usize,
}

impl McEstimate {
    fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            std_err: (var / n as f64).sqrt(),
            n,
        }
    }

    fn from_proportion(hits: usize, n: usize) -> Self {
        let p = hits as f64 / n as f64;
        Self {
            mean: p,
            std_err: (p * (1.0 - p) / n as f64).sqrt(),
            n,
        }
    }
}

fn require_direct(sampler: &DirectionSampler) -> Result<()> {
    if sampler.needs_oracle() {
        Err(Error::InvalidConfig(
            "diagnostics need a sampler that does not query the objective".into(),
        ))
    } else {
        Ok(())
    }
}

/// Fraction of `n` draws with `|u'g| >= gamma ||u|| ||g||`.
pub fn estimate_p_gamma(
    sampler: &mut DirectionSampler,
    g: &[f64],
    gamma: f64,
    n: usize,
) -> Result<McEstimate> {
    require_direct(sampler)?;
    let g_norm = norm(g);
    if g_norm == 0.0 {
        return Err(Error::ZeroGradient);
    }
    if n == 0 || !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidConfig(
            "need n >= 1 and gamma in (0, 1]".into(),
        ));
    }
    let hits = (0..n)
        .filter(|_| {
            let u = sampler.sample_direction();
            dot(&u, g).abs() >= gamma * norm(&u) * g_norm
        })
        .count();
    Ok(McEstimate::from_proportion(hits, n))
}

/// Monte-Carlo estimate of `eta(g, H; D)`.
pub fn estimate_eta(
    sampler: &mut DirectionSampler,
    g: &[f64],
    h: &DMatrix<f64>,
    n: usize,
) -> Result<McEstimate> {
    require_direct(sampler)?;
    if norm(g) == 0.0 {
        return Err(Error::ZeroGradient);
    }
    if n == 0 {
        return Err(Error::InvalidConfig("need n >= 1".into()));
    }
    let gv = DVector::from_column_slice(g);
    let chol = h.clone().cholesky().ok_or(Error::SingularH)?;
    let newton = chol.solve(&gv);
    let g_hinv_g = gv.dot(&newton);
    if !(g_hinv_g.is_finite() && g_hinv_g > 0.0) {
        return Err(Error::SingularH);
    }
    let samples: Vec<f64> = (0..n)
        .map(|_| {
            let u = DVector::from_vec(sampler.sample_direction());
            let ug = u.dot(&gv);
            ug * ug / (u.dot(&(h * &u)) * g_hinv_g)
        })
        .collect();
    Ok(McEstimate::from_samples(&samples))
}

/// Both distribution-quality estimates from one sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionDiagnostics {
    pub eta_estimate: f64,
    pub p_gamma_estimate: f64,
    pub sample_count: usize,
}

pub fn diagnose(
    sampler: &mut DirectionSampler,
    g: &[f64],
    h: &DMatrix<f64>,
    gamma: f64,
    n: usize,
) -> Result<DistributionDiagnostics> {
    let eta = estimate_eta(sampler, g, h, n)?;
    let p = estimate_p_gamma(sampler, g, gamma, n)?;
    Ok(DistributionDiagnostics {
        eta_estimate: eta.mean,
        p_gamma_estimate: p.mean,
        sample_count: n,
    })
}
