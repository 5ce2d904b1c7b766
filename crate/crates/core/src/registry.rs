//! Solvers by name, with string-keyed parameter overrides.
//!
//! | solver     | keys                                           |
//! |------------|------------------------------------------------|
//! | `cars`     | `L_hat`, `r0`, `C`, `curvature`, `sampler`     |
//! | `cars-cr`  | `M`, `r0`, `epsilon`, `R`, `B`, `L`, `sampler` |
//! | `stp`      | `alpha0`, `sampler`                            |
//! | `nesterov` | `alpha`, `mu`, `sampler`                       |
//! | `spsa`     | `a`, `A`, `alpha`, `c`, `gamma`, `sampler`     |
//!
//! For `cars`, `r0` selects `r_k ||u|| = r0 / (k + 2)` and `C` a fixed
//! `r ||u|| = C`. For `cars-cr`, any of `epsilon`, `R`, `B`, `L` selects the
//! `min(rho sqrt(eps / (k + 2)), R)` schedule, which needs `epsilon` and `R`.

use std::fmt;

use crate::baselines::{NesterovConfig, SpsaConfig, StpConfig};
use crate::cars::{CarsConfig, CurvaturePolicy, RadiusRule};
use crate::cars_cr::{CarsCrConfig, CrRadius};
use crate::error::{Error, Result};
use crate::sampling::SamplerKind;
use crate::solver::Solver;

pub const SOLVER_NAMES: [&str; 5] = ["cars", "cars-cr", "stp", "nesterov", "spsa"];

/// A configured solver of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverSpec {
    Cars(CarsConfig),
    CarsCr(CarsCrConfig),
    Stp(StpConfig),
    Nesterov(NesterovConfig),
    Spsa(SpsaConfig),
}

impl SolverSpec {
    /// Default configuration for `name`.
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "cars" => SolverSpec::Cars(CarsConfig::default()),
            "cars-cr" => SolverSpec::CarsCr(CarsCrConfig::default()),
            "stp" => SolverSpec::Stp(StpConfig::default()),
            "nesterov" => SolverSpec::Nesterov(NesterovConfig::default()),
            "spsa" => SolverSpec::Spsa(SpsaConfig::default()),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown solver `{other}`; valid solvers: {}",
                    SOLVER_NAMES.join(", ")
                )))
            }
        })
    }

    /// Default configuration with `key=value` overrides applied in order,
    /// then validated.
    pub fn with_overrides<K: AsRef<str>, V: AsRef<str>>(
        name: &str,
        overrides: &[(K, V)],
    ) -> Result<Self> {
        let mut spec = Self::by_name(name)?;
        spec.apply(overrides)?;
        Ok(spec)
    }

    pub fn apply<K: AsRef<str>, V: AsRef<str>>(&mut self, overrides: &[(K, V)]) -> Result<()> {
        for (k, v) in overrides {
            self.set(k.as_ref(), v.as_ref())?;
        }
        self.solver().validate()
    }

    pub fn keys(&self) -> &'static [&'static str] {
        match self {
            SolverSpec::Cars(_) => &["L_hat", "r0", "C", "curvature", "sampler"],
            SolverSpec::CarsCr(_) => &["M", "r0", "epsilon", "R", "B", "L", "sampler"],
            SolverSpec::Stp(_) => &["alpha0", "sampler"],
            SolverSpec::Nesterov(_) => &["alpha", "mu", "sampler"],
            SolverSpec::Spsa(_) => &["a", "A", "alpha", "c", "gamma", "sampler"],
        }
    }

    /// Sets one parameter. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if key == "sampler" {
            let kind: SamplerKind = value.parse()?;
            match self {
                SolverSpec::Cars(c) => c.sampler = kind,
                SolverSpec::CarsCr(c) => c.sampler = kind,
                SolverSpec::Stp(c) => c.sampler = kind,
                SolverSpec::Nesterov(c) => c.sampler = kind,
                SolverSpec::Spsa(c) => c.sampler = kind,
            }
            return Ok(());
        }
        let unknown = |spec: &SolverSpec| {
            Error::InvalidConfig(format!(
                "unknown key `{key}` for solver `{}`; valid keys: {}",
                spec.solver().name(),
                spec.keys().join(", ")
            ))
        };
        match self {
            SolverSpec::Cars(c) => match key {
                "L_hat" => c.l_hat = number(key, value)?,
                "r0" => {
                    c.radius = RadiusRule::Decreasing {
                        c0: number(key, value)?,
                    }
                }
                "C" => {
                    c.radius = RadiusRule::FixedLimit {
                        c: number(key, value)?,
                    }
                }
                "curvature" => {
                    c.curvature = match value {
                        "skip" => CurvaturePolicy::SkipNonpositive,
                        "attempt" => CurvaturePolicy::AlwaysAttempt,
                        _ => {
                            return Err(Error::InvalidConfig(format!(
                                "curvature must be `skip` or `attempt`, got `{value}`"
                            )))
                        }
                    }
                }
                _ => return Err(unknown(self)),
            },
            SolverSpec::CarsCr(c) => match key {
                "M" => c.m = number(key, value)?,
                "r0" => {
                    c.radius = CrRadius::Decreasing {
                        c0: number(key, value)?,
                    }
                }
                "epsilon" | "R" | "B" | "L" => {
                    let v = number(key, value)?;
                    let (mut epsilon, mut r_max, mut b, mut smoothness) = match c.radius {
                        CrRadius::Schedule {
                            epsilon,
                            r_max,
                            b,
                            smoothness,
                        } => (epsilon, r_max, b, smoothness),
                        // Filled in by the caller; NaN fails validation otherwise.
                        CrRadius::Decreasing { .. } => (f64::NAN, f64::NAN, None, None),
                    };
                    match key {
                        "epsilon" => epsilon = v,
                        "R" => r_max = v,
                        "B" => b = Some(v),
                        _ => smoothness = Some(v),
                    }
                    c.radius = CrRadius::Schedule {
                        epsilon,
                        r_max,
                        b,
                        smoothness,
                    };
                }
                _ => return Err(unknown(self)),
            },
            SolverSpec::Stp(c) => match key {
                "alpha0" => c.alpha0 = number(key, value)?,
                _ => return Err(unknown(self)),
            },
            SolverSpec::Nesterov(c) => match key {
                "alpha" => c.alpha = Some(number(key, value)?),
                "mu" => c.mu = number(key, value)?,
                _ => return Err(unknown(self)),
            },
            SolverSpec::Spsa(c) => match key {
                "a" => c.a = number(key, value)?,
                "A" => c.big_a = number(key, value)?,
                "alpha" => c.alpha = number(key, value)?,
                "c" => c.c = number(key, value)?,
                "gamma" => c.gamma = number(key, value)?,
                _ => return Err(unknown(self)),
            },
        }
        Ok(())
    }

    pub fn solver(&self) -> &dyn Solver {
        match self {
            SolverSpec::Cars(c) => c,
            SolverSpec::CarsCr(c) => c,
            SolverSpec::Stp(c) => c,
            SolverSpec::Nesterov(c) => c,
            SolverSpec::Spsa(c) => c,
        }
    }

    pub fn name(&self) -> &str {
        self.solver().name()
    }
}

impl fmt::Display for SolverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverSpec::Cars(c) => write!(f, "{c:?}"),
            SolverSpec::CarsCr(c) => write!(f, "{c:?}"),
            SolverSpec::Stp(c) => write!(f, "{c:?}"),
            SolverSpec::Nesterov(c) => write!(f, "{c:?}"),
            SolverSpec::Spsa(c) => write!(f, "{c:?}"),
        }
    }
}

/// Splits `key=value`.
pub fn parse_assignment(s: &str) -> Result<(String, String)> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(Error::InvalidConfig(format!(
            "expected key=value, got `{s}`"
        ))),
    }
}

fn number(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::InvalidConfig(format!("`{key}` expects a number, got `{value}`")))
}
