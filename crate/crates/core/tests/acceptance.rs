//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p cars-core --test acceptance`. A substring
//! argument runs only the matching criteria, e.g. `-- profile`.

use std::f64::consts::SQRT_2;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use cars::baselines::StpConfig;
use cars::bench::{self, UNSOLVED_RATIO};
use cars::cars::{cars_candidate, CarsConfig, CurvaturePolicy};
use cars::cars_cr::{adaptive_l_hat, cubic_minimizer_phi, cubic_model, CarsCrConfig};
use cars::finite_diff::central_differences;
use cars::holder::{curvature_error_bound, derivative_error_bound, HolderConstants};
use cars::problems::{self, DEFAULT_QUARTIC_SEED};
use cars::record::{read_records, write_records, RunRecord, TargetCount, RECORD_VERSION};
use cars::sampling::{estimate_eta, estimate_p_gamma, DirectionSampler, SamplerKind};
use cars::solver::{minimize, Solver, StopRule};
use cars::{CountingOracle, FnObjective};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 12] = [
    ("query-accounting", query_accounting),
    ("monotone-descent", monotone_descent),
    ("newton-exactness", newton_exactness),
    ("cubic-step-oracle", cubic_step_oracle),
    ("difference-error-bounds", difference_error_bounds),
    ("radius-limit-scaling", radius_limit_scaling),
    ("cone-probability", cone_probability),
    ("eta-lower-bound", eta_lower_bound),
    ("linear-rate", linear_rate),
    ("quartic-desk-run", quartic_desk_run),
    ("profile-dominance", profile_dominance),
    ("profile-math", profile_math),
];

fn main() {
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, check)) in CRITERIA.iter().enumerate() {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::new(false, format!("panicked: {msg}"))
        });
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<24} {} ({:.2}s) {}",
            i + 1,
            name,
            if outcome.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    println!("\n{} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (
        t < limit,
        format!(
            "runtime {:.2}s < {:.0}s",
            t.as_secs_f64(),
            limit.as_secs_f64()
        ),
    )
}

/// Symmetric positive definite matrix with eigenvalues drawn from `[lo, hi]`.
fn random_spd(d: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let q = g.qr().q();
    let lambda = DMatrix::from_diagonal(&DVector::from_fn(d, |_, _| rng.random_range(lo..=hi)));
    let h = &q * lambda * q.transpose();
    (&h + h.transpose()) * 0.5
}

fn query_accounting() -> Outcome {
    let start = Instant::now();
    let problem = problems::make_quartic(10, 0.1, 0.01, DEFAULT_QUARTIC_SEED);
    let iterations = 1_000u64;
    let cars = CarsConfig::default();
    let cr = CarsCrConfig::default();
    let mut pass = true;
    let mut detail = Vec::new();
    for (solver, per_iter) in [(&cars as &dyn Solver, 3u64), (&cr, 4)] {
        let stop = StopRule::budget(1 + per_iter * iterations);
        let mut off = 0;
        let out = minimize(
            solver,
            problem.objective(),
            &problem.x0,
            None,
            &stop,
            11,
            |_, rep| {
                if rep.queries != per_iter {
                    off += 1;
                }
            },
        )
        .expect("run");
        let ok = out.iterations == iterations
            && out.queries_used == 1 + per_iter * iterations
            && off == 0;
        pass &= ok;
        detail.push(format!(
            "{}: {} queries over {} iterations",
            solver.name(),
            out.queries_used,
            out.iterations
        ));
    }
    let (fast, t) = within(start, Duration::from_secs(1));
    detail.push(t);
    Outcome::new(pass && fast, detail.join("; "))
}

fn monotone_descent() -> Outcome {
    let start = Instant::now();
    let cars = CarsConfig::default();
    let cr = CarsCrConfig::default();
    let suite = problems::mgh_suite();
    let mut violations = 0u64;
    let mut iterations = 0u64;
    for problem in &suite {
        for solver in [&cars as &dyn Solver, &cr] {
            for seed in 0..10 {
                let mut prev = problem.eval(&problem.x0);
                minimize(
                    solver,
                    problem.objective(),
                    &problem.x0,
                    problem.f_star,
                    &StopRule::budget(bench::DEFAULT_BUDGET),
                    seed,
                    |state, _| {
                        iterations += 1;
                        if !(state.fx <= prev) {
                            violations += 1;
                        }
                        prev = state.fx;
                    },
                )
                .expect("run");
            }
        }
    }
    let (fast, t) = within(start, Duration::from_secs(60));
    Outcome::new(
        violations == 0 && fast,
        format!(
            "{violations} increases over {iterations} iterations on {} problems x 2 solvers x 10 seeds; {t}",
            suite.len()
        ),
    )
}

fn newton_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = 1e-9;
    let mut worst = 0.0f64;
    let mut worst_r = 0.0;
    let mut failures = 0;
    let mut largest_failing_r = 0.0f64;
    let trials = 1_000;
    for _ in 0..trials {
        let d = rng.random_range(1..=20usize);
        let h = random_spd(d, 1.0, 10.0, &mut rng);
        let center: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let (hq, cq) = (h.clone(), center.clone());
        let f = FnObjective::new(d, move |y: &[f64]| {
            let e = DVector::from_iterator(y.len(), y.iter().zip(&cq).map(|(a, b)| a - b));
            0.5 * e.dot(&(&hq * &e))
        });
        let x: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let mut sampler = DirectionSampler::new(SamplerKind::SphereUniform, d, rng.random());
        let u = sampler.sample_direction();
        let r = 10f64.powf(rng.random_range(-6.0..=0.0));

        let mut oracle = CountingOracle::new(&f);
        let fx = oracle.evaluate(&x).unwrap();
        let diffs = central_differences(&mut oracle, &x, fx, &u, r).unwrap();
        let candidate = cars_candidate(
            &x,
            &u,
            diffs.d,
            diffs.h,
            1.0,
            CurvaturePolicy::SkipNonpositive,
        )
        .unwrap();

        // Exact line minimizer of the quadratic along u.
        let uv = DVector::from_column_slice(&u);
        let grad = &h * DVector::from_iterator(d, x.iter().zip(&center).map(|(a, b)| a - b));
        let t_star = -uv.dot(&grad) / uv.dot(&(&h * &uv));
        let step_err: f64 = candidate
            .iter()
            .zip(&x)
            .zip(&u)
            .map(|((c, xi), ui)| (c - (xi + t_star * ui)).powi(2))
            .sum::<f64>()
            .sqrt();
        let rel = step_err / (t_star.abs() * uv.norm());
        if !(rel <= tol) {
            failures += 1;
            largest_failing_r = largest_failing_r.max(r);
        }
        if !(rel <= worst) {
            worst = rel;
            worst_r = r;
        }
    }
    Outcome::new(
        failures == 0,
        format!(
            "{failures}/{trials} beyond {tol:e} relative; worst {worst:.2e} at r = {worst_r:.2e}; \
             largest failing r = {largest_failing_r:.2e}"
        ),
    )
}

/// Golden-section minimizer of the cubic model on `[lo, hi]`. Points are
/// compared through `P(a) - P(b)` in factored form so that the comparison
/// stays accurate next to the minimum.
fn golden_section_cubic(d: f64, h: f64, m: f64, mut lo: f64, mut hi: f64) -> f64 {
    let less = |a: f64, b: f64| -> bool {
        let diff = if a * b >= 0.0 {
            let s = if a + b >= 0.0 { 1.0 } else { -1.0 };
            (a - b) * (d + 0.5 * h * (a + b) + s * m * (a * a + a * b + b * b) / 6.0)
        } else {
            cubic_model(a, d, h, m) - cubic_model(b, d, h, m)
        };
        diff < 0.0
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    for _ in 0..400 {
        if hi - lo <= 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if less(a, b) {
            hi = b;
            b = a;
            a = hi - inv_phi * (hi - lo);
        } else {
            lo = a;
            a = b;
            b = lo + inv_phi * (hi - lo);
        }
    }
    0.5 * (lo + hi)
}

fn cubic_step_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_abs = 0.0f64;
    let mut worst_rel = 0.0f64;
    let trials = 1_000;
    for _ in 0..trials {
        let d = rng.random_range(-10.0..=10.0);
        let h = rng.random_range(0.0..=10.0);
        let m = 10f64.powf(rng.random_range(-1.0..=1.0));
        let phi = cubic_minimizer_phi(d, h, m);
        // |phi| <= sqrt(2|d|/M) whenever h >= 0.
        let bound = (2.0 * d.abs() / m).sqrt() + 1.0;
        let reference = golden_section_cubic(d, h, m, -bound, bound);
        worst_abs = worst_abs.max((phi - reference).abs());
        if d != 0.0 && h > 0.0 {
            let via_l_hat = -d / (adaptive_l_hat(d, h, m).unwrap() * h);
            worst_rel = worst_rel.max(((via_l_hat - phi) / phi).abs());
        }
    }
    Outcome::new(
        worst_abs <= 1e-8 && worst_rel <= 1e-10,
        format!(
            "{trials} triples: golden-section gap {worst_abs:.2e} (<= 1e-8), L_hat form {worst_rel:.2e} (<= 1e-10)"
        ),
    )
}

fn difference_error_bounds() -> Outcome {
    let f = FnObjective::new(1, |x: &[f64]| x[0].powi(3));
    let radii: Vec<f64> = (0..=8)
        .map(|j| 10f64.powf(-3.0 + 0.25 * j as f64))
        .collect();
    let points: Vec<f64> = (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect();
    let mut violations = 0;
    let mut checks = 0;
    let mut tightest = 0.0f64;
    for &x in &points {
        for &u in &[1.0, -1.0, 0.5, 2.0] {
            for &r in &radii {
                let step = r * f64::abs(u);
                // Hessian Lipschitz constant measured on [x - r|u|, x + r|u|].
                let grid: Vec<f64> = (0..=16).map(|i| x - step + step * i as f64 / 8.0).collect();
                let l1 = grid
                    .windows(2)
                    .map(|w| (6.0 * w[1] - 6.0 * w[0]).abs() / (w[1] - w[0]))
                    .fold(0.0, f64::max);

                let mut oracle = CountingOracle::new(&f);
                let fx = oracle.evaluate(&[x]).unwrap();
                let diffs = central_differences(&mut oracle, &[x], fx, &[u], r).unwrap();
                let d_err = (diffs.d - 3.0 * x * x * u).abs();
                let h_err = (diffs.h - 6.0 * x * u * u).abs();

                // Floating-point error of evaluating the difference quotients.
                let eps = f64::EPSILON;
                let reach = x.abs() + step;
                let slack_d =
                    8.0 * eps * (diffs.f_plus.abs() + diffs.f_minus.abs() + 3.0 * reach.powi(3))
                        / r;
                let slack_h = 8.0
                    * eps
                    * (diffs.f_plus.abs()
                        + 2.0 * fx.abs()
                        + diffs.f_minus.abs()
                        + 3.0 * reach.powi(3))
                    / (r * r);

                let d_bound = derivative_error_bound(1.0, l1, r, u.abs());
                let h_bound = curvature_error_bound(1.0, l1, r, u.abs());
                checks += 2;
                if d_err > d_bound + slack_d {
                    violations += 1;
                }
                if h_err > h_bound + slack_h {
                    violations += 1;
                }
                tightest = tightest.max(d_err / d_bound);
            }
        }
    }
    Outcome::new(
        violations == 0,
        format!("{violations} violations in {checks} checks; derivative error reaches {tightest:.6} of its bound"),
    )
}

fn radius_limit_scaling() -> Outcome {
    let worked = HolderConstants {
        a: 1.0,
        l_a: 3.0,
        mu: 1.0,
        epsilon: 1e-4,
        gamma: 1.0,
    };
    let c_worked = worked.radius_limit().unwrap();
    let mut worst = 0.0f64;
    let bases = [
        worked,
        HolderConstants {
            a: 0.5,
            l_a: 7.0,
            mu: 0.3,
            epsilon: 1e-6,
            gamma: 0.4,
        },
        HolderConstants {
            a: 0.8,
            l_a: 0.02,
            mu: 5.0,
            epsilon: 1e-2,
            gamma: 1.0,
        },
    ];
    for base in bases {
        let c = base.radius_limit().unwrap();
        for lambda in [1e-3, 1e3] {
            let scaled = HolderConstants {
                mu: lambda * base.mu,
                l_a: lambda * base.l_a,
                epsilon: lambda * base.epsilon,
                ..base
            };
            worst = worst.max(((scaled.radius_limit().unwrap() - c) / c).abs());
        }
    }
    Outcome::new(
        c_worked == 0.1 && worst <= 1e-12,
        format!(
            "worked instance C = {c_worked:?}; worst relative change under scaling {worst:.1e}"
        ),
    )
}

fn cone_probability() -> Outcome {
    let n = 100_000;
    let mut pass = true;
    let mut lines = Vec::new();
    for kind in [SamplerKind::SphereUniform, SamplerKind::Gaussian] {
        for d in [2usize, 10, 100] {
            let g: Vec<f64> = (0..d).map(|i| (i as f64 + 1.0).sin()).collect();
            let mut s = DirectionSampler::new(kind.clone(), d, 70 + d as u64);
            let est = estimate_p_gamma(&mut s, &g, 1.0 / (d as f64).sqrt(), n).unwrap();
            let ok = est.mean >= 0.3156 - 3.0 * est.std_err;
            pass &= ok;
            lines.push(format!("{kind} d={d} {:.4}", est.mean));
        }
        let mut s = DirectionSampler::new(kind.clone(), 2, 5);
        let est = estimate_p_gamma(&mut s, &[0.3, -1.2], 1.0 / SQRT_2, n).unwrap();
        let ok = (est.mean - 0.5).abs() <= 3.0 * est.std_err;
        pass &= ok;
        lines.push(format!("{kind} d=2 half-cone {:.4}", est.mean));
    }
    Outcome::new(pass, lines.join(", "))
}

fn eta_lower_bound() -> Outcome {
    // Dyadic spectrum keeps the Newton-direction ratio exact in floating point.
    let spectrum = [1.0, 4.0, 16.0, 64.0, 1.0, 4.0, 16.0, 64.0];
    let d = spectrum.len();
    let h = DMatrix::from_diagonal(&DVector::from_column_slice(&spectrum));
    let g = [3.0, -1.0, 2.0, 5.0, -4.0, 1.0, -2.0, 7.0];
    let (mu, l) = (1.0, 64.0);
    let floor = mu / (d as f64 * l);
    let n = 100_000;
    let mut pass = true;
    let mut lines = Vec::new();
    for kind in [
        SamplerKind::SphereUniform,
        SamplerKind::Gaussian,
        SamplerKind::CoordinateUniform,
        SamplerKind::Rademacher,
    ] {
        let mut s = DirectionSampler::new(kind.clone(), d, 21);
        let est = estimate_eta(&mut s, &g, &h, n).unwrap();
        pass &= est.mean >= floor - 3.0 * est.std_err && est.mean <= 1.0;
        lines.push(format!("{kind} {:.4}", est.mean));
    }
    let newton: Vec<f64> = g.iter().zip(&spectrum).map(|(gi, li)| gi / li).collect();
    let mut s = DirectionSampler::new(SamplerKind::Fixed(newton), d, 0);
    let est = estimate_eta(&mut s, &g, &h, 1_000).unwrap();
    pass &= est.mean == 1.0;
    lines.push(format!("newton {:?}", est.mean));
    Outcome::new(pass, format!("floor {floor:.4}: {}", lines.join(", ")))
}

fn median(mut v: Vec<u64>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn linear_rate() -> Outcome {
    let start = Instant::now();
    let problem = problems::make_quadratic(10, 10.0, 0);
    let solver = CarsConfig::default();
    let eps = [1e-2, 1e-4, 1e-6];
    let records: Vec<RunRecord> = (0..20)
        .map(|seed| bench::run_one(&problem, &solver, seed, 100_000, &eps).unwrap())
        .collect();
    let mut medians = Vec::new();
    for e in eps {
        let counts: Option<Vec<u64>> = records.iter().map(|r| r.queries_for(e).flatten()).collect();
        match counts {
            Some(c) => medians.push(median(c)),
            None => return Outcome::new(false, format!("some seed never reached {e:e}")),
        }
    }
    let xs: Vec<f64> = eps.iter().map(|e| (1.0 / e).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, medians.iter().sum::<f64>() / n);
    let sxy: f64 = xs
        .iter()
        .zip(&medians)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&medians)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let ss_tot: f64 = medians.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    let (fast, t) = within(start, Duration::from_secs(10));
    Outcome::new(
        r2 >= 0.95 && slope > 0.0 && fast,
        format!("medians {medians:?}, slope {slope:.1} per log(1/eps), R^2 = {r2:.4}; {t}"),
    )
}

fn quartic_desk_run() -> Outcome {
    let start = Instant::now();
    let problem = problems::make_quartic(30, 0.1, 0.01, DEFAULT_QUARTIC_SEED);
    let cars = CarsConfig::default();
    let cr = CarsCrConfig::default();
    let mut pass = true;
    let mut lines = Vec::new();
    for solver in [&cars as &dyn Solver, &cr] {
        let records: Vec<RunRecord> = (0..10)
            .map(|seed| bench::run_one(&problem, solver, seed, 100_000, &[1e-6]).unwrap())
            .collect();
        let solved = records
            .iter()
            .filter(|r| r.queries_for(1e-6).flatten().is_some())
            .count();
        let worst_gap = records
            .iter()
            .map(|r| (r.final_best - 0.0) / (r.f0 - 0.0))
            .fold(0.0, f64::max);
        pass &= solved >= 9;
        lines.push(format!(
            "{}: {solved}/10 seeds reached 1e-6, worst relative gap {worst_gap:.2e}",
            solver.name()
        ));
    }
    let (fast, t) = within(start, Duration::from_secs(60));
    lines.push(t);
    Outcome::new(pass && fast, lines.join("; "))
}

fn profile_dominance() -> Outcome {
    let start = Instant::now();
    let suite = problems::mgh_suite();
    let cars = CarsConfig::default();
    let stp = StpConfig::default();
    let seeds: Vec<u64> = (0..10).collect();
    let eps = [1e-1, 1e-3];
    let records = bench::run_grid(
        &suite,
        &[&cars, &stp],
        &seeds,
        0,
        bench::DEFAULT_BUDGET,
        &eps,
        None,
    )
    .unwrap();
    let mut pass = true;
    let mut lines = Vec::new();
    for e in eps {
        let ratios = bench::performance_ratios(&records, e).unwrap();
        // The profiles are step functions that only change at observed
        // ratios, so those points and tau = 4 cover every tau >= 4.
        let mut taus: Vec<f64> = ratios
            .ratios
            .iter()
            .flatten()
            .copied()
            .filter(|&r| r >= 4.0)
            .chain([4.0])
            .collect();
        taus.sort_by(f64::total_cmp);
        taus.dedup();
        let profile = bench::performance_profile(&ratios, &taus).unwrap();
        let rc = profile.rho_of("cars").unwrap();
        let rs = profile.rho_of("stp").unwrap();
        let margin = rc
            .iter()
            .zip(rs)
            .map(|(a, b)| a - b)
            .fold(f64::INFINITY, f64::min);
        pass &= margin >= 0.0;
        lines.push(format!(
            "eps {e:e}: rho(4) cars {:.3} stp {:.3}, min margin {margin:.3}",
            rc[0], rs[0]
        ));
    }
    let (fast, t) = within(start, Duration::from_secs(600));
    lines.push(t);
    Outcome::new(pass && fast, lines.join("; "))
}

fn hand_record(problem: &str, solver: &str, queries: Option<u64>) -> RunRecord {
    RunRecord {
        version: RECORD_VERSION,
        problem: problem.into(),
        solver: solver.into(),
        seed: 0,
        budget: 1_000,
        queries_used: queries.unwrap_or(1_000),
        iterations: 0,
        f0: 1.0,
        f_star: Some(0.0),
        queries_to_target: vec![TargetCount { eps: 1e-3, queries }],
        final_best: 0.0,
        trace: Vec::new(),
        error: None,
    }
}

fn profile_math() -> Outcome {
    let records = vec![
        hand_record("p1", "s1", Some(100)),
        hand_record("p1", "s2", Some(200)),
        hand_record("p2", "s1", Some(400)),
        hand_record("p2", "s2", Some(100)),
    ];
    let mut file = Vec::new();
    write_records(&mut file, &records).unwrap();
    let records = read_records(file.as_slice()).unwrap();
    let ratios = bench::performance_ratios(&records, 1e-3).unwrap();
    let profile = bench::performance_profile(&ratios, &[1.0, 2.0, 4.0]).unwrap();
    let s1 = profile.rho_of("s1").unwrap().to_vec();
    let s2 = profile.rho_of("s2").unwrap().to_vec();
    let hand_ok = ratios.ratios == vec![vec![1.0, 2.0], vec![4.0, 1.0]]
        && s1 == [0.5, 0.5, 1.0]
        && s2[..2] == [0.5, 1.0];

    let mut with_unsolved = records.clone();
    with_unsolved.push(hand_record("p1", "s3", None));
    with_unsolved.push(hand_record("p2", "s3", None));
    let ratios = bench::performance_ratios(&with_unsolved, 1e-3).unwrap();
    let grid = bench::log_tau_grid(1e19, 60).unwrap();
    let profile = bench::performance_profile(&ratios, &grid).unwrap();
    let unsolved_ok = ratios.ratios.iter().all(|row| row[2] == UNSOLVED_RATIO)
        && profile.rho_of("s3").unwrap().iter().all(|&v| v == 0.0)
        && profile.rho_of("s1").unwrap()[0] == 0.5;
    Outcome::new(
        hand_ok && unsolved_ok,
        format!(
            "s1 {s1:?}, s2 {:?}; unsolved ratio {:e}",
            &s2[..2],
            UNSOLVED_RATIO
        ),
    )
}
