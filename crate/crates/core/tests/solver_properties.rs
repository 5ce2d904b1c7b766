use std::sync::Arc;

use proptest::prelude::*;

use cars::baselines::{NesterovConfig, SpsaConfig, StpConfig};
use cars::cars::{cars_candidate, CarsConfig, CurvaturePolicy};
use cars::cars_cr::{adaptive_l_hat, cubic_minimizer_phi, cubic_model, CarsCrConfig, CrRadius};
use cars::finite_diff::central_differences;
use cars::problems::{self, Problem};
use cars::solver::{minimize, RunContext, Solver, StopRule, Target};
use cars::{CountingOracle, FnObjective, IterState, Objective};

fn trajectory(
    solver: &dyn Solver,
    objective: &dyn Objective,
    x0: &[f64],
    budget: u64,
    seed: u64,
) -> Vec<IterState> {
    let mut states = Vec::new();
    minimize(
        solver,
        objective,
        x0,
        None,
        &StopRule::budget(budget),
        seed,
        |s, _| states.push(s.clone()),
    )
    .unwrap();
    states
}

struct Scaled {
    inner: Arc<dyn Objective>,
    lambda: f64,
}

impl Objective for Scaled {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        self.lambda * self.inner.eval(x)
    }
}

#[test]
fn objective_scale_leaves_iterates_unchanged() {
    let problem = problems::lookup("wood").unwrap();
    let solver = CarsConfig::default();
    let base = trajectory(&solver, problem.objective(), &problem.x0, 3_000, 9);

    // A power of two scales every floating-point value exactly.
    let exact = Scaled {
        inner: problem.shared_objective(),
        lambda: 1024.0,
    };
    let scaled = trajectory(&solver, &exact, &problem.x0, 3_000, 9);
    assert_eq!(base.len(), scaled.len());
    for (a, b) in base.iter().zip(&scaled) {
        assert_eq!(a.x, b.x);
    }

    let decimal = Scaled {
        inner: problem.shared_objective(),
        lambda: 1e3,
    };
    let scaled = trajectory(&solver, &decimal, &problem.x0, 300, 9);
    for (a, b) in base.iter().zip(&scaled) {
        for (p, q) in a.x.iter().zip(&b.x) {
            assert!((p - q).abs() <= 1e-10 * p.abs().max(1.0), "{p} vs {q}");
        }
    }
}

#[test]
fn candidate_invariant_to_large_direction_rescaling() {
    let problem = problems::lookup("helical-valley").unwrap();
    let f = problem.objective();
    let x = [0.3, -1.1, 0.8];
    let fx = f.eval(&x);
    let u = [0.48, -0.6, 0.64];
    let r = 0.01;
    let mut oracle = CountingOracle::new(f);
    let a = central_differences(&mut oracle, &x, fx, &u, r).unwrap();
    let reference =
        cars_candidate(&x, &u, a.d, a.h, 2.0, CurvaturePolicy::SkipNonpositive).unwrap();
    for beta in [1e-3, 1e3] {
        let ub: Vec<f64> = u.iter().map(|v| v * beta).collect();
        let b = central_differences(&mut oracle, &x, fx, &ub, r / beta).unwrap();
        let c = cars_candidate(&x, &ub, b.d, b.h, 2.0, CurvaturePolicy::SkipNonpositive).unwrap();
        for (p, q) in reference.iter().zip(&c) {
            assert!(
                (p - q).abs() <= 1e-10 * p.abs().max(1.0),
                "beta {beta}: {p} vs {q}"
            );
        }
    }
}

#[test]
fn one_dimensional_quadratic_solved_in_one_iteration() {
    let f = FnObjective::new(1, |x: &[f64]| 0.5 * (x[0] - 3.0).powi(2));
    let problem = Problem::new("line", Arc::new(f), vec![-2.0], Some(0.0));
    let solver = CarsConfig {
        l_hat: 1.0,
        ..CarsConfig::default()
    };
    let stop = StopRule::budget(100).with_target(Target::Value(1e-12));
    let out = cars::cars::run_cars(&problem, &solver, &stop, 0).unwrap();
    assert_eq!(out.iterations, 1);
    assert_eq!(out.queries_used, 4);
    assert!(out.best_value <= 1e-12);
}

#[test]
fn budget_is_never_exceeded() {
    let solvers: [&dyn Solver; 5] = [
        &CarsConfig::default(),
        &CarsCrConfig::default(),
        &StpConfig::default(),
        &NesterovConfig::default(),
        &SpsaConfig::default(),
    ];
    for problem in problems::mgh_suite() {
        for solver in solvers {
            for budget in [1, 2, 10, 11] {
                let out = minimize(
                    solver,
                    problem.objective(),
                    &problem.x0,
                    None,
                    &StopRule::budget(budget),
                    1,
                    |_, _| {},
                )
                .unwrap();
                assert!(
                    out.queries_used <= budget,
                    "{} {}",
                    problem.name,
                    solver.name()
                );
            }
        }
    }
}

#[test]
fn rosenbrock_iterates_descend_and_stay_finite() {
    let problem = problems::lookup("rosenbrock").unwrap();
    for solver in [
        &CarsConfig::default() as &dyn Solver,
        &CarsCrConfig::default(),
        &StpConfig::default(),
    ] {
        let states = trajectory(solver, problem.objective(), &problem.x0, 20_000, 5);
        let mut prev = problem.eval(&problem.x0);
        for s in &states {
            assert!(s.x.iter().all(|v| v.is_finite()));
            assert!(s.fx <= prev, "{}", solver.name());
            prev = s.fx;
        }
        assert!(prev < 1e-3, "{} ended at {prev}", solver.name());
    }
}

#[test]
fn baselines_replay_deterministically() {
    let problem = problems::lookup("beale").unwrap();
    for solver in [
        &StpConfig::default() as &dyn Solver,
        &NesterovConfig::default(),
        &SpsaConfig::default(),
    ] {
        let a = trajectory(solver, problem.objective(), &problem.x0, 2_000, 42);
        let b = trajectory(solver, problem.objective(), &problem.x0, 2_000, 42);
        assert_eq!(a.len(), b.len(), "{}", solver.name());
        for (p, q) in a.iter().zip(&b) {
            assert!(
                p.x.iter()
                    .chain([&p.fx])
                    .zip(q.x.iter().chain([&q.fx]))
                    .all(|(u, v)| u.to_bits() == v.to_bits()),
                "{} k={}: {:?}",
                solver.name(),
                p.k,
                p.x
            );
        }
    }
}

#[test]
fn linear_convergence_slope_is_negative() {
    let problem = problems::make_quadratic(10, 10.0, 0);
    let solver = CarsConfig {
        l_hat: 1.0,
        ..CarsConfig::default()
    };
    let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for seed in 0..20 {
        for s in trajectory(&solver, problem.objective(), &problem.x0, 1_500, seed) {
            if s.fx > 0.0 {
                let (x, y) = (s.k as f64, s.fx.ln());
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                n += 1.0;
            }
        }
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(slope < 0.0, "slope {slope}");
}

#[test]
fn cr_curvature_is_nonnegative_on_convex_quartic() {
    let problem = problems::make_quartic(30, 0.1, 0.01, 0);
    let solver = CarsCrConfig::default();
    let mut seen = 0;
    minimize(
        &solver,
        problem.objective(),
        &problem.x0,
        Some(0.0),
        &StopRule::budget(20_000),
        2,
        |_, rep| {
            let h = rep.differences.as_ref().unwrap().h;
            assert!(h >= 0.0, "h_r = {h}");
            seen += 1;
        },
    )
    .unwrap();
    assert!(seen > 4_000);
}

#[test]
fn cr_gap_times_k_stays_bounded_on_quartic() {
    let problem = problems::make_quartic(30, 0.1, 0.01, 0);
    let solver = CarsCrConfig::default();
    let checkpoints = [100u64, 300, 1_000, 3_000, 10_000];
    let mut per_seed: Vec<Vec<f64>> = Vec::new();
    for seed in 0..5 {
        let states = trajectory(
            &solver,
            problem.objective(),
            &problem.x0,
            1 + 4 * 10_000,
            seed,
        );
        per_seed.push(
            checkpoints
                .iter()
                .map(|&k| k as f64 * states[k as usize - 1].fx)
                .collect(),
        );
    }
    let medians: Vec<f64> = (0..checkpoints.len())
        .map(|j| {
            let mut col: Vec<f64> = per_seed.iter().map(|row| row[j]).collect();
            col.sort_by(f64::total_cmp);
            col[col.len() / 2]
        })
        .collect();
    for m in &medians[1..] {
        assert!(*m <= medians[0], "k (f_k - f*) medians {medians:?}");
    }
}

#[test]
fn cr_schedule_radius_never_exceeds_r_max() {
    let config = CarsCrConfig {
        radius: CrRadius::Schedule {
            epsilon: 0.5,
            r_max: 0.2,
            b: None,
            smoothness: Some(1e-4),
        },
        ..CarsCrConfig::default()
    };
    let ctx = RunContext {
        f0: 1e-6,
        f_star: Some(0.0),
    };
    for k in 0..10_000 {
        let r = config.radius_at(k, &ctx);
        assert!(r > 0.0 && r <= 0.2);
    }
}

proptest! {
    #[test]
    fn phi_minimizes_the_cubic_model(d in -10.0f64..10.0, h in 0.0f64..10.0, m in 0.1f64..10.0) {
        let phi = cubic_minimizer_phi(d, h, m);
        let p_phi = cubic_model(phi, d, h, m);
        let reach = (2.0 * d.abs() / m).sqrt() + 1.0;
        let grid_min = (0..=20_000)
            .map(|i| cubic_model(-reach + 2.0 * reach * i as f64 / 20_000.0, d, h, m))
            .fold(f64::INFINITY, f64::min);
        prop_assert!(p_phi - grid_min <= 1e-9);
        if d != 0.0 {
            prop_assert_eq!(phi.signum(), -d.signum());
        }
        // (M/2)|phi| phi = -d - h phi
        let lhs = 0.5 * m * phi.abs() * phi;
        let rhs = -d - h * phi;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(d.abs()).max(1e-300));
    }

    #[test]
    fn adaptive_l_hat_is_at_least_one(d in -10.0f64..10.0, h in 1e-6f64..10.0, m in 0.0f64..10.0) {
        let l = adaptive_l_hat(d, h, m).unwrap();
        prop_assert!(l >= 1.0);
        prop_assert_eq!(l == 1.0, m * d.abs() == 0.0 || m * d.abs() / (2.0 * h * h) < 1e-17);
    }
}
