use approx::assert_abs_diff_eq;

use microepi::nash::{optimize_system, scalar_minimize, Minimum};
use microepi::{
    p_default, stage_nash, system_optimum, welfare_loss, ActivityCost, CostParams64, Shaping,
};

const E1: f64 = 0.36787944117144233;

fn brute_force<F: Fn(f64) -> f64>(f: &F) -> Minimum<f64> {
    let n = 1_000_000;
    let mut best = Minimum {
        arg: 0.0,
        value: f(0.0),
    };
    for i in 1..=n {
        let u = i as f64 / n as f64;
        let v = f(u);
        if v < best.value {
            best = Minimum { arg: u, value: v };
        }
    }
    best
}

#[test]
fn scalar_minimize_matches_brute_force() {
    let objectives: Vec<Box<dyn Fn(f64) -> f64>> = vec![
        Box::new(|u| (u - 0.4242).powi(2)),
        Box::new(|u| (u - 0.9).abs() + 0.1 * u),
        Box::new(|u| -u * (1.0 - u).powi(3)),
        Box::new(|u| 3.0 * p_default(u).unwrap() + 0.7 * u),
        Box::new(|u| 0.2 * p_default(u).unwrap() + u),
        Box::new(|u| (8.0 * u).cos() + 0.5 * u),
    ];
    for f in &objectives {
        let found = scalar_minimize(f, 1e-10).unwrap();
        let brute = brute_force(f);
        assert!(
            (found.arg - brute.arg).abs() <= 1e-4,
            "found {:?}, brute {:?}",
            found,
            brute
        );
        assert!(found.value <= brute.value + 1e-12);
    }
}

#[test]
fn optimum_never_worse_than_nash() {
    for population in [1, 2, 3, 5, 9, 20] {
        for m in 0..=population {
            for alpha in [0.05, 0.5, 1.0, 1.9, 2.0, 3.0, 10.0] {
                let params = CostParams64::new(alpha);
                let nash = stage_nash(m, population, &params, false).unwrap();
                let opt = system_optimum(m, population, &params).unwrap();
                assert!(
                    opt.cost <= nash.system_cost + 1e-9,
                    "m {m}, M {population}, alpha {alpha}"
                );
                assert!(welfare_loss(m, population, &params).unwrap() >= -1e-9);
            }
        }
    }
}

#[test]
fn equilibrium_dominance_for_low_alpha() {
    for population in [2, 4, 10, 50] {
        for m in 1..=population {
            for alpha in [0.1, 0.5, 1.0, 1.5, 1.99] {
                let eq = stage_nash(m, population, &CostParams64::new(alpha), false).unwrap();
                assert!(eq.u_healthy <= eq.u_infected);
                assert_abs_diff_eq!(eq.u_infected, 1.0, epsilon = 1e-9);
                assert_abs_diff_eq!(eq.u_healthy, 0.0, epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn shaping_leaves_the_optimum_unchanged() {
    for population in [2, 4, 8] {
        for m in 0..=population {
            for alpha in [0.5, 1.0, 1.5] {
                let plain = CostParams64::new(alpha);
                let shaped = CostParams64::new(alpha).with_shaping(Shaping::identity());
                let a = system_optimum(m, population, &plain).unwrap();
                let b = system_optimum(m, population, &shaped).unwrap();
                assert_abs_diff_eq!(a.cost, b.cost, epsilon = 1e-12);
                // Where the optimum isolates the infected, q vanishes there.
                if a.u_infected == 0.0 {
                    let c = optimize_system(m, population, &shaped, true).unwrap();
                    assert!(
                        (a.cost - c.cost).abs() <= 1e-6,
                        "m {m} M {population} alpha {alpha}: {a:?} vs {c:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn four_agent_reference_values() {
    let params = CostParams64::new(1.0).with_shaping(Shaping::identity());
    let nash = stage_nash(1, 4, &params, false).unwrap();
    assert_abs_diff_eq!(nash.system_cost, 1.0 + 3.0 * E1, epsilon = 1e-9);
    let opt = system_optimum(1, 4, &params).unwrap();
    assert_abs_diff_eq!(opt.cost, 1.0 + E1, epsilon = 1e-6);
    assert_abs_diff_eq!(opt.u_healthy, 1.0, epsilon = 1e-6);
    assert_abs_diff_eq!(opt.u_infected, 0.0, epsilon = 1e-6);
    let shaped = stage_nash(1, 4, &params, true).unwrap();
    assert_abs_diff_eq!(shaped.system_cost, opt.cost, epsilon = 1e-6);
}

#[test]
fn custom_activity_cost_uses_numeric_minimizer() {
    let params =
        CostParams64::new(1.0).with_activity_cost(ActivityCost::custom(|u: f64| (u - 0.3).powi(2)));
    let eq = stage_nash(2, 5, &params, false).unwrap();
    assert_abs_diff_eq!(eq.u_infected, 0.3, epsilon = 1e-6);
}
