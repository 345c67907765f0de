use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::Rng;

use microepi::dynamics::step_with;
use microepi::rng::stream;
use microepi::{
    expected_new_infections, infection_probability, run_trajectory, step, ActionProfile,
    AgentState, InterventionCase, PopulationState, ScenarioSpec64,
};

// Monotonicity is exact in real arithmetic; allow a few ulps of rounding.
const ROUNDING: f64 = 4.0 * f64::EPSILON;

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0f64]
}

fn population() -> impl Strategy<Value = (Vec<bool>, Vec<f64>)> {
    (1usize..40).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(unit(), n),
        )
    })
}

proptest! {
    #[test]
    fn infection_probability_is_bounded_and_monotone(
        u in unit(),
        du in 0.0..1.0f64,
        levels in prop::collection::vec(unit(), 0..150),
        extra in unit(),
        bump in 0.0..1.0f64,
    ) {
        let p = infection_probability(u, &levels).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(infection_probability((u + du).min(1.0), &levels).unwrap() >= p - ROUNDING);

        let mut more = levels.clone();
        more.push(extra);
        prop_assert!(infection_probability(u, &more).unwrap() >= p - ROUNDING);

        if !levels.is_empty() {
            let mut raised = levels.clone();
            raised[0] = (raised[0] + bump).min(1.0);
            prop_assert!(infection_probability(u, &raised).unwrap() >= p - ROUNDING);
        }
    }

    #[test]
    fn single_infected_is_the_meeting_probability(u in unit(), v in unit()) {
        prop_assert_eq!(infection_probability(u, &[v]).unwrap(), u.min(v));
    }

    #[test]
    fn step_never_heals_and_keeps_length((infected, levels) in population(), seed in any::<u64>()) {
        let states = infected.iter().map(|&b| if b { AgentState::Infected } else { AgentState::Healthy }).collect();
        let state = PopulationState::new(states).unwrap();
        let actions = ActionProfile::new(levels).unwrap();
        let next = step(&state, &actions, &mut stream(seed, 0)).unwrap();
        prop_assert_eq!(next.len(), state.len());
        prop_assert_eq!(next.day(), state.day() + 1);
        for i in 0..state.len() {
            prop_assert!(next.state(i).indicator() >= state.state(i).indicator());
        }
    }

    #[test]
    fn permutation_commutes_with_step(
        (infected, levels, perm) in population().prop_flat_map(|(infected, levels)| {
            let n = infected.len();
            (Just(infected), Just(levels), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        }),
        seed in any::<u64>(),
    ) {
        let n = infected.len();
        let to_state = |b: bool| if b { AgentState::Infected } else { AgentState::Healthy };
        let draws: Vec<f64> = {
            let mut r = stream(seed, 0);
            (0..n).map(|_| r.gen()).collect()
        };

        let state = PopulationState::new(infected.iter().map(|&b| to_state(b)).collect()).unwrap();
        let actions = ActionProfile::new(levels.clone()).unwrap();
        let next = step_with(&state, &actions, |i| draws[i]).unwrap();

        // Agent k of the permuted population is agent perm[k] of the original
        // and keeps that agent's draw.
        let pstate = PopulationState::new(perm.iter().map(|&i| to_state(infected[i])).collect()).unwrap();
        let pactions = ActionProfile::new(perm.iter().map(|&i| levels[i]).collect()).unwrap();
        let pnext = step_with(&pstate, &pactions, |k| draws[perm[k]]).unwrap();

        for (k, &i) in perm.iter().enumerate() {
            prop_assert_eq!(pnext.state(k), next.state(i));
        }
    }

    #[test]
    fn trajectories_are_monotone(
        n in 2usize..80,
        case in 0usize..4,
        delay in 1usize..5,
        scale in 0.0..6.0f64,
        seed in any::<u64>(),
    ) {
        let m = n as f64;
        let case = match case {
            0 => InterventionCase::NoIntervention,
            1 => InterventionCase::ImmediateIsolation,
            2 => InterventionCase::DelayedIsolation { delay },
            _ => InterventionCase::Lockdown,
        };
        let u = (scale / m).min(1.0);
        let spec = ScenarioSpec64::new(case, n, 1, u, 0.1 * u).with_horizon(300).with_runs(3).with_seed(seed);
        for r in 0..3 {
            let t = run_trajectory(&spec, r).unwrap();
            prop_assert_eq!(t.len(), 301);
            prop_assert_eq!(t[0], 1);
            prop_assert!(t.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(t.iter().all(|&k| k <= n));
        }
    }
}

#[test]
fn monte_carlo_matches_expected_new_infections() {
    let state = PopulationState::with_initial_infected(4, 1).unwrap();
    let actions = ActionProfile::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
    let expected = expected_new_infections(&state, &actions).unwrap();
    assert_relative_eq!(expected, 0.3, max_relative = 1e-14);

    let samples = 1_000_000usize;
    let mut rng = stream(2024, 0);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let new = (step(&state, &actions, &mut rng).unwrap().infected_count() - 1) as f64;
        sum += new;
        sum_sq += new * new;
    }
    let n = samples as f64;
    let mean = sum / n;
    let se = ((sum_sq / n - mean * mean) / n).sqrt();
    assert!(
        (mean - expected).abs() <= 3.0 * se,
        "mean {mean}, expected {expected}, se {se}"
    );
}

#[test]
fn infection_frequency_converges() {
    // Agent 0 healthy at 0.25 against a mixed infected set of 70, which
    // exercises the log-domain product.
    let mut levels = vec![0.25];
    levels.extend((0..70).map(|j| 0.001 + 0.0002 * j as f64));
    let mut states = vec![AgentState::Healthy];
    states.extend(std::iter::repeat_n(AgentState::Infected, 70));
    let state = PopulationState::new(states).unwrap();
    let actions = ActionProfile::new(levels.clone()).unwrap();
    let p = infection_probability(0.25, &levels[1..]).unwrap();

    let samples = 200_000usize;
    let mut rng = stream(5, 1);
    let hits = (0..samples)
        .filter(|_| {
            step(&state, &actions, &mut rng)
                .unwrap()
                .state(0)
                .is_infected()
        })
        .count();
    let freq = hits as f64 / samples as f64;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    assert!(
        (freq - p).abs() <= 3.0 * se,
        "frequency {freq}, probability {p}, se {se}"
    );
}

#[test]
fn seeded_runs_are_bit_identical() {
    let spec = ScenarioSpec64::new(
        InterventionCase::DelayedIsolation { delay: 2 },
        150,
        2,
        0.01,
        0.001,
    )
    .with_horizon(400)
    .with_runs(5)
    .with_seed(99);
    for r in 0..5 {
        assert_eq!(
            run_trajectory(&spec, r).unwrap(),
            run_trajectory(&spec, r).unwrap()
        );
    }
}
