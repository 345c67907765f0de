//! Multi-agent Q-learning with one Q-table shared by every agent.
//!
//! The table is indexed by `(x, m, a)`: own health state, number of infected
//! agents, and a discrete activity level. Each day every agent picks an
//! action epsilon-greedily (lowest Q is best; Q holds costs), the population
//! steps once, and then every agent applies one TD update to the shared
//! table in ascending agent order.
//!
//! Random stream order within a day: for agents `0..M`, one exploration coin
//! followed by at most one index draw (uniform action when exploring, or a
//! pick among tied minimizers when there is more than one); then one draw per
//! healthy agent for the transition.

use rand::Rng;

use crate::dynamics::{self, ActionProfile, AgentState, InfectionPressure, PopulationState};
use crate::error::{check_unit, ModelError, Result};
use crate::nash::{ActivityCost, Shaping};
use crate::rng::{self, SimRng, EVALUATION_STREAM_BASE, TRAINING_STREAM};
use crate::Scalar;

/// Learning signal fed to the TD target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostSignal {
    /// The sampled cost `x' + alpha p(u) (+ x q(u))` and the sampled next state.
    Realized,
    /// The agent's own infection outcome is replaced by its probability
    /// given the day's actions:
    /// `alpha p(u) + x q(u) + pi (1 + gamma V(1, m')) + (1 - pi) gamma V(0, m')`.
    /// Coincides with `Realized` whenever `pi` is 0 or 1.
    Expected,
}

/// Shared action-value table.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable<T = f64> {
    population: usize,
    action_levels: Vec<T>,
    values: Vec<T>,
    visits: Vec<u64>,
}

impl<T: Scalar> QTable<T> {
    /// Table over `x in {0, 1}`, `m in 0..=population`, with every entry `init`.
    pub fn new(population: usize, action_levels: Vec<T>, init: T) -> Result<Self> {
        if action_levels.is_empty() {
            return Err(ModelError::Config(
                "at least one action level is required".into(),
            ));
        }
        for &u in &action_levels {
            check_unit("action level", u)?;
        }
        if action_levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::Config(
                "action levels must be strictly increasing".into(),
            ));
        }
        if !init.is_finite() {
            return Err(ModelError::Config("initial Q value must be finite".into()));
        }
        let size = 2 * (population + 1) * action_levels.len();
        Ok(Self {
            population,
            action_levels,
            values: vec![init; size],
            visits: vec![0; size],
        })
    }

    #[inline]
    fn index(&self, x: AgentState, m: usize, a: usize) -> usize {
        debug_assert!(m <= self.population && a < self.action_levels.len());
        (x.indicator() * (self.population + 1) + m) * self.action_levels.len() + a
    }

    pub fn population(&self) -> usize {
        self.population
    }

    pub fn action_levels(&self) -> &[T] {
        &self.action_levels
    }

    pub fn num_actions(&self) -> usize {
        self.action_levels.len()
    }

    #[inline]
    pub fn get(&self, x: AgentState, m: usize, a: usize) -> T {
        self.values[self.index(x, m, a)]
    }

    pub fn set(&mut self, x: AgentState, m: usize, a: usize, value: T) {
        let i = self.index(x, m, a);
        self.values[i] = value;
    }

    /// Number of TD updates applied to the entry.
    pub fn visits(&self, x: AgentState, m: usize, a: usize) -> u64 {
        self.visits[self.index(x, m, a)]
    }

    pub fn is_visited(&self, x: AgentState, m: usize, a: usize) -> bool {
        self.visits(x, m, a) > 0
    }

    /// True if any action has been updated in row `(x, m)`.
    pub fn row_visited(&self, x: AgentState, m: usize) -> bool {
        (0..self.num_actions()).any(|a| self.is_visited(x, m, a))
    }

    pub fn row(&self, x: AgentState, m: usize) -> &[T] {
        let start = self.index(x, m, 0);
        &self.values[start..start + self.num_actions()]
    }

    /// `min_a Q(x, m, a)`.
    pub fn min_value(&self, x: AgentState, m: usize) -> T {
        self.row(x, m).iter().copied().fold(T::infinity(), T::min)
    }

    /// All actions attaining the row minimum, ascending.
    pub fn greedy_actions(&self, x: AgentState, m: usize) -> Vec<usize> {
        let row = self.row(x, m);
        let best = self.min_value(x, m);
        (0..row.len()).filter(|&a| row[a] == best).collect()
    }

    /// Lowest-index minimizer of row `(x, m)`.
    pub fn greedy_action(&self, x: AgentState, m: usize) -> usize {
        self.greedy_actions(x, m)[0]
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone)]
pub struct TrainConfig<T = f64> {
    pub population: usize,
    pub initially_infected: usize,
    pub action_levels: Vec<T>,
    pub alpha: T,
    pub gamma: T,
    /// Learning rate `eta`.
    pub eta: T,
    pub max_episodes: usize,
    /// Maximum days per episode; an episode also ends after the first day
    /// that finishes with everyone infected.
    pub horizon: usize,
    pub shaped: bool,
    pub shaping: Shaping<T>,
    pub activity_cost: ActivityCost<T>,
    pub q_init: T,
    pub seed: u64,
    pub cost_signal: CostSignal,
    /// Run a greedy rollout after every episode.
    pub evaluate_greedy: bool,
    /// Keep per-agent transitions in episode records.
    pub record_transitions: bool,
}

impl<T: Scalar> TrainConfig<T> {
    /// Defaults: one initial infection, actions `{0, 1/M, min(10/M, 1)}`, `alpha = 1`,
    /// `gamma = 0`, `eta = 1`, 200 episodes of at most 50 days, `q = u`
    /// available for shaping, table initialized to 10, expected cost signal.
    pub fn new(population: usize) -> Self {
        let m = T::from_count(population.max(1));
        let mut action_levels = vec![T::zero(), T::one() / m, (T::lit(10.0) / m).min(T::one())];
        action_levels.dedup();
        Self {
            population,
            initially_infected: 1,
            action_levels,
            alpha: T::one(),
            gamma: T::zero(),
            eta: T::one(),
            max_episodes: 200,
            horizon: 50,
            shaped: false,
            shaping: Shaping::identity(),
            activity_cost: ActivityCost::Exponential,
            q_init: T::lit(10.0),
            seed: 0,
            cost_signal: CostSignal::Expected,
            evaluate_greedy: true,
            record_transitions: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 1 {
            return Err(ModelError::Config("population must be at least 1".into()));
        }
        if self.initially_infected < 1 || self.initially_infected > self.population {
            return Err(ModelError::Config(
                "initially infected count must satisfy 1 <= m0 <= M".into(),
            ));
        }
        if !(self.eta > T::zero() && self.eta <= T::one()) {
            return Err(ModelError::Config(
                "learning rate must lie in (0, 1]".into(),
            ));
        }
        if !(self.gamma >= T::zero() && self.gamma < T::one()) {
            return Err(ModelError::Config("discount must lie in [0, 1)".into()));
        }
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(ModelError::Config("alpha must be positive".into()));
        }
        if self.horizon < 1 {
            return Err(ModelError::Config(
                "horizon must be at least one day".into(),
            ));
        }
        if self.max_episodes < 1 {
            return Err(ModelError::Config(
                "at least one episode is required".into(),
            ));
        }
        QTable::new(self.population, self.action_levels.clone(), self.q_init)?;
        Ok(())
    }

    /// Realized stage cost `x' + alpha p(u) (+ x q(u) when shaped)`.
    pub fn realized_cost(&self, x: AgentState, u: T, next_x: AgentState) -> T {
        T::from_count(next_x.indicator()) + self.immediate_cost(x, u)
    }

    /// Cost terms that do not depend on the transition: `alpha p(u) (+ x q(u))`.
    pub fn immediate_cost(&self, x: AgentState, u: T) -> T {
        let base = self.alpha * self.activity_cost.eval(u);
        if self.shaped && x.is_infected() {
            base + self.shaping.eval(u)
        } else {
            base
        }
    }
}

/// Exploration rate `0.5 (1 - episode / max_episodes)`.
pub fn epsilon_schedule<T: Scalar>(episode: usize, max_episodes: usize) -> Result<T> {
    if max_episodes == 0 {
        return Err(ModelError::Config(
            "maximum episode count must be positive".into(),
        ));
    }
    if episode > max_episodes {
        return Err(ModelError::Config(format!(
            "episode {episode} exceeds maximum {max_episodes}"
        )));
    }
    Ok(T::half() * (T::one() - T::from_count(episode) / T::from_count(max_episodes)))
}

/// Epsilon-greedy choice over row `(x, m)`; ties among minimizers are uniform.
pub fn select_action<T: Scalar, R: Rng + ?Sized>(
    q: &QTable<T>,
    x: AgentState,
    m: usize,
    eps: T,
    rng: &mut R,
) -> usize {
    let coin = T::sample_unit(rng);
    if coin < eps {
        return rng.gen_range(0..q.num_actions());
    }
    let best = q.greedy_actions(x, m);
    if best.len() == 1 {
        best[0]
    } else {
        best[rng.gen_range(0..best.len())]
    }
}

#[inline]
fn blend<T: Scalar>(current: T, target: T, eta: T) -> T {
    if eta == T::one() {
        target
    } else {
        current + eta * (target - current)
    }
}

/// One TD update toward `cost + gamma min_a' Q(x', m', a')`. Returns the TD error.
#[allow(clippy::too_many_arguments)]
pub fn td_update<T: Scalar>(
    q: &mut QTable<T>,
    x: AgentState,
    m: usize,
    a: usize,
    cost: T,
    next_x: AgentState,
    next_m: usize,
    gamma: T,
    eta: T,
) -> T {
    let target = cost + gamma * q.min_value(next_x, next_m);
    apply_target(q, x, m, a, target, eta)
}

/// TD update whose own-infection outcome is averaged with probability
/// `infection_probability`. Returns the TD error.
#[allow(clippy::too_many_arguments)]
pub fn expected_td_update<T: Scalar>(
    q: &mut QTable<T>,
    x: AgentState,
    m: usize,
    a: usize,
    immediate_cost: T,
    infection_probability: T,
    next_m: usize,
    gamma: T,
    eta: T,
) -> T {
    let sick = T::one() + gamma * q.min_value(AgentState::Infected, next_m);
    let target = if infection_probability == T::one() {
        immediate_cost + sick
    } else {
        let well = gamma * q.min_value(AgentState::Healthy, next_m);
        immediate_cost + infection_probability * sick + (T::one() - infection_probability) * well
    };
    apply_target(q, x, m, a, target, eta)
}

fn apply_target<T: Scalar>(
    q: &mut QTable<T>,
    x: AgentState,
    m: usize,
    a: usize,
    target: T,
    eta: T,
) -> T {
    let i = q.index(x, m, a);
    let current = q.values[i];
    let delta = target - current;
    q.values[i] = blend(current, target, eta);
    q.visits[i] += 1;
    delta
}

/// One agent-day of experience.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<T = f64> {
    pub agent: usize,
    pub x: AgentState,
    pub m: usize,
    pub action: usize,
    /// Realized cost.
    pub cost: T,
    /// Probability that this agent was infected today.
    pub infection_probability: T,
    pub next_x: AgentState,
    pub next_m: usize,
}

/// Outcome of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord<T = f64> {
    /// 1-based episode index.
    pub episode: usize,
    pub epsilon: T,
    /// `m_0, m_1, ...` up to the last simulated day.
    pub m_trajectory: Vec<usize>,
    /// Empty unless transitions are recorded.
    pub transitions: Vec<Transition<T>>,
    /// Sum of realized costs over agents and days.
    pub cumulative_cost: T,
}

impl<T: Scalar> EpisodeRecord<T> {
    pub fn final_m(&self) -> usize {
        *self.m_trajectory.last().expect("trajectory holds m_0")
    }

    /// `sum_k m_k` over the recorded days, with saturated episodes padded to
    /// `days + 1` entries at `m = M`.
    pub fn area(&self, days: usize) -> usize {
        let sum: usize = self.m_trajectory.iter().sum();
        let pad = (days + 1).saturating_sub(self.m_trajectory.len());
        sum + pad * self.final_m()
    }
}

fn simulate<T: Scalar>(
    q: &mut QTable<T>,
    cfg: &TrainConfig<T>,
    eps: T,
    learn: bool,
    rng: &mut SimRng,
) -> Result<(Vec<usize>, Vec<Transition<T>>, T)> {
    let population = cfg.population;
    let mut state = PopulationState::with_initial_infected(population, cfg.initially_infected)?;
    let mut trajectory = vec![state.infected_count()];
    let mut transitions = Vec::new();
    let mut total = T::zero();
    let mut chosen = vec![0usize; population];

    for _ in 0..cfg.horizon {
        let m = state.infected_count();
        for (i, slot) in chosen.iter_mut().enumerate() {
            *slot = select_action(q, state.state(i), m, eps, rng);
        }
        let actions = ActionProfile::new(chosen.iter().map(|&a| q.action_levels()[a]).collect())?;
        let pressure = InfectionPressure::of(&state, &actions);
        let next = dynamics::step(&state, &actions, rng)?;
        let next_m = next.infected_count();

        for (i, &a) in chosen.iter().enumerate() {
            let x = state.state(i);
            let next_x = next.state(i);
            let u = actions.level(i);
            let cost = cfg.realized_cost(x, u, next_x);
            let pi = if x.is_infected() {
                T::one()
            } else {
                pressure.infection_probability(u)
            };
            total = total + cost;
            if learn {
                match cfg.cost_signal {
                    CostSignal::Realized => {
                        td_update(q, x, m, a, cost, next_x, next_m, cfg.gamma, cfg.eta);
                    }
                    CostSignal::Expected => {
                        expected_td_update(
                            q,
                            x,
                            m,
                            a,
                            cfg.immediate_cost(x, u),
                            pi,
                            next_m,
                            cfg.gamma,
                            cfg.eta,
                        );
                    }
                }
            }
            if cfg.record_transitions {
                transitions.push(Transition {
                    agent: i,
                    x,
                    m,
                    action: a,
                    cost,
                    infection_probability: pi,
                    next_x,
                    next_m,
                });
            }
        }
        state = next;
        trajectory.push(next_m);
        if state.is_saturated() {
            break;
        }
    }
    Ok((trajectory, transitions, total))
}

/// Plays one learning episode against the shared table `q`.
pub fn run_episode<T: Scalar>(
    q: &mut QTable<T>,
    cfg: &TrainConfig<T>,
    episode: usize,
    eps: T,
    rng: &mut SimRng,
) -> Result<EpisodeRecord<T>> {
    check_table(q, cfg)?;
    let (m_trajectory, transitions, cumulative_cost) = simulate(q, cfg, eps, true, rng)?;
    Ok(EpisodeRecord {
        episode,
        epsilon: eps,
        m_trajectory,
        transitions,
        cumulative_cost,
    })
}

/// Greedy (epsilon = 0) episode that leaves the table untouched.
pub fn greedy_rollout<T: Scalar>(
    q: &QTable<T>,
    cfg: &TrainConfig<T>,
    rng: &mut SimRng,
) -> Result<Vec<usize>> {
    check_table(q, cfg)?;
    let mut scratch = q.clone();
    let (trajectory, _, _) = simulate(&mut scratch, cfg, T::zero(), false, rng)?;
    Ok(trajectory)
}

fn check_table<T: Scalar>(q: &QTable<T>, cfg: &TrainConfig<T>) -> Result<()> {
    cfg.validate()?;
    if q.population() != cfg.population || q.action_levels() != cfg.action_levels.as_slice() {
        return Err(ModelError::Config(
            "Q-table shape does not match the training configuration".into(),
        ));
    }
    Ok(())
}

/// Everything produced by [`train`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingOutcome<T = f64> {
    pub table: QTable<T>,
    pub episodes: Vec<EpisodeRecord<T>>,
    /// Final infected count of the greedy rollout run after each episode;
    /// empty when greedy evaluation is off.
    pub greedy_final_m: Vec<usize>,
}

impl<T: Scalar> TrainingOutcome<T> {
    /// First episode (1-based) after which the greedy policy keeps `m` at
    /// its initial value.
    pub fn first_flat_episode(&self, initially_infected: usize) -> Option<usize> {
        self.greedy_final_m
            .iter()
            .position(|&m| m == initially_infected)
            .map(|i| i + 1)
    }

    /// Episode (1-based) from which every later greedy rollout is flat.
    pub fn settled_flat_episode(&self, initially_infected: usize) -> Option<usize> {
        let last_growth = self
            .greedy_final_m
            .iter()
            .rposition(|&m| m != initially_infected);
        match last_growth {
            None if !self.greedy_final_m.is_empty() => Some(1),
            None => None,
            Some(i) if i + 1 < self.greedy_final_m.len() => Some(i + 2),
            Some(_) => None,
        }
    }

    /// Mean of `EpisodeRecord::area` over a range of episodes (0-based, half-open).
    pub fn mean_area(&self, range: std::ops::Range<usize>, days: usize) -> T {
        let n = range.len();
        let total: usize = self.episodes[range].iter().map(|e| e.area(days)).sum();
        T::from_count(total) / T::from_count(n.max(1))
    }
}

/// Trains the shared table for `cfg.max_episodes` episodes.
pub fn train<T: Scalar>(cfg: &TrainConfig<T>) -> Result<TrainingOutcome<T>> {
    cfg.validate()?;
    let mut table = QTable::new(cfg.population, cfg.action_levels.clone(), cfg.q_init)?;
    let mut rng = rng::stream(cfg.seed, TRAINING_STREAM);
    let mut episodes = Vec::with_capacity(cfg.max_episodes);
    let mut greedy_final_m = Vec::new();
    for episode in 1..=cfg.max_episodes {
        let eps = epsilon_schedule(episode, cfg.max_episodes)?;
        episodes.push(run_episode(&mut table, cfg, episode, eps, &mut rng)?);
        if cfg.evaluate_greedy {
            let mut eval = rng::stream(cfg.seed, EVALUATION_STREAM_BASE + episode as u64);
            let t = greedy_rollout(&table, cfg, &mut eval)?;
            greedy_final_m.push(*t.last().expect("rollout holds m_0"));
        }
    }
    Ok(TrainingOutcome {
        table,
        episodes,
        greedy_final_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use AgentState::{Healthy, Infected};

    fn table(row: [f64; 3]) -> QTable<f64> {
        let mut q = QTable::new(4, vec![0.0, 0.25, 0.5], 10.0).unwrap();
        for (a, v) in row.iter().enumerate() {
            q.set(Healthy, 1, a, *v);
        }
        q
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_schedule::<f64>(0, 200).unwrap(), 0.5);
        assert_eq!(epsilon_schedule::<f64>(200, 200).unwrap(), 0.0);
        assert_eq!(epsilon_schedule::<f64>(100, 200).unwrap(), 0.25);
        assert!(epsilon_schedule::<f64>(0, 0).is_err());
        assert!(epsilon_schedule::<f64>(3, 2).is_err());
    }

    #[test]
    fn greedy_picks_unique_minimum() {
        let q = table([3.0, 1.0, 2.0]);
        let mut rng = rng::stream(0, 0);
        for _ in 0..100 {
            assert_eq!(select_action(&q, Healthy, 1, 0.0, &mut rng), 1);
        }
    }

    fn frequencies(q: &QTable<f64>, eps: f64, draws: usize) -> Vec<f64> {
        let mut rng = rng::stream(17, 0);
        let mut counts = vec![0usize; q.num_actions()];
        for _ in 0..draws {
            counts[select_action(q, Healthy, 1, eps, &mut rng)] += 1;
        }
        counts.iter().map(|&c| c as f64 / draws as f64).collect()
    }

    #[test]
    fn full_exploration_is_uniform() {
        let n = 100_000;
        let sigma = (1.0 / 3.0 * 2.0 / 3.0 / n as f64).sqrt();
        for f in frequencies(&table([3.0, 1.0, 2.0]), 1.0, n) {
            assert!((f - 1.0 / 3.0).abs() < 4.0 * sigma, "{f}");
        }
    }

    #[test]
    fn ties_are_uniform() {
        let n = 100_000;
        let sigma = (1.0 / 3.0 * 2.0 / 3.0 / n as f64).sqrt();
        for f in frequencies(&table([2.0, 2.0, 2.0]), 0.0, n) {
            assert!((f - 1.0 / 3.0).abs() < 4.0 * sigma, "{f}");
        }
    }

    #[test]
    fn td_update_examples() {
        let mut q = table([10.0, 10.0, 10.0]);
        let d = td_update(&mut q, Healthy, 1, 2, 0.7, Healthy, 1, 0.0, 1.0);
        assert_eq!(q.get(Healthy, 1, 2), 0.7);
        assert_eq!(d, 0.7 - 10.0);
        assert_eq!(q.visits(Healthy, 1, 2), 1);

        let mut q = QTable::new(4, vec![0.0, 0.5], 10.0).unwrap();
        q.set(Infected, 2, 0, 2.0);
        q.set(Infected, 2, 1, 3.0);
        td_update(&mut q, Healthy, 1, 0, 1.0, Infected, 2, 0.5, 1.0);
        assert_eq!(q.get(Healthy, 1, 0), 2.0);

        let mut q = table([1.0, 4.0, 4.0]);
        let before = q.clone();
        let d = td_update(&mut q, Healthy, 1, 0, 1.0 - 0.5 * 1.0, Healthy, 1, 0.5, 0.3);
        assert_eq!(d, 0.0);
        assert_eq!(q.row(Healthy, 1), before.row(Healthy, 1));
    }

    #[test]
    fn partial_learning_rate_moves_part_way() {
        let mut q = table([4.0, 4.0, 4.0]);
        td_update(&mut q, Healthy, 1, 0, 2.0, Healthy, 0, 0.0, 0.25);
        assert_eq!(q.get(Healthy, 1, 0), 3.5);
    }

    #[test]
    fn expected_update_matches_realized_at_certain_outcomes() {
        let mut a = table([1.0, 2.0, 3.0]);
        let mut b = a.clone();
        a.set(Infected, 2, 1, 1.5);
        b.set(Infected, 2, 1, 1.5);
        td_update(&mut a, Healthy, 1, 1, 1.0 + 0.3, Infected, 2, 0.5, 1.0);
        expected_td_update(&mut b, Healthy, 1, 1, 0.3, 1.0, 2, 0.5, 1.0);
        assert!((a.get(Healthy, 1, 1) - b.get(Healthy, 1, 1)).abs() < 1e-15);
        td_update(&mut a, Healthy, 1, 0, 0.4, Healthy, 2, 0.5, 1.0);
        expected_td_update(&mut b, Healthy, 1, 0, 0.4, 0.0, 2, 0.5, 1.0);
        assert!((a.get(Healthy, 1, 0) - b.get(Healthy, 1, 0)).abs() < 1e-15);
    }

    #[test]
    fn table_validation() {
        assert!(QTable::new(3, Vec::<f64>::new(), 1.0).is_err());
        assert!(QTable::new(3, vec![0.2, 0.1], 1.0).is_err());
        assert!(QTable::new(3, vec![0.0, 1.5], 1.0).is_err());
        assert!(QTable::new(3, vec![0.0, 0.5], f64::NAN).is_err());
        let q = QTable::new(3, vec![0.0, 0.5], 7.0).unwrap();
        assert_eq!(q.min_value(Infected, 3), 7.0);
        assert_eq!(q.greedy_actions(Infected, 3), vec![0, 1]);
        assert!(!q.row_visited(Healthy, 0));
    }

    #[test]
    fn single_infected_agent_episode() {
        let mut cfg = TrainConfig::<f64>::new(1);
        cfg.action_levels = vec![0.0, 0.5, 1.0];
        cfg.horizon = 1;
        cfg.max_episodes = 1;
        cfg.record_transitions = true;
        let mut q = QTable::new(1, cfg.action_levels.clone(), cfg.q_init).unwrap();
        let rec = run_episode(&mut q, &cfg, 1, 0.5, &mut rng::stream(4, 0)).unwrap();
        assert_eq!(rec.m_trajectory, vec![1, 1]);
        let t = rec.transitions[0];
        let u = cfg.action_levels[t.action];
        let expected = 1.0 + cfg.activity_cost.eval(u);
        assert_eq!(q.get(Infected, 1, t.action), expected);
        assert_eq!(t.cost, expected);
    }

    #[test]
    fn saturated_start_costs_are_deterministic() {
        for shaped in [false, true] {
            let mut cfg = TrainConfig::<f64>::new(10);
            cfg.initially_infected = 10;
            cfg.shaped = shaped;
            cfg.record_transitions = true;
            let mut q = QTable::new(10, cfg.action_levels.clone(), cfg.q_init).unwrap();
            let rec = run_episode(&mut q, &cfg, 1, 0.5, &mut rng::stream(1, 0)).unwrap();
            assert!(rec.m_trajectory.iter().all(|&m| m == 10));
            for t in &rec.transitions {
                let u = cfg.action_levels[t.action];
                let q_term = if shaped { u } else { 0.0 };
                assert_eq!(t.cost, 1.0 + cfg.activity_cost.eval(u) + q_term);
            }
        }
    }

    #[test]
    fn zero_activity_policy_keeps_one_infection() {
        let mut cfg = TrainConfig::<f64>::new(20);
        cfg.horizon = 30;
        let mut q = QTable::new(20, cfg.action_levels.clone(), cfg.q_init).unwrap();
        for m in 0..=20 {
            q.set(Healthy, m, 0, 0.0);
        }
        let rec = run_episode(&mut q, &cfg, 1, 0.0, &mut rng::stream(9, 0)).unwrap();
        assert_eq!(rec.m_trajectory.len(), 31);
        assert!(rec.m_trajectory.iter().all(|&m| m == 1));
    }

    #[test]
    fn mismatched_table_is_rejected() {
        let cfg = TrainConfig::<f64>::new(20);
        let mut q = QTable::new(19, cfg.action_levels.clone(), 10.0).unwrap();
        assert!(run_episode(&mut q, &cfg, 1, 0.1, &mut rng::stream(0, 0)).is_err());
    }

    #[test]
    fn config_validation() {
        let ok = TrainConfig::<f64>::new(50);
        assert!(ok.validate().is_ok());
        let mut c = ok.clone();
        c.eta = 0.0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.gamma = 1.0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.initially_infected = 0;
        assert!(c.validate().is_err());
        let small = TrainConfig::<f64>::new(5);
        assert_eq!(small.action_levels, vec![0.0, 0.2, 1.0]);
        assert!(small.validate().is_ok());
        assert_eq!(TrainConfig::<f64>::new(1).action_levels, vec![0.0, 1.0]);
    }

    #[test]
    fn flat_episode_helpers() {
        let outcome = TrainingOutcome::<f64> {
            table: QTable::new(3, vec![0.0], 1.0).unwrap(),
            episodes: vec![],
            greedy_final_m: vec![3, 1, 2, 1, 1],
        };
        assert_eq!(outcome.first_flat_episode(1), Some(2));
        assert_eq!(outcome.settled_flat_episode(1), Some(4));
    }
}
