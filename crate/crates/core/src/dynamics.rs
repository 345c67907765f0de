//! Agent and population state, and the one-day stochastic transition kernel.
//!
//! Two agents meet with probability `min(u_i, u_j)`. Meeting an infected agent
//! infects immediately and infection is absorbing, so a healthy agent stays
//! healthy on day `k` with probability `prod_{j in I_k} (1 - min(u_i, u_j))`.
//! Only agents infected at the start of day `k` can infect on day `k`.

use rand::Rng;

use crate::error::{check_unit, ModelError, Result};
use crate::Scalar;

/// Infected-set size above which survival products are accumulated as
/// sums of `ln_1p` terms.
pub const LOG_PRODUCT_THRESHOLD: usize = 64;

/// Health state of one agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgentState {
    Healthy,
    Infected,
}

impl AgentState {
    /// The 0/1 indicator `x_i`.
    #[inline]
    pub fn indicator(self) -> usize {
        match self {
            AgentState::Healthy => 0,
            AgentState::Infected => 1,
        }
    }

    pub fn from_indicator(x: usize) -> Result<Self> {
        match x {
            0 => Ok(AgentState::Healthy),
            1 => Ok(AgentState::Infected),
            _ => Err(ModelError::Domain {
                name: "agent state",
                value: x as f64,
                domain: "{0, 1}",
            }),
        }
    }

    #[inline]
    pub fn is_infected(self) -> bool {
        self == AgentState::Infected
    }
}

/// States of all `M` agents on day `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PopulationState {
    states: Vec<AgentState>,
    day: usize,
    infected: usize,
}

impl PopulationState {
    /// Builds a day-0 state. Fails on an empty population.
    pub fn new(states: Vec<AgentState>) -> Result<Self> {
        Self::at_day(states, 0)
    }

    pub fn at_day(states: Vec<AgentState>, day: usize) -> Result<Self> {
        if states.is_empty() {
            return Err(ModelError::Config(
                "population must contain at least one agent".into(),
            ));
        }
        let infected = states.iter().filter(|s| s.is_infected()).count();
        Ok(Self {
            states,
            day,
            infected,
        })
    }

    /// Day-0 state of `population` agents where agents `0..initially_infected`
    /// are infected.
    pub fn with_initial_infected(population: usize, initially_infected: usize) -> Result<Self> {
        if initially_infected > population {
            return Err(ModelError::Config(format!(
                "initially infected count {initially_infected} exceeds population {population}"
            )));
        }
        let states = (0..population)
            .map(|i| {
                if i < initially_infected {
                    AgentState::Infected
                } else {
                    AgentState::Healthy
                }
            })
            .collect();
        Self::new(states)
    }

    #[inline]
    pub fn states(&self) -> &[AgentState] {
        &self.states
    }

    #[inline]
    pub fn state(&self, agent: usize) -> AgentState {
        self.states[agent]
    }

    /// Day index `k`.
    #[inline]
    pub fn day(&self) -> usize {
        self.day
    }

    /// Population size `M`.
    #[inline]
    pub fn len(&self) -> usize {
        self.states.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `m_k`.
    #[inline]
    pub fn infected_count(&self) -> usize {
        self.infected
    }

    /// Indices of infected agents in ascending order.
    pub fn infected_set(&self) -> Vec<usize> {
        self.states
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.is_infected().then_some(i))
            .collect()
    }

    /// True once every agent is infected; the state is then a fixed point.
    #[inline]
    pub fn is_saturated(&self) -> bool {
        self.infected == self.states.len()
    }
}

/// Activity levels `u_i` chosen by every agent for one day.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionProfile<T = f64> {
    levels: Vec<T>,
}

impl<T: Scalar> ActionProfile<T> {
    pub fn new(levels: Vec<T>) -> Result<Self> {
        for &u in &levels {
            check_unit("activity level", u)?;
        }
        Ok(Self { levels })
    }

    /// Every agent plays `level`.
    pub fn uniform(population: usize, level: T) -> Result<Self> {
        check_unit("activity level", level)?;
        Ok(Self {
            levels: vec![level; population],
        })
    }

    #[inline]
    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    #[inline]
    pub fn level(&self, agent: usize) -> T {
        self.levels[agent]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Probability that agents with activity levels `u_i` and `u_j` meet.
pub fn meeting_probability<T: Scalar>(u_i: T, u_j: T) -> Result<T> {
    let u_i = check_unit("u_i", u_i)?;
    let u_j = check_unit("u_j", u_j)?;
    Ok(u_i.min(u_j))
}

/// Probability that a healthy agent playing `u_i` is infected by the agents
/// in `infected_levels` on one day.
pub fn infection_probability<T: Scalar>(u_i: T, infected_levels: &[T]) -> Result<T> {
    check_unit("u_i", u_i)?;
    for &u in infected_levels {
        check_unit("infected activity level", u)?;
    }
    Ok(InfectionPressure::from_levels(infected_levels.iter().copied()).infection_probability(u_i))
}

/// Activity levels of the infected set, grouped by distinct value.
///
/// Building this once per day makes each healthy agent's infection
/// probability cost O(distinct levels) instead of O(|I_k|).
#[derive(Debug, Clone, PartialEq)]
pub struct InfectionPressure<T> {
    groups: Vec<(T, usize)>,
    total: usize,
}

impl<T: Scalar> InfectionPressure<T> {
    /// Levels must already be validated to lie in `[0, 1]`.
    pub fn from_levels<I: IntoIterator<Item = T>>(levels: I) -> Self {
        let mut sorted: Vec<T> = levels.into_iter().collect();
        let total = sorted.len();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("validated levels are not NaN"));
        let mut groups: Vec<(T, usize)> = Vec::new();
        for u in sorted {
            match groups.last_mut() {
                Some((v, c)) if *v == u => *c += 1,
                _ => groups.push((u, 1)),
            }
        }
        Self { groups, total }
    }

    /// Pressure exerted by the infected agents of `state` under `actions`.
    pub fn of(state: &PopulationState, actions: &ActionProfile<T>) -> Self {
        Self::from_levels(
            state
                .states()
                .iter()
                .zip(actions.levels())
                .filter(|(s, _)| s.is_infected())
                .map(|(_, &u)| u),
        )
    }

    /// Number of infected agents `|I_k|`.
    #[inline]
    pub fn infected(&self) -> usize {
        self.total
    }

    /// Distinct infected levels with multiplicities, ascending.
    #[inline]
    pub fn groups(&self) -> &[(T, usize)] {
        &self.groups
    }

    /// Probability of meeting no infected agent.
    pub fn survival_probability(&self, u_i: T) -> T {
        if self.total > LOG_PRODUCT_THRESHOLD {
            self.log_survival(u_i).exp()
        } else {
            self.product_survival(u_i)
        }
    }

    /// Probability of being infected today.
    pub fn infection_probability(&self, u_i: T) -> T {
        if self.total == 1 {
            // Exact: 1 - (1 - x) rounds away from x.
            return u_i.min(self.groups[0].0);
        }
        if self.total > LOG_PRODUCT_THRESHOLD {
            -self.log_survival(u_i).exp_m1()
        } else {
            T::one() - self.product_survival(u_i)
        }
    }

    /// Groups below `u_i`, plus the number of infected at or above it, which
    /// all contribute the same factor `1 - u_i`.
    fn split(&self, u_i: T) -> (&[(T, usize)], usize) {
        let cut = self.groups.partition_point(|&(u_j, _)| u_j < u_i);
        let (below, above) = self.groups.split_at(cut);
        (below, above.iter().map(|g| g.1).sum())
    }

    pub(crate) fn product_survival(&self, u_i: T) -> T {
        let (below, above) = self.split(u_i);
        below
            .iter()
            .map(|&(u_j, count)| (T::one() - u_j).powi(count as i32))
            .fold((T::one() - u_i).powi(above as i32), |acc, f| acc * f)
    }

    pub(crate) fn log_survival(&self, u_i: T) -> T {
        let (below, above) = self.split(u_i);
        below
            .iter()
            .map(|&(u_j, count)| T::from_count(count) * (-u_j).ln_1p())
            .fold(
                if above > 0 {
                    T::from_count(above) * (-u_i).ln_1p()
                } else {
                    T::zero()
                },
                |acc, t| acc + t,
            )
    }
}

fn check_lengths<T>(state: &PopulationState, actions: &ActionProfile<T>) -> Result<()> {
    if actions.levels.len() != state.len() {
        return Err(ModelError::Length {
            what: "action profile",
            expected: state.len(),
            actual: actions.levels.len(),
        });
    }
    Ok(())
}

/// Advances the population by one day using draws from `rng`.
///
/// Healthy agents consume one uniform draw each, in ascending agent order;
/// infected agents consume nothing.
pub fn step<T: Scalar, R: Rng + ?Sized>(
    state: &PopulationState,
    actions: &ActionProfile<T>,
    rng: &mut R,
) -> Result<PopulationState> {
    step_with(state, actions, |_| T::sample_unit(rng))
}

/// Advances the population by one day, asking `draw(i)` for the uniform
/// variate of each healthy agent `i` (ascending order). Agent `i` becomes
/// infected iff its draw is below its infection probability.
pub fn step_with<T: Scalar, F: FnMut(usize) -> T>(
    state: &PopulationState,
    actions: &ActionProfile<T>,
    mut draw: F,
) -> Result<PopulationState> {
    check_lengths(state, actions)?;
    let pressure = InfectionPressure::of(state, actions);
    let mut next = state.states.clone();
    let mut infected = state.infected;
    for (i, slot) in next.iter_mut().enumerate() {
        if slot.is_infected() {
            continue;
        }
        let p = pressure.infection_probability(actions.levels[i]);
        if draw(i) < p {
            *slot = AgentState::Infected;
            infected += 1;
        }
    }
    Ok(PopulationState {
        states: next,
        day: state.day + 1,
        infected,
    })
}

/// Expected number of agents infected during the next step.
pub fn expected_new_infections<T: Scalar>(
    state: &PopulationState,
    actions: &ActionProfile<T>,
) -> Result<T> {
    check_lengths(state, actions)?;
    let pressure = InfectionPressure::of(state, actions);
    Ok(state
        .states
        .iter()
        .zip(&actions.levels)
        .filter(|(s, _)| !s.is_infected())
        .map(|(_, &u)| pressure.infection_probability(u))
        .sum())
}
