//! Open-loop intervention scenarios and Monte Carlo ensembles.
//!
//! Each scenario assigns either the normal activity level `u` or the reduced
//! level `u*` to every agent based on its health state and, for delayed
//! isolation, on how long it has been infected.

use rayon::prelude::*;

use crate::dynamics::{self, ActionProfile, AgentState, PopulationState};
use crate::error::{check_unit, ModelError, Result};
use crate::rng;
use crate::Scalar;

/// Horizon used when none is given.
pub const DEFAULT_HORIZON: usize = 4000;
/// Trajectories per ensemble when none is given.
pub const DEFAULT_RUNS: usize = 200;

/// Intervention policy applied to the whole population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterventionCase {
    /// Everyone keeps the normal level.
    NoIntervention,
    /// Infected agents drop to the reduced level on the day they are infected.
    ImmediateIsolation,
    /// An agent infected on day `k` drops to the reduced level from day `k + delay`.
    DelayedIsolation { delay: usize },
    /// Everyone plays the reduced level.
    Lockdown,
}

impl InterventionCase {
    pub fn name(&self) -> &'static str {
        match self {
            InterventionCase::NoIntervention => "no-intervention",
            InterventionCase::ImmediateIsolation => "immediate-isolation",
            InterventionCase::DelayedIsolation { .. } => "delayed-isolation",
            InterventionCase::Lockdown => "lockdown",
        }
    }
}

/// Full description of one Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec<T = f64> {
    pub case: InterventionCase,
    /// Population size `M`.
    pub population: usize,
    /// Agents `0..initially_infected` start infected.
    pub initially_infected: usize,
    /// Normal activity level `u`.
    pub normal_level: T,
    /// Reduced activity level `u*`.
    pub reduced_level: T,
    /// Days simulated per trajectory.
    pub horizon: usize,
    pub runs: usize,
    pub seed: u64,
}

impl<T: Scalar> ScenarioSpec<T> {
    /// Spec with the default horizon, run count and seed 0.
    pub fn new(
        case: InterventionCase,
        population: usize,
        initially_infected: usize,
        normal_level: T,
        reduced_level: T,
    ) -> Self {
        Self {
            case,
            population,
            initially_infected,
            normal_level,
            reduced_level,
            horizon: DEFAULT_HORIZON,
            runs: DEFAULT_RUNS,
            seed: 0,
        }
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.initially_infected < 1 || self.initially_infected > self.population {
            return Err(ModelError::Config(format!(
                "initially infected count must satisfy 1 <= m0 <= M, got m0 = {}, M = {}",
                self.initially_infected, self.population
            )));
        }
        check_unit("u", self.normal_level)?;
        check_unit("u*", self.reduced_level)?;
        if self.reduced_level > self.normal_level {
            return Err(ModelError::Config(
                "reduced level u* must not exceed u".into(),
            ));
        }
        if let InterventionCase::DelayedIsolation { delay } = self.case {
            if delay < 1 {
                return Err(ModelError::Config(
                    "isolation delay must be at least one day".into(),
                ));
            }
        }
        if self.horizon < 1 {
            return Err(ModelError::Config(
                "horizon must be at least one day".into(),
            ));
        }
        if self.runs < 1 {
            return Err(ModelError::Config("at least one run is required".into()));
        }
        Ok(())
    }
}

/// Activity level prescribed by the scenario for one agent.
///
/// `days_since_infection` is ignored for healthy agents; an infected agent
/// without a recorded infection day is treated as infected today.
pub fn policy_activity<T: Scalar>(
    spec: &ScenarioSpec<T>,
    agent_state: AgentState,
    days_since_infection: Option<usize>,
    _day: usize,
) -> T {
    match spec.case {
        InterventionCase::NoIntervention => spec.normal_level,
        InterventionCase::Lockdown => spec.reduced_level,
        InterventionCase::ImmediateIsolation => {
            if agent_state.is_infected() {
                spec.reduced_level
            } else {
                spec.normal_level
            }
        }
        InterventionCase::DelayedIsolation { delay } => {
            if agent_state.is_infected() && days_since_infection.unwrap_or(0) >= delay {
                spec.reduced_level
            } else {
                spec.normal_level
            }
        }
    }
}

/// Infected counts `m_0..=m_horizon` of trajectory `run_index`.
pub fn run_trajectory<T: Scalar>(spec: &ScenarioSpec<T>, run_index: usize) -> Result<Vec<usize>> {
    spec.validate()?;
    if run_index >= spec.runs {
        return Err(ModelError::Config(format!(
            "run index {run_index} out of range for {} runs",
            spec.runs
        )));
    }
    let mut rng = rng::stream(spec.seed, run_index as u64);
    let mut state =
        PopulationState::with_initial_infected(spec.population, spec.initially_infected)?;
    let mut infected_on: Vec<Option<usize>> = state
        .states()
        .iter()
        .map(|s| s.is_infected().then_some(0))
        .collect();

    let mut counts = Vec::with_capacity(spec.horizon + 1);
    counts.push(state.infected_count());
    for day in 0..spec.horizon {
        if state.is_saturated() {
            break;
        }
        let levels = state
            .states()
            .iter()
            .zip(&infected_on)
            .map(|(&s, since)| policy_activity(spec, s, since.map(|d| day - d), day))
            .collect();
        let actions = ActionProfile::new(levels)?;
        let next = dynamics::step(&state, &actions, &mut rng)?;
        for (slot, (&before, &after)) in infected_on
            .iter_mut()
            .zip(state.states().iter().zip(next.states()))
        {
            if before != after {
                *slot = Some(day + 1);
            }
        }
        state = next;
        counts.push(state.infected_count());
    }
    let last = *counts.last().expect("trajectory holds m_0");
    counts.resize(spec.horizon + 1, last);
    Ok(counts)
}

/// Pointwise envelope of an ensemble of trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult<T = f64> {
    pub mean: Vec<T>,
    pub min: Vec<usize>,
    pub max: Vec<usize>,
    /// Per-run trajectories, indexed by run.
    pub trajectories: Vec<Vec<usize>>,
}

impl<T: Scalar> EnsembleResult<T> {
    /// Aggregates trajectories in index order.
    pub fn from_trajectories(trajectories: Vec<Vec<usize>>) -> Result<Self> {
        let len = trajectories
            .first()
            .map(Vec::len)
            .ok_or_else(|| ModelError::Config("ensemble needs at least one trajectory".into()))?;
        if let Some(bad) = trajectories.iter().find(|t| t.len() != len) {
            return Err(ModelError::Length {
                what: "trajectory",
                expected: len,
                actual: bad.len(),
            });
        }
        let runs = T::from_count(trajectories.len());
        let mut mean = Vec::with_capacity(len);
        let mut min = Vec::with_capacity(len);
        let mut max = Vec::with_capacity(len);
        for k in 0..len {
            let mut sum = T::zero();
            let mut lo = usize::MAX;
            let mut hi = 0;
            for t in &trajectories {
                sum = sum + T::from_count(t[k]);
                lo = lo.min(t[k]);
                hi = hi.max(t[k]);
            }
            mean.push((sum / runs).max(T::from_count(lo)).min(T::from_count(hi)));
            min.push(lo);
            max.push(hi);
        }
        Ok(Self {
            mean,
            min,
            max,
            trajectories,
        })
    }

    pub fn runs(&self) -> usize {
        self.trajectories.len()
    }

    /// Number of recorded days, `horizon + 1`.
    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    /// Standard error of the mean infected count on day `k`.
    pub fn standard_error(&self, k: usize) -> T {
        let n = self.trajectories.len();
        if n < 2 {
            return T::zero();
        }
        let mean = self.mean[k];
        let ss: T = self
            .trajectories
            .iter()
            .map(|t| {
                let d = T::from_count(t[k]) - mean;
                d * d
            })
            .sum();
        (ss / T::from_count(n - 1) / T::from_count(n)).sqrt()
    }

    /// Average over runs of the first day with `m_k >= level`; `None` if some
    /// run never gets there within the horizon.
    pub fn mean_hitting_day(&self, level: usize) -> Option<T> {
        let mut total = T::zero();
        for t in &self.trajectories {
            let day = t.iter().position(|&m| m >= level)?;
            total = total + T::from_count(day);
        }
        Some(total / T::from_count(self.trajectories.len()))
    }

    /// First day on which the mean envelope reaches `level`.
    pub fn mean_crossing_day(&self, level: T) -> Option<usize> {
        self.mean.iter().position(|&m| m >= level)
    }

    /// Day `k` with the largest mean increment `mean[k+1] - mean[k]`
    /// (earliest on ties).
    pub fn peak_growth_day(&self) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for k in 0..self.mean.len().saturating_sub(1) {
            let g = self.mean[k + 1] - self.mean[k];
            if best.is_none_or(|(_, b)| g > b) {
                best = Some((k, g));
            }
        }
        best.map(|(k, _)| k)
    }
}

/// Runs every trajectory of `spec` (in parallel) and aggregates them.
pub fn monte_carlo<T: Scalar>(spec: &ScenarioSpec<T>) -> Result<EnsembleResult<T>> {
    spec.validate()?;
    let trajectories = (0..spec.runs)
        .into_par_iter()
        .map(|r| run_trajectory(spec, r))
        .collect::<Result<Vec<_>>>()?;
    EnsembleResult::from_trajectories(trajectories)
}
