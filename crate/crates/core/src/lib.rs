//! Microscopic multi-agent epidemic model.
//!
//! Agents are healthy or infected and choose a daily activity level in
//! `[0, 1]`; two agents meet with probability equal to the smaller of their
//! levels and meeting an infected agent infects immediately. On top of the
//! stochastic kernel this crate provides open-loop intervention ensembles,
//! a macroscopic SI comparator, single-stage Nash and system-optimal
//! solutions with cost shaping, and shared-table multi-agent Q-learning.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod marl;
pub mod nash;
pub mod rng;
pub mod scalar;
pub mod scenarios;
pub mod si;

pub use dynamics::{
    expected_new_infections, infection_probability, meeting_probability, step, ActionProfile,
    AgentState, InfectionPressure, PopulationState,
};
pub use error::{ModelError, Result};
pub use marl::{train, CostSignal, EpisodeRecord, QTable, TrainConfig, TrainingOutcome};
pub use nash::{
    expected_stage_cost, p_default, scalar_minimize, stage_nash, system_optimum, welfare_loss,
    ActivityCost, CostParams, Shaping, StageEquilibrium, SystemOptimum,
};
pub use scalar::Scalar;
pub use scenarios::{monte_carlo, run_trajectory, EnsembleResult, InterventionCase, ScenarioSpec};
pub use si::{integrate, si_derivative, SiParams};

/// Library version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type ActionProfile64 = ActionProfile<f64>;
pub type ActionProfile32 = ActionProfile<f32>;
pub type ScenarioSpec64 = ScenarioSpec<f64>;
pub type ScenarioSpec32 = ScenarioSpec<f32>;
pub type EnsembleResult64 = EnsembleResult<f64>;
pub type SiParams64 = SiParams<f64>;
pub type SiParams32 = SiParams<f32>;
pub type CostParams64 = CostParams<f64>;
pub type CostParams32 = CostParams<f32>;
pub type StageEquilibrium64 = StageEquilibrium<f64>;
pub type SystemOptimum64 = SystemOptimum<f64>;
pub type QTable64 = QTable<f64>;
pub type QTable32 = QTable<f32>;
pub type TrainConfig64 = TrainConfig<f64>;
pub type TrainConfig32 = TrainConfig<f32>;
pub type TrainingOutcome64 = TrainingOutcome<f64>;
