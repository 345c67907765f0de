//! Command-line front end for the `microepi` models.
//!
//! [`parse_config`] turns arguments into a [`RunConfig`], [`execute`] runs
//! it and [`emit_outputs`] writes the CSV files and a `manifest.toml` that
//! reproduces the run when passed back via `--config`.

pub mod config;
pub mod output;

use thiserror::Error;

use microepi::{monte_carlo, stage_nash, system_optimum, train, CostParams64, Shaping};

pub use config::{parse_config, FileConfig, RunConfig, Task};
pub use output::{emit_outputs, format_real};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// 0 for help/version, 2 for usage errors, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<microepi::ModelError> for CliError {
    fn from(e: microepi::ModelError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Nash row: equilibrium plus the unshaped system optimum.
#[derive(Debug, Clone)]
pub struct NashReport {
    pub equilibrium: microepi::StageEquilibrium64,
    pub optimum: microepi::SystemOptimum64,
}

impl NashReport {
    pub fn welfare_loss(&self) -> f64 {
        self.equilibrium.system_cost - self.optimum.cost
    }
}

#[derive(Debug, Clone)]
pub enum RunResult {
    Simulate(microepi::EnsembleResult64),
    Nash(NashReport),
    Learn(microepi::TrainingOutcome64),
    Si(Vec<(f64, f64)>),
}

pub fn execute(config: &RunConfig) -> Result<RunResult, CliError> {
    Ok(match &config.task {
        Task::Simulate { spec, .. } => RunResult::Simulate(monte_carlo(spec)?),
        Task::Nash(t) => {
            let params =
                CostParams64::new(t.alpha).with_shaping(Shaping::Linear { slope: t.q_slope });
            let equilibrium = stage_nash(t.m, t.population, &params, t.shaped)?;
            let optimum = system_optimum(t.m, t.population, &params)?;
            RunResult::Nash(NashReport {
                equilibrium,
                optimum,
            })
        }
        Task::Learn(cfg) => RunResult::Learn(train(cfg)?),
        Task::Si(p) => RunResult::Si(microepi::integrate(p)?),
    })
}

/// Parses, runs and writes outputs; returns the written paths.
pub fn run<I, S>(args: I) -> Result<Vec<std::path::PathBuf>, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = parse_config(args)?;
    let result = execute(&config)?;
    emit_outputs(&config, &result)
}
