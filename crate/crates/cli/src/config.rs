//! Command-line and config-file parsing.
//!
//! Precedence: command-line flag, then config-file key, then built-in default.
//! The config file is TOML with optional top-level `command`, `seed`, `out`
//! keys and one table per subcommand (`[simulate]`, `[nash]`, `[learn]`,
//! `[si]`). Unknown keys are rejected. Flag names match the keys
//! (`u_star` <-> `--u-star`).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use microepi::marl::CostSignal;
use microepi::{InterventionCase, ScenarioSpec64, SiParams64, TrainConfig64};

use crate::CliError;

pub const DEFAULT_OUT: &str = "out";

#[derive(Debug, Parser)]
#[command(
    name = "microepi",
    version,
    about = "Microscopic multi-agent epidemic simulator and solvers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo ensemble of an intervention scenario.
    Simulate(SimulateArgs),
    /// Stage-game Nash equilibrium, system optimum and welfare loss.
    Nash(NashArgs),
    /// Shared-table multi-agent Q-learning.
    Learn(LearnArgs),
    /// Macroscopic SI model.
    Si(SiArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// Master random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseArg {
    NoIntervention,
    ImmediateIsolation,
    DelayedIsolation,
    Lockdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalArg {
    Expected,
    Realized,
}

#[derive(Debug, Args, Clone)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    /// Population size.
    #[arg(long = "M")]
    pub population: Option<usize>,
    /// Initially infected agents.
    #[arg(long)]
    pub m0: Option<usize>,
    /// Normal activity level (default 1/M).
    #[arg(long)]
    pub u: Option<f64>,
    /// Reduced activity level (default 0.1/M).
    #[arg(long = "u-star")]
    pub u_star: Option<f64>,
    /// Isolation delay in days (delayed-isolation only).
    #[arg(long = "T", visible_alias = "delay")]
    pub delay: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub runs: Option<usize>,
    /// Also write per-run trajectories.
    #[arg(long = "keep-runs", conflicts_with = "no_keep_runs")]
    pub keep_runs: bool,
    #[arg(long = "no-keep-runs")]
    pub no_keep_runs: bool,
}

#[derive(Debug, Args, Clone)]
pub struct NashArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Infected agents.
    #[arg(long)]
    pub m: Option<usize>,
    /// Population size.
    #[arg(long = "M")]
    pub population: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Solve the shaped game with q(u) = q_slope * u.
    #[arg(long, conflicts_with = "unshaped")]
    pub shaped: bool,
    #[arg(long)]
    pub unshaped: bool,
    #[arg(long = "q-slope")]
    pub q_slope: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct LearnArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long = "M")]
    pub population: Option<usize>,
    #[arg(long)]
    pub m0: Option<usize>,
    /// Comma-separated activity levels (default 0,1/M,10/M).
    #[arg(long, value_delimiter = ',')]
    pub actions: Option<Vec<f64>>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Learning rate.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub episodes: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, conflicts_with = "unshaped")]
    pub shaped: bool,
    #[arg(long)]
    pub unshaped: bool,
    #[arg(long = "q-slope")]
    pub q_slope: Option<f64>,
    #[arg(long = "q-init")]
    pub q_init: Option<f64>,
    #[arg(long, value_enum)]
    pub signal: Option<SignalArg>,
}

#[derive(Debug, Args, Clone)]
pub struct SiArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Infection coefficient per day (required).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Initial infected fraction.
    #[arg(long)]
    pub s0: Option<f64>,
    #[arg(long)]
    pub days: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
}

/// On-disk config schema; also the manifest format.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nash: Option<NashFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learn: Option<LearnFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub si: Option<SiFile>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateFile {
    pub case: Option<CaseArg>,
    #[serde(rename = "M")]
    pub population: Option<usize>,
    pub m0: Option<usize>,
    pub u: Option<f64>,
    pub u_star: Option<f64>,
    #[serde(rename = "T")]
    pub delay: Option<usize>,
    pub horizon: Option<usize>,
    pub runs: Option<usize>,
    pub keep_runs: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NashFile {
    pub m: Option<usize>,
    #[serde(rename = "M")]
    pub population: Option<usize>,
    pub alpha: Option<f64>,
    pub shaped: Option<bool>,
    pub q_slope: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnFile {
    #[serde(rename = "M")]
    pub population: Option<usize>,
    pub m0: Option<usize>,
    pub actions: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub eta: Option<f64>,
    pub episodes: Option<usize>,
    pub horizon: Option<usize>,
    pub shaped: Option<bool>,
    pub q_slope: Option<f64>,
    pub q_init: Option<f64>,
    pub signal: Option<SignalArg>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiFile {
    pub beta: Option<f64>,
    pub s0: Option<f64>,
    pub days: Option<f64>,
    pub dt: Option<f64>,
}

/// Stage-game inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct NashTask {
    pub m: usize,
    pub population: usize,
    pub alpha: f64,
    pub shaped: bool,
    pub q_slope: f64,
}

#[derive(Debug, Clone)]
pub enum Task {
    Simulate {
        spec: ScenarioSpec64,
        keep_runs: bool,
    },
    Nash(NashTask),
    Learn(TrainConfig64),
    Si(SiParams64),
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Simulate { .. } => "simulate",
            Task::Nash(_) => "nash",
            Task::Learn(_) => "learn",
            Task::Si(_) => "si",
        }
    }
}

/// Fully resolved invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub task: Task,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))
}

fn flag_pair(on: bool, off: bool) -> Option<bool> {
    match (on, off) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    }
}

/// Parses command-line tokens (including the program name) into a validated
/// [`RunConfig`]. Help and version requests surface as [`CliError::Clap`].
pub fn parse_config<I, S>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Clap)?;
    resolve(cli.command)
}

fn common_of(command: &Command) -> &CommonArgs {
    match command {
        Command::Simulate(a) => &a.common,
        Command::Nash(a) => &a.common,
        Command::Learn(a) => &a.common,
        Command::Si(a) => &a.common,
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Simulate(_) => "simulate",
        Command::Nash(_) => "nash",
        Command::Learn(_) => "learn",
        Command::Si(_) => "si",
    }
}

/// Merges parsed flags with the optional config file and validates the result.
pub fn resolve(command: Command) -> Result<RunConfig, CliError> {
    let common = common_of(&command).clone();
    let file = match &common.config {
        Some(path) => read_file_config(path)?,
        None => FileConfig::default(),
    };
    let name = command_name(&command);
    if let Some(c) = &file.command {
        if c != name {
            return Err(usage(format!(
                "config file is for `{c}` but `{name}` was requested"
            )));
        }
    }
    let seed = common.seed.or(file.seed).unwrap_or(0);
    let out = common
        .out
        .clone()
        .or(file.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));

    let task = match command {
        Command::Simulate(a) => resolve_simulate(a, file.simulate.unwrap_or_default(), seed)?,
        Command::Nash(a) => resolve_nash(a, file.nash.unwrap_or_default())?,
        Command::Learn(a) => resolve_learn(a, file.learn.unwrap_or_default(), seed)?,
        Command::Si(a) => resolve_si(a, file.si.unwrap_or_default())?,
    };
    Ok(RunConfig { seed, out, task })
}

fn resolve_simulate(a: SimulateArgs, f: SimulateFile, seed: u64) -> Result<Task, CliError> {
    let case = a.case.or(f.case).unwrap_or(CaseArg::NoIntervention);
    if a.delay.is_some() && case != CaseArg::DelayedIsolation {
        return Err(usage("--T only applies to --case delayed-isolation"));
    }
    let population = a.population.or(f.population).unwrap_or(1000);
    if population == 0 {
        return Err(usage("M must be at least 1"));
    }
    let m = population as f64;
    let delay = a.delay.or(f.delay).unwrap_or(1);
    let case = match case {
        CaseArg::NoIntervention => InterventionCase::NoIntervention,
        CaseArg::ImmediateIsolation => InterventionCase::ImmediateIsolation,
        CaseArg::DelayedIsolation => InterventionCase::DelayedIsolation { delay },
        CaseArg::Lockdown => InterventionCase::Lockdown,
    };
    let spec = ScenarioSpec64 {
        case,
        population,
        initially_infected: a.m0.or(f.m0).unwrap_or(1),
        normal_level: a.u.or(f.u).unwrap_or(1.0 / m),
        reduced_level: a.u_star.or(f.u_star).unwrap_or(0.1 / m),
        horizon: a
            .horizon
            .or(f.horizon)
            .unwrap_or(microepi::scenarios::DEFAULT_HORIZON),
        runs: a
            .runs
            .or(f.runs)
            .unwrap_or(microepi::scenarios::DEFAULT_RUNS),
        seed,
    };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let keep_runs = flag_pair(a.keep_runs, a.no_keep_runs)
        .or(f.keep_runs)
        .unwrap_or(false);
    Ok(Task::Simulate { spec, keep_runs })
}

fn resolve_nash(a: NashArgs, f: NashFile) -> Result<Task, CliError> {
    let task = NashTask {
        m: a.m.or(f.m).unwrap_or(1),
        population: a.population.or(f.population).unwrap_or(4),
        alpha: a.alpha.or(f.alpha).unwrap_or(1.0),
        shaped: flag_pair(a.shaped, a.unshaped)
            .or(f.shaped)
            .unwrap_or(false),
        q_slope: a.q_slope.or(f.q_slope).unwrap_or(1.0),
    };
    if task.population == 0 || task.m > task.population {
        return Err(usage(format!(
            "need 0 <= m <= M and M >= 1, got m = {}, M = {}",
            task.m, task.population
        )));
    }
    if task.alpha <= 0.0 || !task.alpha.is_finite() {
        return Err(usage("alpha must be positive"));
    }
    if task.q_slope < 0.0 || !task.q_slope.is_finite() {
        return Err(usage("q-slope must be nonnegative"));
    }
    Ok(Task::Nash(task))
}

fn resolve_learn(a: LearnArgs, f: LearnFile, seed: u64) -> Result<Task, CliError> {
    let population = a.population.or(f.population).unwrap_or(50);
    let mut cfg = TrainConfig64::new(population);
    cfg.seed = seed;
    if let Some(levels) = a.actions.or(f.actions) {
        cfg.action_levels = levels;
    }
    cfg.initially_infected = a.m0.or(f.m0).unwrap_or(cfg.initially_infected);
    cfg.alpha = a.alpha.or(f.alpha).unwrap_or(cfg.alpha);
    cfg.gamma = a.gamma.or(f.gamma).unwrap_or(cfg.gamma);
    cfg.eta = a.eta.or(f.eta).unwrap_or(cfg.eta);
    cfg.max_episodes = a.episodes.or(f.episodes).unwrap_or(cfg.max_episodes);
    cfg.horizon = a.horizon.or(f.horizon).unwrap_or(cfg.horizon);
    cfg.shaped = flag_pair(a.shaped, a.unshaped)
        .or(f.shaped)
        .unwrap_or(cfg.shaped);
    let slope = a.q_slope.or(f.q_slope).unwrap_or(1.0);
    if slope < 0.0 || !slope.is_finite() {
        return Err(usage("q-slope must be nonnegative"));
    }
    cfg.shaping = microepi::Shaping::Linear { slope };
    cfg.q_init = a.q_init.or(f.q_init).unwrap_or(cfg.q_init);
    cfg.cost_signal = match a.signal.or(f.signal).unwrap_or(SignalArg::Expected) {
        SignalArg::Expected => CostSignal::Expected,
        SignalArg::Realized => CostSignal::Realized,
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(Task::Learn(cfg))
}

fn resolve_si(a: SiArgs, f: SiFile) -> Result<Task, CliError> {
    let beta = a
        .beta
        .or(f.beta)
        .ok_or_else(|| usage("si requires --beta"))?;
    let params = SiParams64 {
        beta,
        s0: a.s0.or(f.s0).unwrap_or(0.01),
        days: a.days.or(f.days).unwrap_or(100.0),
        dt: a.dt.or(f.dt).unwrap_or(microepi::si::DEFAULT_DT),
    };
    params.validate().map_err(|e| usage(e.to_string()))?;
    Ok(Task::Si(params))
}

/// Config file that reproduces `config` exactly.
pub fn manifest_config(config: &RunConfig) -> FileConfig {
    let mut file = FileConfig {
        command: Some(config.task.name().to_string()),
        seed: Some(config.seed),
        out: Some(config.out.clone()),
        ..FileConfig::default()
    };
    match &config.task {
        Task::Simulate { spec, keep_runs } => {
            let (case, delay) = match spec.case {
                InterventionCase::NoIntervention => (CaseArg::NoIntervention, None),
                InterventionCase::ImmediateIsolation => (CaseArg::ImmediateIsolation, None),
                InterventionCase::DelayedIsolation { delay } => {
                    (CaseArg::DelayedIsolation, Some(delay))
                }
                InterventionCase::Lockdown => (CaseArg::Lockdown, None),
            };
            file.simulate = Some(SimulateFile {
                case: Some(case),
                population: Some(spec.population),
                m0: Some(spec.initially_infected),
                u: Some(spec.normal_level),
                u_star: Some(spec.reduced_level),
                delay,
                horizon: Some(spec.horizon),
                runs: Some(spec.runs),
                keep_runs: Some(*keep_runs),
            });
        }
        Task::Nash(t) => {
            file.nash = Some(NashFile {
                m: Some(t.m),
                population: Some(t.population),
                alpha: Some(t.alpha),
                shaped: Some(t.shaped),
                q_slope: Some(t.q_slope),
            });
        }
        Task::Learn(c) => {
            let slope = match &c.shaping {
                microepi::Shaping::Linear { slope } => *slope,
                microepi::Shaping::Custom(_) => 1.0,
            };
            file.learn = Some(LearnFile {
                population: Some(c.population),
                m0: Some(c.initially_infected),
                actions: Some(c.action_levels.clone()),
                alpha: Some(c.alpha),
                gamma: Some(c.gamma),
                eta: Some(c.eta),
                episodes: Some(c.max_episodes),
                horizon: Some(c.horizon),
                shaped: Some(c.shaped),
                q_slope: Some(slope),
                q_init: Some(c.q_init),
                signal: Some(match c.cost_signal {
                    CostSignal::Expected => SignalArg::Expected,
                    CostSignal::Realized => SignalArg::Realized,
                }),
            });
        }
        Task::Si(p) => {
            file.si = Some(SiFile {
                beta: Some(p.beta),
                s0: Some(p.s0),
                days: Some(p.days),
                dt: Some(p.dt),
            });
        }
    }
    file
}
