//! CSV and manifest writers.

use std::fs;
use std::path::{Path, PathBuf};

use microepi::AgentState;

use crate::config::{manifest_config, RunConfig, Task};
use crate::{CliError, RunResult};

/// Formats a real like C's `%.17g`, which round-trips every `f64`.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let digits = (16 - exp) as usize;
        trim_zeros(&format!("{x:.digits$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn runtime(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

fn write_csv<R>(path: &Path, header: &[&str], rows: R) -> Result<(), CliError>
where
    R: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| runtime(path, e))?;
    w.write_record(header).map_err(|e| runtime(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| runtime(path, e))?;
    }
    w.flush().map_err(|e| runtime(path, e))
}

fn manifest_text(config: &RunConfig) -> Result<String, CliError> {
    let body =
        toml::to_string(&manifest_config(config)).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(format!(
        "# microepi-cli {} (microepi {})\n# Reproduce with: microepi {} --config manifest.toml\n{body}",
        env!("CARGO_PKG_VERSION"),
        microepi::VERSION,
        config.task.name(),
    ))
}

/// Writes all outputs of `result` under `config.out` and returns their paths.
pub fn emit_outputs(config: &RunConfig, result: &RunResult) -> Result<Vec<PathBuf>, CliError> {
    let dir = &config.out;
    fs::create_dir_all(dir).map_err(|e| runtime(dir, e))?;
    let mut written = Vec::new();
    let mut path = |name: &str| {
        let p = dir.join(name);
        written.push(p.clone());
        p
    };

    match result {
        RunResult::Simulate(ens) => {
            let rows = (0..ens.len()).map(|k| {
                vec![
                    k.to_string(),
                    format_real(ens.mean[k]),
                    ens.min[k].to_string(),
                    ens.max[k].to_string(),
                ]
            });
            write_csv(&path("envelope.csv"), &["day", "mean", "min", "max"], rows)?;
            if matches!(
                config.task,
                Task::Simulate {
                    keep_runs: true,
                    ..
                }
            ) {
                let rows = ens.trajectories.iter().enumerate().flat_map(|(r, traj)| {
                    traj.iter()
                        .enumerate()
                        .map(move |(k, m)| vec![r.to_string(), k.to_string(), m.to_string()])
                });
                write_csv(&path("runs.csv"), &["run", "day", "m"], rows)?;
            }
        }
        RunResult::Nash(report) => {
            let Task::Nash(t) = &config.task else {
                unreachable!("nash result for a non-nash task")
            };
            let eq = &report.equilibrium;
            let row = vec![
                t.m.to_string(),
                t.population.to_string(),
                format_real(t.alpha),
                t.shaped.to_string(),
                format_real(eq.u_healthy),
                format_real(eq.u_infected),
                format_real(eq.cost_healthy),
                format_real(eq.cost_infected),
                format_real(eq.system_cost),
                format_real(report.optimum.cost),
                format_real(report.welfare_loss()),
            ];
            let header = [
                "m",
                "M",
                "alpha",
                "shaped",
                "u_healthy",
                "u_infected",
                "cost_healthy",
                "cost_infected",
                "L_star",
                "L_opt",
                "welfare_loss",
            ];
            write_csv(&path("nash.csv"), &header, [row])?;
        }
        RunResult::Learn(outcome) => {
            let q = &outcome.table;
            let mut rows = Vec::new();
            for x in [AgentState::Healthy, AgentState::Infected] {
                for m in 0..=q.population() {
                    for (a, &level) in q.action_levels().iter().enumerate() {
                        let visits = q.visits(x, m, a);
                        let value = if visits > 0 {
                            format_real(q.get(x, m, a))
                        } else {
                            String::new()
                        };
                        rows.push(vec![
                            x.indicator().to_string(),
                            m.to_string(),
                            format_real(level),
                            value,
                            visits.to_string(),
                        ]);
                    }
                }
            }
            write_csv(
                &path("q_table.csv"),
                &["x", "m", "action_level", "q_value", "visits"],
                rows,
            )?;

            let rows = outcome.episodes.iter().flat_map(|e| {
                e.m_trajectory
                    .iter()
                    .enumerate()
                    .map(move |(k, m)| vec![e.episode.to_string(), k.to_string(), m.to_string()])
            });
            write_csv(&path("trajectories.csv"), &["episode", "day", "m"], rows)?;

            let rows = outcome.episodes.iter().map(|e| {
                vec![
                    e.episode.to_string(),
                    format_real(e.epsilon),
                    e.final_m().to_string(),
                    format_real(e.cumulative_cost),
                ]
            });
            write_csv(
                &path("summary.csv"),
                &["episode", "epsilon", "final_m", "cumulative_cost"],
                rows,
            )?;
        }
        RunResult::Si(points) => {
            let rows = points
                .iter()
                .map(|&(t, s)| vec![format_real(t), format_real(s)]);
            write_csv(&path("si.csv"), &["t", "s"], rows)?;
        }
    }

    let manifest = path("manifest.toml");
    fs::write(&manifest, manifest_text(config)?).map_err(|e| runtime(&manifest, e))?;
    Ok(written)
}
