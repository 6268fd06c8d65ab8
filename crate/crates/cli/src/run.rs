//! Build the configured scenario, run its analyses, and produce tables.
//!
//! Everything is computed in memory first; files are only written after all
//! analyses succeed, so a failing run leaves no partial output.

use decoh_core::desep::{fit_small_time, robustness_scan};
use decoh_core::dynamics::{track_schmidt, EvolutionConfig};
use decoh_core::hilbert::C64;
use decoh_core::models::{
    bell_preset, coherent_state, fock_state, maverick_norm, maverick_norm_binomial,
    maverick_norm_enumerated, von_neumann_measurement, CoupledOscillators, OscillatorState,
    ScenarioPreset,
};
use decoh_core::zwanzig::{channel_run, ZwanzigProjector};
use decoh_core::ToleranceConfig;

use crate::config::{
    AnalysisSpec, OutputFormat, RunConfig, ScenarioConfig, StateSpec,
};
use crate::output::{tolerance_summary, Cell, Table};

/// Errors split by exit code: configuration problems exit 2, numerical
/// failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(msg) => write!(f, "config error: {msg}"),
            Self::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

fn config_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

fn numerical_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numerical(e.to_string())
}

enum BuiltScenario {
    Evolution(ScenarioPreset),
    Oscillators {
        model: CoupledOscillators,
        states: Vec<OscillatorState>,
        leakage_threshold: f64,
    },
    Maverick {
        p: f64,
        delta: f64,
        ns: Vec<usize>,
    },
}

fn build_scenario(config: &RunConfig) -> Result<BuiltScenario, CliError> {
    let tol = ToleranceConfig::default();
    match &config.scenario {
        ScenarioConfig::Bell(params) => {
            let preset = bell_preset(params.perturbation).map_err(config_err)?;
            Ok(BuiltScenario::Evolution(override_evolution(
                preset, config,
            )?))
        }
        ScenarioConfig::VonNeumannMeasurement(params) => {
            let c = [
                C64::new(params.c[0][0], params.c[0][1]),
                C64::new(params.c[1][0], params.c[1][1]),
            ];
            let preset =
                von_neumann_measurement(&c, params.n_env, params.coupling).map_err(config_err)?;
            Ok(BuiltScenario::Evolution(override_evolution(
                preset, config,
            )?))
        }
        ScenarioConfig::CoupledOscillators(params) => {
            let model =
                CoupledOscillators::new(params.levels, params.coupling).map_err(config_err)?;
            let states: Vec<OscillatorState> = params
                .states
                .iter()
                .map(|s| match s {
                    StateSpec::Coherent(c) => coherent_state(c.alpha, params.levels),
                    StateSpec::Fock(f) => fock_state(f.n, params.levels),
                })
                .collect::<Result<_, _>>()
                .map_err(config_err)?;
            if states.is_empty() {
                return Err(CliError::Config("states list is empty".into()));
            }
            Ok(BuiltScenario::Oscillators {
                model,
                states,
                leakage_threshold: params.leakage_threshold.unwrap_or(tol.truncation_leakage),
            })
        }
        ScenarioConfig::Maverick(params) => {
            if params.ns.is_empty() {
                return Err(CliError::Config("ns list is empty".into()));
            }
            Ok(BuiltScenario::Maverick {
                p: params.p,
                delta: params.delta,
                ns: params.ns.clone(),
            })
        }
    }
}

fn override_evolution(
    preset: ScenarioPreset,
    config: &RunConfig,
) -> Result<ScenarioPreset, CliError> {
    match &config.evolution {
        None => Ok(preset),
        Some(section) => {
            let hamiltonian = preset.evolution.hamiltonian().clone();
            let evolution = EvolutionConfig::new(hamiltonian, section.t_max, section.dt)
                .map_err(config_err)?;
            Ok(ScenarioPreset {
                evolution,
                ..preset
            })
        }
    }
}

/// Run every configured analysis; returns `(file_stem, table)` pairs.
pub fn execute(config: &RunConfig, config_hash: &str) -> Result<Vec<(String, Table)>, CliError> {
    let scenario = build_scenario(config)?;
    let mut tables = Vec::new();
    let mut kind_counts: std::collections::BTreeMap<&str, usize> = Default::default();
    for analysis in &config.analyses {
        let mut table = run_analysis(config, &scenario, analysis)?;
        decorate(&mut table, config, analysis, config_hash);
        let count = kind_counts.entry(analysis.kind()).or_insert(0);
        *count += 1;
        let stem = if *count == 1 {
            analysis.kind().to_string()
        } else {
            format!("{}_{}", analysis.kind(), count)
        };
        tables.push((stem, table));
    }
    Ok(tables)
}

/// Standard header block: tool version, config hash, scenario, tolerances.
fn decorate(table: &mut Table, config: &RunConfig, analysis: &AnalysisSpec, config_hash: &str) {
    let mut header = vec![
        ("tool".to_string(), format!("decoh {}", env!("CARGO_PKG_VERSION"))),
        ("config_hash".to_string(), format!("sha256:{config_hash}")),
        ("scenario".to_string(), config.scenario.name().to_string()),
        ("analysis".to_string(), analysis.kind().to_string()),
        (
            "tolerances".to_string(),
            tolerance_summary(&ToleranceConfig::default()),
        ),
    ];
    header.append(&mut table.meta);
    table.meta = header;
}

fn run_analysis(
    config: &RunConfig,
    scenario: &BuiltScenario,
    analysis: &AnalysisSpec,
) -> Result<Table, CliError> {
    match (analysis, scenario) {
        (AnalysisSpec::SchmidtTrack(_), BuiltScenario::Evolution(preset)) => {
            let traj = track_schmidt(&preset.psi0, &preset.evolution, false)
                .map_err(numerical_err)?;
            let rank = traj.coeff_tracks[0].len();
            let mut columns = vec!["t".to_string()];
            columns.extend((1..=rank).map(|i| format!("sqrt_p_{i}")));
            columns.push("min_gap".to_string());
            let mut table = Table::new(columns);
            table.meta("run_min_gap", crate::output::format_f64(traj.min_gap));
            table.meta("interchange_events", traj.interchange_events.len());
            for (k, t) in traj.times.iter().enumerate() {
                let mut row = vec![Cell::Num(*t)];
                row.extend(traj.coeff_tracks[k].iter().map(|&c| Cell::Num(c)));
                row.push(Cell::Num(traj.gaps[k]));
                table.rows.push(row);
            }
            Ok(table)
        }
        (AnalysisSpec::Desep(params), BuiltScenario::Evolution(preset)) => {
            // The fit only means anything in the small-time regime, so the
            // window is the caller's explicit choice.
            let window = params
                .window
                .map(|w| (w[0], w[1]))
                .ok_or_else(|| {
                    CliError::Config(
                        "desep on an evolution scenario requires a 'window': [t_min, t_max]"
                            .into(),
                    )
                })?;
            let report = fit_small_time(&preset.psi0, &preset.evolution, window)
                .map_err(numerical_err)?;
            let traj = track_schmidt(&preset.psi0, &preset.evolution, false)
                .map_err(numerical_err)?;
            let mut table = Table::new(vec!["t".to_string(), "p_0".to_string()]);
            table.meta("a_param", crate::output::format_f64(report.a_param));
            table.meta("b_param", crate::output::format_f64(report.b_param));
            table.meta("fitted_a", crate::output::format_f64(report.fitted_a));
            table.meta(
                "linear_coeff",
                crate::output::format_f64(report.linear_coeff),
            );
            table.meta(
                "relative_error",
                crate::output::format_f64(report.relative_error),
            );
            table.meta(
                "fit_window",
                format!("{},{}", report.fit_window.0, report.fit_window.1),
            );
            for (t, row) in traj.times.iter().zip(&traj.coeff_tracks) {
                table
                    .rows
                    .push(vec![Cell::Num(*t), Cell::Num(row[0] * row[0])]);
            }
            Ok(table)
        }
        (
            AnalysisSpec::Desep(_),
            BuiltScenario::Oscillators {
                model,
                states,
                leakage_threshold,
            },
        ) => {
            let ranking =
                robustness_scan(model, states, *leakage_threshold).map_err(numerical_err)?;
            let mut table = Table::new(
                ["rank", "label", "a_param", "b_param", "leakage"]
                    .map(String::from)
                    .to_vec(),
            );
            table.meta("levels", model.levels());
            table.meta("coupling", crate::output::format_f64(model.coupling()));
            for (i, entry) in ranking.iter().enumerate() {
                table.rows.push(vec![
                    Cell::Int(i as u64 + 1),
                    Cell::Text(entry.label.clone()),
                    Cell::Num(entry.a_param),
                    Cell::Num(entry.b_param),
                    Cell::Num(entry.leakage),
                ]);
            }
            Ok(table)
        }
        (AnalysisSpec::ZwanzigChannel(params), BuiltScenario::Evolution(preset)) => {
            let run = channel_run(
                &preset.psi0,
                &preset.evolution,
                ZwanzigProjector::Separating,
                params.dt_project,
            )
            .map_err(numerical_err)?;
            let mut table = Table::new(
                ["t", "s_exact", "s_projected"].map(String::from).to_vec(),
            );
            table.meta("dt_project", crate::output::format_f64(run.dt_project));
            for ((t, se), sp) in run.times.iter().zip(&run.s_exact).zip(&run.s_projected) {
                table
                    .rows
                    .push(vec![Cell::Num(*t), Cell::Num(*se), Cell::Num(*sp)]);
            }
            Ok(table)
        }
        (AnalysisSpec::Maverick(_), BuiltScenario::Maverick { p, delta, ns }) => {
            let mut table = Table::new(
                ["n", "norm_binomial", "norm_enumerated"]
                    .map(String::from)
                    .to_vec(),
            );
            table.meta("p", crate::output::format_f64(*p));
            table.meta("delta", crate::output::format_f64(*delta));
            for &n in ns {
                let (binomial, enumerated) = if n <= 20 {
                    // maverick_norm cross-checks the two routes internally.
                    let v = maverick_norm(*p, n, *delta).map_err(numerical_err)?;
                    let e = maverick_norm_enumerated(*p, n, *delta).map_err(numerical_err)?;
                    (v, Cell::Num(e))
                } else {
                    (
                        maverick_norm_binomial(*p, n, *delta).map_err(numerical_err)?,
                        Cell::Missing,
                    )
                };
                table
                    .rows
                    .push(vec![Cell::Int(n as u64), Cell::Num(binomial), enumerated]);
            }
            Ok(table)
        }
        (analysis, _) => Err(CliError::Config(format!(
            "analysis '{}' does not apply to scenario '{}'",
            analysis.kind(),
            config.scenario.name()
        ))),
    }
}

/// Render and write all tables; the output directory is created on demand.
pub fn write_tables(
    config: &RunConfig,
    tables: &[(String, Table)],
) -> Result<Vec<std::path::PathBuf>, CliError> {
    std::fs::create_dir_all(&config.output.path)
        .map_err(|e| CliError::Config(format!("cannot create output dir: {e}")))?;
    let mut written = Vec::new();
    for (stem, table) in tables {
        let rendered = match config.output.format {
            OutputFormat::Csv => crate::output::render_csv(table),
            OutputFormat::Json => crate::output::render_json(table),
        };
        let path = config
            .output
            .path
            .join(format!("{stem}.{}", config.output.format.extension()));
        std::fs::write(&path, rendered)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}
