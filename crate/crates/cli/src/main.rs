//! `decoh` — config-driven decoherence runs with machine-readable output.
//!
//! Subcommands: `run <config>`, `validate <config>`, `list [--json]`.
//! Exit codes: 0 success, 2 config error, 3 numerical failure.

mod config;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use run::CliError;

#[derive(Parser)]
#[command(name = "decoh", version, about = "Bipartite decoherence dynamics and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run config and write its analysis outputs.
    Run { config: PathBuf },
    /// Parse and schema-check a config without running it.
    Validate { config: PathBuf },
    /// List the available scenario presets.
    List {
        /// Emit the listing as JSON.
        #[arg(long)]
        json: bool,
    },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => match run_command(&config) {
            Ok(paths) => {
                for p in paths {
                    println!("wrote {}", p.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                match e {
                    CliError::Config(_) => ExitCode::from(EXIT_CONFIG),
                    CliError::Numerical(_) => ExitCode::from(EXIT_NUMERICAL),
                }
            }
        },
        Command::Validate { config } => match load(&config) {
            Ok(_) => {
                println!("config ok");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(EXIT_CONFIG)
            }
        },
        Command::List { json } => {
            print!("{}", if json { listing_json() } else { listing_text() });
            ExitCode::SUCCESS
        }
    }
}

fn load(path: &PathBuf) -> Result<(config::RunConfig, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let parsed = config::parse(&bytes).map_err(CliError::Config)?;
    let hash = hex_digest(&bytes);
    Ok((parsed, hash))
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn run_command(path: &PathBuf) -> Result<Vec<PathBuf>, CliError> {
    let (parsed, hash) = load(path)?;
    let tables = run::execute(&parsed, &hash)?;
    run::write_tables(&parsed, &tables)
}

struct PresetDoc {
    name: &'static str,
    summary: &'static str,
    params: &'static [(&'static str, &'static str, &'static str)],
    analyses: &'static [&'static str],
}

/// Alphabetized by name; the listing is part of the CLI contract.
const PRESETS: &[PresetDoc] = &[
    PresetDoc {
        name: "bell",
        summary: "Singlet pair under a fixed generic perturbation; degenerate Schmidt spectrum",
        params: &[("perturbation", "float ≥ 0 (default 1.0)", "overall scale of the perturbing Hamiltonian")],
        analyses: &["schmidt_track", "zwanzig_channel"],
    },
    PresetDoc {
        name: "coupled_oscillators",
        summary: "Two truncated oscillators with exchange coupling; robustness ranking by deseparation parameter",
        params: &[
            ("levels", "int ≥ 2", "Fock levels per oscillator"),
            ("coupling", "float", "exchange coupling g"),
            ("states", "list of {kind: coherent, alpha} | {kind: fock, n}", "candidate system states"),
            ("leakage_threshold", "float (default 1e-6)", "max truncation leakage per state"),
        ],
        analyses: &["desep"],
    },
    PresetDoc {
        name: "maverick",
        summary: "Norm of deviant-frequency branches over n repeated ideal measurements",
        params: &[
            ("p", "float in (0,1)", "weight of outcome 0"),
            ("delta", "float in (0, max(p,1-p))", "frequency deviation threshold"),
            ("ns", "list of int ≥ 1", "series lengths (branch enumeration up to n = 20)"),
        ],
        analyses: &["maverick"],
    },
    PresetDoc {
        name: "von_neumann_measurement",
        summary: "Qubit measured by n_env pointer qubits without recoil (pure decoherence)",
        params: &[
            ("c", "[[re,im],[re,im]], unit norm", "system qubit amplitudes"),
            ("n_env", "int in 1..=20 (dense Hamiltonian needs 2^(n+1) ≤ 4096)", "environment qubits"),
            ("coupling", "float > 0", "measurement coupling"),
        ],
        analyses: &["schmidt_track", "desep (requires window)", "zwanzig_channel"],
    },
];

fn listing_text() -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    for p in PRESETS {
        let _ = writeln!(out, "{}\n  {}", p.name, p.summary);
        let _ = writeln!(out, "  analyses: {}", p.analyses.join(", "));
        for (name, ty, doc) in p.params {
            let _ = writeln!(out, "  {name}: {ty} — {doc}");
        }
        let _ = writeln!(out);
    }
    out
}

fn listing_json() -> String {
    use serde_json::json;
    let entries: Vec<_> = PRESETS
        .iter()
        .map(|p| {
            json!({
                "name": p.name,
                "summary": p.summary,
                "analyses": p.analyses,
                "params": p.params.iter().map(|(name, ty, doc)| json!({
                    "name": name, "type": ty, "doc": doc,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&entries).expect("static structure");
    s.push('\n');
    s
}
