//! Run configuration: a single JSON document, schema-checked on load.
//!
//! Unknown keys are rejected everywhere so a typo cannot silently fall back
//! to a default.

use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    /// Required for time-evolution analyses; ignored by `maverick` and the
    /// oscillator robustness scan.
    #[serde(default)]
    pub evolution: Option<EvolutionSection>,
    pub analyses: Vec<AnalysisSpec>,
    pub output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case")]
pub enum ScenarioConfig {
    Bell(BellParams),
    VonNeumannMeasurement(VonNeumannParams),
    CoupledOscillators(CoupledOscillatorParams),
    Maverick(MaverickScenarioParams),
}

impl ScenarioConfig {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bell(_) => "bell",
            Self::VonNeumannMeasurement(_) => "von_neumann_measurement",
            Self::CoupledOscillators(_) => "coupled_oscillators",
            Self::Maverick(_) => "maverick",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellParams {
    #[serde(default = "default_perturbation")]
    pub perturbation: f64,
}

fn default_perturbation() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VonNeumannParams {
    /// System qubit amplitudes as `[re, im]` pairs.
    pub c: [[f64; 2]; 2],
    pub n_env: usize,
    pub coupling: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupledOscillatorParams {
    pub levels: usize,
    pub coupling: f64,
    pub states: Vec<StateSpec>,
    /// Cap on per-state truncation leakage; defaults to the library
    /// tolerance (1e-6).
    #[serde(default)]
    pub leakage_threshold: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    Coherent(CoherentSpec),
    Fock(FockSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherentSpec {
    pub alpha: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockSpec {
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaverickScenarioParams {
    pub p: f64,
    pub delta: f64,
    pub ns: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    pub t_max: f64,
    pub dt: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalysisSpec {
    SchmidtTrack(SchmidtTrackParams),
    Desep(DesepParams),
    ZwanzigChannel(ZwanzigChannelParams),
    Maverick(MaverickAnalysisParams),
}

impl AnalysisSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::SchmidtTrack(_) => "schmidt_track",
            Self::Desep(_) => "desep",
            Self::ZwanzigChannel(_) => "zwanzig_channel",
            Self::Maverick(_) => "maverick",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchmidtTrackParams {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesepParams {
    /// Fit window `[t_min, t_max]`; required for time-evolution scenarios
    /// (it must lie in the small-time regime), ignored by the oscillator
    /// robustness scan.
    #[serde(default)]
    pub window: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZwanzigChannelParams {
    pub dt_project: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaverickAnalysisParams {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Directory the analysis files are written into.
    pub path: std::path::PathBuf,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// Parse and schema-validate a config document.
pub fn parse(bytes: &[u8]) -> Result<RunConfig, String> {
    let config: RunConfig =
        serde_json::from_slice(bytes).map_err(|e| format!("config parse error: {e}"))?;
    if config.analyses.is_empty() {
        return Err("config error: analyses list is empty".into());
    }
    Ok(config)
}
