//! Run configuration: built-in defaults, overlaid by a JSON file, overlaid by
//! `--set key=value` overrides with dotted paths.

use std::path::Path;

use bowstate::atom_dielectric::AtomDielectricScenario;
use bowstate::diagnostics::{ActionOptions, EnergyGrid};
use bowstate::{GridSpec, QuadratureSpec, SolverOptions, StringModel};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: String,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            format: Format::Csv,
        }
    }
}

/// String profiles `u/ξ` against `yγ/s` at fixed `γτ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileConfig {
    pub taus: Vec<f64>,
    /// Profiles span `[−y_max, y_max]`.
    pub y_max: f64,
    pub points: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            taus: vec![0.0, 3.0, 10.0],
            y_max: 20.0,
            points: 201,
        }
    }
}

/// Geometric `γτ` samples (plus the origin) for the energy partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergiesConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub heights: EnergyGrid,
}

impl Default for EnergiesConfig {
    fn default() -> Self {
        Self {
            t_min: 1e-3,
            t_max: 20.0,
            samples: 80,
            heights: EnergyGrid::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Field strengths `eE₀ξ/V`, ascending.
    pub reduced_fields: Vec<f64>,
    pub grid: GridSpec,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            reduced_fields: vec![0.0, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0],
            grid: GridSpec {
                intervals: 800,
                ..GridSpec::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegimesConfig {
    pub log10_lo: f64,
    pub log10_hi: f64,
    pub per_decade: usize,
}

impl Default for RegimesConfig {
    fn default() -> Self {
        Self {
            log10_lo: 0.5,
            log10_hi: 7.0,
            per_decade: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VdwConfig {
    /// Distances `R/a_B`.
    pub distances: Vec<f64>,
    /// Overrides the built-in `φ(ε₀)`.
    pub phi: Option<f64>,
}

impl Default for VdwConfig {
    fn default() -> Self {
        Self {
            distances: vec![300.0, 500.0, 1e3, 2e3, 5e3, 1e4],
            phi: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LambConfig {
    /// Distances `R/a_B`.
    pub distances: Vec<f64>,
}

impl Default for LambConfig {
    fn default() -> Self {
        Self {
            distances: vec![10.0, 1e2, 1e4, 1e6, 1e7, 1e8],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: StringModel,
    pub grid: GridSpec,
    pub solver: SolverOptions,
    pub quadrature: QuadratureSpec,
    pub profile: ProfileConfig,
    pub energies: EnergiesConfig,
    pub action: ActionOptions,
    pub sweep: SweepConfig,
    pub atom: AtomDielectricScenario,
    pub regimes: RegimesConfig,
    pub vdw: VdwConfig,
    pub lamb: LambConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: StringModel::unit(),
            grid: GridSpec::default(),
            solver: SolverOptions::default(),
            quadrature: QuadratureSpec::default(),
            profile: ProfileConfig::default(),
            energies: EnergiesConfig::default(),
            action: ActionOptions::default(),
            sweep: SweepConfig::default(),
            atom: AtomDielectricScenario::preset(1e4),
            regimes: RegimesConfig::default(),
            vdw: VdwConfig::default(),
            lamb: LambConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn set_path(root: &mut Value, key: &str, value: Value) -> Result<(), CliError> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("malformed key `{key}`")));
    }
    let mut node = root;
    for (i, part) in parts.iter().enumerate() {
        let Value::Object(map) = node else {
            return Err(CliError::Config(format!(
                "`{}` is not a section, cannot set `{key}`",
                parts[..i].join(".")
            )));
        };
        if i + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    unreachable!("key has at least one segment")
}

/// `value` as JSON when it parses, otherwise as a bare string.
fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

pub fn load(path: Option<&Path>, sets: &[String]) -> Result<RunConfig, CliError> {
    let mut value = serde_json::to_value(RunConfig::default()).expect("default config serializes");
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let file: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if !file.is_object() {
            return Err(CliError::Config(format!(
                "{}: top level must be an object",
                path.display()
            )));
        }
        merge(&mut value, file);
    }
    for s in sets {
        let (key, raw) = s.split_once('=').ok_or_else(|| {
            CliError::Config(format!("override `{s}` is not of the form key=value"))
        })?;
        set_path(&mut value, key.trim(), parse_value(raw.trim()))?;
    }
    serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
}

impl RunConfig {
    /// Configuration without the output section, the part results depend on.
    pub fn physics(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Value::Object(map) = &mut v {
            map.remove("output");
        }
        v
    }
}
