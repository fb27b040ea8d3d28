//! TOML run configuration. Every table rejects unknown keys, and the whole
//! document is validated into core types before any computation starts.
//!
//! Time-like values (`t_max`, `delta_t`, `t`, `times`) are read in the unit
//! named by `time_unit`: `natural` (the unit of `1/omega`) or
//! `inverse-temperature` (multiples of `1/T`).

use std::path::{Path, PathBuf};

use bangbang_core::bath::{BathSpec, Mode, Ohmic};
use bangbang_core::Complex64;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub time_unit: TimeUnit,
    pub bath: Option<BathConfig>,
    pub free: Option<FreeConfig>,
    pub pulsed: Option<PulsedConfig>,
    pub sequence: Option<SequenceConfig>,
    pub exact: Option<ExactConfig>,
    pub sweep: Option<SweepConfig>,
    pub output: Option<OutputConfig>,
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum TimeUnit {
    #[default]
    Natural,
    InverseTemperature,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BathConfig {
    Ohmic {
        alpha: Option<f64>,
        omega_c: f64,
        temperature: f64,
    },
    Discrete {
        temperature: f64,
        modes: Vec<ModeConfig>,
    },
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub omega: f64,
    pub g: f64,
    #[serde(default)]
    pub g_im: f64,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FreeConfig {
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PulsedConfig {
    pub delta_t: Option<f64>,
    pub cycles: Option<u32>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SequenceConfig {
    pub text: Option<String>,
    pub axes: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingKind {
    #[default]
    Dephasing,
    JaynesCummings,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExactConfig {
    pub omega0: Option<f64>,
    pub n_max: Option<usize>,
    pub margin: Option<usize>,
    #[serde(default)]
    pub coupling: CouplingKind,
    pub times: Option<Vec<f64>>,
    pub delta_t: Option<Vec<f64>>,
    pub cycles: Option<u32>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub t: Option<f64>,
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub exact_compare: Option<f64>,
    pub scan: Option<f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn bath_spec(&self) -> CliResult<BathSpec> {
        let bath = self
            .bath
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [bath] table".into()))?;
        Ok(bath.to_spec()?)
    }

    /// Physical time per configured time unit.
    pub fn time_scale(&self) -> CliResult<f64> {
        match self.time_unit {
            TimeUnit::Natural => Ok(1.0),
            TimeUnit::InverseTemperature => {
                let t = self.bath_spec()?.temperature();
                if t > 0.0 {
                    Ok(1.0 / t)
                } else {
                    Err(CliError::Config(
                        "time_unit = \"inverse-temperature\" needs T > 0".into(),
                    ))
                }
            }
        }
    }

    pub fn output(&self) -> OutputConfig {
        self.output.clone().unwrap_or_default()
    }
}

impl BathConfig {
    pub fn to_spec(&self) -> bangbang_core::Result<BathSpec> {
        match self {
            BathConfig::Ohmic {
                alpha,
                omega_c,
                temperature,
            } => BathSpec::ohmic(alpha.unwrap_or(Ohmic::DEFAULT_ALPHA), *omega_c, *temperature),
            BathConfig::Discrete { temperature, modes } => {
                let modes = modes
                    .iter()
                    .map(|m| Mode::new(m.omega, Complex64::new(m.g, m.g_im)))
                    .collect::<bangbang_core::Result<Vec<_>>>()?;
                BathSpec::discrete(modes, *temperature)
            }
        }
    }
}
