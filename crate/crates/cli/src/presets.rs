//! Built-in figure configurations. Times are in units of `1/T` and the cutoff
//! is `omega_c = 100`; case H has `omega_c / T = 1e-2`, case L `1e2`.
//!
//! The coupling strength is not fixed by the figures, whose vertical scale is
//! unnormalised; the presets use `PRESET_ALPHA`, which keeps the pulsed
//! plateau of the `fig2` run near unit coherence. Amplitudes are qualitative.

use std::fmt;
use std::str::FromStr;

use crate::config::{BathConfig, FreeConfig, PulsedConfig, RunConfig, TimeUnit};

pub const PRESET_ALPHA: f64 = 0.01;
pub const PRESET_OMEGA_C: f64 = 100.0;
const TEMPERATURE_H: f64 = PRESET_OMEGA_C / 1e-2;
const TEMPERATURE_L: f64 = PRESET_OMEGA_C / 1e2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1H,
    Fig1L,
    Fig2,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Fig1H, Preset::Fig1L, Preset::Fig2];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1H => "fig1H",
            Preset::Fig1L => "fig1L",
            Preset::Fig2 => "fig2",
        }
    }

    pub fn config(self) -> RunConfig {
        match self {
            Preset::Fig1H => figure1(TEMPERATURE_H),
            Preset::Fig1L => figure1(TEMPERATURE_L),
            Preset::Fig2 => {
                let mut c = figure1(TEMPERATURE_H);
                // delta_t = tau_c / 10, expressed in units of 1/T
                c.pulsed = Some(PulsedConfig {
                    delta_t: Some(0.1 / PRESET_OMEGA_C * TEMPERATURE_H),
                    cycles: Some(50),
                });
                c
            }
        }
    }
}

fn figure1(temperature: f64) -> RunConfig {
    RunConfig {
        time_unit: TimeUnit::InverseTemperature,
        bath: Some(BathConfig::Ohmic {
            alpha: Some(PRESET_ALPHA),
            omega_c: PRESET_OMEGA_C,
            temperature,
        }),
        free: Some(FreeConfig {
            t_max: Some(100.0),
            samples: Some(201),
        }),
        ..RunConfig::default()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown preset '{s}' (expected fig1H, fig1L or fig2)"))
    }
}
