//! Job configuration: a JSON document (file or stdin) overlaid by flags.
//!
//! Precedence, lowest first: built-in defaults, the `--config` document,
//! command-line flags.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fqwell::{DimensionlessWell, WellParameters};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[serde(alias = "Dimensionless")]
    Dimensionless,
    #[serde(alias = "Physical")]
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    #[serde(alias = "JSON")]
    Json,
    #[serde(alias = "CSV")]
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    Alpha,
    G,
}

/// Everything a job can be told, from either source. All optional so the
/// two layers can be merged field by field.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// dimensionless (g, alpha) or physical (a, depth, dalpha, hbar, alpha)
    #[arg(long, value_enum, global = true)]
    pub mode: Option<Mode>,
    /// Well strength G = a^alpha U / (hbar^alpha D_alpha)
    #[arg(long, global = true)]
    pub g: Option<f64>,
    /// Levy index, 1 < alpha <= 2
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Well half-width
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Well depth U
    #[arg(long, global = true)]
    #[serde(alias = "U")]
    pub depth: Option<f64>,
    /// Kinetic scale factor D_alpha
    #[arg(long = "dalpha", global = true)]
    #[serde(alias = "dalpha")]
    pub d_alpha: Option<f64>,
    /// Reduced Planck constant in the chosen units
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, value_enum, global = true)]
    #[serde(alias = "output_format")]
    pub format: Option<Format>,
    /// Level index for `wavefunction`
    #[arg(long, global = true)]
    pub level: Option<usize>,
    /// Sample count (`wavefunction`: points; `plotdata`: points per branch)
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    #[arg(long = "sweep-var", value_enum, global = true)]
    pub sweep_var: Option<SweepVar>,
    #[arg(long, global = true)]
    pub from: Option<f64>,
    #[arg(long, global = true)]
    pub to: Option<f64>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Fourier grid point count for `compare`
    #[arg(long = "grid-n", global = true)]
    pub grid_n: Option<usize>,
    /// Fourier grid half-length for `compare` (default 8a)
    #[arg(long = "grid-l", global = true)]
    pub grid_l: Option<f64>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),+) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )+
    };
}

impl JobConfig {
    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(mut self, flags: &JobConfig) -> JobConfig {
        overlay!(
            self, flags, mode, g, alpha, a, depth, d_alpha, hbar, format, level, samples, xmin,
            xmax, sweep_var, from, to, steps, grid_n, grid_l
        );
        self
    }

    pub fn from_json(text: &str) -> Result<JobConfig, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &PathBuf, stdin: &mut dyn std::io::Read) -> Result<JobConfig, CliError> {
        let text = if path.as_os_str() == "-" {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Config(format!("config: cannot read stdin: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("config: cannot read {}: {e}", path.display()))
            })?
        };
        Self::from_json(&text)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    fn physical_fields(&self) -> [(&'static str, Option<f64>); 4] {
        [
            ("a", self.a),
            ("depth", self.depth),
            ("dalpha", self.d_alpha),
            ("hbar", self.hbar),
        ]
    }

    pub fn mode(&self) -> Result<Mode, CliError> {
        if let Some(mode) = self.mode {
            return Ok(mode);
        }
        if self.g.is_some() {
            Ok(Mode::Dimensionless)
        } else if self.physical_fields().iter().any(|(_, v)| v.is_some()) {
            Ok(Mode::Physical)
        } else {
            Err(CliError::Config(
                "g: missing; give g (dimensionless mode) or a, depth, dalpha, hbar (physical mode)"
                    .into(),
            ))
        }
    }

    pub fn alpha(&self) -> Result<f64, CliError> {
        let alpha = self
            .alpha
            .ok_or_else(|| CliError::Config("alpha: missing (need 1 < alpha <= 2)".into()))?;
        check_alpha(alpha)?;
        Ok(alpha)
    }

    /// The well described by this config, checked against its mode.
    pub fn well(&self) -> Result<Well, CliError> {
        let alpha = self.alpha()?;
        match self.mode()? {
            Mode::Dimensionless => {
                if let Some((name, _)) = self.physical_fields().iter().find(|(_, v)| v.is_some()) {
                    return Err(CliError::Config(format!(
                        "{name}: not allowed in dimensionless mode"
                    )));
                }
                let g = self
                    .g
                    .ok_or_else(|| CliError::Config("g: missing in dimensionless mode".into()))?;
                positive("g", g)?;
                Ok(Well::Dimensionless(
                    DimensionlessWell::new(g, alpha).map_err(CliError::from_config)?,
                ))
            }
            Mode::Physical => {
                if self.g.is_some() {
                    return Err(CliError::Config("g: not allowed in physical mode".into()));
                }
                let mut values = [0.0; 4];
                for (slot, (name, v)) in values.iter_mut().zip(self.physical_fields()) {
                    let v = v.ok_or_else(|| {
                        CliError::Config(format!("{name}: missing in physical mode"))
                    })?;
                    positive(name, v)?;
                    *slot = v;
                }
                let [a, depth, d_alpha, hbar] = values;
                Ok(Well::Physical(
                    WellParameters::new(a, depth, d_alpha, hbar, alpha)
                        .map_err(CliError::from_config)?,
                ))
            }
        }
    }
}

pub fn check_alpha(alpha: f64) -> Result<(), CliError> {
    if alpha.is_finite() && alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "alpha: {alpha} is outside the allowed range 1 < alpha <= 2"
        )))
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{name}: must be positive and finite, got {v}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Well {
    Dimensionless(DimensionlessWell),
    Physical(WellParameters),
}

impl Well {
    pub fn dimensionless(&self) -> Result<DimensionlessWell, CliError> {
        match self {
            Well::Dimensionless(w) => Ok(*w),
            Well::Physical(p) => p.nondimensionalize().map_err(CliError::from),
        }
    }

    pub fn physical(&self) -> Option<&WellParameters> {
        match self {
            Well::Physical(p) => Some(p),
            Well::Dimensionless(_) => None,
        }
    }

    /// Length unit for coordinates: `a` in physical mode, 1 otherwise.
    pub fn half_width(&self) -> f64 {
        self.physical().map_or(1.0, |p| p.a())
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            Well::Dimensionless(_) => "dimensionless",
            Well::Physical(_) => "physical",
        }
    }
}
