use std::path::Path;

use clap::ValueEnum;
use oscbath_core::{validate_params, BathKernel, CavitySpec64, ModelParams64, QuadratureSpec64, TraceKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, ConfigError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub omega_bar: f64,
    pub g: f64,
    pub beta: f64,
    pub n0: f64,
}

impl ParamsConfig {
    pub fn model(&self) -> Result<ModelParams64, ConfigError> {
        validate_params(self.omega_bar, self.g, self.beta, self.n0)
            .map_err(|e| ConfigError::invalid("params", e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    BareFinite,
    BareContinuum,
    DressedFinite,
    DressedContinuum,
    CompareAll,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Self::CompareAll => "compare_all",
            Self::BareFinite => TraceKind::BareFinite.label(),
            Self::BareContinuum => TraceKind::BareContinuum.label(),
            Self::DressedFinite => TraceKind::DressedFinite.label(),
            Self::DressedContinuum => TraceKind::DressedContinuum.label(),
        }
    }

    /// Trace kinds to produce. `compare_all` adds the finite-cavity kinds when a cavity is present.
    pub fn kinds(self, has_cavity: bool) -> Vec<TraceKind> {
        match self {
            Self::BareFinite => vec![TraceKind::BareFinite],
            Self::BareContinuum => vec![TraceKind::BareContinuum],
            Self::DressedFinite => vec![TraceKind::DressedFinite],
            Self::DressedContinuum => vec![TraceKind::DressedContinuum],
            Self::CompareAll if has_cavity => vec![
                TraceKind::BareContinuum,
                TraceKind::DressedContinuum,
                TraceKind::BareFinite,
                TraceKind::DressedFinite,
            ],
            Self::CompareAll => vec![TraceKind::BareContinuum, TraceKind::DressedContinuum],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl TimeGrid {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |reason: String| Err(ConfigError::invalid("time_grid", reason));
        if !(self.t_min.is_finite() && self.t_max.is_finite()) {
            return bad("bounds must be finite".into());
        }
        if self.t_min < 0.0 {
            return bad(format!("t_min must be >= 0 (got {})", self.t_min));
        }
        if self.t_max <= self.t_min {
            return bad(format!("t_max {} must exceed t_min {}", self.t_max, self.t_min));
        }
        if self.points < 2 {
            return bad(format!("points must be >= 2 (got {})", self.points));
        }
        if self.spacing == Spacing::Log && self.t_min == 0.0 {
            return bad("log spacing needs t_min > 0".into());
        }
        Ok(())
    }

    /// Sample times, endpoints exact.
    pub fn times(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    return self.t_max;
                }
                let s = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.t_min + (self.t_max - self.t_min) * s,
                    Spacing::Log => (self.t_min.ln() + (self.t_max.ln() - self.t_min.ln()) * s).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<std::path::PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub params: ParamsConfig,
    pub mode: Mode,
    #[serde(default)]
    pub cavity: Option<CavitySpec64>,
    pub time_grid: TimeGrid,
    #[serde(default)]
    pub quad: QuadratureSpec64,
    #[serde(default)]
    pub n0_sweep: Option<Vec<f64>>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
    /// Bath kernel for dressed continuum traces.
    #[serde(default)]
    pub kernel: BathKernel,
    /// Keep the temperature-independent |β|² terms in bare finite traces.
    #[serde(default)]
    pub bare_vacuum: bool,
}

impl ScenarioConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|source| ConfigError::Parse { path: origin.to_owned(), source })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self::from_json(&text, &path.display().to_string())?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params.model()?;
        self.time_grid.validate()?;
        self.quad.validate().map_err(|e| ConfigError::invalid("quad", e.to_string()))?;
        match self.cavity {
            Some(c) => {
                CavitySpec64::new(c.radius, c.modes).map_err(|e| ConfigError::invalid("cavity", e.to_string()))?;
            }
            None if matches!(self.mode, Mode::BareFinite | Mode::DressedFinite) => {
                return Err(ConfigError::MissingCavity { mode: self.mode.label() });
            }
            None => {}
        }
        if let Some(sweep) = &self.n0_sweep {
            if sweep.is_empty() {
                return Err(ConfigError::invalid("n0_sweep", "empty list"));
            }
            if let Some(bad) = sweep.iter().find(|n| !(n.is_finite() && **n >= 0.0)) {
                return Err(ConfigError::invalid("n0_sweep", format!("{bad} is not a valid occupation")));
            }
        }
        Ok(())
    }

    /// Initial occupations to run: the sweep if given, else the single `params.n0`.
    pub fn n0_values(&self) -> Vec<f64> {
        self.n0_sweep.clone().unwrap_or_else(|| vec![self.params.n0])
    }
}
