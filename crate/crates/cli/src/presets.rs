use clap::ValueEnum;
use oscbath_core::{BathKernel, CavitySpec64, QuadratureSpec64};
use serde::{Deserialize, Serialize};

use crate::config::{Mode, ParamsConfig, ScenarioConfig, Spacing, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Bare continuum occupation, 200 log-spaced points on [1, 100].
    Fig1,
    /// Dressed continuum occupation on the same grid.
    Fig2,
    /// Both continuum formalisms for n0 in {0, 1, 5}.
    Invariance,
    /// Cold bath, empty particle: bare finite with vacuum terms against the dressed traces.
    DivergenceProbe,
}

const FIG_PARAMS: ParamsConfig = ParamsConfig { omega_bar: 1.0, g: 0.1, beta: 2.0, n0: 1.0 };

impl Preset {
    pub fn config(self) -> ScenarioConfig {
        let fig_grid = TimeGrid { t_min: 1.0, t_max: 100.0, points: 200, spacing: Spacing::Log };
        let base = ScenarioConfig {
            params: FIG_PARAMS,
            mode: Mode::BareContinuum,
            cavity: None,
            time_grid: fig_grid,
            quad: QuadratureSpec64::default(),
            n0_sweep: None,
            output: None,
            kernel: BathKernel::default(),
            bare_vacuum: false,
        };
        match self {
            Self::Fig1 => base,
            Self::Fig2 => ScenarioConfig { mode: Mode::DressedContinuum, ..base },
            Self::Invariance => ScenarioConfig {
                mode: Mode::CompareAll,
                time_grid: TimeGrid { points: 40, ..fig_grid },
                n0_sweep: Some(vec![0.0, 1.0, 5.0]),
                ..base
            },
            Self::DivergenceProbe => ScenarioConfig {
                params: ParamsConfig { beta: 50.0, n0: 0.0, ..FIG_PARAMS },
                mode: Mode::CompareAll,
                cavity: Some(CavitySpec64 { radius: 60.0, modes: 256 }),
                time_grid: TimeGrid { t_min: 0.0, t_max: 20.0, points: 81, spacing: Spacing::Linear },
                bare_vacuum: true,
                ..base
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for p in Preset::value_variants() {
            p.config().validate().unwrap();
        }
    }
}
