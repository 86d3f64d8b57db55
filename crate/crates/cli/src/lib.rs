//! Scenario runner for the oscillator-bath models: JSON configs and presets in,
//! occupation traces and asymptote reports out.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;

pub use config::{Format, Mode, OutputConfig, ParamsConfig, ScenarioConfig, Spacing, TimeGrid};
pub use error::{CliError, ConfigError};
pub use output::{emit, render_csv, render_json, sidecar_path, GIT_DESCRIBE};
pub use presets::Preset;
pub use runner::{compare_asymptotes, run_scenario, ComparisonReport};
