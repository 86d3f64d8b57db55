use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse {path}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("mode {mode} needs a cavity block")]
    MissingCavity { mode: &'static str },
    #[error("no scenario given: pass --preset or --config")]
    NoScenario,
}

impl ConfigError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Self::Invalid { field, reason: reason.into() }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{what} failed{at}")]
    Numeric {
        what: String,
        /// Rendered scenario coordinate, e.g. " at t = 2.5".
        at: String,
        #[source]
        source: oscbath_core::Error,
    },
    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Numeric { .. } => 3,
            Self::Io { .. } => 1,
        }
    }

    pub(crate) fn numeric(what: impl Into<String>, t: Option<f64>, source: oscbath_core::Error) -> Self {
        let at = t.map_or_else(String::new, |t| format!(" at t = {t}"));
        Self::Numeric { what: what.into(), at, source }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }
}
