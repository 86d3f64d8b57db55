use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CavitySpec, ModelParams};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    BareFinite,
    BareContinuum,
    DressedFinite,
    DressedContinuum,
}

impl TraceKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::BareFinite => "bare_finite",
            Self::BareContinuum => "bare_continuum",
            Self::DressedFinite => "dressed_finite",
            Self::DressedContinuum => "dressed_continuum",
        }
    }

    pub fn needs_cavity(self) -> bool {
        matches!(self, Self::BareFinite | Self::DressedFinite)
    }
}

/// Particle occupation sampled on a time grid, with the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupationTrace<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
    pub kind: TraceKind,
    pub params_snapshot: ModelParams<T>,
    pub cavity_snapshot: Option<CavitySpec<T>>,
}

impl<T: Real> OccupationTrace<T> {
    /// Checks times strictly increase and every value is a finite, non-negative occupancy.
    pub fn new(
        times: Vec<T>,
        values: Vec<T>,
        kind: TraceKind,
        params_snapshot: ModelParams<T>,
        cavity_snapshot: Option<CavitySpec<T>>,
    ) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidTrace(format!("{} times but {} values", times.len(), values.len())));
        }
        if let Some(i) = times.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidTrace(format!("times not increasing at index {}", i + 1)));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= T::zero())) {
            return Err(Error::InvalidTrace(format!("value {} at t = {} is not a valid occupancy", values[i], times[i])));
        }
        if kind.needs_cavity() && cavity_snapshot.is_none() {
            return Err(Error::InvalidTrace(format!("{} trace needs a cavity", kind.label())));
        }
        Ok(Self { times, values, kind, params_snapshot, cavity_snapshot })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(T, T)> {
        Some((*self.times.last()?, *self.values.last()?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }
}
