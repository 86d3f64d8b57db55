//! Adaptive Gauss–Kronrod integration on finite and semi-infinite domains,
//! with oscillation-aware panel sizing, registered breakpoints and principal
//! values.

mod adaptive;
mod kronrod;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

use adaptive::{adapt, panel_plan, wynn_epsilon};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integrand is not finite at x = {at}")]
    NonFiniteIntegrand { at: f64 },
    #[error("pole at {pole} is not strictly inside ({a}, {b})")]
    PoleOnBoundary { pole: f64, a: f64, b: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
}

/// How the [0, ∞) tail is handled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailPolicy<T> {
    /// Integrand carries an e^{-βx} factor: truncate where the sampled tail is negligible.
    ExpWeight { beta: T },
    /// Integrand decays like x^{-p}: integrate the tail exactly, by a power-law
    /// map or, for oscillatory integrands, by extrapolated half-period sums.
    PowerDecay { exponent: T },
    /// Hard cutoff at `cutoff`.
    Fixed { cutoff: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Sin,
    Cos,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct QuadratureSpec<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_panels: usize,
    pub tail: TailPolicy<T>,
    /// Panels are kept no wider than π/(4·hint).
    pub oscillation_freq_hint: Option<T>,
    /// Points no panel may straddle.
    pub breakpoints: Vec<T>,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-12),
            max_panels: 200_000,
            tail: TailPolicy::PowerDecay { exponent: T::lit(2.0) },
            oscillation_freq_hint: None,
            breakpoints: Vec::new(),
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(rel_tol: T, abs_tol: T, max_panels: usize) -> Result<Self, QuadError> {
        let spec = Self { rel_tol, abs_tol, max_panels, ..Self::default() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > T::zero()) || !(self.abs_tol > T::zero()) {
            return Err(QuadError::InvalidSpec("tolerances must be positive".into()));
        }
        if self.max_panels < 16 {
            return Err(QuadError::InvalidSpec(format!("max_panels must be >= 16 (got {})", self.max_panels)));
        }
        if let Some(h) = self.oscillation_freq_hint {
            if !(h >= T::zero()) || !h.is_finite() {
                return Err(QuadError::InvalidSpec("oscillation hint must be finite and >= 0".into()));
            }
        }
        if self.breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(QuadError::InvalidSpec("breakpoints must be finite".into()));
        }
        match self.tail {
            TailPolicy::ExpWeight { beta } if !(beta > T::zero()) => {
                Err(QuadError::InvalidSpec("exp_weight needs beta > 0".into()))
            }
            TailPolicy::PowerDecay { exponent } if !(exponent > T::zero()) => {
                Err(QuadError::InvalidSpec("power_decay needs exponent > 0".into()))
            }
            TailPolicy::Fixed { cutoff } if !cutoff.is_finite() => {
                Err(QuadError::InvalidSpec("fixed cutoff must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn with_tolerances(mut self, rel_tol: T, abs_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_tail(mut self, tail: TailPolicy<T>) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_hint(mut self, hint: Option<T>) -> Self {
        self.oscillation_freq_hint = hint.filter(|&h| h > T::zero());
        self
    }

    pub fn with_breakpoints(mut self, points: impl IntoIterator<Item = T>) -> Self {
        self.breakpoints = points.into_iter().collect();
        self
    }

    fn max_width(&self) -> Option<T> {
        self.oscillation_freq_hint
            .filter(|&h| h > T::zero())
            .map(|h| T::PI() / (T::lit(4.0) * h))
    }

    fn tolerance_for(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: T,
    pub panels_used: usize,
    pub converged: bool,
}

impl<T: Real> QuadratureResult<T> {
    fn zero() -> Self {
        Self { value: T::zero(), error_estimate: T::zero(), panels_used: 0, converged: true }
    }

    fn plus(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            panels_used: self.panels_used + other.panels_used,
            converged: self.converged && other.converged,
        }
    }
}

/// ∫_a^b f(x) dx over a finite interval.
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    spec.validate()?;
    integrate_finite(&f, a, b, spec)
}

fn integrate_finite<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(QuadError::InvalidSpec("finite interval expected".into()));
    }
    if a == b {
        return Ok(QuadratureResult::zero());
    }
    if b < a {
        let r = integrate_finite(f, b, a, spec)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }
    let plan = panel_plan(a, b, &spec.breakpoints, spec.max_width());
    adapt(f, &plan, spec.abs_tol, spec.rel_tol, spec.max_panels)
}

/// ∫_0^∞ f(x) dx under the configured tail policy.
pub fn integrate_semi_infinite<T: Real, F: Fn(T) -> T>(
    f: F,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    integrate_from(f, T::zero(), spec)
}

/// ∫_a^∞ f(x) dx under the configured tail policy.
pub fn integrate_from<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(QuadError::InvalidSpec("lower limit must be finite".into()));
    }
    let last_break = spec.breakpoints.iter().copied().filter(|&x| x > a).fold(a, T::max);
    match spec.tail {
        TailPolicy::Fixed { cutoff } => {
            if cutoff <= a {
                return Err(QuadError::InvalidSpec(format!("cutoff {} is not above the lower limit {}", cutoff, a)));
            }
            integrate_finite(&f, a, cutoff, spec)
        }
        TailPolicy::ExpWeight { beta } => exp_weight(&f, a, last_break, beta, spec),
        TailPolicy::PowerDecay { exponent } => power_decay(&f, a, last_break, exponent, spec),
    }
}

fn exp_weight<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    last_break: T,
    beta: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    let step = T::one() / beta;
    let mut target = spec.abs_tol / T::lit(10.0);
    let mut cutoff = last_break + step;
    let mut tail_bound = T::infinity();
    for n in 0..4000 {
        let mut scale = T::zero();
        for i in 0..=8 {
            let x = cutoff + step * T::from_usize_exact(i) / T::lit(8.0);
            let y = f(x);
            if !y.is_finite() {
                return Err(QuadError::NonFiniteIntegrand { at: x.f64() });
            }
            scale = scale.max(y.abs());
        }
        tail_bound = T::lit(2.0) * scale * step;
        // cut at round-off level of the first window so the cutoff does not move with the tolerance
        if n == 0 {
            target = target.min(T::epsilon() * tail_bound);
        }
        if tail_bound <= target {
            break;
        }
        cutoff += step;
    }
    let mut r = integrate_finite(f, a, cutoff, spec)?;
    r.converged &= tail_bound <= target;
    r.error_estimate += tail_bound;
    Ok(r)
}

fn power_decay<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    last_break: T,
    exponent: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    let split = (a + T::one()).max(T::lit(2.0) * last_break);
    let head = integrate_finite(f, a, split, spec)?;
    let tail = match spec.oscillation_freq_hint {
        Some(h) if h > T::zero() => cycle_tail(f, split, h, head.value, spec)?,
        _ => mapped_tail(f, split, exponent, spec)?,
    };
    Ok(head.plus(tail))
}

// x = s0·(1 − u)^{-1/(p−1)} turns an x^{-p} tail into a bounded integrand on [0, 1).
fn mapped_tail<T: Real, F: Fn(T) -> T>(
    f: &F,
    start: T,
    exponent: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    if !(exponent > T::one()) {
        return Err(QuadError::InvalidSpec(
            "non-oscillatory power_decay tail needs exponent > 1".into(),
        ));
    }
    if !(start > T::zero()) {
        return Err(QuadError::InvalidSpec("power_decay tail must start above 0".into()));
    }
    let q = T::one() / (exponent - T::one());
    let mapped = |u: T| {
        let w = T::one() - u;
        let x = start * w.powf(-q);
        let jac = start * q * w.powf(-q - T::one());
        f(x) * jac
    };
    let flat = QuadratureSpec { breakpoints: Vec::new(), oscillation_freq_hint: None, ..spec.clone() };
    integrate_finite(&mapped, T::zero(), T::one(), &flat)
}

// Half-period sums over [start, ∞) accelerated with Wynn's epsilon.
fn cycle_tail<T: Real, F: Fn(T) -> T>(
    f: &F,
    start: T,
    freq: T,
    head_value: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    const MAX_CYCLES: usize = 4000;
    const WINDOW: usize = 40;
    let half_period = T::PI() / freq;
    let cycle_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / T::lit(100.0),
        breakpoints: spec.breakpoints.iter().copied().filter(|&x| x > start).collect(),
        ..spec.clone()
    };

    let mut sums: Vec<T> = Vec::new();
    let mut running = T::zero();
    let mut cycle_error = T::zero();
    let mut panels = 0;
    let mut converged = true;
    let mut small_run = 0;
    let mut estimate = T::zero();
    let mut spread = T::infinity();

    for n in 0..MAX_CYCLES {
        let lo = start + half_period * T::from_usize_exact(n);
        let hi = start + half_period * T::from_usize_exact(n + 1);
        let c = integrate_finite(f, lo, hi, &cycle_spec)?;
        running += c.value;
        cycle_error += c.error_estimate;
        panels += c.panels_used;
        converged &= c.converged;
        sums.push(running);

        let window = &sums[sums.len().saturating_sub(WINDOW)..];
        let (e, s) = wynn_epsilon(window);
        estimate = e;
        spread = s;

        let tol = spec.tolerance_for(head_value + estimate) / T::lit(4.0);
        if c.value.abs() < tol * T::lit(1e-3) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            estimate = running;
            spread = c.value.abs();
            break;
        }
        if n >= 6 && spread < tol {
            break;
        }
        if n + 1 == MAX_CYCLES {
            converged = false;
        }
    }
    Ok(QuadratureResult {
        value: estimate,
        error_estimate: spread + cycle_error,
        panels_used: panels,
        converged,
    })
}

/// ∫_0^∞ envelope(x)·sin(ωx) or ·cos(ωx) dx. With ω = 0 this is exactly
/// [`integrate_semi_infinite`] of the envelope (or of zero, for sine).
pub fn integrate_oscillatory<T: Real, F: Fn(T) -> T>(
    envelope: F,
    freq: T,
    phase: Phase,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    if !(freq >= T::zero()) || !freq.is_finite() {
        return Err(QuadError::InvalidSpec("frequency must be finite and >= 0".into()));
    }
    let integrand = |x: T| {
        let w = freq * x;
        let trig = match phase {
            Phase::Sin => w.sin(),
            Phase::Cos => w.cos(),
        };
        envelope(x) * trig
    };
    if freq == T::zero() {
        return integrate_semi_infinite(integrand, spec);
    }
    let hint = spec.oscillation_freq_hint.map_or(freq, |h| h.max(freq));
    integrate_semi_infinite(integrand, &spec.clone().with_hint(Some(hint)))
}

/// Cauchy principal value of ∫_a^b f(x) dx with a simple pole at `pole`.
///
/// `b` may be `+∞` (the configured tail policy then applies). The window
/// [pole − δ, pole + δ] is folded onto [0, δ] so the singular parts cancel;
/// δ is `half_width` clipped to the interval.
pub fn integrate_pv<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    pole: T,
    half_width: Option<T>,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadError> {
    spec.validate()?;
    if !(pole > a && pole < b) || !pole.is_finite() {
        return Err(QuadError::PoleOnBoundary { pole: pole.f64(), a: a.f64(), b: b.f64() });
    }
    let room = (pole - a).min(b - pole);
    let delta = half_width.filter(|&w| w > T::zero()).map_or(room / T::lit(2.0), |w| w.min(room));

    let folded = |u: T| f(pole + u) + f(pole - u);
    let fold_spec = QuadratureSpec {
        breakpoints: spec
            .breakpoints
            .iter()
            .map(|&x| (x - pole).abs())
            .filter(|&u| u > T::zero() && u < delta)
            .collect(),
        ..spec.clone()
    };
    let mut total = integrate_finite(&folded, T::zero(), delta, &fold_spec)?;

    let left_end = pole - delta;
    if left_end > a {
        total = total.plus(integrate_finite(&f, a, left_end, spec)?);
    }
    let right_start = pole + delta;
    if b.is_infinite() {
        total = total.plus(integrate_from(&f, right_start, spec)?);
    } else if b > right_start {
        total = total.plus(integrate_finite(&f, right_start, b, spec)?);
    }
    Ok(total)
}
