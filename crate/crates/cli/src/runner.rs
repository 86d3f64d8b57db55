use oscbath_core::{
    bose_occupation, occupation_bare_continuum, occupation_bare_finite, occupation_dressed_continuum,
    occupation_dressed_finite, solve_spectrum, transform_matrix, ModeSpectrum64, ModelParams64, OccupationTrace64,
    TraceKind, TransformMatrix64,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Mode, ScenarioConfig};
use crate::error::{CliError, ConfigError};

const SPECTRUM_TOL: f64 = 1e-12;

/// Continuum asymptotes at `t_max` against the Bose value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub t_max: f64,
    pub n0_values: Vec<f64>,
    pub asymptote_bare: f64,
    pub asymptote_dressed: f64,
    pub bose_reference: f64,
    /// max(|bare − Bose|, |dressed − Bose|) / Bose at `t_max`.
    pub max_rel_gap: f64,
    /// Largest spread of either asymptote across `n0_values`.
    pub n0_independence_spread: f64,
    /// Both traces stayed at their initial occupation (decoupled particle).
    pub flat_at_initial: bool,
}

struct Cavity {
    spectrum: ModeSpectrum64,
    transform: TransformMatrix64,
}

fn build_cavity(config: &ScenarioConfig, params: &ModelParams64) -> Result<Option<Cavity>, CliError> {
    let Some(spec) = config.cavity else { return Ok(None) };
    let spectrum = solve_spectrum(params, &spec, SPECTRUM_TOL).map_err(|e| CliError::numeric("cavity spectrum", None, e))?;
    let transform = transform_matrix(&spectrum).map_err(|e| CliError::numeric("cavity transform", None, e))?;
    Ok(Some(Cavity { spectrum, transform }))
}

fn evaluate(
    kind: TraceKind,
    params: &ModelParams64,
    cavity: Option<&Cavity>,
    config: &ScenarioConfig,
    t: f64,
) -> oscbath_core::Result<f64> {
    match (kind, cavity) {
        (TraceKind::BareContinuum, _) => occupation_bare_continuum(params, t, &config.quad),
        (TraceKind::DressedContinuum, _) => occupation_dressed_continuum(params, t, config.kernel, &config.quad),
        (TraceKind::BareFinite, Some(c)) => {
            let n = occupation_bare_finite(&c.spectrum, &c.transform, params, t)?;
            Ok(if config.bare_vacuum { n.total() } else { n.renormalized() })
        }
        (TraceKind::DressedFinite, Some(c)) => occupation_dressed_finite(&c.spectrum, &c.transform, params, t),
        (_, None) => unreachable!("validated configs carry a cavity for finite kinds"),
    }
}

/// Evaluates every trace the config asks for: one per kind and initial occupation,
/// ordered by n0 then kind. Time points run in parallel.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<OccupationTrace64>, CliError> {
    config.validate()?;
    let base = config.params.model()?;
    let cavity = build_cavity(config, &base)?;
    let times = config.time_grid.times();
    let kinds = config.mode.kinds(cavity.is_some());

    let mut traces = Vec::new();
    for n0 in config.n0_values() {
        let params = base.with_n0(n0).map_err(|e| ConfigError::invalid("n0_sweep", e.to_string()))?;
        for &kind in &kinds {
            let values = times
                .par_iter()
                .map(|&t| {
                    evaluate(kind, &params, cavity.as_ref(), config, t)
                        .map_err(|e| CliError::numeric(format!("{} (n0 = {n0})", kind.label()), Some(t), e))
                })
                .collect::<Result<Vec<f64>, CliError>>()?;
            let trace = OccupationTrace64::new(times.clone(), values, kind, params, config.cavity)
                .map_err(|e| CliError::numeric(kind.label(), None, e))?;
            traces.push(trace);
        }
    }
    Ok(traces)
}

/// Compares the continuum asymptotes at `t_max` with the Bose value, over the n0 sweep.
pub fn compare_asymptotes(config: &ScenarioConfig) -> Result<ComparisonReport, CliError> {
    config.validate()?;
    if config.mode != Mode::CompareAll {
        return Err(ConfigError::invalid("mode", format!("compare needs compare_all (got {})", config.mode.label())).into());
    }
    let base = config.params.model()?;
    let t_max = config.time_grid.t_max;
    if t_max < 100.0 / base.omega_bar {
        return Err(ConfigError::invalid("time_grid", format!("t_max {t_max} is below 100/omega_bar")).into());
    }
    let bose_reference = bose_occupation(base.omega_bar, base.beta).map_err(|e| CliError::numeric("Bose value", None, e))?;

    let mut n0_values = config.n0_values();
    if !n0_values.contains(&base.n0_initial) {
        n0_values.insert(0, base.n0_initial);
    }
    let jobs: Vec<(f64, TraceKind)> = n0_values
        .iter()
        .flat_map(|&n0| [(n0, TraceKind::BareContinuum), (n0, TraceKind::DressedContinuum)])
        .collect();
    let values = jobs
        .par_iter()
        .map(|&(n0, kind)| {
            let params = base.with_n0(n0).map_err(|e| ConfigError::invalid("n0_sweep", e.to_string()))?;
            evaluate(kind, &params, None, config, t_max)
                .map_err(|e| CliError::numeric(format!("{} (n0 = {n0})", kind.label()), Some(t_max), e))
        })
        .collect::<Result<Vec<f64>, CliError>>()?;

    let pick = |kind: TraceKind| -> Vec<(f64, f64)> {
        jobs.iter().zip(&values).filter(|((_, k), _)| *k == kind).map(|((n0, _), v)| (*n0, *v)).collect()
    };
    let bare = pick(TraceKind::BareContinuum);
    let dressed = pick(TraceKind::DressedContinuum);
    let at_base = |series: &[(f64, f64)]| series.iter().find(|(n0, _)| *n0 == base.n0_initial).map_or(f64::NAN, |p| p.1);
    let spread = |series: &[(f64, f64)]| {
        let (lo, hi) = series.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
        hi - lo
    };
    let flat = |series: &[(f64, f64)]| series.iter().all(|(n0, v)| (v - n0).abs() <= 1e-12 * n0.max(1.0));

    let asymptote_bare = at_base(&bare);
    let asymptote_dressed = at_base(&dressed);
    let sweep_values = config.n0_values();
    let in_sweep = |series: Vec<(f64, f64)>| series.into_iter().filter(|(n0, _)| sweep_values.contains(n0)).collect::<Vec<_>>();
    Ok(ComparisonReport {
        t_max,
        n0_values: sweep_values.clone(),
        asymptote_bare,
        asymptote_dressed,
        bose_reference,
        max_rel_gap: (asymptote_bare - bose_reference).abs().max((asymptote_dressed - bose_reference).abs()) / bose_reference,
        n0_independence_spread: spread(&in_sweep(bare.clone())).max(spread(&in_sweep(dressed.clone()))),
        flat_at_initial: flat(&bare) && flat(&dressed),
    })
}
