use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use oscbath_core::{BathKernel, CavitySpec64, ModelParams64, OccupationTrace64, QuadratureSpec64};
use serde::Serialize;

use crate::config::{Format, ScenarioConfig};
use crate::error::CliError;

pub const GIT_DESCRIBE: &str = env!("OSCBATH_GIT_DESCRIBE");

#[derive(Debug, Serialize)]
struct TraceMeta<'a> {
    params: &'a ModelParams64,
    cavity: &'a Option<CavitySpec64>,
    quad: &'a QuadratureSpec64,
    git_describe: &'static str,
    kind: &'static str,
    label: String,
    kernel: BathKernel,
    bare_vacuum: bool,
}

#[derive(Debug, Serialize)]
struct JsonTrace<'a> {
    meta: TraceMeta<'a>,
    series: Vec<[f64; 2]>,
}

/// Sidecar written next to a CSV file.
#[derive(Debug, Serialize)]
struct CsvMeta<'a> {
    git_describe: &'static str,
    config: &'a ScenarioConfig,
    traces: Vec<TraceMeta<'a>>,
}

fn label(trace: &OccupationTrace64, sweep: bool) -> String {
    if sweep {
        format!("{}[n0={}]", trace.kind.label(), trace.params_snapshot.n0_initial)
    } else {
        trace.kind.label().to_owned()
    }
}

fn meta<'a>(trace: &'a OccupationTrace64, config: &'a ScenarioConfig, sweep: bool) -> TraceMeta<'a> {
    TraceMeta {
        params: &trace.params_snapshot,
        cavity: &trace.cavity_snapshot,
        quad: &config.quad,
        git_describe: GIT_DESCRIBE,
        kind: trace.kind.label(),
        label: label(trace, sweep),
        kernel: config.kernel,
        bare_vacuum: config.bare_vacuum,
    }
}

fn is_sweep(config: &ScenarioConfig) -> bool {
    config.n0_sweep.as_ref().is_some_and(|s| s.len() > 1)
}

/// CSV with header `t,value,kind`; every trace appends its rows.
pub fn render_csv(traces: &[OccupationTrace64], config: &ScenarioConfig) -> String {
    let sweep = is_sweep(config);
    let mut out = String::from("t,value,kind\n");
    for trace in traces {
        let kind = label(trace, sweep);
        for (t, v) in trace.iter() {
            let _ = writeln!(out, "{t},{v},{kind}");
        }
    }
    out
}

/// `{meta, series}` for one trace, an array of those for several.
pub fn render_json(traces: &[OccupationTrace64], config: &ScenarioConfig) -> String {
    let sweep = is_sweep(config);
    let docs: Vec<JsonTrace> = traces
        .iter()
        .map(|tr| JsonTrace { meta: meta(tr, config, sweep), series: tr.iter().map(|(t, v)| [t, v]).collect() })
        .collect();
    let text = match docs.as_slice() {
        [one] => serde_json::to_string_pretty(one),
        many => serde_json::to_string_pretty(many),
    };
    text.expect("trace metadata serializes") + "\n"
}

fn render_sidecar(traces: &[OccupationTrace64], config: &ScenarioConfig) -> String {
    let sweep = is_sweep(config);
    let doc = CsvMeta { git_describe: GIT_DESCRIBE, config, traces: traces.iter().map(|t| meta(t, config, sweep)).collect() };
    serde_json::to_string_pretty(&doc).expect("trace metadata serializes") + "\n"
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes the traces to `path` (stdout when `None`). CSV files get a `.meta.json` sidecar.
pub fn emit(traces: &[OccupationTrace64], config: &ScenarioConfig, path: Option<&Path>, format: Format) -> Result<(), CliError> {
    let body = match format {
        Format::Csv => render_csv(traces, config),
        Format::Json => render_json(traces, config),
    };
    match path {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(p) => {
            write(p, &body)?;
            if format == Format::Csv {
                write(&sidecar_path(p), &render_sidecar(traces, config))?;
            }
            Ok(())
        }
    }
}
