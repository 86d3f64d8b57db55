use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oscbath_cli::{compare_asymptotes, emit, run_scenario, CliError, ConfigError, Format, Mode, Preset, ScenarioConfig};

#[derive(Parser)]
#[command(name = "oscbath", version = oscbath_cli::GIT_DESCRIBE, about = "Particle occupation in an ohmic oscillator bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate occupation traces and write them as CSV or JSON.
    Run(RunArgs),
    /// Compare the long-time bare and dressed occupations with the Bose value.
    Compare(CompareArgs),
}

#[derive(Args)]
struct Source {
    /// Built-in scenario.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Scenario file (JSON); takes precedence over --preset.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Source {
    fn load(&self) -> Result<ScenarioConfig, CliError> {
        match (&self.config, self.preset) {
            (Some(path), _) => ScenarioConfig::load(path),
            (None, Some(p)) => Ok(p.config()),
            (None, None) => Err(ConfigError::NoScenario.into()),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    source: Source,
    /// Initial occupations to compare, comma separated.
    #[arg(long, value_delimiter = ',')]
    n0: Option<Vec<f64>>,
    /// Report file (JSON); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let config = args.source.load()?;
    let output = config.output.clone().unwrap_or_default();
    let path = args.out.or(output.path);
    let format = args.format.unwrap_or(output.format);
    let traces = run_scenario(&config)?;
    emit(&traces, &config, path.as_deref(), format)
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    let mut config = args.source.load()?;
    config.mode = Mode::CompareAll;
    if let Some(n0) = args.n0 {
        config.n0_sweep = Some(n0);
    }
    let report = compare_asymptotes(&config)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match args.out {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::Io { path, source: e }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Compare(args) => compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprint!(": {s}");
                source = s.source();
            }
            eprintln!();
            ExitCode::from(e.exit_code())
        }
    }
}
