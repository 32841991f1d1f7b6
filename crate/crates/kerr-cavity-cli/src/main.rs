//! Command line front end: parses runs from a TOML config plus flag/env
//! overrides, executes the library, and emits CSV curve data or JSON
//! reports. Identical config and seed produce byte-identical output.

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{RunConfig, Settings, Units};
use kerr_cavity::Mode;

/// Error carrying the exit-code contract: 2 for configuration problems,
/// 3 for numerical failures, 1 for IO and serialization.
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<kerr_cavity::Error> for CliError {
    fn from(e: kerr_cavity::Error) -> Self {
        use kerr_cavity::Error::*;
        let code = match e {
            // Parameter and domain rejections are induced by the config.
            InvalidParameter(_) | Domain(_) | MonochromaticInput | SingleMirrorRequired => 2,
            SolverFailure { .. } | ToleranceNotMet { .. } => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError {
            code: 1,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "kerr-cavity",
    version,
    about = "Stationary states, bistability maps, fluctuation spectra, hysteresis \
             sweeps, and feasibility estimates for a small Kerr cavity driven by a \
             finite-linewidth field"
)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, env = "KERR_CAVITY_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true, env = "KERR_CAVITY_OUT", value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override the configured mode.
    #[arg(long, global = true, env = "KERR_CAVITY_MODE", value_enum)]
    mode: Option<ModeArg>,
    /// Override the configured unit convention.
    #[arg(long, global = true, env = "KERR_CAVITY_UNITS", value_enum)]
    units: Option<Units>,
    /// Seed for the self-check suite (default 0).
    #[arg(long, global = true, env = "KERR_CAVITY_SEED")]
    seed: Option<u64>,
    /// Density quadrature tolerance for `spectra` (default 1e-6); gate scale
    /// factor for `selfcheck` (default 1).
    #[arg(long, global = true, env = "KERR_CAVITY_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Quantum,
    Semiclassical,
}

#[derive(Subcommand)]
enum Verb {
    /// Stationary photon numbers over a control grid, or at the configured point.
    Roots,
    /// Fold powers and threshold detuning for both modes over a detuning grid.
    Boundary,
    /// Input, cavity, output, commutator, and fluctuation densities per stationary state.
    Spectra,
    /// Branch-following hysteresis sweep with jump annotations.
    Sweep,
    /// Kerr-medium feasibility report (JSON).
    Feasibility,
    /// Run the library's brute-force verifier suite (JSON); exits 4 on any failure.
    Selfcheck,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let cfg = match &cli.config {
        Some(path) => config::load(path)?,
        None => RunConfig::default(),
    };
    let settings = Settings {
        mode: cli
            .mode
            .map(|m| match m {
                ModeArg::Quantum => Mode::Quantum,
                ModeArg::Semiclassical => Mode::Semiclassical,
            })
            .or(cfg.mode)
            .unwrap_or(Mode::Quantum),
        units: cli.units.or(cfg.units).unwrap_or(Units::Physical),
        seed: cli.seed.or(cfg.seed).unwrap_or(0),
        tol: cli.tol.or(cfg.tol),
    };
    if let Some(tol) = settings.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::config("tol must be positive and finite"));
        }
    }

    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let code = match cli.verb {
        Verb::Roots => commands::roots(&cfg, &settings, &mut sink)?,
        Verb::Boundary => commands::boundary(&cfg, &settings, &mut sink)?,
        Verb::Spectra => commands::spectra(&cfg, &settings, &mut sink)?,
        Verb::Sweep => commands::sweep(&cfg, &settings, &mut sink)?,
        Verb::Feasibility => commands::feasibility(&cfg, &settings, &mut sink)?,
        Verb::Selfcheck => commands::selfcheck(&cfg, &settings, &mut sink)?,
    };
    sink.flush()?;
    Ok(code)
}
