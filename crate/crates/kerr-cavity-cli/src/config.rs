//! TOML run configuration and its resolution against flag overrides.
//!
//! Sections are optional at parse time; each verb validates the ones it
//! needs and exits 2 when something is missing or inconsistent.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use kerr_cavity::sweep::SweepControl;
use kerr_cavity::{derive_rates, Mode, PhysicalParams};

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub units: Option<Units>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub params: Option<ParamsSection>,
    /// Frequency grid for `spectra`.
    pub grid: Option<GridSection>,
    pub roots: Option<RootsSection>,
    pub sweep: Option<SweepSection>,
    /// Detuning grid for `boundary`.
    pub boundary: Option<GridSection>,
    pub kerr: Option<KerrSection>,
    pub selfcheck: Option<SelfcheckSection>,
}

/// Unit convention for the rate parameters. `normalized` means every rate
/// and detuning is quoted in units of the cavity linewidth, so the mirror
/// rates must sum to one; `physical` accepts any consistent angular-rate
/// unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Normalized,
    Physical,
}

pub fn units_name(u: Units) -> &'static str {
    match u {
        Units::Normalized => "normalized",
        Units::Physical => "physical",
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub delta0: f64,
    pub delta1: f64,
    pub kappa_in: f64,
    pub kappa_out: Option<f64>,
    pub kappa_abs: Option<f64>,
    pub kappa_s: Option<f64>,
    /// Source photon flux; mutually exclusive with `p_eff`.
    pub p_in: Option<f64>,
    /// Effective drive `(kappa_in / kappa_cav) * p_in`; mutually exclusive
    /// with `p_in`.
    pub p_eff: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootsSection {
    /// Swept parameter (default: detuning).
    pub control: Option<SweepControl>,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    /// Values of the non-swept drive parameter, one curve each: `p_eff`
    /// values under detuning control, `delta0` values under power control.
    /// Default: the `[params]` value.
    pub at: Option<Vec<f64>>,
    /// Modes to emit (default: the resolved mode only).
    pub modes: Option<Vec<Mode>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Swept parameter (default: effective power).
    pub control: Option<SweepControl>,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    /// up | down | both (default: both).
    pub direction: Option<SweepDirection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepDirection {
    Up,
    Down,
    Both,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KerrSection {
    /// Intensity nonlinear index, cm^2/kW.
    pub tilde_n2_cm2_per_kw: f64,
    pub n0: f64,
    pub lambda0_um: f64,
    /// Mode volume; default is the half-wave cube `(lambda0 / 2 n0)^3`.
    pub volume_m3: Option<f64>,
    pub q: f64,
    /// Photon number the feasibility condition is evaluated at (default 1).
    pub photons: Option<f64>,
    pub mode_index: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfcheckSection {
    /// Draws for the randomized equivalence targets (default 1000).
    pub draws: Option<usize>,
}

/// Config values after flag and environment overrides.
pub struct Settings {
    pub mode: Mode,
    pub units: Units,
    pub seed: u64,
    /// Verb-specific meaning; `None` selects the verb's default.
    pub tol: Option<f64>,
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

pub fn linspace(from: f64, to: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(from.is_finite() && to.is_finite()) || from >= to || points < 2 {
        return Err(CliError::config(
            "grid must be finite and increasing, with at least two points",
        ));
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i == points - 1 { to } else { from + step * i as f64 })
        .collect())
}

/// Builds the physical parameter set for `mode`, resolving the `p_in` /
/// `p_eff` exclusive pair. The flag reports whether a drive was configured;
/// verbs that need one check it.
pub fn build_params(
    cfg: &RunConfig,
    settings: &Settings,
    mode: Mode,
) -> Result<(PhysicalParams, bool), CliError> {
    let ps = cfg
        .params
        .as_ref()
        .ok_or_else(|| CliError::config("missing [params] section"))?;
    let kappa_out = ps.kappa_out.unwrap_or(0.0);
    let kappa_abs = ps.kappa_abs.unwrap_or(0.0);
    let kappa_s = ps.kappa_s.unwrap_or(0.0);
    let kappa_cav = ps.kappa_in + kappa_out + kappa_abs;
    if settings.units == Units::Normalized && (kappa_cav - 1.0).abs() > 1e-9 {
        return Err(CliError::config(
            "normalized units: kappa_in + kappa_out + kappa_abs must equal 1",
        ));
    }
    let (p_in, has_drive) = match (ps.p_in, ps.p_eff) {
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "[params] p_in and p_eff are mutually exclusive",
            ))
        }
        (Some(p), None) => (p, true),
        (None, Some(pe)) => (pe * kappa_cav / ps.kappa_in, true),
        (None, None) => (0.0, false),
    };
    let params = PhysicalParams::new(
        ps.delta0, ps.delta1, ps.kappa_in, kappa_out, kappa_abs, kappa_s, p_in, mode,
    )?;
    // Surfaces nonsense rate combinations (e.g. kappa_in <= 0) right here.
    derive_rates(&params)?;
    Ok((params, has_drive))
}
