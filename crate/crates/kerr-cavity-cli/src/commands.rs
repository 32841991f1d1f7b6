//! Verb implementations. Each resolves the config sections it needs,
//! computes through the library, and writes one CSV or JSON document.

use std::io::Write;
use std::process::ExitCode;

use serde::Serialize;

use kerr_cavity::feasibility::{
    bistability_feasible, cm2_per_kw_to_cm2_per_w, cm2_per_w_to_cm2_per_kw, mode_frequency,
    n2_per_photon, KerrMediumSpec,
};
use kerr_cavity::oracle::{run_suite, OracleReport};
use kerr_cavity::params::nonlinear_detuning;
use kerr_cavity::spectra::{
    cavity_total, commutator_total, photon_fluct_total, sample_spectrum, SpectrumKind,
};
use kerr_cavity::stationary::output_power;
use kerr_cavity::sweep::{Direction, SweepControl};
use kerr_cavity::{
    bistability_boundary, derive_rates, stationary_photon_numbers, Mode, PhysicalParams,
};

use crate::config::{self, units_name, RunConfig, Settings, SweepDirection};
use crate::output::{branch_name, cell, mode_name, opt_cell, param_comments, Csv};
use crate::CliError;

fn control_name(c: SweepControl) -> &'static str {
    match c {
        SweepControl::EffectivePower => "effective_power",
        SweepControl::Detuning => "detuning",
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Up => "up",
        Direction::Down => "down",
    }
}

/// Stationary photon numbers. With a `[roots]` section: one curve per
/// (mode, companion value) pair over the control grid. Without one: the
/// roots of the configured point alone.
pub fn roots(
    cfg: &RunConfig,
    settings: &Settings,
    out: &mut dyn Write,
) -> Result<ExitCode, CliError> {
    let modes: Vec<Mode> = cfg
        .roots
        .as_ref()
        .and_then(|r| r.modes.clone())
        .unwrap_or_else(|| vec![settings.mode]);
    if modes.is_empty() {
        return Err(CliError::config("[roots] modes must not be empty"));
    }
    let control = cfg
        .roots
        .as_ref()
        .and_then(|r| r.control)
        .unwrap_or(SweepControl::Detuning);

    let mut csv = Csv::new(&[
        "mode",
        "p_eff",
        "delta0",
        "state_index",
        "n",
        "branch",
        "hypothesized_stable",
        "residual",
        "delta_n",
        "p_out",
    ]);
    csv.comment("command", "roots");
    csv.comment("units", units_name(settings.units));
    if cfg.roots.is_some() {
        csv.comment("control", control_name(control));
    }

    for &mode in &modes {
        let (base, has_drive) = config::build_params(cfg, settings, mode)?;
        let rates = derive_rates(&base)?;
        let prefix = if modes.len() == 1 {
            String::new()
        } else {
            format!("{}_", mode_name(mode))
        };
        param_comments(&mut csv, &prefix, &base);

        // The swept control values and the fixed companion values (one
        // curve each): p_eff companions under detuning control, delta0
        // companions under power control.
        let (grid, at) = match cfg.roots.as_ref() {
            Some(r) => {
                let grid = config::linspace(r.from, r.to, r.points)?;
                let at = match (&r.at, control) {
                    (Some(list), _) if list.is_empty() => {
                        return Err(CliError::config("[roots] at must not be empty"));
                    }
                    (Some(list), _) => list.clone(),
                    (None, SweepControl::Detuning) => {
                        if !has_drive {
                            return Err(CliError::config(
                                "roots over a detuning grid need [params] p_in or p_eff, \
                                 or [roots] at",
                            ));
                        }
                        vec![rates.p_eff]
                    }
                    (None, SweepControl::EffectivePower) => vec![base.delta0],
                };
                (grid, at)
            }
            None => {
                if !has_drive {
                    return Err(CliError::config(
                        "single-point roots need [params] p_in or p_eff",
                    ));
                }
                (vec![base.delta0], vec![rates.p_eff])
            }
        };

        for &a in &at {
            for &c in &grid {
                let (delta0, p_eff) = match control {
                    SweepControl::Detuning => (c, a),
                    SweepControl::EffectivePower => (a, c),
                };
                let p = PhysicalParams::new(
                    delta0,
                    base.delta1,
                    base.kappa_in,
                    base.kappa_out,
                    base.kappa_abs,
                    base.kappa_s,
                    p_eff * rates.kappa_cav / base.kappa_in,
                    mode,
                )?;
                for (i, s) in stationary_photon_numbers(&p)?.iter().enumerate() {
                    csv.row(vec![
                        mode_name(mode).to_string(),
                        cell(p_eff),
                        cell(delta0),
                        i.to_string(),
                        cell(s.n),
                        branch_name(s.branch).to_string(),
                        s.stable.to_string(),
                        cell(s.residual),
                        cell(nonlinear_detuning(&p, s.n)?),
                        cell(output_power(&p, s.n)?),
                    ]);
                }
            }
        }
    }
    csv.write(out)?;
    Ok(ExitCode::SUCCESS)
}

/// Fold structure over a bare-detuning grid, always for both modes so the
/// thresholds can be compared directly.
pub fn boundary(
    cfg: &RunConfig,
    settings: &Settings,
    out: &mut dyn Write,
) -> Result<ExitCode, CliError> {
    let sec = cfg
        .boundary
        .as_ref()
        .ok_or_else(|| CliError::config("missing [boundary] section"))?;
    let grid = config::linspace(sec.from, sec.to, sec.points)?;

    let mut csv = Csv::new(&[
        "mode", "delta0", "exists", "delta_min", "n_minus", "n_plus", "p_minus", "p_plus",
    ]);
    csv.comment("command", "boundary");
    csv.comment("units", units_name(settings.units));

    for mode in [Mode::Quantum, Mode::Semiclassical] {
        let (base, _) = config::build_params(cfg, settings, mode)?;
        param_comments(&mut csv, &format!("{}_", mode_name(mode)), &base);
        for &d0 in &grid {
            let mut p = base;
            p.delta0 = d0;
            let b = bistability_boundary(&p)?;
            csv.row(vec![
                mode_name(mode).to_string(),
                cell(d0),
                b.exists.to_string(),
                cell(b.delta_min),
                opt_cell(b.n_minus),
                opt_cell(b.n_plus),
                opt_cell(b.p_minus),
                opt_cell(b.p_plus),
            ]);
        }
    }
    csv.write(out)?;
    Ok(ExitCode::SUCCESS)
}

/// All five spectral densities on the configured frequency grid, one block
/// of rows per stationary state, with the integral sum rules as comments.
pub fn spectra(
    cfg: &RunConfig,
    settings: &Settings,
    out: &mut dyn Write,
) -> Result<ExitCode, CliError> {
    let sec = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::config("missing [grid] section (frequency grid)"))?;
    let omegas = config::linspace(sec.from, sec.to, sec.points)?;
    let (base, has_drive) = config::build_params(cfg, settings, settings.mode)?;
    if !has_drive {
        return Err(CliError::config("spectra need [params] p_in or p_eff"));
    }
    let tol = settings.tol.unwrap_or(1e-6);
    let states = stationary_photon_numbers(&base)?;

    let mut csv = Csv::new(&[
        "state_index",
        "n",
        "delta_n",
        "omega",
        "input",
        "cavity",
        "output",
        "commutator",
        "photon_fluct",
    ]);
    csv.comment("command", "spectra");
    csv.comment("units", units_name(settings.units));
    csv.comment("rel_tol", cell(tol));
    param_comments(&mut csv, "", &base);

    for (i, s) in states.iter().enumerate() {
        // Sum rules per state; the totals double as a cross-check on the
        // sampled rows (cavity -> n, commutator -> 1, fluctuation ->
        // n * (n + 1)).
        csv.comment(format!("state_{i}_n"), cell(s.n));
        csv.comment(
            format!("state_{i}_cavity_total"),
            cell(cavity_total(&base, s.n, 1e-8)?),
        );
        csv.comment(
            format!("state_{i}_commutator_total"),
            cell(commutator_total(&base, s.n, 1e-11)?),
        );
        csv.comment(
            format!("state_{i}_photon_fluct_total"),
            cell(photon_fluct_total(&base, s.n, 1e-7)?),
        );

        let delta_n = nonlinear_detuning(&base, s.n)?;
        let input = sample_spectrum(&base, s.n, SpectrumKind::Input, &omegas, tol)?;
        let cavity = sample_spectrum(&base, s.n, SpectrumKind::Cavity, &omegas, tol)?;
        let output = sample_spectrum(&base, s.n, SpectrumKind::Output, &omegas, tol)?;
        let commutator = sample_spectrum(&base, s.n, SpectrumKind::Commutator, &omegas, tol)?;
        let fluct = sample_spectrum(&base, s.n, SpectrumKind::PhotonFluctuation, &omegas, tol)?;
        for (j, &w) in omegas.iter().enumerate() {
            csv.row(vec![
                i.to_string(),
                cell(s.n),
                cell(delta_n),
                cell(w),
                cell(input.values[j]),
                cell(cavity.values[j]),
                cell(output.values[j]),
                cell(commutator.values[j]),
                cell(fluct.values[j]),
            ]);
        }
    }
    csv.write(out)?;
    Ok(ExitCode::SUCCESS)
}

/// Quasi-static hysteresis sweep; jumps land in `# jump=` comment lines.
pub fn sweep(
    cfg: &RunConfig,
    settings: &Settings,
    out: &mut dyn Write,
) -> Result<ExitCode, CliError> {
    let sec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("missing [sweep] section"))?;
    let control = sec.control.unwrap_or(SweepControl::EffectivePower);
    let grid = config::linspace(sec.from, sec.to, sec.points)?;
    let (base, has_drive) = config::build_params(cfg, settings, settings.mode)?;
    if control == SweepControl::Detuning && !has_drive {
        return Err(CliError::config("detuning sweeps need [params] p_in or p_eff"));
    }
    let dirs: &[Direction] = match sec.direction.unwrap_or(SweepDirection::Both) {
        SweepDirection::Up => &[Direction::Up],
        SweepDirection::Down => &[Direction::Down],
        SweepDirection::Both => &[Direction::Up, Direction::Down],
    };

    let mut csv = Csv::new(&[
        "direction",
        "index",
        "control_value",
        "n",
        "branch",
        "hypothesized_stable",
    ]);
    csv.comment("command", "sweep");
    csv.comment("units", units_name(settings.units));
    csv.comment("control", control_name(control));
    param_comments(&mut csv, "", &base);

    for &dir in dirs {
        let trace = kerr_cavity::sweep::sweep(&base, control, &grid, dir)?;
        for j in &trace.jumps {
            csv.comment(
                "jump",
                format!(
                    "direction:{},index:{},control:{},from_n:{},to_n:{}",
                    direction_name(dir),
                    j.index,
                    cell(trace.grid[j.index]),
                    cell(j.from_n),
                    cell(j.to_n)
                ),
            );
        }
        for (idx, (c, s)) in trace.grid.iter().zip(&trace.states).enumerate() {
            csv.row(vec![
                direction_name(dir).to_string(),
                idx.to_string(),
                cell(*c),
                cell(s.n),
                branch_name(s.branch).to_string(),
                s.stable.to_string(),
            ]);
        }
    }
    csv.write(out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ModeFrequencyReport {
    omega_m: f64,
    two_delta1: f64,
    perturbation: f64,
    approximation_strained: bool,
}

#[derive(Serialize)]
struct FeasibilityReport {
    command: &'static str,
    tilde_n2_cm2_per_w: f64,
    tilde_n2_cm2_per_kw: f64,
    n0: f64,
    lambda0_m: f64,
    volume_m3: f64,
    q: f64,
    mode_index: u32,
    photons: f64,
    omega0_rad_per_s: f64,
    photon_energy_j: f64,
    kappa_eff_rad_per_s: f64,
    n2_per_photon: f64,
    mode_frequency: ModeFrequencyReport,
    min_tilde_n2_cm2_per_w: f64,
    min_tilde_n2_cm2_per_kw: f64,
    margin: f64,
    feasible: bool,
}

/// JSON feasibility report for the configured Kerr medium.
pub fn feasibility(
    cfg: &RunConfig,
    _settings: &Settings,
    out: &mut dyn Write,
) -> Result<ExitCode, CliError> {
    let k = cfg
        .kerr
        .as_ref()
        .ok_or_else(|| CliError::config("missing [kerr] section"))?;
    let lambda0 = k.lambda0_um * 1e-6;
    let volume = k
        .volume_m3
        .unwrap_or_else(|| KerrMediumSpec::default_volume(k.n0, lambda0));
    let mut spec = KerrMediumSpec::new(
        cm2_per_kw_to_cm2_per_w(k.tilde_n2_cm2_per_kw),
        k.n0,
        lambda0,
        volume,
        k.q,
    )?;
    if let Some(m) = k.mode_index {
        spec = spec.with_mode_index(m)?;
    }
    let photons = k.photons.unwrap_or(1.0);
    let verdict = bistability_feasible(&spec, photons)?;
    let mf = mode_frequency(&spec, photons)?;

    let report = FeasibilityReport {
        command: "feasibility",
        tilde_n2_cm2_per_w: spec.tilde_n2,
        tilde_n2_cm2_per_kw: k.tilde_n2_cm2_per_kw,
        n0: spec.n0,
        lambda0_m: spec.lambda0,
        volume_m3: spec.volume,
        q: spec.q,
        mode_index: spec.mode_index,
        photons,
        omega0_rad_per_s: spec.omega0(),
        photon_energy_j: spec.photon_energy(),
        kappa_eff_rad_per_s: spec.kappa_eff(),
        n2_per_photon: n2_per_photon(&spec)?,
        mode_frequency: ModeFrequencyReport {
            omega_m: mf.omega_m,
            two_delta1: mf.two_delta1,
            perturbation: mf.perturbation,
            approximation_strained: mf.approximation_strained(),
        },
        min_tilde_n2_cm2_per_w: verdict.min_tilde_n2,
        min_tilde_n2_cm2_per_kw: cm2_per_w_to_cm2_per_kw(verdict.min_tilde_n2),
        margin: verdict.margin,
        feasible: verdict.feasible,
    };
    serde_json::to_writer_pretty(&mut *out, &report)?;
    writeln!(out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SelfcheckReport {
    command: &'static str,
    seed: u64,
    draws: usize,
    tol_factor: f64,
    all_pass: bool,
    reports: Vec<OracleReport>,
}

/// Runs the library's brute-force verifier suite. The report is written
/// before the exit decision so a failure still leaves the evidence behind.
pub fn selfcheck(
    cfg: &RunConfig,
    settings: &Settings,
    out: &mut dyn Write,
) -> Result<ExitCode, CliError> {
    let draws = cfg.selfcheck.as_ref().and_then(|s| s.draws).unwrap_or(1000);
    let tol_factor = settings.tol.unwrap_or(1.0);
    let reports = run_suite(settings.seed, draws, tol_factor)?;
    let all_pass = reports.iter().all(|r| r.pass);
    let report = SelfcheckReport {
        command: "selfcheck",
        seed: settings.seed,
        draws,
        tol_factor,
        all_pass,
        reports,
    };
    serde_json::to_writer_pretty(&mut *out, &report)?;
    writeln!(out)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}
