//! End-to-end tests against the compiled binary: exit codes, CSV and JSON
//! shape, determinism, and the flag/env override chain.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_kerr-cavity")
}

fn temp_path(name: &str, ext: &str) -> PathBuf {
    std::env::temp_dir().join(format!(
        "kerr-cavity-cli-{}-{name}.{ext}",
        std::process::id()
    ))
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = temp_path(name, "toml");
    std::fs::write(&path, body).unwrap();
    path
}

/// Runs the binary with a scrubbed `KERR_CAVITY_*` environment so the host
/// shell cannot leak overrides into the assertions.
fn run(args: &[&str], envs: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(bin());
    cmd.args(args);
    for (k, _) in std::env::vars() {
        if k.starts_with("KERR_CAVITY_") {
            cmd.env_remove(k);
        }
    }
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Comment lines, then the header line, then the data rows.
fn split_csv(text: &str) -> (Vec<&str>, &str, Vec<&str>) {
    let mut comments = Vec::new();
    let mut header = "";
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') {
            comments.push(line);
        } else if header.is_empty() {
            header = line;
        } else {
            rows.push(line);
        }
    }
    (comments, header, rows)
}

const REFERENCE_POINT: &str = "\
[params]
delta0 = 4.4
delta1 = 1.8
kappa_in = 0.5
kappa_out = 0.5
kappa_s = 1.0
p_in = 2.6
";

#[test]
fn roots_single_point_reports_three_states() {
    let cfg = write_config("roots-point", REFERENCE_POINT);
    let (code, out, _) = run(&["roots", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    assert!(out.contains("# p_eff=1.3\n"));
    assert!(out.contains("# kappa_eff=2.0\n"));

    let (_, header, rows) = split_csv(&out);
    assert_eq!(
        header,
        "mode,p_eff,delta0,state_index,n,branch,hypothesized_stable,residual,delta_n,p_out"
    );
    assert_eq!(rows.len(), 3);
    let expected_n = [0.424802614002980, 0.735561414134508, 1.284080416306958];
    let expected_branch = ["lower", "middle", "upper"];
    let expected_stable = ["true", "false", "true"];
    for (i, row) in rows.iter().enumerate() {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[0], "quantum");
        assert_eq!(f[3], i.to_string());
        let n: f64 = f[4].parse().unwrap();
        assert!((n - expected_n[i]).abs() < 1e-12, "row {i}: n = {n}");
        assert_eq!(f[5], expected_branch[i]);
        assert_eq!(f[6], expected_stable[i]);
    }
}

#[test]
fn degenerate_grid_is_a_config_error() {
    let body = format!("{REFERENCE_POINT}\n[roots]\nfrom = 0.0\nto = 5.0\npoints = 0\n");
    let cfg = write_config("roots-badgrid", &body);
    let (code, _, err) = run(&["roots", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("grid"), "stderr: {err}");
}

#[test]
fn missing_params_is_a_config_error() {
    let (code, _, err) = run(&["roots"], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("[params]"), "stderr: {err}");
}

#[test]
fn drive_pair_is_mutually_exclusive() {
    let body = format!("{REFERENCE_POINT}p_eff = 1.3\n");
    let cfg = write_config("drive-pair", &body);
    let (code, _, err) = run(&["roots", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("mutually exclusive"), "stderr: {err}");
}

#[test]
fn normalized_units_insist_on_unit_linewidth() {
    let body = REFERENCE_POINT.replace("kappa_in = 0.5", "kappa_in = 0.7");
    let cfg = write_config("badnorm", &body);
    let (code, _, err) = run(
        &[
            "roots",
            "--config",
            cfg.to_str().unwrap(),
            "--units",
            "normalized",
        ],
        &[],
    );
    assert_eq!(code, 2);
    assert!(err.contains("must equal 1"), "stderr: {err}");
}

#[test]
fn monochromatic_drive_rejects_spectra() {
    let body = "\
[params]
delta0 = 4.4
delta1 = 1.8
kappa_in = 0.5
kappa_out = 0.5
p_in = 2.6

[grid]
from = -5.0
to = 5.0
points = 11
";
    let cfg = write_config("spectra-mono", body);
    let (code, _, err) = run(&["spectra", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(code, 2);
    assert!(err.contains("kappa_s"), "stderr: {err}");
}

#[test]
fn spectra_rows_carry_all_five_densities() {
    let body = format!(
        "{REFERENCE_POINT}\n[grid]\nfrom = -20.0\nto = 20.0\npoints = 5\n"
    );
    let cfg = write_config("spectra-point", &body);
    let (code, out, _) = run(&["spectra", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    let (comments, header, rows) = split_csv(&out);
    assert_eq!(
        header,
        "state_index,n,delta_n,omega,input,cavity,output,commutator,photon_fluct"
    );
    // Three states, five frequencies each.
    assert_eq!(rows.len(), 15);
    // The sum-rule comments are the per-state integrals; spot-check the
    // commutator one, which must equal 1.
    let commutator = comments
        .iter()
        .find(|c| c.starts_with("# state_0_commutator_total="))
        .unwrap();
    let v: f64 = commutator.split('=').nth(1).unwrap().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-9);
    // kappa_out = kappa_cav / 2, so output = 2 * kappa_out * cavity = cavity.
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let cavity: f64 = f[5].parse().unwrap();
        let output: f64 = f[6].parse().unwrap();
        assert!((output - cavity).abs() <= 1e-15 * (1.0 + cavity.abs()));
    }
}

#[test]
fn hysteresis_sweep_annotates_both_jumps() {
    let body = "\
[params]
delta0 = 4.4
delta1 = 1.8
kappa_in = 0.5
kappa_out = 0.5
kappa_s = 1.0

[sweep]
from = 0.8
to = 1.7
points = 181
";
    let cfg = write_config("sweep-hyst", body);
    let (code, out, _) = run(&["sweep", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(code, 0);

    let jumps: Vec<&str> = out.lines().filter(|l| l.starts_with("# jump=")).collect();
    assert_eq!(jumps.len(), 2, "jump lines: {jumps:?}");
    let control_of = |line: &str| -> f64 {
        line.split("control:")
            .nth(1)
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    // Upward jump at the first grid point past the upper fold power
    // (1.3557...), downward at the first point past the lower one (1.1503...);
    // the grid step is 0.005.
    assert!(jumps[0].contains("direction:up"));
    assert!((control_of(jumps[0]) - 1.36).abs() < 1e-9);
    assert!(jumps[1].contains("direction:down"));
    assert!((control_of(jumps[1]) - 1.15).abs() < 1e-9);

    let (_, _, rows) = split_csv(&out);
    assert_eq!(rows.len(), 2 * 181);
}

#[test]
fn boundary_emits_both_modes_over_the_grid() {
    let body = "\
[params]
delta0 = 4.4
delta1 = 1.8
kappa_in = 0.5
kappa_out = 0.5
kappa_s = 1.0

[boundary]
from = 3.0
to = 4.0
points = 3
";
    let cfg = write_config("boundary-map", body);
    let (code, out, _) = run(&["boundary", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    let (_, header, rows) = split_csv(&out);
    assert_eq!(
        header,
        "mode,delta0,exists,delta_min,n_minus,n_plus,p_minus,p_plus"
    );
    assert_eq!(rows.len(), 6);
    // delta0 = 3 sits below the quantum threshold 2*sqrt(3) but above the
    // semiclassical one, sqrt(3).
    let f: Vec<&str> = rows[0].split(',').collect();
    assert_eq!((f[0], f[1], f[2]), ("quantum", "3.0", "false"));
    assert!(f[4].is_empty() && f[7].is_empty());
    let f: Vec<&str> = rows[3].split(',').collect();
    assert_eq!((f[0], f[1], f[2]), ("semiclassical", "3.0", "true"));
    assert!(!f[7].is_empty());
}

#[test]
fn feasibility_reports_reference_medium() {
    let body = "\
[kerr]
tilde_n2_cm2_per_kw = 1e-5
n0 = 3.3
lambda0_um = 1.55
q = 1e3
";
    let cfg = write_config("kerr-medium", body);
    let (code, out, _) = run(&["feasibility", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["feasible"], serde_json::Value::Bool(true));
    let min = v["min_tilde_n2_cm2_per_kw"].as_f64().unwrap();
    assert!((min - 5.839264910698981e-6).abs() < 1e-18, "min = {min}");
    let margin = v["margin"].as_f64().unwrap();
    assert!((margin - 1.712544327570671).abs() < 1e-12, "margin = {margin}");
    assert_eq!(
        v["mode_frequency"]["approximation_strained"],
        serde_json::Value::Bool(false)
    );
}

#[test]
fn selfcheck_passes_at_shipped_gates() {
    let cfg = write_config("selfcheck-ok", "[selfcheck]\ndraws = 300\n");
    let (code, out, _) = run(
        &["selfcheck", "--config", cfg.to_str().unwrap(), "--seed", "42"],
        &[],
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["all_pass"], serde_json::Value::Bool(true));
    assert_eq!(v["seed"].as_u64(), Some(42));
    assert_eq!(v["draws"].as_u64(), Some(300));
    assert_eq!(v["reports"].as_array().unwrap().len(), 10);
}

#[test]
fn selfcheck_fails_under_impossible_gates() {
    let cfg = write_config("selfcheck-bad", "[selfcheck]\ndraws = 50\n");
    let (code, out, _) = run(
        &[
            "selfcheck",
            "--config",
            cfg.to_str().unwrap(),
            "--tol",
            "1e-300",
        ],
        &[],
    );
    assert_eq!(code, 4);
    // The report must still be written so the failure is inspectable.
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["all_pass"], serde_json::Value::Bool(false));
}

#[test]
fn identical_runs_are_byte_identical() {
    let body = format!(
        "{REFERENCE_POINT}\n[roots]\nfrom = -2.0\nto = 8.0\npoints = 21\n\
         at = [0.3, 1.3]\nmodes = [\"quantum\", \"semiclassical\"]\n"
    );
    let cfg = write_config("determinism", &body);
    let out_a = temp_path("determinism-a", "csv");
    let out_b = temp_path("determinism-b", "csv");
    for out in [&out_a, &out_b] {
        let (code, _, _) = run(
            &[
                "roots",
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ],
            &[],
        );
        assert_eq!(code, 0);
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn environment_overrides_mode() {
    let cfg = write_config("env-mode", REFERENCE_POINT);
    let (code, out, _) = run(
        &["roots", "--config", cfg.to_str().unwrap()],
        &[("KERR_CAVITY_MODE", "semiclassical")],
    );
    assert_eq!(code, 0);
    assert!(out.contains("# mode=semiclassical\n"));
    // Semiclassical stationary theory has no drive-linewidth broadening.
    assert!(out.contains("# kappa_s=0.0\n"));
    assert!(out.contains("# kappa_eff=1.0\n"));
}
