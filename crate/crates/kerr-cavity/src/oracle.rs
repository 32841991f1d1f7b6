//! Independent brute-force verifiers for every closed form in the crate:
//! grid-scan root finding, damped fixed-point iteration on the
//! self-consistency map, reference quadrature, and a fixed-lattice Riemann
//! convolution. [`run_suite`] bundles them into a deterministic, seeded
//! check set; it ships in the library (not test-only) so the CLI can run it
//! in the field.
//!
//! Every verifier avoids the code path it checks: the scan never factors the
//! cubic, the fixed point never evaluates a derivative, and the Riemann sum
//! never touches the adaptive quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::feasibility::{
    bistability_feasible, min_tilde_n2, min_tilde_n2_cgs, n2_per_photon, n2_per_photon_cgs,
    KerrMediumSpec,
};
use crate::math;
use crate::params::{
    derive_rates, nonlinear_detuning, normalize, Mode, NormalizedParams, PhysicalParams,
};
use crate::quad::{integrate, integrate_line, integrate_line_nodes, QuadResult};
use crate::spectra::{
    assemble_full_spectrum, cavity_spectrum, cavity_total, commutator_total, input_spectrum,
    lorentz, photon_fluct_density, photon_fluct_total, single_mirror_output_spectrum,
};
use crate::stationary::{stationary_from_normalized, stationary_photon_numbers, y_of_n};
use crate::Result;

/// Iteration budget of [`fixed_point`].
pub const MAX_FIXED_POINT_ITERATIONS: usize = 100_000;

/// Roots found by [`root_scan`], with a grid-resolution warning.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanResult {
    /// Sign-change locations of `Y(n) - Y`, bisected to 1e-12, sorted
    /// ascending, deduplicated at `1e-10 * max(1, n)`.
    pub roots: Vec<f64>,
    /// True when two adjacent grid cells both bracketed a root: the grid may
    /// be too coarse to separate a close pair elsewhere.
    pub grid_coarse: bool,
}

/// Outcome of the damped fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FixedPointOutcome {
    /// The iteration contracted below its step tolerance; `n` is a root of
    /// the stationary cubic.
    Converged { n: f64, iterations: usize },
    /// Budget exhausted or the iterate left the physical range (limit cycles
    /// are expected near fold points and for strong overshoot).
    Diverged { n_last: f64, iterations: usize },
}

/// One verifier's outcome inside the [`run_suite`] report set.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OracleReport {
    /// Verifier name.
    pub target: &'static str,
    /// Gate applied to this target (already scaled by the suite's tolerance
    /// factor); absolute-gated targets compare `max_abs_error` against it,
    /// relative-gated ones `max_rel_error`.
    pub tolerance: f64,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    /// Number of recorded comparisons.
    pub samples: usize,
    pub pass: bool,
    /// Sub-seed that reproduces this target's random draws.
    pub seed: u64,
}

/// Upper bound on the photon-number range worth scanning: every root obeys
/// `n <= Y`, and the extra `2|D0/D1|` clears the fold region so a scan (or a
/// fixed-point start) from the bound begins above all structure.
pub fn scan_bound(np: &NormalizedParams) -> f64 {
    if np.delta1 == 0.0 {
        np.y / (1.0 + np.delta0 * np.delta0) + 1.0
    } else {
        np.y + 2.0 * math::abs(np.delta0 / np.delta1) + 1.0
    }
}

fn sign_of(v: f64) -> i8 {
    if v == 0.0 {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Bisects a sign change of `g` to an interval of width 1e-12 (or to the
/// floating-point floor where the midpoint stops separating the ends).
fn bisect<G: Fn(f64) -> f64>(g: &G, mut lo: f64, mut hi: f64, sign_lo: i8) -> f64 {
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match sign_of(g(mid)) {
            0 => return mid,
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
    }
    0.5 * (lo + hi)
}

/// Scans `Y(n) - Y` over `[a, b]` on a uniform grid, appending exact-zero
/// nodes and bisected sign changes to `out`. Returns the coarse-grid flag.
fn scan_window(np: &NormalizedParams, a: f64, b: f64, points: usize, out: &mut Vec<f64>) -> bool {
    let g = |x: f64| y_of_n(x, np) - np.y;
    let step = (b - a) / (points - 1) as f64;
    let mut coarse = false;
    let mut prev_was_bracket = false;
    // Last node with a nonzero sign; a zero node is itself a recorded root,
    // so the interval around it carries no further crossing to bracket.
    let mut last: Option<(f64, i8)> = match sign_of(g(a)) {
        0 => {
            out.push(a);
            None
        }
        s => Some((a, s)),
    };
    for i in 1..points {
        let x = if i == points - 1 {
            b
        } else {
            a + step * i as f64
        };
        let s = sign_of(g(x));
        if s == 0 {
            out.push(x);
            last = None;
            prev_was_bracket = false;
            continue;
        }
        if let Some((xp, sp)) = last {
            if s != sp {
                out.push(bisect(&g, xp, x, sp));
                if prev_was_bracket {
                    coarse = true;
                }
                prev_was_bracket = true;
            } else {
                prev_was_bracket = false;
            }
        }
        last = Some((x, s));
    }
    coarse
}

fn dedupe_sorted(roots: &mut Vec<f64>) {
    roots.dedup_by(|a, b| *a - *b <= 1e-10 * f64::max(1.0, math::abs(*a)));
}

/// Brute-force root finder for the stationary cubic: uniform sign scan of
/// `Y(n) - Y` over `[0, n_max]` with bisection to 1e-12.
///
/// Independent of the closed-form solver; agreement between the two is the
/// core claim of the self-check suite. A double root that touches zero
/// without crossing is invisible to a sign scan, so fold-degenerate
/// parameter sets need [`stationary_photon_numbers`] instead. `grid_coarse`
/// warns when adjacent cells both bracket: a tighter pair elsewhere may then
/// be unresolved.
pub fn root_scan(np: &NormalizedParams, n_max: f64, grid_points: usize) -> Result<ScanResult> {
    if !(np.y.is_finite() && np.delta0.is_finite() && np.delta1.is_finite()) {
        return Err(Error::InvalidParameter("non-finite normalized parameters"));
    }
    if np.y < 0.0 {
        return Err(Error::InvalidParameter("drive Y must be nonnegative"));
    }
    if !(n_max > 0.0 && n_max.is_finite()) {
        return Err(Error::InvalidParameter("scan bound"));
    }
    if grid_points < 2 {
        return Err(Error::InvalidParameter("scan grid needs at least two points"));
    }
    let mut roots = Vec::new();
    let grid_coarse = scan_window(np, 0.0, n_max, grid_points, &mut roots);
    roots.sort_by(f64::total_cmp);
    dedupe_sorted(&mut roots);
    Ok(ScanResult { roots, grid_coarse })
}

/// Damped self-consistency iteration `n <- (1-eta)*n + eta*Y/(1+(D0-D1*n)^2)`
/// in the dimensionless variables of the stationary cubic.
///
/// A converged limit is a root of the cubic; for small `eta` only roots on
/// the positive-slope branches attract, so limits land on hypothesized-stable
/// states. Convergence requires the step to fall below 1e-10 with a
/// geometric-ratio bound putting the remaining distance under 1e-9; anything
/// else (limit cycles near folds, strong-overshoot chaos) is reported as
/// [`FixedPointOutcome::Diverged`], never as an error.
pub fn fixed_point(p: &PhysicalParams, n_start: f64, eta: f64) -> Result<FixedPointOutcome> {
    let np = normalize(p)?;
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter("damping must lie in (0, 1]"));
    }
    if !(n_start >= 0.0 && n_start.is_finite()) {
        return Err(Error::InvalidParameter("start photon number"));
    }
    let bail = 1e6 * (1.0 + scan_bound(&np));
    let g = |n: f64| {
        let d = np.delta0 - np.delta1 * n;
        np.y / (1.0 + d * d)
    };
    let mut n = n_start;
    let mut prev_step = f64::NAN;
    for k in 1..=MAX_FIXED_POINT_ITERATIONS {
        let next = (1.0 - eta) * n + eta * g(n);
        if !next.is_finite() || next > bail {
            return Ok(FixedPointOutcome::Diverged {
                n_last: next,
                iterations: k,
            });
        }
        let step = math::abs(next - n);
        n = next;
        if step == 0.0 {
            return Ok(FixedPointOutcome::Converged { n, iterations: k });
        }
        if prev_step.is_finite() && step < prev_step && step < 1e-10 {
            let r = step / prev_step;
            if step * r / (1.0 - r) <= 1e-9 {
                return Ok(FixedPointOutcome::Converged { n, iterations: k });
            }
        }
        prev_step = step;
    }
    Ok(FixedPointOutcome::Diverged {
        n_last: n,
        iterations: MAX_FIXED_POINT_ITERATIONS,
    })
}

/// Reference quadrature over a finite window: plain adaptive bisection with
/// an error estimate, no window extension, no panel hints.
pub fn quad_reference<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadResult> {
    integrate(f, a, b, rel_tol, f64::MIN_POSITIVE)
}

/// Photon-number fluctuation density by a fixed-lattice midpoint Riemann sum,
/// fully independent of the adaptive quadrature.
///
/// The probe frequency snaps to the nearest lattice multiple `m*h` (pitch
/// `h = min(kappa_s, kappa_cav)/200`) so both convolution shifts land back on
/// lattice midpoints; returns `(snapped_omega, value)`. The window covers
/// `|delta_n| + 60` linewidths and the probe must lie inside it. Cost grows
/// with the ratio of the two linewidths.
pub fn photon_fluct_riemann(p: &PhysicalParams, n: f64, omega: f64) -> Result<(f64, f64)> {
    let rates = derive_rates(p)?;
    if p.kappa_s <= 0.0 {
        return Err(Error::MonochromaticInput);
    }
    if !omega.is_finite() {
        return Err(Error::InvalidParameter("probe frequency"));
    }
    let delta_n = nonlinear_detuning(p, n)?;
    let ks = p.kappa_s;
    let kc = rates.kappa_cav;
    let h = f64::min(ks, kc) / 200.0;
    let window = math::abs(delta_n) + 60.0 * (ks + kc);
    if math::abs(omega) > window {
        return Err(Error::Domain("probe frequency outside the lattice window"));
    }
    let m = to_lattice(omega / h);
    let snapped = m as f64 * h;
    let span = (window / h) as i64 + 1 + m.abs();

    let nd = |x: f64| {
        let d = delta_n - x;
        2.0 * p.kappa_in * p.p_in * lorentz(x, ks) / (d * d + kc * kc)
    };
    let cd = |x: f64| lorentz(delta_n - x, kc);

    let mut beat = 0.0;
    let mut shot = 0.0;
    for j in -span..span {
        let x = (j as f64 + 0.5) * h;
        let n_shifted = nd(x + snapped);
        beat += n_shifted * nd(x);
        shot += (n_shifted + nd(x - snapped)) * cd(x);
    }
    Ok((snapped, h * (beat / (2.0 * PI) + shot / (4.0 * PI))))
}

fn to_lattice(q: f64) -> i64 {
    (q + if q >= 0.0 { 0.5 } else { -0.5 }) as i64
}

enum Gate {
    Abs,
    Rel,
}

/// Running maxima of absolute and relative errors over recorded comparisons.
struct Tally {
    max_abs: f64,
    max_rel: f64,
    samples: usize,
}

impl Tally {
    fn new() -> Self {
        Tally {
            max_abs: 0.0,
            max_rel: 0.0,
            samples: 0,
        }
    }

    fn record(&mut self, got: f64, reference: f64) {
        let abs = math::abs(got - reference);
        let rel = if reference == 0.0 {
            if abs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            abs / math::abs(reference)
        };
        self.push(abs, rel);
    }

    /// Distance comparison: relative error uses `max(1, |scale|)` so roots
    /// near zero do not inflate it.
    fn record_scaled(&mut self, distance: f64, scale: f64) {
        self.push(distance, distance / f64::max(1.0, math::abs(scale)));
    }

    fn push(&mut self, abs: f64, rel: f64) {
        self.max_abs = f64::max(self.max_abs, abs);
        self.max_rel = f64::max(self.max_rel, rel);
        self.samples += 1;
    }
}

fn finish(
    target: &'static str,
    gate: Gate,
    tolerance: f64,
    seed: u64,
    tally: Result<Tally>,
) -> OracleReport {
    match tally {
        Ok(t) => OracleReport {
            target,
            tolerance,
            max_abs_error: t.max_abs,
            max_rel_error: t.max_rel,
            samples: t.samples,
            pass: match gate {
                Gate::Abs => t.max_abs <= tolerance,
                Gate::Rel => t.max_rel <= tolerance,
            },
            seed,
        },
        // A verifier that cannot even run is a failure, not an error.
        Err(_) => OracleReport {
            target,
            tolerance,
            max_abs_error: f64::INFINITY,
            max_rel_error: f64::INFINITY,
            samples: 0,
            pass: false,
            seed,
        },
    }
}

fn sub_seed(seed: u64, k: u64) -> u64 {
    seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs every verifier and returns one report per target.
///
/// `draws` controls the two randomized equivalence targets (roots and fixed
/// points); the remaining targets use small fixed sample counts.
/// `tol_factor` scales every gate, so `1.0` is the shipped tolerance table.
/// Internal failures of a verifier surface as a failing report; `Err` is
/// reserved for invalid arguments.
pub fn run_suite(seed: u64, draws: usize, tol_factor: f64) -> Result<Vec<OracleReport>> {
    if draws == 0 {
        return Err(Error::InvalidParameter("suite needs at least one draw"));
    }
    if !(tol_factor > 0.0 && tol_factor.is_finite()) {
        return Err(Error::InvalidParameter("tolerance factor"));
    }
    let t = |k: u64| sub_seed(seed, k);
    Ok(alloc::vec![
        finish(
            "cubic_roots_vs_scan",
            Gate::Abs,
            1e-8 * tol_factor,
            t(1),
            check_roots_vs_scan(t(1), draws),
        ),
        finish(
            "fixed_point_limits",
            Gate::Abs,
            1e-8 * tol_factor,
            t(2),
            check_fixed_point_limits(t(2), draws),
        ),
        finish(
            "lorentz_normalization",
            Gate::Abs,
            1e-9 * tol_factor,
            t(3),
            check_lorentz_normalization(t(3)),
        ),
        finish(
            "lorentz_convolution_identity",
            Gate::Rel,
            1e-6 * tol_factor,
            t(4),
            check_lorentz_convolution(t(4)),
        ),
        finish(
            "cavity_spectrum_normalization",
            Gate::Rel,
            1e-6 * tol_factor,
            t(5),
            check_cavity_normalization(t(5)),
        ),
        finish(
            "commutator_normalization",
            Gate::Abs,
            1e-9 * tol_factor,
            t(6),
            check_commutator_normalization(t(6)),
        ),
        finish(
            "photon_fluct_variance",
            Gate::Rel,
            1e-6 * tol_factor,
            t(7),
            check_variance_identity(),
        ),
        finish(
            "photon_fluct_vs_riemann",
            Gate::Rel,
            1e-5 * tol_factor,
            t(8),
            check_riemann_agreement(),
        ),
        finish(
            "single_mirror_closure",
            Gate::Rel,
            1e-9 * tol_factor,
            t(9),
            check_single_mirror_closure(t(9)),
        ),
        finish(
            "feasibility_unit_paths",
            Gate::Rel,
            1e-12 * tol_factor,
            t(10),
            check_feasibility_units(t(10)),
        ),
    ])
}

/// Bistable reference configuration (normalized Y=1.3, D0=2.2, D1=1.8).
fn reference_params() -> PhysicalParams {
    PhysicalParams {
        delta0: 4.4,
        delta1: 1.8,
        kappa_in: 0.5,
        kappa_out: 0.5,
        kappa_abs: 0.0,
        kappa_s: 1.0,
        p_in: 2.6,
        mode: Mode::Quantum,
    }
}

/// Same normalized cubic through a lossless single mirror.
fn single_mirror_params() -> PhysicalParams {
    PhysicalParams {
        delta0: 4.4,
        delta1: 1.8,
        kappa_in: 1.0,
        kappa_out: 0.0,
        kappa_abs: 0.0,
        kappa_s: 1.0,
        p_in: 1.3,
        mode: Mode::Quantum,
    }
}

fn nearest_distance(x: f64, set: &[f64]) -> f64 {
    set.iter()
        .map(|&r| math::abs(x - r))
        .fold(f64::INFINITY, f64::min)
}

/// Closed-form cubic roots against the sign scan, two-sided sup distance.
fn check_roots_vs_scan(seed: u64, draws: usize) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..draws {
        let delta0 = rng.gen_range(-6.0..6.0);
        let mut delta1 = rng.gen_range(-4.0..4.0);
        while math::abs(delta1) < 1e-6 {
            delta1 = rng.gen_range(-4.0..4.0);
        }
        let y = rng.gen_range(0.0..20.0);
        let np = NormalizedParams { y, delta0, delta1 };

        let solver: Vec<f64> = stationary_from_normalized(&np)?
            .iter()
            .map(|s| s.n)
            .collect();
        let bound = scan_bound(&np);
        let mut scan = root_scan(&np, bound, 2001)?;
        if scan.grid_coarse {
            scan = root_scan(&np, bound, 20_001)?;
        }
        let mut roots = scan.roots;
        // The global grid cannot separate pairs tighter than its step;
        // re-scan locally around close solver pairs so resolution, not
        // correctness, never fails the comparison. A pair the solver missed
        // entirely still shows up as an unmatched global-scan root.
        let step = bound / 2000.0;
        for pair in solver.windows(2) {
            let gap = pair[1] - pair[0];
            if gap <= 2.0 * step {
                let pad = f64::max(5.0 * gap, 1e-6);
                let lo = f64::max(0.0, pair[0] - pad);
                let hi = pair[1] + pad;
                scan_window(&np, lo, hi, 601, &mut roots);
            }
        }
        roots.sort_by(f64::total_cmp);
        dedupe_sorted(&mut roots);

        for &r in &solver {
            t.record_scaled(nearest_distance(r, &roots), r);
        }
        for &r in &roots {
            t.record_scaled(nearest_distance(r, &solver), r);
        }
    }
    Ok(t)
}

/// Every converged fixed-point limit sits on a hypothesized-stable root.
fn check_fixed_point_limits(seed: u64, draws: usize) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for k in 0..draws {
        let mode = if k % 2 == 0 {
            Mode::Quantum
        } else {
            Mode::Semiclassical
        };
        let kappa_in = rng.gen_range(0.2..2.0);
        let kappa_out = rng.gen_range(0.0..1.5);
        let kappa_abs = rng.gen_range(0.0..0.8);
        let kappa_s = if mode == Mode::Quantum {
            rng.gen_range(0.1..2.0)
        } else {
            0.0
        };
        let delta0 = rng.gen_range(-8.0..8.0);
        let delta1 = rng.gen_range(-5.0..5.0);
        let p_in = rng.gen_range(0.0..6.0);
        let p = PhysicalParams::new(
            delta0, delta1, kappa_in, kappa_out, kappa_abs, kappa_s, p_in, mode,
        )?;

        let stable: Vec<f64> = stationary_photon_numbers(&p)?
            .iter()
            .filter(|s| s.stable)
            .map(|s| s.n)
            .collect();
        let bound = scan_bound(&normalize(&p)?);
        for start in [0.0, 0.5 * bound, bound] {
            if let FixedPointOutcome::Converged { n, .. } = fixed_point(&p, start, 0.35)? {
                t.record_scaled(nearest_distance(n, &stable), n);
            }
        }
    }
    Ok(t)
}

/// `(1/2pi) Int L(w, kappa) dw = 1` across two decades of linewidth.
fn check_lorentz_normalization(seed: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..20 {
        let kappa = rng.gen_range(0.05..5.0);
        let q = integrate_line(|w| lorentz(w, kappa), 0.0, 60.0 * kappa, 1e-11)?;
        t.record(q.value / (2.0 * PI), 1.0);
    }
    Ok(t)
}

/// `(1/2pi) Int L(x,k1) L(s-x,k2) dx = L(s, k1+k2)`.
fn check_lorentz_convolution(seed: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..20 {
        let k1 = rng.gen_range(0.1..3.0);
        let k2 = rng.gen_range(0.1..3.0);
        let s = rng.gen_range(-5.0..5.0);
        let q = integrate_line_nodes(
            |x| lorentz(x, k1) * lorentz(s - x, k2),
            &[0.0, s],
            60.0 * (k1 + k2),
            1e-8,
        )?;
        t.record(q.value / (2.0 * PI), lorentz(s, k1 + k2));
    }
    Ok(t)
}

/// Integrated cavity density against its closed form
/// `p_eff * L(delta_n, kappa_eff)`, at arbitrary (non-root) `n`.
fn check_cavity_normalization(seed: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..10 {
        let kappa_in = rng.gen_range(0.2..2.0);
        let kappa_out = rng.gen_range(0.0..1.5);
        let kappa_abs = rng.gen_range(0.0..0.8);
        let kappa_s = rng.gen_range(0.1..2.0);
        let delta0 = rng.gen_range(-8.0..8.0);
        let delta1 = rng.gen_range(-5.0..5.0);
        let p_in = rng.gen_range(0.0..6.0);
        let p = PhysicalParams::new(
            delta0,
            delta1,
            kappa_in,
            kappa_out,
            kappa_abs,
            kappa_s,
            p_in,
            Mode::Quantum,
        )?;
        let n = rng.gen_range(0.0..3.0);
        let total = cavity_total(&p, n, 1e-8)?;
        let rates = derive_rates(&p)?;
        let delta_n = nonlinear_detuning(&p, n)?;
        t.record(total, rates.p_eff * lorentz(delta_n, rates.kappa_eff));
    }
    Ok(t)
}

/// Integrated commutator density equals one in both modes.
fn check_commutator_normalization(seed: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for k in 0..10 {
        let mode = if k % 2 == 0 {
            Mode::Quantum
        } else {
            Mode::Semiclassical
        };
        let kappa_in = rng.gen_range(0.2..2.0);
        let kappa_out = rng.gen_range(0.0..1.5);
        let kappa_abs = rng.gen_range(0.0..0.8);
        let kappa_s = if mode == Mode::Quantum {
            rng.gen_range(0.1..2.0)
        } else {
            0.0
        };
        let delta0 = rng.gen_range(-8.0..8.0);
        let delta1 = rng.gen_range(-5.0..5.0);
        let p = PhysicalParams::new(delta0, delta1, kappa_in, kappa_out, kappa_abs, kappa_s, 1.0, mode)?;
        let n = rng.gen_range(0.0..3.0);
        t.record(commutator_total(&p, n, 1e-11)?, 1.0);
    }
    Ok(t)
}

/// Integrated fluctuation density equals the variance `n(n+1)` on the outer
/// branches of the reference point and of its single-mirror twin.
fn check_variance_identity() -> Result<Tally> {
    let mut t = Tally::new();
    let p = reference_params();
    let roots = stationary_photon_numbers(&p)?;
    for n in [roots[0].n, roots[roots.len() - 1].n] {
        t.record(photon_fluct_total(&p, n, 1e-7)?, n * (n + 1.0));
    }
    let sm = single_mirror_params();
    let n = stationary_photon_numbers(&sm)?[0].n;
    t.record(photon_fluct_total(&sm, n, 1e-7)?, n * (n + 1.0));
    Ok(t)
}

/// Adaptive fluctuation density against the fixed-lattice Riemann sum.
fn check_riemann_agreement() -> Result<Tally> {
    let mut t = Tally::new();
    let p = reference_params();
    let n = stationary_photon_numbers(&p)?[0].n;
    for probe in [0.0, 0.9, 2.2, 4.4, 8.0] {
        let (snapped, brute) = photon_fluct_riemann(&p, n, probe)?;
        t.record(photon_fluct_density(&p, n, snapped, 1e-8)?, brute);
    }
    Ok(t)
}

/// Assembled correlation closure and the input-output pass-through of the
/// lossless single mirror, pointwise at random frequencies.
fn check_single_mirror_closure(seed: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..10 {
        let kappa_in = rng.gen_range(0.2..2.0);
        let kappa_s = rng.gen_range(0.1..2.0);
        let delta0 = rng.gen_range(-8.0..8.0);
        let delta1 = rng.gen_range(-5.0..5.0);
        let p_in = rng.gen_range(0.0..6.0);
        let p = PhysicalParams::new(
            delta0,
            delta1,
            kappa_in,
            0.0,
            0.0,
            kappa_s,
            p_in,
            Mode::Quantum,
        )?;
        for s in stationary_photon_numbers(&p)? {
            for _ in 0..15 {
                let w = rng.gen_range(-20.0..20.0);
                t.record(
                    assemble_full_spectrum(&p, s.n, w)?,
                    cavity_spectrum(&p, s.n, w)?,
                );
                t.record(
                    single_mirror_output_spectrum(&p, s.n, w)?,
                    input_spectrum(&p, w)?,
                );
            }
        }
    }
    Ok(t)
}

const DECADES: [f64; 5] = [1e2, 1e3, 1e4, 1e5, 1e6];
const N2_DECADES: [f64; 6] = [1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7];

/// SI and CGS unit paths agree on the per-photon index shift and the
/// minimum nonlinearity; the feasibility margin closes on their ratio.
fn check_feasibility_units(seed: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..20 {
        let lambda0 = rng.gen_range(0.4e-6..2.0e-6);
        let n0 = rng.gen_range(1.5..4.0);
        let volume = KerrMediumSpec::default_volume(n0, lambda0) * rng.gen_range(0.3..3.0);
        let q = DECADES[rng.gen_range(0..DECADES.len())] * rng.gen_range(1.0..10.0);
        let magnitude = N2_DECADES[rng.gen_range(0..N2_DECADES.len())] * rng.gen_range(1.0..10.0);
        let tilde_n2 = if rng.gen_bool(0.5) {
            magnitude
        } else {
            -magnitude
        };
        let spec = KerrMediumSpec::new(tilde_n2, n0, lambda0, volume, q)?;

        t.record(n2_per_photon_cgs(&spec)?, n2_per_photon(&spec)?);
        t.record(min_tilde_n2_cgs(&spec)?, min_tilde_n2(&spec)?);
        let verdict = bistability_feasible(&spec, 1.0)?;
        t.record(verdict.margin * verdict.min_tilde_n2 / math::abs(tilde_n2), 1.0);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_quantum() -> PhysicalParams {
        PhysicalParams::new(4.4, 1.8, 0.5, 0.5, 0.0, 1.0, 2.6, Mode::Quantum).unwrap()
    }

    const N_LOWER: f64 = 0.424802614002980;
    const N_MIDDLE: f64 = 0.735561414134508;
    const N_UPPER: f64 = 1.284080416306958;

    #[test]
    fn scan_linear_case() {
        let np = NormalizedParams {
            y: 2.6,
            delta0: 1.5,
            delta1: 0.0,
        };
        let r = root_scan(&np, scan_bound(&np), 101).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - 2.6 / 3.25).abs() < 1e-10);
        assert!(!r.grid_coarse);
    }

    #[test]
    fn scan_matches_reference_roots() {
        let np = NormalizedParams {
            y: 1.3,
            delta0: 2.2,
            delta1: 1.8,
        };
        let r = root_scan(&np, scan_bound(&np), 2001).unwrap();
        assert_eq!(r.roots.len(), 3);
        for (got, expect) in r.roots.iter().zip([N_LOWER, N_MIDDLE, N_UPPER]) {
            assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
        }
    }

    #[test]
    fn scan_rejects_bad_arguments() {
        let np = NormalizedParams {
            y: 1.0,
            delta0: 0.0,
            delta1: 0.0,
        };
        assert!(root_scan(&np, 0.0, 101).is_err());
        assert!(root_scan(&np, 10.0, 1).is_err());
        assert!(root_scan(
            &NormalizedParams {
                y: -1.0,
                delta0: 0.0,
                delta1: 0.0
            },
            10.0,
            101
        )
        .is_err());
    }

    #[test]
    fn fixed_point_linear_map_is_immediate() {
        // delta1 = 0 makes the map constant: one application lands on the
        // root, the second certifies a zero step.
        let p = PhysicalParams::new(4.4, 0.0, 0.5, 0.5, 0.0, 1.0, 2.6, Mode::Quantum).unwrap();
        match fixed_point(&p, 5.0, 1.0).unwrap() {
            FixedPointOutcome::Converged { n, iterations } => {
                assert!((n - 1.3 / 5.84).abs() < 1e-14);
                assert!(iterations <= 2);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn fixed_point_reference_basins() {
        let p = reference_quantum();
        match fixed_point(&p, 0.0, 0.35).unwrap() {
            FixedPointOutcome::Converged { n, .. } => assert!((n - N_LOWER).abs() < 1e-8),
            other => panic!("unexpected outcome {other:?}"),
        }
        match fixed_point(&p, 2.0, 0.35).unwrap() {
            FixedPointOutcome::Converged { n, .. } => assert!((n - N_UPPER).abs() < 1e-8),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn iteration_departs_from_middle_root() {
        let p = reference_quantum();
        match fixed_point(&p, N_MIDDLE + 1e-6, 0.35).unwrap() {
            FixedPointOutcome::Converged { n, .. } => {
                assert!((n - N_MIDDLE).abs() > 1e-3);
                assert!((n - N_LOWER).abs() < 1e-8 || (n - N_UPPER).abs() < 1e-8);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn fixed_point_rejects_bad_arguments() {
        let p = reference_quantum();
        assert!(fixed_point(&p, 0.0, 0.0).is_err());
        assert!(fixed_point(&p, 0.0, 1.2).is_err());
        assert!(fixed_point(&p, 0.0, f64::NAN).is_err());
        assert!(fixed_point(&p, -1.0, 0.5).is_err());
        assert!(fixed_point(&p, f64::INFINITY, 0.5).is_err());
    }

    #[test]
    fn quad_reference_polynomial() {
        let q = quad_reference(|x| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((q.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn riemann_matches_adaptive_density() {
        let p = reference_quantum();
        let (snapped, brute) = photon_fluct_riemann(&p, N_LOWER, 0.0).unwrap();
        assert_eq!(snapped, 0.0);
        let adaptive = photon_fluct_density(&p, N_LOWER, 0.0, 1e-8).unwrap();
        assert!(
            (adaptive - brute).abs() < 1e-5 * brute.abs(),
            "{adaptive} vs {brute}"
        );
    }

    #[test]
    fn riemann_rejects_probe_outside_window() {
        let p = reference_quantum();
        assert!(photon_fluct_riemann(&p, N_LOWER, 1e6).is_err());
    }

    #[test]
    fn suite_smoke_all_pass() {
        let reports = run_suite(20_260_819, 50, 1.0).unwrap();
        assert_eq!(reports.len(), 10);
        for r in &reports {
            assert!(r.pass, "{} failed: {:?}", r.target, r);
            assert!(r.samples > 0, "{} recorded nothing", r.target);
        }
    }

    #[test]
    fn suite_rejects_bad_arguments() {
        assert!(run_suite(1, 0, 1.0).is_err());
        assert!(run_suite(1, 10, 0.0).is_err());
        assert!(run_suite(1, 10, f64::NAN).is_err());
    }
}
