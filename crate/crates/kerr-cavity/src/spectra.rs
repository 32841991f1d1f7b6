//! Spectral densities of the driven cavity field.
//!
//! The drive is a Lorentzian line `p_in(w) = p_in * L(w, kappa_s)` with
//! `L(w, k) = 2k / (w^2 + k^2)`, normalized so `(1/2pi) Int L dw = 1`. The
//! intracavity density is the drive line filtered by the cavity response
//! centered at the photon-number-shifted detuning `delta_n`; the commutator
//! density is the bare response. All frequencies are offsets from the drive
//! carrier.
//!
//! Point evaluators validate per call; [`sample_spectrum`] validates once and
//! fills a grid. Integrated totals use the adaptive line quadrature, so the
//! normalization identities (`p_in`, `n`, `1`, `n*(n+1)`) hold to the
//! requested tolerance rather than by construction.

use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::PI;

pub use num_complex::Complex64;

use crate::error::Error;
use crate::math;
use crate::params::{derive_rates, nonlinear_detuning, PhysicalParams};
use crate::quad::{integrate_line, integrate_line_nodes};
use crate::Result;

/// Lorentzian line `2k / (w^2 + k^2)` with unit mass under `(1/2pi) Int dw`.
pub fn lorentz(omega: f64, kappa: f64) -> f64 {
    2.0 * kappa / (omega * omega + kappa * kappa)
}

/// Which spectral density a [`Spectrum`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SpectrumKind {
    /// Drive photon flux density `p_in(w)`.
    Input,
    /// Intracavity photon number density `n(w)`.
    Cavity,
    /// Output photon flux density `2 * kappa_out * n(w)`.
    Output,
    /// Field commutator density; integrates to one.
    Commutator,
    /// Photon number fluctuation density; integrates to the variance.
    PhotonFluctuation,
}

/// A spectral density sampled on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
}

impl Spectrum {
    /// Wraps pre-sampled values, insisting on a finite strictly increasing
    /// grid of matching length.
    pub fn new(kind: SpectrumKind, omega: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        validate_grid(&omega)?;
        if omega.len() != values.len() {
            return Err(Error::InvalidParameter("grid and value lengths differ"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite spectrum value"));
        }
        Ok(Spectrum {
            kind,
            omega,
            values,
        })
    }
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty frequency grid"));
    }
    if grid.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidParameter("non-finite grid point"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("grid must be strictly increasing"));
    }
    Ok(())
}

/// Validated per-state evaluation context; methods skip all checks.
struct Densities {
    p_in: f64,
    kappa_s: f64,
    kappa_in: f64,
    kappa_cav: f64,
    delta_n: f64,
}

impl Densities {
    fn new(p: &PhysicalParams, n: f64) -> Result<Self> {
        let rates = derive_rates(p)?;
        if p.kappa_s <= 0.0 {
            return Err(Error::MonochromaticInput);
        }
        let delta_n = nonlinear_detuning(p, n)?;
        Ok(Densities {
            p_in: p.p_in,
            kappa_s: p.kappa_s,
            kappa_in: p.kappa_in,
            kappa_cav: rates.kappa_cav,
            delta_n,
        })
    }

    fn input(&self, w: f64) -> f64 {
        self.p_in * lorentz(w, self.kappa_s)
    }

    fn cavity(&self, w: f64) -> f64 {
        let d = self.delta_n - w;
        2.0 * self.kappa_in * self.input(w) / (d * d + self.kappa_cav * self.kappa_cav)
    }

    fn commutator(&self, w: f64) -> f64 {
        lorentz(self.delta_n - w, self.kappa_cav)
    }

    /// Wing padding past the outermost line center: 60 linewidths.
    fn pad(&self) -> f64 {
        60.0 * (self.kappa_s + self.kappa_cav)
    }
}

/// Drive photon flux density at frequency `omega`.
pub fn input_spectrum(p: &PhysicalParams, omega: f64) -> Result<f64> {
    Ok(Densities::new(p, 0.0)?.input(omega))
}

/// Intracavity photon number density of the state with mean photon number
/// `n`, at frequency `omega`.
pub fn cavity_spectrum(p: &PhysicalParams, n: f64, omega: f64) -> Result<f64> {
    Ok(Densities::new(p, n)?.cavity(omega))
}

/// Output photon flux density `2 * kappa_out * n(omega)`.
pub fn output_spectrum(p: &PhysicalParams, n: f64, omega: f64) -> Result<f64> {
    Ok(2.0 * p.kappa_out * Densities::new(p, n)?.cavity(omega))
}

/// Field commutator density at frequency `omega`; defined for any drive
/// linewidth, including a monochromatic drive.
pub fn commutator_spectrum(p: &PhysicalParams, n: f64, omega: f64) -> Result<f64> {
    let rates = derive_rates(p)?;
    let delta_n = nonlinear_detuning(p, n)?;
    Ok(lorentz(delta_n - omega, rates.kappa_cav))
}

fn fluct_density_raw(d: &Densities, w: f64, rel_tol: f64) -> Result<f64> {
    // Peaks sit where either shifted density lines up with a line center.
    let dn = d.delta_n;
    let beat = integrate_line_nodes(
        |x| d.cavity(w + x) * d.cavity(x),
        &[0.0, dn, -w, dn - w],
        d.pad(),
        rel_tol,
    )?;
    let shot = integrate_line_nodes(
        |x| (d.cavity(x + w) + d.cavity(x - w)) * d.commutator(x),
        &[dn, -w, dn - w, w, dn + w],
        d.pad(),
        rel_tol,
    )?;
    Ok(beat.value / (2.0 * PI) + shot.value / (4.0 * PI))
}

/// Photon number fluctuation density at frequency `omega`.
///
/// Sum of the beat-note self-convolution of `n(w)` and its cross term with
/// the commutator density; even in `omega`, and its total mass is the
/// variance `n * (n + 1)` when `n` is a stationary root.
pub fn photon_fluct_density(p: &PhysicalParams, n: f64, omega: f64, rel_tol: f64) -> Result<f64> {
    validate_rel_tol(rel_tol)?;
    fluct_density_raw(&Densities::new(p, n)?, omega, rel_tol)
}

fn validate_rel_tol(rel_tol: f64) -> Result<()> {
    if !(rel_tol > 0.0 && rel_tol.is_finite()) {
        return Err(Error::InvalidParameter("relative tolerance must be positive"));
    }
    Ok(())
}

/// Samples one spectral density on a strictly increasing frequency grid.
///
/// `n` is the stationary photon number of the state under study (ignored for
/// [`SpectrumKind::Input`]); `rel_tol` only affects
/// [`SpectrumKind::PhotonFluctuation`].
pub fn sample_spectrum(
    p: &PhysicalParams,
    n: f64,
    kind: SpectrumKind,
    omega_grid: &[f64],
    rel_tol: f64,
) -> Result<Spectrum> {
    validate_grid(omega_grid)?;
    let values: Vec<f64> = match kind {
        SpectrumKind::Input => {
            let d = Densities::new(p, 0.0)?;
            omega_grid.iter().map(|&w| d.input(w)).collect()
        }
        SpectrumKind::Cavity => {
            let d = Densities::new(p, n)?;
            omega_grid.iter().map(|&w| d.cavity(w)).collect()
        }
        SpectrumKind::Output => {
            let d = Densities::new(p, n)?;
            let k2 = 2.0 * p.kappa_out;
            omega_grid.iter().map(|&w| k2 * d.cavity(w)).collect()
        }
        SpectrumKind::Commutator => {
            let rates = derive_rates(p)?;
            let delta_n = nonlinear_detuning(p, n)?;
            omega_grid
                .iter()
                .map(|&w| lorentz(delta_n - w, rates.kappa_cav))
                .collect()
        }
        SpectrumKind::PhotonFluctuation => {
            validate_rel_tol(rel_tol)?;
            let d = Densities::new(p, n)?;
            let mut vals = Vec::with_capacity(omega_grid.len());
            for &w in omega_grid {
                vals.push(fluct_density_raw(&d, w, rel_tol)?);
            }
            vals
        }
    };
    Ok(Spectrum {
        kind,
        omega: omega_grid.to_vec(),
        values,
    })
}

/// Integrated drive flux `(1/2pi) Int p_in(w) dw`; equals `p_in` to `rel_tol`.
pub fn input_total(p: &PhysicalParams, rel_tol: f64) -> Result<f64> {
    validate_rel_tol(rel_tol)?;
    let d = Densities::new(p, 0.0)?;
    let r = integrate_line(|w| d.input(w), 0.0, 60.0 * d.kappa_s, rel_tol)?;
    Ok(r.value / (2.0 * PI))
}

/// Integrated cavity density `(1/2pi) Int n(w) dw`.
///
/// Equals `p_eff * L(delta_n, kappa_eff)` for any `n`, hence equals `n`
/// itself exactly when `n` is a stationary root.
pub fn cavity_total(p: &PhysicalParams, n: f64, rel_tol: f64) -> Result<f64> {
    validate_rel_tol(rel_tol)?;
    let d = Densities::new(p, n)?;
    let r = integrate_line_nodes(|w| d.cavity(w), &[0.0, d.delta_n], d.pad(), rel_tol)?;
    Ok(r.value / (2.0 * PI))
}

/// Integrated output flux; equals `2 * kappa_out * n` at a stationary root.
pub fn output_total(p: &PhysicalParams, n: f64, rel_tol: f64) -> Result<f64> {
    Ok(2.0 * p.kappa_out * cavity_total(p, n, rel_tol)?)
}

/// Integrated commutator density; equals one for any state.
pub fn commutator_total(p: &PhysicalParams, n: f64, rel_tol: f64) -> Result<f64> {
    validate_rel_tol(rel_tol)?;
    let rates = derive_rates(p)?;
    let delta_n = nonlinear_detuning(p, n)?;
    let r = integrate_line(
        |w| lorentz(delta_n - w, rates.kappa_cav),
        delta_n,
        60.0 * rates.kappa_cav,
        rel_tol,
    )?;
    Ok(r.value / (2.0 * PI))
}

/// Integrated fluctuation density `(1/2pi) Int dn^2(w) dw`.
///
/// Equals the photon number variance `n * (n + 1)` when `n` is a stationary
/// root. The inner convolutions run at a tenth of `rel_tol` so the quoted
/// tolerance bounds the combined error.
pub fn photon_fluct_total(p: &PhysicalParams, n: f64, rel_tol: f64) -> Result<f64> {
    validate_rel_tol(rel_tol)?;
    let d = Densities::new(p, n)?;
    let inner_tol = f64::max(0.1 * rel_tol, 1e-12);
    let inner_err: Cell<Option<Error>> = Cell::new(None);
    let r = integrate_line_nodes(
        |w| match fluct_density_raw(&d, w, inner_tol) {
            Ok(v) => v,
            Err(e) => {
                inner_err.set(Some(e));
                f64::NAN
            }
        },
        &[0.0, d.delta_n, -d.delta_n],
        d.pad(),
        rel_tol,
    );
    if let Some(e) = inner_err.take() {
        return Err(e);
    }
    Ok(r?.value / (2.0 * PI))
}

/// Checks the one-sided cavity: only the input mirror couples, no internal
/// absorption. Returns the single decay rate `kappa = kappa_in`.
fn single_mirror_rate(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    if p.kappa_out != 0.0 || p.kappa_abs != 0.0 {
        return Err(Error::SingleMirrorRequired);
    }
    Ok(p.kappa_in)
}

/// Drive-cavity field cross-correlation density of a one-sided cavity:
/// `sqrt(2k) * p_in(w) / (i*(delta_n - w) + k)`.
pub fn cross_corr_in_cavity(p: &PhysicalParams, n: f64, omega: f64) -> Result<Complex64> {
    let kappa = single_mirror_rate(p)?;
    let d = Densities::new(p, n)?;
    let denom = Complex64::new(kappa, d.delta_n - omega);
    Ok(math::sqrt(2.0 * kappa) * d.input(omega) / denom)
}

/// Drive correlation with the photon-number-weighted field `n_hat * a`;
/// factorizes into `2n` times [`cross_corr_in_cavity`].
pub fn cross_corr_in_nhat_a(p: &PhysicalParams, n: f64, omega: f64) -> Result<Complex64> {
    Ok(2.0 * n * cross_corr_in_cavity(p, n, omega)?)
}

/// Correlation density of the photon-number-weighted field with itself:
/// `8k * n^2 * p_in(w) / ((delta_n - w)^2 + k^2)`.
pub fn nn_correlation_spectrum(p: &PhysicalParams, n: f64, omega: f64) -> Result<f64> {
    let kappa = single_mirror_rate(p)?;
    let d = Densities::new(p, n)?;
    let det = d.delta_n - omega;
    Ok(8.0 * kappa * n * n * d.input(omega) / (det * det + kappa * kappa))
}

/// Cavity density rebuilt from the nonlinear correlation pieces over the bare
/// response `(delta0 - w)^2 + k^2`; algebraically identical to
/// [`cavity_spectrum`] at any stationary `n`.
pub fn assemble_full_spectrum(p: &PhysicalParams, n: f64, omega: f64) -> Result<f64> {
    let kappa = single_mirror_rate(p)?;
    let d = Densities::new(p, n)?;
    let z = 2.0 * n
        * (math::sqrt(2.0 * kappa) * d.input(omega)
            / Complex64::new(kappa, d.delta_n - omega));
    let det = d.delta_n - omega;
    let nn = 8.0 * kappa * n * n * d.input(omega) / (det * det + kappa * kappa);
    // i*delta1*sqrt(2k)*(z - conj(z)) collapses to a real term in Im(z).
    let numerator = p.delta1 * p.delta1 * nn
        - 2.0 * p.delta1 * math::sqrt(2.0 * kappa) * z.im
        + 2.0 * kappa * d.input(omega);
    let bare = p.delta0 - omega;
    Ok(numerator / (bare * bare + kappa * kappa))
}

/// Output flux density of the one-sided cavity by input-output composition:
/// `2k * n(w) - 2*sqrt(2k)*Re(z(w)) + p_in(w)`. Reduces to `p_in(w)`, so the
/// lossless single mirror returns the drive spectrum unchanged.
pub fn single_mirror_output_spectrum(p: &PhysicalParams, n: f64, omega: f64) -> Result<f64> {
    let kappa = single_mirror_rate(p)?;
    let d = Densities::new(p, n)?;
    let z = math::sqrt(2.0 * kappa) * d.input(omega) / Complex64::new(kappa, d.delta_n - omega);
    Ok(2.0 * kappa * d.cavity(omega) - 2.0 * math::sqrt(2.0 * kappa) * z.re + d.input(omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Mode;

    fn reference_quantum() -> PhysicalParams {
        PhysicalParams::new(4.4, 1.8, 0.5, 0.5, 0.0, 1.0, 2.6, Mode::Quantum).unwrap()
    }

    fn single_mirror() -> PhysicalParams {
        // Same normalized cubic as the reference point: kappa_cav = 1,
        // kappa_eff = 2, p_eff = 1.3.
        PhysicalParams::new(4.4, 1.8, 1.0, 0.0, 0.0, 1.0, 1.3, Mode::Quantum).unwrap()
    }

    const N_LOWER: f64 = 0.424802614002980;
    const N_UPPER: f64 = 1.284080416306958;

    #[test]
    fn lorentz_reference_value() {
        assert!((lorentz(0.7, 2.6) - 0.7172413793103448).abs() < 1e-16);
    }

    #[test]
    fn input_total_is_drive_flux() {
        let p = reference_quantum();
        let total = input_total(&p, 1e-10).unwrap();
        assert!((total - 2.6).abs() < 1e-9 * 2.6);
    }

    #[test]
    fn cavity_total_matches_filtered_line() {
        // (1/2pi) Int n(w) dw = p_eff * L(delta_n, kappa_eff) for any n.
        let p = reference_quantum();
        let n = 0.9;
        let total = cavity_total(&p, n, 1e-10).unwrap();
        let delta_n = nonlinear_detuning(&p, n).unwrap();
        let expect = 1.3 * lorentz(delta_n, 2.0);
        assert!((total - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn cavity_total_reproduces_stationary_root() {
        let p = reference_quantum();
        let total = cavity_total(&p, N_LOWER, 1e-10).unwrap();
        assert!((total - N_LOWER).abs() < 1e-8 * N_LOWER);
    }

    #[test]
    fn commutator_total_is_one() {
        let p = reference_quantum();
        for n in [0.0, N_LOWER, N_UPPER] {
            let total = commutator_total(&p, n, 1e-10).unwrap();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn output_matches_scaled_cavity() {
        let p = reference_quantum();
        let w = 0.83;
        let o = output_spectrum(&p, N_UPPER, w).unwrap();
        let c = cavity_spectrum(&p, N_UPPER, w).unwrap();
        assert!((o - 2.0 * 0.5 * c).abs() < 1e-15);
    }

    #[test]
    fn fluct_density_is_even() {
        let p = reference_quantum();
        let a = photon_fluct_density(&p, N_LOWER, 1.3, 1e-9).unwrap();
        let b = photon_fluct_density(&p, N_LOWER, -1.3, 1e-9).unwrap();
        assert!((a - b).abs() < 1e-7 * a.abs());
        assert!(a > 0.0);
    }

    #[test]
    fn fluct_total_is_variance() {
        let p = reference_quantum();
        let total = photon_fluct_total(&p, N_LOWER, 1e-5).unwrap();
        let expect = N_LOWER * (N_LOWER + 1.0);
        assert!(
            (total - expect).abs() < 1e-4 * expect,
            "total {total} expect {expect}"
        );
    }

    #[test]
    fn monochromatic_drive_rejected() {
        let mut p = reference_quantum();
        p.kappa_s = 0.0;
        assert!(matches!(
            input_spectrum(&p, 0.0),
            Err(Error::MonochromaticInput)
        ));
        assert!(matches!(
            cavity_spectrum(&p, 0.4, 0.0),
            Err(Error::MonochromaticInput)
        ));
        // The commutator density does not involve the drive line.
        assert!(commutator_spectrum(&p, 0.4, 0.0).is_ok());
    }

    #[test]
    fn two_sided_cavity_rejected_for_cross_correlations() {
        let p = reference_quantum();
        assert!(matches!(
            cross_corr_in_cavity(&p, N_LOWER, 0.0),
            Err(Error::SingleMirrorRequired)
        ));
        assert!(matches!(
            assemble_full_spectrum(&p, N_LOWER, 0.0),
            Err(Error::SingleMirrorRequired)
        ));
    }

    #[test]
    fn assembled_spectrum_closes_on_cavity_density() {
        let p = single_mirror();
        for n in [N_LOWER, N_UPPER] {
            for w in [-3.0, -1.0, 0.0, 0.5, 2.0, 7.0] {
                let direct = cavity_spectrum(&p, n, w).unwrap();
                let assembled = assemble_full_spectrum(&p, n, w).unwrap();
                assert!(
                    (assembled - direct).abs() <= 1e-12 * direct.abs(),
                    "w={w}: {assembled} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn single_mirror_returns_drive_spectrum() {
        let p = single_mirror();
        for w in [-2.0, 0.0, 1.7, 4.4] {
            let out = single_mirror_output_spectrum(&p, N_UPPER, w).unwrap();
            let inp = input_spectrum(&p, w).unwrap();
            assert!((out - inp).abs() <= 1e-12 * inp.abs());
        }
    }

    #[test]
    fn nhat_a_correlation_factorizes() {
        let p = single_mirror();
        let z1 = cross_corr_in_cavity(&p, N_UPPER, 0.9).unwrap();
        let z2 = cross_corr_in_nhat_a(&p, N_UPPER, 0.9).unwrap();
        assert!((z2 - 2.0 * N_UPPER * z1).norm_sqr() < 1e-24);
    }

    #[test]
    fn sampled_grid_matches_point_evaluation() {
        let p = reference_quantum();
        let grid = [-1.0, 0.0, 0.5, 2.0];
        let s = sample_spectrum(&p, N_LOWER, SpectrumKind::Cavity, &grid, 1e-6).unwrap();
        assert_eq!(s.omega, grid);
        for (&w, &v) in grid.iter().zip(&s.values) {
            assert_eq!(v, cavity_spectrum(&p, N_LOWER, w).unwrap());
        }
    }

    #[test]
    fn grid_must_increase() {
        let p = reference_quantum();
        let err = sample_spectrum(&p, 0.4, SpectrumKind::Input, &[0.0, 0.0], 1e-6);
        assert!(err.is_err());
        assert!(sample_spectrum(&p, 0.4, SpectrumKind::Input, &[], 1e-6).is_err());
    }
}
