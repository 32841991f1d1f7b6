//! Laboratory-unit bridge: from an intensity nonlinear index to the
//! per-photon frequency shift, and the few-photon bistability condition.
//!
//! Internally everything runs in SI; `tilde_n2` enters in cm^2/W because
//! nonlinear indices are tabulated that way. A CGS evaluation of the same
//! quantities backs the unit choice in the verification suite.

use crate::error::Error;
use crate::math;
use crate::Result;

/// CODATA values in the two unit systems used by the cross-check.
pub mod constants {
    /// Speed of light, m/s.
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Speed of light, cm/s.
    pub const SPEED_OF_LIGHT_CGS: f64 = 2.997_924_58e10;
    /// Reduced Planck constant, erg s.
    pub const HBAR_CGS: f64 = 1.054_571_817e-27;
}

/// `x` cm^2/kW in cm^2/W.
pub fn cm2_per_kw_to_cm2_per_w(x: f64) -> f64 {
    x * 1e-3
}

/// `x` cm^2/W in cm^2/kW.
pub fn cm2_per_w_to_cm2_per_kw(x: f64) -> f64 {
    x * 1e3
}

/// `x` cm^2/W in m^2/W.
pub fn cm2_per_w_to_m2_per_w(x: f64) -> f64 {
    x * 1e-4
}

/// `x` m^2/W in cm^2/W.
pub fn m2_per_w_to_cm2_per_w(x: f64) -> f64 {
    x * 1e4
}

/// A Kerr medium filling a small cavity mode.
///
/// The sign of `tilde_n2` distinguishes self-focusing from self-defocusing
/// media; magnitudes drive the feasibility margin, and the detuning sign
/// convention absorbs the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KerrMediumSpec {
    /// Intensity nonlinear index, cm^2/W.
    pub tilde_n2: f64,
    /// Linear refractive index, > 1.
    pub n0: f64,
    /// Vacuum carrier wavelength, m.
    pub lambda0: f64,
    /// Mode volume, m^3.
    pub volume: f64,
    /// Effective quality factor `omega0 / (2 * kappa_eff)`.
    pub q: f64,
    /// Longitudinal mode index of the driven resonance.
    pub mode_index: u32,
}

impl KerrMediumSpec {
    /// Fundamental-mode spec (`mode_index = 1`).
    pub fn new(tilde_n2: f64, n0: f64, lambda0: f64, volume: f64, q: f64) -> Result<Self> {
        let spec = KerrMediumSpec {
            tilde_n2,
            n0,
            lambda0,
            volume,
            q,
            mode_index: 1,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_mode_index(mut self, mode_index: u32) -> Result<Self> {
        self.mode_index = mode_index;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.tilde_n2.is_finite() {
            return Err(Error::InvalidParameter("tilde_n2 must be finite"));
        }
        if !(self.n0 > 1.0 && self.n0.is_finite()) {
            return Err(Error::InvalidParameter("n0 must exceed 1"));
        }
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::InvalidParameter("lambda0 must be positive"));
        }
        if !(self.volume > 0.0 && self.volume.is_finite()) {
            return Err(Error::InvalidParameter("volume must be positive"));
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return Err(Error::InvalidParameter("quality factor must be positive"));
        }
        if self.mode_index == 0 {
            return Err(Error::InvalidParameter("mode index must be at least 1"));
        }
        Ok(())
    }

    /// Carrier angular frequency `2 pi c / lambda0`, rad/s.
    pub fn omega0(&self) -> f64 {
        2.0 * core::f64::consts::PI * constants::SPEED_OF_LIGHT / self.lambda0
    }

    /// Carrier photon energy, J.
    pub fn photon_energy(&self) -> f64 {
        constants::HBAR * self.omega0()
    }

    /// Cubic half-wave mode volume `(lambda0 / (2 n0))^3`, the smallest
    /// cavity that still fits the mode.
    pub fn default_volume(n0: f64, lambda0: f64) -> f64 {
        let l = lambda0 / (2.0 * n0);
        l * l * l
    }

    /// Effective field decay rate `omega0 / (2 Q)`, rad/s.
    pub fn kappa_eff(&self) -> f64 {
        self.omega0() / (2.0 * self.q)
    }
}

/// Refractive index shift per intracavity photon:
/// `n2 = tilde_n2 * n0 * c * hbar * omega0 / (2 V)` (dimensionless).
pub fn n2_per_photon(spec: &KerrMediumSpec) -> Result<f64> {
    spec.validate()?;
    let tilde_si = cm2_per_w_to_m2_per_w(spec.tilde_n2);
    let n2 = tilde_si * spec.n0 * constants::SPEED_OF_LIGHT * spec.photon_energy()
        / (2.0 * spec.volume);
    if !n2.is_finite() {
        return Err(Error::Domain("per-photon index overflows for this volume"));
    }
    Ok(n2)
}

/// CGS evaluation of [`n2_per_photon`]; same number by a different unit path.
pub(crate) fn n2_per_photon_cgs(spec: &KerrMediumSpec) -> Result<f64> {
    spec.validate()?;
    let tilde_cgs = spec.tilde_n2 * 1e-7; // cm^2/W -> cm^2/(erg/s)
    let volume_cgs = spec.volume * 1e6; // m^3 -> cm^3
    let n2 = tilde_cgs * spec.n0 * constants::SPEED_OF_LIGHT_CGS * constants::HBAR_CGS
        * spec.omega0()
        / (2.0 * volume_cgs);
    if !n2.is_finite() {
        return Err(Error::Domain("per-photon index overflows for this volume"));
    }
    Ok(n2)
}

/// Photon-number-dependent cavity resonance and the per-photon shift rate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModeFrequency {
    /// Shifted resonance `omega0 * (1 - n2 * n / n0)`, rad/s.
    pub omega_m: f64,
    /// Per-photon shift rate `2 * delta1 = omega0 * n2 / n0`, rad/s.
    pub two_delta1: f64,
    /// Linearization parameter `n2 * n / n0`; the first-order expansion is
    /// strained beyond 0.1.
    pub perturbation: f64,
}

impl ModeFrequency {
    /// True when the index shift leaves the first-order regime.
    pub fn approximation_strained(&self) -> bool {
        math::abs(self.perturbation) > 0.1
    }
}

/// Cavity resonance pulled by `n` intracavity photons.
pub fn mode_frequency(spec: &KerrMediumSpec, n: f64) -> Result<ModeFrequency> {
    if !(n >= 0.0 && n.is_finite()) {
        return Err(Error::Domain("photon number must be nonnegative"));
    }
    let n2 = n2_per_photon(spec)?;
    let omega0 = spec.omega0();
    let perturbation = n2 * n / spec.n0;
    Ok(ModeFrequency {
        omega_m: omega0 * (1.0 - perturbation),
        two_delta1: omega0 * n2 / spec.n0,
        perturbation,
    })
}

/// Smallest nonlinear index that makes single-photon bistability reachable:
/// `sqrt(3) * V / (c * hbar * omega0 * Q)`, in cm^2/W. The `tilde_n2` field
/// of `spec` is ignored.
pub fn min_tilde_n2(spec: &KerrMediumSpec) -> Result<f64> {
    spec.validate()?;
    let si = math::sqrt(3.0) * spec.volume
        / (constants::SPEED_OF_LIGHT * spec.photon_energy() * spec.q);
    Ok(m2_per_w_to_cm2_per_w(si))
}

/// CGS evaluation of [`min_tilde_n2`]; same number by a different unit path.
pub(crate) fn min_tilde_n2_cgs(spec: &KerrMediumSpec) -> Result<f64> {
    spec.validate()?;
    let volume_cgs = spec.volume * 1e6;
    let cgs = math::sqrt(3.0) * volume_cgs
        / (constants::SPEED_OF_LIGHT_CGS * constants::HBAR_CGS * spec.omega0() * spec.q);
    Ok(cgs * 1e7) // cm^2/(erg/s) -> cm^2/W
}

/// Outcome of the few-photon bistability condition.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeasibilityVerdict {
    /// True when `margin >= 1`.
    pub feasible: bool,
    /// `|tilde_n2| * c * hbar * omega0 * n * Q / (sqrt(3) * V)`.
    pub margin: f64,
    /// The boundary index from [`min_tilde_n2`], cm^2/W.
    pub min_tilde_n2: f64,
}

/// Evaluates whether `n` photons suffice for bistability in this medium.
///
/// The margin is linear in `|tilde_n2|`, `n`, and `Q`; `margin = 1` is the
/// [`min_tilde_n2`] boundary at one photon.
pub fn bistability_feasible(spec: &KerrMediumSpec, n: f64) -> Result<FeasibilityVerdict> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Domain("photon number must be positive"));
    }
    let floor = min_tilde_n2(spec)?;
    let tilde_si = cm2_per_w_to_m2_per_w(math::abs(spec.tilde_n2));
    let margin = tilde_si * constants::SPEED_OF_LIGHT * spec.photon_energy() * n * spec.q
        / (math::sqrt(3.0) * spec.volume);
    Ok(FeasibilityVerdict {
        feasible: margin >= 1.0,
        margin,
        min_tilde_n2: floor,
    })
}

/// Intensity-shifted refractive index `n0 + n2 * n` at `n` photons.
pub fn refractive_index(spec: &KerrMediumSpec, n: f64) -> Result<f64> {
    if !(n >= 0.0 && n.is_finite()) {
        return Err(Error::Domain("photon number must be nonnegative"));
    }
    Ok(spec.n0 + n2_per_photon(spec)? * n)
}
