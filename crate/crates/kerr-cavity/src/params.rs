//! Cavity parameters, derived rates, and the dimensionless normalization.
//!
//! All rates and detunings share one unit of angular frequency (rad/s, or any
//! fixed multiple of it: every downstream quantity is covariant under a joint
//! rescaling). Powers are photon fluxes in photons/s times the same unit
//! convention.

use crate::error::Error;
use crate::Result;

/// Which stationary theory closes the cubic.
///
/// `Quantum` keeps the full field-operator detuning shift `delta0 - 2*delta1*n`
/// and the effective linewidth `kappa_s + kappa_cav`; `Semiclassical` treats
/// the field as a c-number, halving the shift to `delta0 - delta1*n`, and has
/// no input-linewidth broadening (`kappa_s` is forced to 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    Quantum,
    Semiclassical,
}

/// Physical parameter set of one cavity + drive configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalParams {
    /// Bare cavity-drive detuning `omega_m(0) - omega_in` (rad/s).
    pub delta0: f64,
    /// Kerr shift per photon: the mode frequency moves by `-2*delta1*n`
    /// (quantum) or `-delta1*n` (semiclassical) (rad/s).
    pub delta1: f64,
    /// Input mirror decay rate (rad/s), must be positive.
    pub kappa_in: f64,
    /// Output mirror decay rate (rad/s), nonnegative.
    pub kappa_out: f64,
    /// Internal absorption rate (rad/s), nonnegative.
    pub kappa_abs: f64,
    /// Half-width of the Lorentzian drive spectrum (rad/s), nonnegative;
    /// 0 means a monochromatic drive.
    pub kappa_s: f64,
    /// Incident photon flux (photons/s), nonnegative.
    pub p_in: f64,
    /// Stationary theory selector.
    pub mode: Mode,
}

impl PhysicalParams {
    /// Validated constructor. In semiclassical mode `kappa_s` is forced to 0
    /// (the semiclassical theory has no drive-linewidth broadening).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        delta0: f64,
        delta1: f64,
        kappa_in: f64,
        kappa_out: f64,
        kappa_abs: f64,
        kappa_s: f64,
        p_in: f64,
        mode: Mode,
    ) -> Result<Self> {
        let p = PhysicalParams {
            delta0,
            delta1,
            kappa_in,
            kappa_out,
            kappa_abs,
            kappa_s: if mode == Mode::Semiclassical {
                0.0
            } else {
                kappa_s
            },
            p_in,
            mode,
        };
        p.validate()?;
        Ok(p)
    }

    /// Re-checks every field invariant (fields are public, so a caller can
    /// break them after construction).
    pub fn validate(&self) -> Result<()> {
        for v in [
            self.delta0,
            self.delta1,
            self.kappa_in,
            self.kappa_out,
            self.kappa_abs,
            self.kappa_s,
            self.p_in,
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter("non-finite parameter"));
            }
        }
        if !(self.kappa_in > 0.0) {
            return Err(Error::InvalidParameter("kappa_in must be positive"));
        }
        if self.kappa_out < 0.0 || self.kappa_abs < 0.0 || self.kappa_s < 0.0 {
            return Err(Error::InvalidParameter("decay rates must be nonnegative"));
        }
        if self.mode == Mode::Semiclassical && self.kappa_s != 0.0 {
            return Err(Error::InvalidParameter(
                "kappa_s must be 0 in semiclassical mode",
            ));
        }
        if self.p_in < 0.0 {
            return Err(Error::InvalidParameter("p_in must be nonnegative"));
        }
        Ok(())
    }
}

/// Rates derived from a [`PhysicalParams`]:
/// total cavity linewidth, effective linewidth, and effective drive power.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivedRates {
    /// `kappa_in + kappa_out + kappa_abs`.
    pub kappa_cav: f64,
    /// `kappa_s + kappa_cav` (equals `kappa_cav` in semiclassical mode).
    pub kappa_eff: f64,
    /// Drive power reaching the mode: `(kappa_in / kappa_cav) * p_in`.
    pub p_eff: f64,
}

/// Dimensionless drive and detunings of the stationary cubic
/// `Y = n * (1 + (Delta0 - n*Delta1)^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormalizedParams {
    /// `2 * p_eff / kappa_eff` (quantum) or `2 * p_eff / kappa_cav` (semiclassical).
    pub y: f64,
    /// `delta0 / kappa_eff` (quantum) or `delta0 / kappa_cav` (semiclassical).
    pub delta0: f64,
    /// `2 * delta1 / kappa_eff` (quantum) or `delta1 / kappa_cav` (semiclassical).
    pub delta1: f64,
}

/// Computes [`DerivedRates`]. Deterministic and scale-covariant: scaling every
/// rate and power by a common factor scales the outputs by the same factor.
pub fn derive_rates(p: &PhysicalParams) -> Result<DerivedRates> {
    p.validate()?;
    let kappa_cav = p.kappa_in + p.kappa_out + p.kappa_abs;
    Ok(DerivedRates {
        kappa_cav,
        kappa_eff: p.kappa_s + kappa_cav,
        p_eff: p.kappa_in / kappa_cav * p.p_in,
    })
}

/// Maps a parameter set onto the dimensionless cubic parameters.
///
/// Quantum mode divides by `kappa_eff` and doubles `delta1`; semiclassical
/// mode divides by `kappa_cav` and keeps `delta1`. Consequently a quantum set
/// with `kappa_s = 0` and `delta1` halved normalizes identically to the
/// semiclassical set.
pub fn normalize(p: &PhysicalParams) -> Result<NormalizedParams> {
    let rates = derive_rates(p)?;
    Ok(match p.mode {
        Mode::Quantum => NormalizedParams {
            y: 2.0 * rates.p_eff / rates.kappa_eff,
            delta0: p.delta0 / rates.kappa_eff,
            delta1: 2.0 * p.delta1 / rates.kappa_eff,
        },
        Mode::Semiclassical => NormalizedParams {
            y: 2.0 * rates.p_eff / rates.kappa_cav,
            delta0: p.delta0 / rates.kappa_cav,
            delta1: p.delta1 / rates.kappa_cav,
        },
    })
}

/// Photon-number-dependent detuning `delta_n` of the shifted mode:
/// `delta0 - 2*delta1*n` (quantum) or `delta0 - delta1*n` (semiclassical).
pub fn nonlinear_detuning(p: &PhysicalParams, n: f64) -> Result<f64> {
    p.validate()?;
    if !(n >= 0.0) {
        return Err(Error::Domain("photon number must be nonnegative"));
    }
    Ok(match p.mode {
        Mode::Quantum => p.delta0 - 2.0 * p.delta1 * n,
        Mode::Semiclassical => p.delta0 - p.delta1 * n,
    })
}
