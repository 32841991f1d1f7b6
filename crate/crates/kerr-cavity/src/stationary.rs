//! Stationary photon numbers of the driven Kerr cavity and the bistability
//! domain.
//!
//! The stationary state satisfies the cubic `Y = n * (1 + (D0 - n*D1)^2)` in
//! the dimensionless variables of [`NormalizedParams`] (`D0`, `D1` are the
//! normalized detunings). Between the fold powers `p_minus < p_plus` three
//! roots coexist; the slope criterion `dY/dn > 0` marks the outer two stable
//! and the middle one unstable.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::params::{derive_rates, normalize, NormalizedParams, PhysicalParams};
use crate::Result;

/// Roots closer than `1e-9 * max(1, n)` are one fold-degenerate root.
const MERGE_REL: f64 = 1e-9;
/// Residual bound `|Y(n) - Y| <= RESIDUAL_REL * max(1, |Y|)` for every
/// reported root.
const RESIDUAL_REL: f64 = 1e-9;

/// Position of a root on the S-curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BranchLabel {
    /// Only root of a monostable parameter set.
    Unique,
    Lower,
    Middle,
    Upper,
}

/// One stationary photon number with its stability hypothesis.
///
/// `stable` is the linearized slope criterion `dY/dn > 0` (strict); fold and
/// triple-degenerate roots have zero slope and are therefore reported
/// unstable, which doubles as the marginality flag. Serialized output labels
/// the flag `hypothesized_stable`: the criterion is a necessary
/// linear-response condition, not a full stability proof.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StationaryState {
    /// Mean intracavity photon number.
    pub n: f64,
    pub branch: BranchLabel,
    #[cfg_attr(feature = "serde", serde(rename = "hypothesized_stable"))]
    pub stable: bool,
    /// `|Y(n) - Y|` of the returned root.
    pub residual: f64,
}

/// Fold structure of the bistability domain at one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BistabilityBoundary {
    /// True iff `D0^2 >= 3` and `D0 * D1 > 0`.
    pub exists: bool,
    /// Fold photon number `(2*D0 - sqrt(D0^2 - 3)) / (3*D1)` when it exists.
    pub n_minus: Option<f64>,
    /// Fold photon number `(2*D0 + sqrt(D0^2 - 3)) / (3*D1)` when it exists.
    pub n_plus: Option<f64>,
    /// Lower fold power (photons/s): below it the upper branch is gone.
    pub p_minus: Option<f64>,
    /// Upper fold power (photons/s): above it the lower branch is gone.
    pub p_plus: Option<f64>,
    /// Threshold detuning `sqrt(3) * kappa_eff`; bistability needs
    /// `|delta0| >= delta_min` (and sign agreement with `delta1`).
    /// Always reported.
    pub delta_min: f64,
}

/// Drive power `Y` that sustains photon number `n`.
pub fn y_of_n(n: f64, np: &NormalizedParams) -> f64 {
    let d = np.delta0 - n * np.delta1;
    n * (1.0 + d * d)
}

/// Slope `dY/dn = 3*D1^2*n^2 - 4*D0*D1*n + 1 + D0^2`; positive at stable roots.
pub fn dy_dn(n: f64, np: &NormalizedParams) -> f64 {
    3.0 * np.delta1 * np.delta1 * n * n - 4.0 * np.delta0 * np.delta1 * n
        + 1.0
        + np.delta0 * np.delta0
}

fn validate_normalized(np: &NormalizedParams) -> Result<()> {
    if !(np.y.is_finite() && np.delta0.is_finite() && np.delta1.is_finite()) {
        return Err(Error::InvalidParameter("non-finite normalized parameters"));
    }
    if np.y < 0.0 {
        return Err(Error::InvalidParameter("drive Y must be nonnegative"));
    }
    Ok(())
}

/// Real roots of the monic depressed cubic `t^3 + p*t + q`, appended to `out`.
fn depressed_roots(p: f64, q: f64, out: &mut Vec<f64>) {
    let disc = 0.25 * q * q + p * p * p / 27.0;
    if disc > 0.0 {
        // One real root; the sign-split form avoids cancellation.
        let s = math::sqrt(disc);
        let u = if q <= 0.0 {
            math::cbrt(-0.5 * q + s)
        } else {
            -math::cbrt(0.5 * q + s)
        };
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        out.push(t);
        // A barely-positive discriminant still carries a physically resolved
        // fold pair; the near-double candidate is kept iff its residual
        // survives the tolerance check downstream.
        if p < 0.0 {
            out.push(-1.5 * q / p);
        }
    } else if p == 0.0 && q == 0.0 {
        out.push(0.0); // triple root
    } else {
        // Three real roots (possibly degenerate): trigonometric form.
        let m = 2.0 * math::sqrt(-p / 3.0);
        let arg = 3.0 * q / (p * m);
        let theta = math::acos(arg.clamp(-1.0, 1.0)) / 3.0;
        const TWO_THIRDS_PI: f64 = 2.0 * core::f64::consts::PI / 3.0;
        out.push(m * math::cos(theta));
        out.push(m * math::cos(theta - TWO_THIRDS_PI));
        out.push(m * math::cos(theta + TWO_THIRDS_PI));
    }
}

/// Stationary photon numbers for dimensionless parameters, sorted ascending.
///
/// Follows the depressed-cubic classification with one Newton polish per
/// root; tiny negative roots (noise above `-1e-12`) are clamped to zero,
/// genuinely negative ones discarded, and fold pairs closer than
/// `1e-9 * max(1, n)` merge into one reported root.
pub fn stationary_from_normalized(np: &NormalizedParams) -> Result<Vec<StationaryState>> {
    validate_normalized(np)?;
    let (y, d0, d1) = (np.y, np.delta0, np.delta1);

    let mut candidates: Vec<f64> = Vec::with_capacity(4);
    if d1 == 0.0 {
        // Linear cavity: closed form.
        candidates.push(y / (1.0 + d0 * d0));
    } else {
        // a*n^3 + b*n^2 + c*n + d = 0
        let a = d1 * d1;
        let b = -2.0 * d0 * d1;
        let c = 1.0 + d0 * d0;
        let d = -y;
        let p2 = b / a;
        let p1 = c / a;
        let p0 = d / a;
        let shift = p2 / 3.0;
        let pp = p1 - p2 * p2 / 3.0;
        let qq = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
        let mut ts: Vec<f64> = Vec::with_capacity(4);
        depressed_roots(pp, qq, &mut ts);
        let f = |n: f64| ((a * n + b) * n + c) * n + d;
        let fp = |n: f64| (3.0 * a * n + 2.0 * b) * n + c;
        for t in ts {
            let mut n = t - shift;
            // One Newton step; skipped where the slope is fold-degenerate.
            let deriv = fp(n);
            if math::abs(deriv) > 1e-12 * (1.0 + c) {
                n -= f(n) / deriv;
            }
            candidates.push(n);
        }
    }

    // Clamp noise, discard negatives.
    let noise_floor = -1e-12;
    let mut roots: Vec<f64> = Vec::with_capacity(3);
    for n in candidates {
        if n >= 0.0 {
            roots.push(n);
        } else if n > noise_floor {
            roots.push(0.0);
        }
    }
    roots.sort_by(f64::total_cmp);

    // Merge fold-degenerate pairs.
    let mut merged: Vec<f64> = Vec::with_capacity(3);
    for n in roots {
        match merged.last_mut() {
            Some(last) if n - *last <= MERGE_REL * f64::max(1.0, n) => {
                *last = 0.5 * (*last + n);
            }
            _ => merged.push(n),
        }
    }

    // Residual gate: drop near-double candidates that are not roots, fail hard
    // if a genuine branch misses the tolerance.
    let tol = RESIDUAL_REL * f64::max(1.0, y);
    let mut kept: Vec<(f64, f64)> = Vec::with_capacity(3);
    let mut worst: f64 = 0.0;
    for n in merged {
        let r = math::abs(y_of_n(n, np) - y);
        if r <= tol {
            kept.push((n, r));
        } else {
            worst = f64::max(worst, r);
        }
    }
    if kept.is_empty() {
        // A nonnegative-drive cubic always has at least one nonnegative root.
        return Err(Error::SolverFailure { residual: worst });
    }

    let states = kept
        .iter()
        .enumerate()
        .map(|(i, &(n, residual))| StationaryState {
            n,
            branch: match (kept.len(), i) {
                (1, _) => BranchLabel::Unique,
                (2, 0) => BranchLabel::Lower,
                (2, _) => BranchLabel::Upper,
                (_, 0) => BranchLabel::Lower,
                (_, 1) => BranchLabel::Middle,
                _ => BranchLabel::Upper,
            },
            stable: dy_dn(n, np) > 0.0,
            residual,
        })
        .collect();
    Ok(states)
}

/// Stationary photon numbers of a physical parameter set, sorted ascending.
pub fn stationary_photon_numbers(p: &PhysicalParams) -> Result<Vec<StationaryState>> {
    stationary_from_normalized(&normalize(p)?)
}

/// Fold structure of the bistability domain for a physical parameter set.
///
/// `n_minus`/`n_plus` follow the closed form `(2*D0 -+ sqrt(D0^2-3))/(3*D1)`;
/// the fold powers evaluate `Y` at the two critical points of the cubic, the
/// local maximum giving `p_plus`, so `p_minus < p_plus` holds for every
/// sign-agreeing parameter set.
pub fn bistability_boundary(p: &PhysicalParams) -> Result<BistabilityBoundary> {
    let rates = derive_rates(p)?;
    let np = normalize(p)?;
    // kappa_eff equals kappa_cav in semiclassical mode, so this scale matches
    // the normalization divisor in both modes.
    let kappa = rates.kappa_eff;
    let delta_min = math::sqrt(3.0) * kappa;

    let disc = np.delta0 * np.delta0 - 3.0;
    if disc < 0.0 || np.delta0 * np.delta1 <= 0.0 {
        return Ok(BistabilityBoundary {
            exists: false,
            n_minus: None,
            n_plus: None,
            p_minus: None,
            p_plus: None,
            delta_min,
        });
    }

    let s = math::sqrt(disc);
    let n_minus = (2.0 * np.delta0 - s) / (3.0 * np.delta1);
    let n_plus = (2.0 * np.delta0 + s) / (3.0 * np.delta1);
    // The smaller critical point is the local maximum of Y (the cubic rises
    // first), hence the larger fold power.
    let n_lo = f64::min(n_minus, n_plus);
    let n_hi = f64::max(n_minus, n_plus);
    let p_plus = 0.5 * kappa * y_of_n(n_lo, &np);
    let p_minus = 0.5 * kappa * y_of_n(n_hi, &np);

    Ok(BistabilityBoundary {
        exists: true,
        n_minus: Some(n_minus),
        n_plus: Some(n_plus),
        p_minus: Some(p_minus),
        p_plus: Some(p_plus),
        delta_min,
    })
}

/// Output photon flux `2 * kappa_out * n` of a stationary state.
pub fn output_power(p: &PhysicalParams, n: f64) -> Result<f64> {
    p.validate()?;
    if !(n >= 0.0) {
        return Err(Error::Domain("photon number must be nonnegative"));
    }
    Ok(2.0 * p.kappa_out * n)
}
