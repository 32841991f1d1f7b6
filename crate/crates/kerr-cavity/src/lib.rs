//! Stationary theory of dispersive optical bistability in a small Kerr-nonlinear
//! Fabry-Perot cavity driven by a quantum field.
//!
//! The library computes:
//!
//! * stationary intracavity photon numbers (roots of the driving cubic) and their
//!   stability ([`stationary`]),
//! * the bistability domain boundary, fold powers, and threshold detuning
//!   ([`stationary::bistability_boundary`]),
//! * input, intracavity, output, commutator, and photon-number fluctuation
//!   spectra, plus the single-mirror correlation functions that close the
//!   spectral equation ([`spectra`]),
//! * quasi-static hysteresis sweeps with jump detection ([`sweep`]),
//! * feasibility estimates connecting a physical Kerr medium to the cavity
//!   parameters ([`feasibility`]),
//! * independent brute-force verifiers for all of the above ([`oracle`]), which
//!   also back the CLI selfcheck.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only switches float math to the faster intrinsics and implements
//! `std::error::Error`.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x >= 0.0)` rejections are deliberate: unlike `x < 0.0` they also catch
// NaN. Quadrature tables and frozen reference values keep their published
// digit count even where it exceeds f64 precision.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

extern crate alloc;

mod math;

pub mod error;
pub mod feasibility;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod spectra;
pub mod stationary;
pub mod sweep;

pub use error::Error;
pub use params::{derive_rates, normalize, DerivedRates, Mode, NormalizedParams, PhysicalParams};
pub use stationary::{
    bistability_boundary, stationary_photon_numbers, BistabilityBoundary, BranchLabel,
    StationaryState,
};

/// Library-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
