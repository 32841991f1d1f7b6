//! Error type shared by every module.

use core::fmt;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its domain (negative rate, zero input coupling,
    /// non-monotone grid, damping outside (0, 1], ...). The message names the
    /// offending quantity.
    InvalidParameter(&'static str),
    /// An argument outside the mathematical domain of an operation
    /// (negative photon number, non-positive Lorentzian width, ...).
    Domain(&'static str),
    /// Spectral densities were requested for a monochromatic drive
    /// (`kappa_s = 0`): the input spectrum is a delta line and only
    /// integrated quantities are defined.
    MonochromaticInput,
    /// A correlation function of the single-mirror configuration was called
    /// with `kappa_out` or `kappa_abs` nonzero.
    SingleMirrorRequired,
    /// The cubic solver produced a root whose residual exceeds its tolerance.
    SolverFailure { residual: f64 },
    /// Adaptive quadrature exhausted its budget before reaching the requested
    /// tolerance; the best value and its error estimate are attached.
    ToleranceNotMet { value: f64, error_estimate: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::MonochromaticInput => write!(
                f,
                "kappa_s = 0: input spectrum is a delta line, densities are undefined"
            ),
            Error::SingleMirrorRequired => write!(
                f,
                "operation requires the single-mirror configuration (kappa_out = kappa_abs = 0)"
            ),
            Error::SolverFailure { residual } => {
                write!(f, "cubic solver failure: residual {residual:e}")
            }
            Error::ToleranceNotMet {
                value,
                error_estimate,
            } => write!(
                f,
                "quadrature tolerance not met: value {value:e}, error estimate {error_estimate:e}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
