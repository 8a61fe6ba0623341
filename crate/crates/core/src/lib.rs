//! Numerical toolkit for gauge-invariance analysis of light–matter models.
//!
//! Builds the Dicke Hamiltonian at finite N and in the dilute limit, and
//! the multimode Hopfield model, each in the Coulomb and dipole gauges:
//! both the standard two-level truncations (which break gauge invariance at
//! strong coupling) and the corrected, gauge-invariant forms. Spectra come
//! from dense Hermitian eigensolves; polariton branches of the bilinear
//! limits come from the 4×4 dynamical matrix on quadratures.
//!
//! Units: ħ = 1, ε₀ = 1, frequencies in units of the photon frequency
//! unless a caller supplies its own scale.
//!
//! Everything here is a pure function of immutable inputs; values may be
//! shared across threads freely and parameter sweeps parallelize across
//! independent calls.

pub mod basis;
pub mod dicke_finite;
pub mod dicke_thermo;
pub mod dipole1d;
pub mod error;
pub mod hopfield;
pub mod operators;
pub mod quadratic;
pub mod tridiag;

pub use basis::{BasisFactor, CompositeBasis, OperatorMatrix};
pub use error::{CoreError, Result};
pub use quadratic::{PolaritonPair, QuadraticBosonModel};

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Gauge selector shared by the Dicke builders and sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gauge {
    /// Two-level truncation of the minimally coupled Hamiltonian; breaks
    /// gauge invariance at strong coupling.
    StandardCoulomb,
    /// Coulomb gauge with the truncated nonlocal potential handled
    /// correctly; unitarily equivalent to the dipole gauge.
    GiCoulomb,
    /// Dipole gauge with the self-polarization term.
    Dipole,
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gauge::StandardCoulomb => "standard-coulomb",
            Gauge::GiCoulomb => "gi-coulomb",
            Gauge::Dipole => "dipole",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Gauge {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "standard-coulomb" => Ok(Gauge::StandardCoulomb),
            "gi-coulomb" => Ok(Gauge::GiCoulomb),
            "dipole" => Ok(Gauge::Dipole),
            other => Err(format!(
                "unknown gauge `{other}` (expected dipole, gi-coulomb, or standard-coulomb)"
            )),
        }
    }
}
