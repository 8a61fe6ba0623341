//! Multimode Hopfield model: photons coupled to a bosonic polarization
//! field with per-wavevector blocks, in the Coulomb and dipole gauges.
//!
//! Units: ħ = ε₀ = 1 with the quantization volume absorbed into the
//! polarizability β, so the per-mode coupling collapses to
//! Λ_k = √(β ω₀ / (4 ω_k)).
//!
//! Each (k, −k) pair of traveling modes factorizes into two identical
//! two-mode blocks under real (cosine/sine) standing-wave combinations; the
//! blocks are what this module builds, validated once against an 8×8
//! dynamical-matrix oracle over the four traveling modes (see tests). The
//! two transverse polarizations contribute one more identical copy each, so
//! dispersion tables carry a degeneracy-2 annotation per standing block.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::quadratic::{
    diagonalize_quadratic, BosonMode, CouplingForm, PolaritonPair, QuadraticBosonModel,
};
use crate::Gauge;

#[derive(Debug, Clone, Serialize)]
pub struct HopfieldParams {
    /// Matter resonance ω₀.
    pub omega0: f64,
    /// Adimensional polarizability β.
    pub beta: f64,
    /// Photon frequencies ω_k of the retained modes.
    pub dispersion: Vec<f64>,
    /// Per-mode couplings Λ_k = √(β ω₀ / (4 ω_k)), derived.
    pub lambda_k: Vec<f64>,
}

impl HopfieldParams {
    pub fn new(omega0: f64, beta: f64, dispersion: Vec<f64>) -> Result<Self> {
        if !omega0.is_finite() || omega0 <= 0.0 {
            return Err(CoreError::invalid("omega0", "must be positive"));
        }
        if beta < 0.0 || !beta.is_finite() {
            return Err(CoreError::invalid("beta", "must be non-negative and finite"));
        }
        if dispersion.is_empty() {
            return Err(CoreError::invalid("dispersion", "need at least one photon mode"));
        }
        if dispersion.iter().any(|&w| !w.is_finite() || w <= 0.0) {
            return Err(CoreError::invalid("dispersion", "photon frequencies must be positive"));
        }
        let lambda_k = dispersion
            .iter()
            .map(|&wk| (beta * omega0 / (4.0 * wk)).sqrt())
            .collect();
        Ok(HopfieldParams {
            omega0,
            beta,
            dispersion,
            lambda_k,
        })
    }

    /// Linear dispersion law ω_k = c |k| over a wavevector grid.
    pub fn linear_dispersion(omega0: f64, beta: f64, speed: f64, k_values: &[f64]) -> Result<Self> {
        if !speed.is_finite() || speed <= 0.0 {
            return Err(CoreError::invalid("speed", "must be positive"));
        }
        let freqs: Vec<f64> = k_values.iter().map(|k| speed * k.abs()).collect();
        HopfieldParams::new(omega0, beta, freqs)
    }

    /// Default grid: ω_k/ω₀ ∈ [0.05, 5] on 100 log-spaced points.
    pub fn log_spaced(omega0: f64, beta: f64) -> Result<Self> {
        let (lo, hi, n) = (0.05 * omega0, 5.0 * omega0, 100usize);
        let ratio = (hi / lo).ln();
        let freqs: Vec<f64> = (0..n)
            .map(|i| lo * (ratio * i as f64 / (n - 1) as f64).exp())
            .collect();
        HopfieldParams::new(omega0, beta, freqs)
    }

    pub fn n_modes(&self) -> usize {
        self.dispersion.len()
    }

    /// Exact consistency of the stored couplings with their defining
    /// combination (diagnostic; zero unless fields were mutated).
    pub fn coupling_defect(&self) -> f64 {
        self.dispersion
            .iter()
            .zip(&self.lambda_k)
            .map(|(&wk, &l)| (l - (self.beta * self.omega0 / (4.0 * wk)).sqrt()).abs())
            .fold(0.0, f64::max)
    }

    fn check_index(&self, k_index: usize) -> Result<()> {
        if k_index >= self.n_modes() {
            return Err(CoreError::IndexOutOfRange {
                index: k_index,
                len: self.n_modes(),
            });
        }
        Ok(())
    }

    /// Upper edge of the polariton stopband, ω₀√(1 + β).
    pub fn lt_split_frequency(&self) -> f64 {
        self.omega0 * (1.0 + self.beta).sqrt()
    }
}

/// Coulomb-gauge standing-wave block of mode k:
/// ω_k a†a + ω₀ b†b + iω₀Λ_k(a + a†)(b − b†) + ω₀Λ_k²(a + a†)².
pub fn build_block_cg(p: &HopfieldParams, k_index: usize) -> Result<QuadraticBosonModel> {
    p.check_index(k_index)?;
    Ok(QuadraticBosonModel {
        omega_a: p.dispersion[k_index],
        omega_b: p.omega0,
        coupling: p.lambda_k[k_index],
        quad_coeff: p.omega0 * p.lambda_k[k_index] * p.lambda_k[k_index],
        quad_on: BosonMode::A,
        coupling_form: CouplingForm::XaPb,
    })
}

/// Dipole-gauge standing-wave block of mode k:
/// ω_k a†a + ω₀ b†b − iω_kΛ_k(a − a†)(b + b†) + ω_kΛ_k²(b + b†)².
pub fn build_block_dg(p: &HopfieldParams, k_index: usize) -> Result<QuadraticBosonModel> {
    p.check_index(k_index)?;
    Ok(QuadraticBosonModel {
        omega_a: p.dispersion[k_index],
        omega_b: p.omega0,
        coupling: p.lambda_k[k_index],
        quad_coeff: p.dispersion[k_index] * p.lambda_k[k_index] * p.lambda_k[k_index],
        quad_on: BosonMode::B,
        coupling_form: CouplingForm::PaXb,
    })
}

/// Branches of one mode in the requested gauge.
pub fn block_branches(p: &HopfieldParams, k_index: usize, gauge: Gauge) -> Result<PolaritonPair> {
    let model = match gauge {
        Gauge::GiCoulomb => build_block_cg(p, k_index)?,
        Gauge::Dipole => build_block_dg(p, k_index)?,
        Gauge::StandardCoulomb => {
            return Err(CoreError::invalid(
                "gauge",
                "the Hopfield model has no standard-Coulomb truncation variant",
            ))
        }
    };
    Ok(diagonalize_quadratic(&model))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DispersionRow {
    pub omega_k: f64,
    pub lower: f64,
    pub upper: f64,
    /// Transverse-polarization multiplicity of the block.
    pub degeneracy: u32,
}

/// Polariton dispersion over all retained modes, sorted by ω_k, from the
/// numeric oracle (Coulomb-gauge blocks; the dipole blocks are unitarily
/// equivalent).
pub fn polariton_dispersion(p: &HopfieldParams) -> Result<Vec<DispersionRow>> {
    let mut rows = Vec::with_capacity(p.n_modes());
    for k in 0..p.n_modes() {
        let pair = block_branches(p, k, Gauge::GiCoulomb)?;
        rows.push(DispersionRow {
            omega_k: p.dispersion[k],
            lower: pair.lower,
            upper: pair.upper,
            degeneracy: 2,
        });
    }
    rows.sort_by(|a, b| a.omega_k.partial_cmp(&b.omega_k).unwrap());
    Ok(rows)
}

/// Residual of the dielectric-function dispersion identity
/// ω_k² = ω²[1 + βω₀²/(ω₀² − ω²)] for one branch value, relative to ω_k².
pub fn dielectric_identity_residual(p: &HopfieldParams, omega_k: f64, branch: f64) -> f64 {
    let w2 = branch * branch;
    let w02 = p.omega0 * p.omega0;
    let rhs = w2 * (1.0 + p.beta * w02 / (w02 - w2));
    ((omega_k * omega_k - rhs) / (omega_k * omega_k)).abs()
}

/// The dilute-limit Dicke model as a single-mode Hopfield block: the
/// gauge-invariant Coulomb model with (ω_k, ω₀, Λ) = (ω_c, ω_x, λ) maps onto
/// β = 4λ²ω_c/ω_x. Returns the equivalent parameters and their branches.
pub fn dicke_as_hopfield(p: &crate::dicke_thermo::ThermoParams) -> Result<(HopfieldParams, PolaritonPair)> {
    p.validate()?;
    if p.gauge != Gauge::GiCoulomb {
        return Err(CoreError::invalid(
            "gauge",
            "the Hopfield embedding maps the gauge-invariant Coulomb model",
        ));
    }
    let beta = 4.0 * p.lambda * p.lambda * p.omega_c / p.omega_x;
    let hop = HopfieldParams::new(p.omega_x, beta, vec![p.omega_c])?;
    let pair = block_branches(&hop, 0, Gauge::GiCoulomb)?;
    Ok((hop, pair))
}
