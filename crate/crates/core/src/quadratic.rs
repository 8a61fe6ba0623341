//! Two-mode bilinear boson Hamiltonians and their normal-mode frequencies.
//!
//! A [`QuadraticBosonModel`] stores the ladder-operator form
//!
//! ```text
//! H = ω_a a†a + ω_b b†b + cross + Q (m̂ + m̂†)²
//! ```
//!
//! where the cross term is fixed by [`CouplingForm`]:
//!   `PaXb`: i c ω_a (a† − a)(b + b†)   (= 2 c ω_a · p_a x_b),
//!   `XaPb`: i c ω_b (b − b†)(a† + a)   (= −2 c ω_b · p_b x_a),
//! with dimensionless amplitude `c` and the squared term on mode `quad_on`.
//! The spectrum is invariant under the sign of `c`.
//!
//! Frequencies come from the classical dynamical matrix on the quadratures
//! (x_a, p_a, x_b, p_b): write H = ½ zᵀ S z, form M = J S from Hamilton's
//! equations, and read the normal modes off the positive imaginary parts of
//! the eigenvalues of M.

use nalgebra::{DMatrix, Matrix4};
use serde::Serialize;

use crate::error::{CoreError, Result};

/// Which mode carries the squared-quadrature term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BosonMode {
    A,
    B,
}

/// Which quadratures the bilinear cross term couples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CouplingForm {
    /// i c ω_a (a† − a)(b + b†)
    PaXb,
    /// i c ω_b (b − b†)(a† + a)
    XaPb,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadraticBosonModel {
    pub omega_a: f64,
    pub omega_b: f64,
    /// Dimensionless amplitude of the bilinear cross term.
    pub coupling: f64,
    /// Frequency-valued coefficient of (m̂ + m̂†)² on `quad_on`.
    pub quad_coeff: f64,
    pub quad_on: BosonMode,
    pub coupling_form: CouplingForm,
}

/// Ordered normal-mode pair; `stable` is false when the quadratic form is
/// not positive definite (some dynamical eigenvalue acquires a real part).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PolaritonPair {
    pub lower: f64,
    pub upper: f64,
    pub stable: bool,
}

/// Real-part threshold beyond which a dynamical eigenvalue flags instability.
const STABILITY_TOL: f64 = 1e-10;

impl QuadraticBosonModel {
    pub fn validate(&self) -> Result<()> {
        if !self.omega_a.is_finite() || self.omega_a <= 0.0 {
            return Err(CoreError::invalid(
                "omega_a",
                format!("must be positive and finite, got {}", self.omega_a),
            ));
        }
        if !self.omega_b.is_finite() || self.omega_b <= 0.0 {
            return Err(CoreError::invalid(
                "omega_b",
                format!("must be positive and finite, got {}", self.omega_b),
            ));
        }
        if self.quad_coeff < 0.0 || !self.quad_coeff.is_finite() {
            return Err(CoreError::invalid(
                "quad_coeff",
                format!("must be non-negative and finite, got {}", self.quad_coeff),
            ));
        }
        if !self.coupling.is_finite() {
            return Err(CoreError::invalid("coupling", "must be finite"));
        }
        Ok(())
    }

    /// Symmetric quadratic form S with H = ½ zᵀ S z, z = (x_a, p_a, x_b, p_b).
    pub fn quadratic_form(&self) -> Matrix4<f64> {
        let mut s = Matrix4::zeros();
        s[(0, 0)] = self.omega_a;
        s[(1, 1)] = self.omega_a;
        s[(2, 2)] = self.omega_b;
        s[(3, 3)] = self.omega_b;
        match self.quad_on {
            BosonMode::A => s[(0, 0)] += 4.0 * self.quad_coeff,
            BosonMode::B => s[(2, 2)] += 4.0 * self.quad_coeff,
        }
        match self.coupling_form {
            CouplingForm::PaXb => {
                let g = 2.0 * self.coupling * self.omega_a;
                s[(1, 2)] = g;
                s[(2, 1)] = g;
            }
            CouplingForm::XaPb => {
                let g = -2.0 * self.coupling * self.omega_b;
                s[(0, 3)] = g;
                s[(3, 0)] = g;
            }
        }
        s
    }

    /// M = J S from Hamilton's equations ẋ = ∂H/∂p, ṗ = −∂H/∂x.
    pub fn dynamical_matrix(&self) -> Matrix4<f64> {
        let s = self.quadratic_form();
        let mut m = Matrix4::zeros();
        for col in 0..4 {
            m[(0, col)] = s[(1, col)];
            m[(1, col)] = -s[(0, col)];
            m[(2, col)] = s[(3, col)];
            m[(3, col)] = -s[(2, col)];
        }
        m
    }

    /// (ω₊² + ω₋², ω₊²·ω₋²) from trace and determinant of the dynamical
    /// matrix; an algebraic route independent of the eigenvalue extraction.
    pub fn characteristic_coefficients(&self) -> (f64, f64) {
        let m = self.dynamical_matrix();
        let m2 = m * m;
        let sum = -m2.trace() / 2.0;
        let product = m.determinant();
        (sum, product)
    }

    /// Bare frequency of one mode including its squared term, √(ω(ω + 4Q)).
    fn decoupled_frequency(&self, mode: BosonMode) -> f64 {
        let w = match mode {
            BosonMode::A => self.omega_a,
            BosonMode::B => self.omega_b,
        };
        if self.quad_on == mode {
            (w * (w + 4.0 * self.quad_coeff)).sqrt()
        } else {
            w
        }
    }
}

/// Normal-mode frequencies of the two-mode model.
pub fn diagonalize_quadratic(model: &QuadraticBosonModel) -> PolaritonPair {
    if model.coupling == 0.0 {
        // Decoupled oscillators: exact closed form, no eigensolve noise.
        let fa = model.decoupled_frequency(BosonMode::A);
        let fb = model.decoupled_frequency(BosonMode::B);
        return PolaritonPair {
            lower: fa.min(fb),
            upper: fa.max(fb),
            stable: true,
        };
    }
    let m = DMatrix::from_fn(4, 4, |i, j| model.dynamical_matrix()[(i, j)]);
    let (freqs, stable) = normal_mode_frequencies(&m);
    match freqs.len() {
        2 => PolaritonPair {
            lower: freqs[0],
            upper: freqs[1],
            stable,
        },
        // Zero modes or overdamped pairs collapse the count; report what
        // survives and flag instability.
        1 => PolaritonPair {
            lower: 0.0,
            upper: freqs[0],
            stable: false,
        },
        _ => PolaritonPair {
            lower: 0.0,
            upper: 0.0,
            stable: false,
        },
    }
}

/// Positive-imaginary-part eigenfrequencies of M = J S for a general
/// n-mode quadratic form S on (x₁, p₁, …, xₙ, pₙ), sorted ascending.
/// Returns `(frequencies, stable)`.
pub fn normal_mode_frequencies(m: &DMatrix<f64>) -> (Vec<f64>, bool) {
    let eig = m.clone().complex_eigenvalues();
    let scale = m.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let mut stable = true;
    let mut freqs = Vec::new();
    for z in eig.iter() {
        if z.re.abs() > STABILITY_TOL * scale {
            stable = false;
        }
        if z.im > STABILITY_TOL * scale {
            freqs.push(z.im);
        }
    }
    freqs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (freqs, stable)
}

/// M = J S for an n-mode quadratic form (helper for oracle-style checks).
pub fn dynamical_from_quadratic_form(s: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = s.nrows();
    assert!(dim.is_multiple_of(2) && s.ncols() == dim, "S must be 2n x 2n");
    let mut m = DMatrix::zeros(dim, dim);
    for mode in 0..dim / 2 {
        let (x, p) = (2 * mode, 2 * mode + 1);
        for col in 0..dim {
            m[(x, col)] = s[(p, col)];
            m[(p, col)] = -s[(x, col)];
        }
    }
    m
}
