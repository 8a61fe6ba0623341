//! Single effective-dipole problem in one adimensional coordinate:
//! bound states of H = E_k p̃²/2 + V(x̃), dipole matrix elements, the
//! oscillator-strength (TRK) sum, truncated nonlocal potential kernels, and
//! the coupling constants derived from them.
//!
//! Discretization: second-order central finite differences with Dirichlet
//! boundaries, trapezoidal quadrature for all matrix elements. Charge and
//! mass are absorbed into the adimensional form (q = m = 1), so the TRK sum
//! Σ_k ω_{k,0} d_{k,0}² saturates at E_k/2.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::tridiag::SymTridiag;

/// Uniform 1D grid including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1d {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid1d {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Self {
        Grid1d { x_min, x_max, n_points }
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.point(i))
    }

    /// Trapezoidal quadrature weight of point i.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n_points {
            self.dx() / 2.0
        } else {
            self.dx()
        }
    }

    /// Same extent, intervals halved (n → 2n − 1 points).
    pub fn refined(&self) -> Grid1d {
        Grid1d {
            x_min: self.x_min,
            x_max: self.x_max,
            n_points: 2 * self.n_points - 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_points < 201 {
            return Err(CoreError::invalid(
                "n_points",
                format!("need at least 201 grid points, got {}", self.n_points),
            ));
        }
        if !(self.x_max - self.x_min).is_finite() || self.x_max <= self.x_min {
            return Err(CoreError::invalid("grid", "x_max must exceed x_min"));
        }
        Ok(())
    }
}

/// Confining potential in the adimensional coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Potential {
    /// V(x̃) = E_k [ −(β/2) x̃² + (γ/4) x̃⁴ ]
    QuarticWell { beta: f64, gamma: f64 },
    /// V(x̃) = E_k x̃²/2  (validation spectrum E_k (n + 1/2))
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSpec {
    pub kinetic_coeff: f64,
    pub potential: Potential,
    pub grid: Grid1d,
}

impl PotentialSpec {
    /// Quartic double well with the default grid x̃ ∈ [−4, 4], 2001 points.
    pub fn double_well(beta: f64, gamma: f64) -> Self {
        PotentialSpec {
            kinetic_coeff: 1.0,
            potential: Potential::QuarticWell { beta, gamma },
            grid: Grid1d::new(-4.0, 4.0, 2001),
        }
    }

    pub fn harmonic() -> Self {
        PotentialSpec {
            kinetic_coeff: 1.0,
            potential: Potential::Harmonic,
            grid: Grid1d::new(-8.0, 8.0, 16001),
        }
    }

    pub fn value_at(&self, x: f64) -> f64 {
        match self.potential {
            Potential::QuarticWell { beta, gamma } => {
                self.kinetic_coeff * (-(beta / 2.0) * x * x + (gamma / 4.0) * x.powi(4))
            }
            Potential::Harmonic => self.kinetic_coeff * x * x / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if !self.kinetic_coeff.is_finite() || self.kinetic_coeff <= 0.0 {
            return Err(CoreError::invalid("kinetic_coeff", "must be positive"));
        }
        if let Potential::QuarticWell { gamma, .. } = self.potential {
            if !gamma.is_finite() || gamma <= 0.0 {
                return Err(CoreError::invalid(
                    "gamma",
                    "quartic coefficient must be positive for a confining well",
                ));
            }
        }
        Ok(())
    }

    fn hamiltonian(&self) -> SymTridiag {
        let n = self.grid.n_points;
        let dx = self.grid.dx();
        let kin = self.kinetic_coeff / (dx * dx);
        let diag: Vec<f64> = self.grid.points().map(|x| kin + self.value_at(x)).collect();
        let off = vec![-kin / 2.0; n - 1];
        SymTridiag::new(diag, off)
    }
}

/// Largest allowed wavefunction amplitude at the grid boundary, relative to
/// the state's maximum.
const BOUNDARY_LIMIT: f64 = 1e-6;

/// Bound states of one [`PotentialSpec`].
#[derive(Debug, Clone)]
pub struct ParticleSpectrum {
    energies: Vec<f64>,
    /// Row k holds ψ_k on the grid, L²-normalized under trapezoidal weights.
    wavefunctions: DMatrix<f64>,
    dipole: DMatrix<f64>,
    kinetic_coeff: f64,
    grid: Grid1d,
    /// Per-state: eigenvalue moved < 1e-6·E_k when the grid was refined.
    grid_converged: Vec<bool>,
}

impl ParticleSpectrum {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    /// Value of ψ_k at grid point i.
    pub fn psi(&self, k: usize, i: usize) -> f64 {
        self.wavefunctions[(k, i)]
    }

    pub fn wavefunctions(&self) -> &DMatrix<f64> {
        &self.wavefunctions
    }

    /// Dipole matrix element d_{k,j} = ⟨ψ_k| x |ψ_j⟩ (q = 1).
    pub fn dipole(&self, k: usize, j: usize) -> f64 {
        self.dipole[(k, j)]
    }

    /// Transition frequency ω_{k,j} = (E_k − E_j) / ħ, ħ = 1.
    pub fn transition_frequency(&self, k: usize, j: usize) -> f64 {
        self.energies[k] - self.energies[j]
    }

    pub fn kinetic_coeff(&self) -> f64 {
        self.kinetic_coeff
    }

    pub fn grid(&self) -> Grid1d {
        self.grid
    }

    pub fn grid_converged(&self) -> &[bool] {
        &self.grid_converged
    }

    /// |⟨ψ_k|ψ_j⟩ − δ_kj| maximized over pairs (diagnostic).
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.n_states();
        let mut worst = 0.0f64;
        for k in 0..n {
            for j in k..n {
                let mut dot = 0.0;
                for i in 0..self.grid.n_points {
                    dot += self.grid.weight(i)
                        * self.wavefunctions[(k, i)]
                        * self.wavefunctions[(j, i)];
                }
                let target = if k == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Lowest `n_states` bound states by finite differences.
///
/// Rejects grids whose boundary amplitudes exceed 1e-6 of each retained
/// state's maximum, suggesting a wider extent instead of returning
/// contaminated eigenpairs.
pub fn solve_bound_states(spec: &PotentialSpec, n_states: usize) -> Result<ParticleSpectrum> {
    spec.validate()?;
    if n_states == 0 {
        return Err(CoreError::invalid("n_states", "need at least one state"));
    }
    if n_states * 10 > spec.grid.n_points {
        return Err(CoreError::invalid(
            "n_states",
            format!(
                "{n_states} states on {} points leaves too few points per node; refine the grid",
                spec.grid.n_points
            ),
        ));
    }

    let h = spec.hamiltonian();
    let (energies, raw) = h.lowest_eigenpairs(n_states);
    let n = spec.grid.n_points;

    // trapezoid-normalize and fix phases
    let mut wf = DMatrix::zeros(n_states, n);
    for (k, v) in raw.iter().enumerate() {
        let norm: f64 = (0..n).map(|i| spec.grid.weight(i) * v[i] * v[i]).sum();
        let s = norm.sqrt();
        for i in 0..n {
            wf[(k, i)] = v[i] / s;
        }
    }
    // sign convention: d_{k,0} >= 0; parity-null elements fall back to the
    // first significant component being positive
    for k in 0..n_states {
        let mut d_k0 = 0.0;
        for i in 0..n {
            d_k0 += spec.grid.weight(i) * wf[(k, i)] * spec.grid.point(i) * wf[(0, i)];
        }
        let flip = if d_k0.abs() > 1e-10 {
            d_k0 < 0.0
        } else {
            let mut lead = 0.0;
            for i in 0..n {
                if wf[(k, i)].abs() > 1e-3 {
                    lead = wf[(k, i)];
                    break;
                }
            }
            lead < 0.0
        };
        if flip {
            for i in 0..n {
                wf[(k, i)] = -wf[(k, i)];
            }
        }
    }

    // boundary contamination check
    for k in 0..n_states {
        let peak = (0..n).map(|i| wf[(k, i)].abs()).fold(0.0, f64::max);
        let edge = wf[(k, 0)].abs().max(wf[(k, n - 1)].abs());
        if edge > BOUNDARY_LIMIT * peak {
            let half = 0.75 * (spec.grid.x_max - spec.grid.x_min);
            let mid = 0.5 * (spec.grid.x_max + spec.grid.x_min);
            return Err(CoreError::GridTooSmall {
                state: k,
                amplitude: edge / peak,
                suggested_min: mid - half,
                suggested_max: mid + half,
            });
        }
    }

    // dipole matrix (symmetric, real)
    let mut dipole = DMatrix::zeros(n_states, n_states);
    for k in 0..n_states {
        for j in k..n_states {
            let mut d = 0.0;
            for i in 0..n {
                d += spec.grid.weight(i) * wf[(k, i)] * spec.grid.point(i) * wf[(j, i)];
            }
            dipole[(k, j)] = d;
            dipole[(j, k)] = d;
        }
    }

    // grid-convergence certificate: eigenvalues on the interval-halved grid
    let refined = PotentialSpec {
        grid: spec.grid.refined(),
        ..*spec
    };
    let refined_vals = refined.hamiltonian().lowest_eigenvalues(n_states);
    let tol = 1e-6 * spec.kinetic_coeff;
    let grid_converged = energies
        .iter()
        .zip(&refined_vals)
        .map(|(a, b)| (a - b).abs() < tol)
        .collect();

    Ok(ParticleSpectrum {
        energies,
        wavefunctions: wf,
        dipole,
        kinetic_coeff: spec.kinetic_coeff,
        grid: spec.grid,
        grid_converged,
    })
}

/// [`solve_bound_states`] with automatic extent growth: every time the
/// boundary check rejects, the grid is widened by 1.5x at fixed resolution.
/// Returns the spectrum together with the spec that finally succeeded.
pub fn solve_bound_states_auto(
    spec: &PotentialSpec,
    n_states: usize,
    max_extensions: usize,
) -> Result<(ParticleSpectrum, PotentialSpec)> {
    let mut current = *spec;
    for _ in 0..=max_extensions {
        match solve_bound_states(&current, n_states) {
            Ok(s) => return Ok((s, current)),
            Err(CoreError::GridTooSmall {
                suggested_min,
                suggested_max,
                ..
            }) => {
                let dx = current.grid.dx();
                let n = ((suggested_max - suggested_min) / dx).round() as usize + 1;
                current.grid = Grid1d::new(suggested_min, suggested_max, n);
            }
            Err(e) => return Err(e),
        }
    }
    solve_bound_states(&current, n_states).map(|s| (s, current))
}

/// Relative defect of the truncated oscillator-strength sum:
/// |Σ_{k≤n_terms} ω_{k,0} d_{k,0}² − E_k/2| / (E_k/2).
pub fn trk_residual(spectrum: &ParticleSpectrum, n_terms: usize) -> Result<f64> {
    if n_terms >= spectrum.n_states() {
        return Err(CoreError::invalid(
            "n_terms",
            format!(
                "requested {n_terms} transitions but only {} excited states are available",
                spectrum.n_states() - 1
            ),
        ));
    }
    let c = spectrum.kinetic_coeff() / 2.0;
    let mut sum = 0.0;
    for k in 1..=n_terms {
        let d = spectrum.dipole(k, 0);
        sum += spectrum.transition_frequency(k, 0) * d * d;
    }
    Ok((sum - c).abs() / c)
}

/// Truncated potential kernel W_n(x, x′) = Σ_{k,k′<n} ψ_k(x) V_{kk′} ψ_{k′}(x′).
#[derive(Debug, Clone)]
pub struct NonlocalKernel {
    pub n_levels: usize,
    pub kernel: DMatrix<f64>,
    pub grid: Grid1d,
}

impl NonlocalKernel {
    /// max |W(x,x′) − W(x′,x)|
    pub fn symmetry_error(&self) -> f64 {
        let n = self.kernel.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.kernel[(i, j)] - self.kernel[(j, i)]).abs());
            }
        }
        worst
    }

    /// Fraction of squared kernel mass beyond `band_steps` grid steps from
    /// the diagonal: Σ_{|i−j|>w} W² / Σ W².
    pub fn off_diagonal_fraction(&self, band_steps: usize) -> f64 {
        let n = self.kernel.nrows();
        let mut total = 0.0;
        let mut far = 0.0;
        for i in 0..n {
            for j in 0..n {
                let w2 = self.kernel[(i, j)] * self.kernel[(i, j)];
                total += w2;
                if i.abs_diff(j) > band_steps {
                    far += w2;
                }
            }
        }
        if total == 0.0 {
            0.0
        } else {
            far / total
        }
    }
}

/// Kernel of the potential projected onto the lowest `n_levels` states.
pub fn nonlocal_kernel(
    spectrum: &ParticleSpectrum,
    spec: &PotentialSpec,
    n_levels: usize,
) -> Result<NonlocalKernel> {
    if n_levels == 0 || n_levels > spectrum.n_states() {
        return Err(CoreError::invalid(
            "n_levels",
            format!(
                "need 1..={} retained levels, got {n_levels}",
                spectrum.n_states()
            ),
        ));
    }
    if spec.grid != spectrum.grid() {
        return Err(CoreError::invalid(
            "grid",
            "potential spec and spectrum were built on different grids",
        ));
    }
    let n = spec.grid.n_points;
    // V_{kk'} under trapezoidal quadrature
    let mut vkk = DMatrix::zeros(n_levels, n_levels);
    for k in 0..n_levels {
        for kp in k..n_levels {
            let mut v = 0.0;
            for i in 0..n {
                v += spec.grid.weight(i)
                    * spectrum.wavefunctions()[(k, i)]
                    * spec.value_at(spec.grid.point(i))
                    * spectrum.wavefunctions()[(kp, i)];
            }
            vkk[(k, kp)] = v;
            vkk[(kp, k)] = v;
        }
    }
    let psi = spectrum.wavefunctions().rows(0, n_levels).into_owned();
    let kernel = psi.transpose() * vkk * psi;
    Ok(NonlocalKernel {
        n_levels,
        kernel,
        grid: spec.grid,
    })
}

/// Coupling constants of one dipole species in a field of zero-point
/// amplitude `a0`: η_k = A₀ d_{k,0} and the diamagnetic coefficient
/// D = N Σ_k ω_{k,0} η_k² over the retained transitions.
#[derive(Debug, Clone, Serialize)]
pub struct DerivedCouplings {
    pub n_dipoles: u32,
    pub zero_point_amplitude: f64,
    pub eta_k: Vec<f64>,
    pub diamagnetic: f64,
    /// ω_{k,0} η_k² per retained transition, k = 1…n_transitions.
    pub per_transition_terms: Vec<f64>,
}

impl DerivedCouplings {
    /// η ≡ η₁, the coupling of the lowest transition.
    pub fn eta(&self) -> f64 {
        self.eta_k[0]
    }

    /// Ratio of the full diamagnetic sum to the single-transition term.
    pub fn alpha(&self) -> f64 {
        let single = self.n_dipoles as f64 * self.per_transition_terms[0];
        self.diamagnetic / single
    }
}

pub fn derive_couplings(
    spectrum: &ParticleSpectrum,
    a0: f64,
    n_dipoles: u32,
    n_transitions: usize,
) -> Result<DerivedCouplings> {
    if n_transitions == 0 || n_transitions >= spectrum.n_states() {
        return Err(CoreError::invalid(
            "n_transitions",
            format!(
                "need 1..={} transitions, got {n_transitions}",
                spectrum.n_states() - 1
            ),
        ));
    }
    if n_dipoles == 0 {
        return Err(CoreError::invalid("n_dipoles", "need at least one dipole"));
    }
    let mut eta_k = Vec::with_capacity(n_transitions);
    let mut terms = Vec::with_capacity(n_transitions);
    for k in 1..=n_transitions {
        let eta = a0 * spectrum.dipole(k, 0);
        eta_k.push(eta);
        terms.push(spectrum.transition_frequency(k, 0) * eta * eta);
    }
    let diamagnetic = n_dipoles as f64 * terms.iter().sum::<f64>();
    Ok(DerivedCouplings {
        n_dipoles,
        zero_point_amplitude: a0,
        eta_k,
        diamagnetic,
        per_transition_terms: terms,
    })
}
