//! Finite-N Dicke Hamiltonians on the photon ⊗ collective-spin space.
//!
//! Three builders share one basis (Fock cutoff n_max ⊗ spin j = N/2):
//!
//! * [`build_standard_cg`]: the two-level truncation of the minimally
//!   coupled Hamiltonian,
//!   ω_c a†a + ω_x (J_z + j) + 2 ω_x η (a + a†) J_y + D (a + a†)²;
//!   its spectrum is gauge dependent.
//! * [`build_gi_cg`]: the truncation that also rotates the nonlocal
//!   two-level potential,
//!   ω_c a†a + j ω_x + ω_x { J_z cos[2η(a + a†)] + J_y sin[2η(a + a†)] },
//!   unitarily equivalent to the dipole form.
//! * [`build_dg`]: the dipole-gauge Hamiltonian
//!   ω_c a†a + ω_x (J_z + j) + 2 η ω_c i(a† − a) J_x + 4 η² ω_c J_x²,
//!   self-polarization term included.
//!
//! All spectra are reported with a cutoff-convergence certificate: a level
//! counts as converged when it moves by less than 1e-8 ω_c under
//! n_max → n_max + 8.

use serde::Serialize;

use crate::basis::OperatorMatrix;
use crate::error::{CoreError, Result};
use crate::operators::{
    annihilator, exp_i_product, field_sum, hermitian_cos, hermitian_sin, lowest_eigenvalues,
    number, spin_operators, tensor,
};
use crate::Gauge;
use num_complex::Complex64;

/// Default cap on the composite dimension (n_max + 1)(N + 1).
pub const DEFAULT_DIM_CAP: usize = 4096;
/// A level counts as cutoff-converged when it moves less than this times ω_c
/// under n_max → n_max + 8.
pub const CONVERGENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DickeFiniteParams {
    pub n_dipoles: u32,
    pub omega_c: f64,
    pub omega_x: f64,
    pub eta: f64,
    /// Ratio D / (N ω_x η²) used when no explicit coefficient is supplied.
    pub alpha: f64,
    /// Explicit diamagnetic coefficient; overrides `alpha` when set (e.g.
    /// ingested from a solved dipole spectrum).
    pub diamagnetic: Option<f64>,
    pub n_max: usize,
    pub dim_cap: usize,
}

impl DickeFiniteParams {
    pub fn new(n_dipoles: u32, omega_c: f64, omega_x: f64, eta: f64) -> Self {
        DickeFiniteParams {
            n_dipoles,
            omega_c,
            omega_x,
            eta,
            alpha: 2.0,
            diamagnetic: None,
            n_max: default_cutoff(n_dipoles, eta),
            dim_cap: DEFAULT_DIM_CAP,
        }
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn j(&self) -> f64 {
        self.n_dipoles as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1) * (self.n_dipoles as usize + 1)
    }

    /// D: explicit value if supplied, otherwise α N ω_x η².
    pub fn diamagnetic_coeff(&self) -> f64 {
        self.diamagnetic
            .unwrap_or(self.alpha * self.n_dipoles as f64 * self.omega_x * self.eta * self.eta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_dipoles < 1 {
            return Err(CoreError::invalid("n_dipoles", "need at least one dipole"));
        }
        if !self.omega_c.is_finite() || self.omega_c <= 0.0 {
            return Err(CoreError::invalid("omega_c", "must be positive"));
        }
        if !self.omega_x.is_finite() || self.omega_x <= 0.0 {
            return Err(CoreError::invalid("omega_x", "must be positive"));
        }
        if self.eta < 0.0 || !self.eta.is_finite() {
            return Err(CoreError::invalid("eta", "must be non-negative and finite"));
        }
        if self.alpha < 1.0 {
            return Err(CoreError::invalid("alpha", "must be at least 1"));
        }
        if self.n_max < 2 {
            return Err(CoreError::invalid("n_max", "need a Fock cutoff of at least 2"));
        }
        if self.dim() > self.dim_cap {
            return Err(CoreError::DimensionCap {
                dim: self.dim(),
                cap: self.dim_cap,
            });
        }
        Ok(())
    }
}

/// Cutoff start of the growth policy: the gauge unitary populates roughly
/// (2η√j)² photons, so seed with max(16, ⌈40 η² N⌉).
pub fn default_cutoff(n_dipoles: u32, eta: f64) -> usize {
    (40.0 * eta * eta * n_dipoles as f64).ceil().max(16.0) as usize
}

struct Workspace {
    photon_number: OperatorMatrix,
    field: OperatorMatrix,
    jx: OperatorMatrix,
    jy: OperatorMatrix,
    jz: OperatorMatrix,
    spin_identity: OperatorMatrix,
    photon_identity: OperatorMatrix,
}

fn workspace(p: &DickeFiniteParams) -> Result<Workspace> {
    p.validate()?;
    let spin = spin_operators(p.n_dipoles)?;
    Ok(Workspace {
        photon_number: number(p.n_max)?,
        field: field_sum(p.n_max)?,
        spin_identity: OperatorMatrix::identity(spin.jz.basis().clone()),
        photon_identity: OperatorMatrix::identity(crate::basis::CompositeBasis::fock(p.n_max)),
        jx: spin.jx,
        jy: spin.jy,
        jz: spin.jz,
    })
}

/// ω_c a†a + ω_x (J_z + j) on the composite basis (η = 0 limit of all three
/// gauges; ground energy zero).
pub fn build_bare(p: &DickeFiniteParams) -> Result<OperatorMatrix> {
    let w = workspace(p)?;
    bare_from(&w, p)
}

fn bare_from(w: &Workspace, p: &DickeFiniteParams) -> Result<OperatorMatrix> {
    let photon = tensor(&w.photon_number.scaled_re(p.omega_c), &w.spin_identity);
    let matter = tensor(
        &w.photon_identity,
        &w.jz.add(&w.spin_identity.scaled_re(p.j()))?.scaled_re(p.omega_x),
    );
    photon.add(&matter)
}

/// Standard (gauge-violating) Coulomb-gauge Dicke Hamiltonian.
pub fn build_standard_cg(p: &DickeFiniteParams) -> Result<OperatorMatrix> {
    let w = workspace(p)?;
    let bare = bare_from(&w, p)?;
    let paramagnetic = tensor(&w.field, &w.jy).scaled_re(2.0 * p.omega_x * p.eta);
    let diamagnetic = tensor(&w.field.mul(&w.field)?, &w.spin_identity)
        .scaled_re(p.diamagnetic_coeff());
    bare.add(&paramagnetic)?.add(&diamagnetic)
}

/// Gauge-invariant Coulomb-gauge Dicke Hamiltonian (pseudospin rotation by
/// the field-dependent angle 2η(a + a†), trig functions by spectral
/// calculus on the photon factor).
pub fn build_gi_cg(p: &DickeFiniteParams) -> Result<OperatorMatrix> {
    let w = workspace(p)?;
    let angle = w.field.scaled_re(2.0 * p.eta);
    let cos_op = hermitian_cos(&angle)?;
    let sin_op = hermitian_sin(&angle)?;
    let photon = tensor(&w.photon_number.scaled_re(p.omega_c), &w.spin_identity);
    let offset = tensor(&w.photon_identity, &w.spin_identity).scaled_re(p.j() * p.omega_x);
    let rotated = tensor(&cos_op, &w.jz)
        .add(&tensor(&sin_op, &w.jy))?
        .scaled_re(p.omega_x);
    photon.add(&offset)?.add(&rotated)
}

/// Dipole-gauge Dicke Hamiltonian with the self-polarization term 4η²ω_c J_x².
///
/// An alternative truncation folds the intra-atom self-polarization pieces
/// (∝ x_i²) into the atomic potential before diagonalizing it, renormalizing
/// ω_x and η. That route truncates the interaction terms at inconsistent
/// orders and loses accuracy at strong coupling, so it is noted here but not
/// provided as a fourth builder; the J_x² form below keeps every term at the
/// same truncation level (its i = j contributions only shift all levels
/// rigidly).
pub fn build_dg(p: &DickeFiniteParams) -> Result<OperatorMatrix> {
    let w = workspace(p)?;
    let bare = bare_from(&w, p)?;
    let a = annihilator(p.n_max)?;
    // i(a† − a)
    let momentum = a.dagger().sub(&a)?.scaled(Complex64::new(0.0, 1.0));
    let coupling = tensor(&momentum, &w.jx).scaled_re(2.0 * p.eta * p.omega_c);
    let self_pol = tensor(&w.photon_identity, &w.jx.mul(&w.jx)?)
        .scaled_re(4.0 * p.eta * p.eta * p.omega_c);
    bare.add(&coupling)?.add(&self_pol)
}

/// Gauge unitary 𝒰 = exp[2iη(a + a†) J_x], built from the factor spectral
/// decompositions.
pub fn build_gauge_unitary(p: &DickeFiniteParams) -> Result<OperatorMatrix> {
    let w = workspace(p)?;
    exp_i_product(&w.field.scaled_re(2.0 * p.eta), &w.jx)
}

/// Cross-check construction of the gauge-invariant Coulomb Hamiltonian:
/// 𝒰 (bare matter) 𝒰† + ω_c a†a.
pub fn build_gi_cg_via_unitary(p: &DickeFiniteParams) -> Result<OperatorMatrix> {
    let w = workspace(p)?;
    let u = exp_i_product(&w.field.scaled_re(2.0 * p.eta), &w.jx)?;
    let matter = tensor(
        &w.photon_identity,
        &w.jz.add(&w.spin_identity.scaled_re(p.j()))?.scaled_re(p.omega_x),
    );
    let photon = tensor(&w.photon_number.scaled_re(p.omega_c), &w.spin_identity);
    matter.conjugate_by(&u)?.add(&photon)
}

/// Generalized parity exp[iπ(a†a + J_z + j)]: diagonal ±1, commutes with all
/// three Hamiltonians.
pub fn generalized_parity(p: &DickeFiniteParams) -> Result<OperatorMatrix> {
    let w = workspace(p)?;
    let n_ph = p.n_max + 1;
    let n_sp = p.n_dipoles as usize + 1;
    let mut m = crate::basis::CMatrix::zeros(n_ph * n_sp, n_ph * n_sp);
    for n in 0..n_ph {
        for s in 0..n_sp {
            let idx = n * n_sp + s;
            let sign = if (n + s) % 2 == 0 { 1.0 } else { -1.0 };
            m[(idx, idx)] = Complex64::new(sign, 0.0);
        }
    }
    OperatorMatrix::new(w.photon_identity.basis().join(w.spin_identity.basis()), m)
}

/// One Hamiltonian of the requested gauge at the parameters' cutoff.
pub fn build(p: &DickeFiniteParams, gauge: Gauge) -> Result<OperatorMatrix> {
    match gauge {
        Gauge::StandardCoulomb => build_standard_cg(p),
        Gauge::GiCoulomb => build_gi_cg(p),
        Gauge::Dipole => build_dg(p),
    }
}

/// All three Hamiltonians plus the gauge unitary on one shared basis.
pub struct GaugeHamiltonianSet {
    pub standard_cg: OperatorMatrix,
    pub gi_cg: OperatorMatrix,
    pub dg: OperatorMatrix,
    pub unitary: OperatorMatrix,
}

pub fn build_all(p: &DickeFiniteParams) -> Result<GaugeHamiltonianSet> {
    let set = GaugeHamiltonianSet {
        standard_cg: build_standard_cg(p)?,
        gi_cg: build_gi_cg(p)?,
        dg: build_dg(p)?,
        unitary: build_gauge_unitary(p)?,
    };
    debug_assert!(set.standard_cg.hermiticity_error() < 1e-11);
    debug_assert!(set.gi_cg.hermiticity_error() < 1e-11);
    debug_assert!(set.dg.hermiticity_error() < 1e-11);
    debug_assert!(set.unitary.unitarity_error() < 1e-10);
    Ok(set)
}

/// Per-level comparison of two spectra with convergence certificates.
#[derive(Debug, Clone, Serialize)]
pub struct LevelComparison {
    pub level: usize,
    pub value_a: f64,
    pub value_b: f64,
    pub abs_diff: f64,
    pub converged_a: bool,
    pub converged_b: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub gauge_a: Gauge,
    pub gauge_b: Gauge,
    pub n_max: usize,
    /// False when the dimension cap blocked the n_max + 8 recheck; levels are
    /// then flagged unconverged rather than failing.
    pub certificate_available: bool,
    pub levels: Vec<LevelComparison>,
}

impl SpectrumReport {
    pub fn max_converged_diff(&self) -> Option<f64> {
        self.levels
            .iter()
            .filter(|l| l.converged_a && l.converged_b)
            .map(|l| l.abs_diff)
            .fold(None, |acc, d| Some(acc.map_or(d, |m: f64| m.max(d))))
    }
}

/// Lowest `m` levels of two gauges with per-level differences and the
/// n_max → n_max + 8 convergence certificate.
pub fn compare_spectra(
    p: &DickeFiniteParams,
    gauge_a: Gauge,
    gauge_b: Gauge,
    m: usize,
) -> Result<SpectrumReport> {
    let la = lowest_eigenvalues(&build(p, gauge_a)?, m)?;
    let lb = lowest_eigenvalues(&build(p, gauge_b)?, m)?;
    let grown = DickeFiniteParams {
        n_max: p.n_max + 8,
        ..*p
    };
    let certificate = if grown.dim() <= grown.dim_cap {
        Some((
            lowest_eigenvalues(&build(&grown, gauge_a)?, m)?,
            lowest_eigenvalues(&build(&grown, gauge_b)?, m)?,
        ))
    } else {
        None
    };
    let tol = CONVERGENCE_TOL * p.omega_c;
    let levels = (0..m)
        .map(|i| {
            let (va, vb, ca, cb) = match &certificate {
                Some((ga, gb)) => (
                    ga[i],
                    gb[i],
                    (ga[i] - la[i]).abs() < tol,
                    (gb[i] - lb[i]).abs() < tol,
                ),
                None => (la[i], lb[i], false, false),
            };
            LevelComparison {
                level: i,
                value_a: va,
                value_b: vb,
                abs_diff: (va - vb).abs(),
                converged_a: ca,
                converged_b: cb,
            }
        })
        .collect();
    Ok(SpectrumReport {
        gauge_a,
        gauge_b,
        n_max: p.n_max,
        certificate_available: certificate.is_some(),
        levels,
    })
}

/// Grow the cutoff by 8 from the policy seed until the lowest `m` levels of
/// all three gauges move by less than 1e-8 ω_c, respecting the dimension
/// cap. Returns the converged parameters and whether convergence was
/// certified before the cap.
pub fn converge_cutoff(p: &DickeFiniteParams, m: usize) -> Result<(DickeFiniteParams, bool)> {
    let mut current = *p;
    current.validate()?;
    let tol = CONVERGENCE_TOL * p.omega_c;
    let mut prev: Option<[Vec<f64>; 3]> = None;
    loop {
        let levels = [
            lowest_eigenvalues(&build_standard_cg(&current)?, m)?,
            lowest_eigenvalues(&build_gi_cg(&current)?, m)?,
            lowest_eigenvalues(&build_dg(&current)?, m)?,
        ];
        if let Some(old) = &prev {
            let moved = old
                .iter()
                .zip(&levels)
                .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
                .fold(0.0f64, f64::max);
            if moved < tol {
                return Ok((current, true));
            }
        }
        let grown = DickeFiniteParams {
            n_max: current.n_max + 8,
            ..current
        };
        if grown.dim() > grown.dim_cap {
            return Ok((current, false));
        }
        prev = Some(levels);
        current = grown;
    }
}

/// Spectra of all three gauges side by side (CSV/JSON export payload).
#[derive(Debug, Clone, Serialize)]
pub struct GaugeSpectra {
    pub params: DickeFiniteParams,
    pub standard_cg: Vec<f64>,
    pub gi_cg: Vec<f64>,
    pub dg: Vec<f64>,
    pub converged: Vec<bool>,
}

pub fn gauge_spectra(p: &DickeFiniteParams, m: usize) -> Result<GaugeSpectra> {
    let std_cg = lowest_eigenvalues(&build_standard_cg(p)?, m)?;
    let gi = lowest_eigenvalues(&build_gi_cg(p)?, m)?;
    let dg = lowest_eigenvalues(&build_dg(p)?, m)?;
    let grown = DickeFiniteParams {
        n_max: p.n_max + 8,
        ..*p
    };
    let tol = CONVERGENCE_TOL * p.omega_c;
    let converged = if grown.dim() <= grown.dim_cap {
        let checks = [
            lowest_eigenvalues(&build_standard_cg(&grown)?, m)?,
            lowest_eigenvalues(&build_gi_cg(&grown)?, m)?,
            lowest_eigenvalues(&build_dg(&grown)?, m)?,
        ];
        (0..m)
            .map(|i| {
                (checks[0][i] - std_cg[i]).abs() < tol
                    && (checks[1][i] - gi[i]).abs() < tol
                    && (checks[2][i] - dg[i]).abs() < tol
            })
            .collect()
    } else {
        vec![false; m]
    };
    Ok(GaugeSpectra {
        params: *p,
        standard_cg: std_cg,
        gi_cg: gi,
        dg,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::eig_sym;
    use approx::assert_abs_diff_eq;

    fn params(n: u32, eta: f64, n_max: usize) -> DickeFiniteParams {
        DickeFiniteParams::new(n, 1.0, 1.0, eta).with_n_max(n_max)
    }

    #[test]
    fn eta_zero_gives_bare_spectrum_and_zero_ground() {
        let p = params(2, 0.0, 8);
        for gauge in [Gauge::StandardCoulomb, Gauge::GiCoulomb, Gauge::Dipole] {
            let h = build(&p, gauge).unwrap();
            let bare = build_bare(&p).unwrap();
            assert!(h.max_diff(&bare).unwrap() < 1e-12, "{gauge:?} at eta=0");
            let levels = lowest_eigenvalues(&h, 4).unwrap();
            assert_abs_diff_eq!(levels[0], 0.0, epsilon = 1e-12);
        }
        // decoupled spectrum is { ω_c n + ω_x (j_z + j) }
        let levels = lowest_eigenvalues(&build_dg(&p).unwrap(), 5).unwrap();
        let expect = [0.0, 1.0, 1.0, 2.0, 2.0];
        for (l, e) in levels.iter().zip(expect) {
            assert_abs_diff_eq!(*l, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn hamiltonians_hermitian_unitary_unitary() {
        let p = params(2, 0.7, 20);
        let set = build_all(&p).unwrap();
        assert!(set.standard_cg.hermiticity_error() < 1e-12);
        assert!(set.gi_cg.hermiticity_error() < 1e-11);
        assert!(set.dg.hermiticity_error() < 1e-12);
        assert!(set.unitary.unitarity_error() < 1e-10);
    }

    #[test]
    fn gauge_unitary_identity_at_zero_coupling() {
        let p = params(2, 0.0, 8);
        let u = build_gauge_unitary(&p).unwrap();
        let id = OperatorMatrix::identity(u.basis().clone());
        assert!(u.max_diff(&id).unwrap() < 1e-13);
    }

    /// The trig-form and unitary-form constructions of the gauge-invariant
    /// Coulomb Hamiltonian coincide at any cutoff: the pseudospin rotation
    /// identity holds factor-wise for the truncated field operator.
    #[test]
    fn construction_paths_agree() {
        let p = params(2, 0.5, 24);
        let trig = build_gi_cg(&p).unwrap();
        let unit = build_gi_cg_via_unitary(&p).unwrap();
        assert!(trig.max_diff(&unit).unwrap() < 1e-10);
    }

    #[test]
    fn standard_cg_violates_gauge_for_single_dipole() {
        let p = params(1, 0.3, 24);
        let std_cg = lowest_eigenvalues(&build_standard_cg(&p).unwrap(), 4).unwrap();
        let dg = lowest_eigenvalues(&build_dg(&p).unwrap(), 4).unwrap();
        let dev = std_cg
            .iter()
            .zip(&dg)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(dev > 1e-2, "expected a visible gauge violation, got {dev:.3e}");
    }

    #[test]
    fn self_polarization_term_matters() {
        let p = params(2, 1.0, 48);
        let full = build_dg(&p).unwrap();
        let spin = spin_operators(2).unwrap();
        let jx2 = tensor(
            &OperatorMatrix::identity(crate::basis::CompositeBasis::fock(p.n_max)),
            &spin.jx.mul(&spin.jx).unwrap(),
        )
        .scaled_re(4.0 * p.eta * p.eta * p.omega_c);
        let without = full.sub(&jx2).unwrap();
        let g_full = lowest_eigenvalues(&full, 1).unwrap()[0];
        let g_without = lowest_eigenvalues(&without, 1).unwrap()[0];
        assert!(
            (g_full - g_without).abs() > 0.1,
            "dropping J_x² barely moved the ground energy: {g_full} vs {g_without}"
        );
    }

    /// 𝒯 H_gi 𝒯† action approaches H_dg on a fixed interior block as the
    /// cutoff grows.
    #[test]
    fn conjugated_gi_cg_approaches_dg_with_cutoff() {
        let probe = 10usize; // photon levels of the fixed comparison block
        let mut prev = f64::INFINITY;
        for n_max in [16usize, 24, 32] {
            let p = params(2, 0.5, n_max);
            let set = build_all(&p).unwrap();
            let t = set.unitary.dagger();
            let conj = set.gi_cg.conjugate_by(&t).unwrap();
            let n_sp = 3;
            let block = probe * n_sp;
            let mut worst = 0.0f64;
            for i in 0..block {
                for j in 0..block {
                    worst = worst
                        .max((conj.entries()[(i, j)] - set.dg.entries()[(i, j)]).norm());
                }
            }
            assert!(
                worst < prev * 1.00001,
                "interior mismatch grew at n_max={n_max}: {worst:.3e} after {prev:.3e}"
            );
            prev = worst;
        }
        assert!(prev < 1e-8, "converged interior mismatch {prev:.3e}");
    }

    #[test]
    fn parity_commutes_with_all_three() {
        let p = params(2, 0.8, 16);
        let set = build_all(&p).unwrap();
        let parity = generalized_parity(&p).unwrap();
        for (h, name) in [
            (&set.standard_cg, "standard_cg"),
            (&set.gi_cg, "gi_cg"),
            (&set.dg, "dg"),
        ] {
            let comm = h.commutator(&parity).unwrap();
            assert!(comm.max_abs() < 1e-10, "[{name}, P] = {:.2e}", comm.max_abs());
        }
    }

    /// η → 0 continuity. Away from bare degeneracies every level shifts
    /// quadratically; at exact resonance the degenerate excited levels split
    /// linearly (vacuum Rabi splitting), so the quadratic bound is checked
    /// on a detuned spectrum plus the resonant ground state.
    #[test]
    fn spectra_shift_quadratically_in_eta() {
        let m = 4;
        let detuned = |eta: f64| {
            let mut p = params(2, eta, 16);
            p.omega_x = 0.77;
            p
        };
        let bare = lowest_eigenvalues(&build_bare(&detuned(0.0)).unwrap(), m).unwrap();
        for gauge in [Gauge::StandardCoulomb, Gauge::GiCoulomb, Gauge::Dipole] {
            let shift = |eta: f64| -> f64 {
                let levels = lowest_eigenvalues(&build(&detuned(eta), gauge).unwrap(), m).unwrap();
                levels
                    .iter()
                    .zip(&bare)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            };
            let s1 = shift(0.01);
            let s2 = shift(0.04);
            // quadratic onset: quadrupling η multiplies the shift by ~16x
            assert!(s2 / s1 < 16.0 * 1.3, "{gauge:?}: ratio {}", s2 / s1);
            assert!(s1 < 2e-3, "{gauge:?}: shift {s1} at eta=0.01");
        }
        // resonant ground state stays quadratic
        let ground = |eta: f64| -> f64 {
            lowest_eigenvalues(&build_dg(&params(2, eta, 16)).unwrap(), 1).unwrap()[0].abs()
        };
        assert!(ground(0.04) / ground(0.01) < 16.0 * 1.3);
    }

    #[test]
    fn compare_spectra_identical_gauges() {
        let p = params(2, 0.5, 24);
        let r = compare_spectra(&p, Gauge::Dipole, Gauge::Dipole, 4).unwrap();
        assert!(r.levels.iter().all(|l| l.abs_diff == 0.0));
    }

    #[test]
    fn compare_spectra_gi_vs_dg() {
        let (p, certified) = converge_cutoff(&DickeFiniteParams::new(2, 1.0, 1.0, 0.5), 6).unwrap();
        assert!(certified);
        let r = compare_spectra(&p, Gauge::GiCoulomb, Gauge::Dipole, 6).unwrap();
        let worst = r.max_converged_diff().expect("some levels converged");
        assert!(worst < 1e-6, "gi vs dg converged diff {worst:.3e}");
        let v = compare_spectra(&p, Gauge::StandardCoulomb, Gauge::Dipole, 6).unwrap();
        let best = v
            .levels
            .iter()
            .map(|l| l.abs_diff)
            .fold(0.0f64, f64::max);
        assert!(best > 1e-2, "standard cg suspiciously close to dg: {best:.3e}");
    }

    #[test]
    fn dimension_cap_enforced() {
        let p = DickeFiniteParams::new(3, 1.0, 1.0, 1.0).with_n_max(2000);
        assert!(matches!(
            p.validate(),
            Err(CoreError::DimensionCap { .. })
        ));
    }

    #[test]
    fn eig_sym_on_dicke_hamiltonian_residuals() {
        let p = params(1, 0.4, 12);
        let h = build_dg(&p).unwrap();
        let (vals, vecs) = eig_sym(&h).unwrap();
        let scale = h.max_abs();
        for k in 0..vals.len() {
            let v = vecs.column(k);
            let r = h.entries() * v - v * Complex64::new(vals[k], 0.0);
            let worst = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(worst < 1e-10 * scale);
        }
    }
}
