//! The `verify` command: one runnable suite per module invariant, a
//! pass/fail line each, exit status zero only when everything passes.
//!
//! Suites are registered in the static table below; the `cli::registry-coverage`
//! suite (and a unit test) asserts the table carries the expected number of
//! suites per module, so a forgotten invariant fails the build rather than
//! silently shrinking coverage.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::time::Instant;

use gaugekit_core::basis::{CMatrix, CompositeBasis, OperatorMatrix};
use gaugekit_core::dicke_finite::{self, DickeFiniteParams};
use gaugekit_core::dicke_thermo::{self, ThermoParams};
use gaugekit_core::dipole1d::{self, Grid1d, Potential, PotentialSpec};
use gaugekit_core::hopfield::{self, HopfieldParams};
use gaugekit_core::operators::{
    lowest_eigenvalues, spin_operators, unitary_from_generator,
};
use gaugekit_core::quadratic::{
    diagonalize_quadratic, BosonMode, CouplingForm, QuadraticBosonModel,
};
use gaugekit_core::Gauge;

type SuiteResult = Result<String, String>;

pub struct Suite {
    pub module: &'static str,
    pub name: &'static str,
    pub run: fn() -> SuiteResult,
}

/// (module, number of registered suites); the registry must match.
pub const EXPECTED_COVERAGE: &[(&str, usize)] = &[
    ("operator-core", 5),
    ("dipole1d", 4),
    ("dicke-finite", 4),
    ("dicke-thermo", 5),
    ("hopfield", 4),
    ("cli", 3),
];

pub const SUITES: &[Suite] = &[
    Suite { module: "operator-core", name: "su2-commutators", run: su2_commutators },
    Suite { module: "operator-core", name: "spectral-exp-consistency", run: spectral_exp_consistency },
    Suite { module: "operator-core", name: "decoupled-exact", run: decoupled_exact },
    Suite { module: "operator-core", name: "characteristic-roots", run: characteristic_roots },
    Suite { module: "operator-core", name: "gauge-pair-identity", run: gauge_pair_identity },
    Suite { module: "dipole1d", name: "nonlocality-monotone", run: nonlocality_monotone },
    Suite { module: "dipole1d", name: "trk-convergence", run: trk_convergence },
    Suite { module: "dipole1d", name: "grid-stability", run: grid_stability },
    Suite { module: "dipole1d", name: "parity-selection", run: parity_selection },
    Suite { module: "dicke-finite", name: "gauge-equivalence", run: finite_gauge_equivalence },
    Suite { module: "dicke-finite", name: "gauge-violation-monotone", run: finite_gauge_violation },
    Suite { module: "dicke-finite", name: "parity-commutation", run: finite_parity },
    Suite { module: "dicke-finite", name: "eta-continuity", run: finite_eta_continuity },
    Suite { module: "dicke-thermo", name: "characteristic-identities", run: thermo_characteristic },
    Suite { module: "dicke-thermo", name: "standard-sum-identity", run: thermo_standard_sum },
    Suite { module: "dicke-thermo", name: "printed-cg-matches-oracle", run: thermo_printed_cg },
    Suite { module: "dicke-thermo", name: "stability-range", run: thermo_stability },
    Suite { module: "dicke-thermo", name: "limit-unitary-convergence", run: thermo_limit_unitary },
    Suite { module: "hopfield", name: "gauge-invariance-grid", run: hopfield_gauge_grid },
    Suite { module: "hopfield", name: "dielectric-identity", run: hopfield_dielectric },
    Suite { module: "hopfield", name: "anticrossing", run: hopfield_anticrossing },
    Suite { module: "hopfield", name: "lambda-scaling", run: hopfield_lambda_scaling },
    Suite { module: "cli", name: "output-determinism", run: cli_determinism },
    Suite { module: "cli", name: "config-round-trip", run: cli_round_trip },
    Suite { module: "cli", name: "registry-coverage", run: registry_coverage },
];

/// Run every suite, print one line per suite, return true when all passed.
pub fn run_all() -> bool {
    let mut all_ok = true;
    for suite in SUITES {
        let started = Instant::now();
        let result = (suite.run)();
        let elapsed = started.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("[ ok ] {}::{} ({elapsed:.2}s) {msg}", suite.module, suite.name),
            Err(msg) => {
                all_ok = false;
                println!("[FAIL] {}::{} ({elapsed:.2}s) {msg}", suite.module, suite.name);
            }
        }
    }
    all_ok
}

fn check(ok: bool, msg: String) -> SuiteResult {
    if ok {
        Ok(String::new())
    } else {
        Err(msg)
    }
}

// ------------------------------------------------------------ operator-core

fn su2_commutators() -> SuiteResult {
    let mut worst = 0.0f64;
    for two_j in 1..=20u32 {
        let s = spin_operators(two_j).map_err(|e| e.to_string())?;
        for (a, b, c) in [(&s.jx, &s.jy, &s.jz), (&s.jy, &s.jz, &s.jx), (&s.jz, &s.jx, &s.jy)] {
            let lhs = a.commutator(b).map_err(|e| e.to_string())?;
            let rhs = c.scaled(Complex64::new(0.0, 1.0));
            worst = worst.max(lhs.max_diff(&rhs).map_err(|e| e.to_string())?);
        }
    }
    check(worst < 1e-13, format!("su(2) defect {worst:.2e} (tol 1e-13)"))
        .map(|_| format!("max defect {worst:.2e} over j <= 10"))
}

fn random_hermitian(dim: usize, seed: u64) -> OperatorMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    OperatorMatrix::new(CompositeBasis::fock(dim - 1), m).expect("square matrix")
}

/// Independent exp(iG): Taylor series with scaling and squaring.
fn expm_series(g: &CMatrix) -> CMatrix {
    let n = g.nrows();
    let ig = g.map(|z| z * Complex64::new(0.0, 1.0));
    let norm = ig.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let s = norm.log2().ceil().max(0.0) as u32 + 1;
    let a = ig / Complex64::new(2f64.powi(s as i32), 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    let mut out = sum;
    for _ in 0..s {
        out = &out * &out;
    }
    out
}

fn spectral_exp_consistency() -> SuiteResult {
    let mut worst = 0.0f64;
    for (dim, seed) in [(8usize, 21u64), (32, 22), (64, 23)] {
        let g = random_hermitian(dim, seed);
        let u = unitary_from_generator(&g).map_err(|e| e.to_string())?;
        let series = expm_series(g.entries());
        for (a, b) in u.entries().iter().zip(series.iter()) {
            worst = worst.max((a - b).norm());
        }
    }
    check(worst < 1e-10, format!("exp mismatch {worst:.2e} (tol 1e-10)"))
        .map(|_| format!("max mismatch {worst:.2e} up to dim 64"))
}

fn decoupled_exact() -> SuiteResult {
    for &(wa, wb) in &[(1.0, 0.5), (0.3, 2.0), (1.0, 1.0)] {
        let m = QuadraticBosonModel {
            omega_a: wa,
            omega_b: wb,
            coupling: 0.0,
            quad_coeff: 0.0,
            quad_on: BosonMode::A,
            coupling_form: CouplingForm::PaXb,
        };
        let p = diagonalize_quadratic(&m);
        if p.lower != wa.min(wb) || p.upper != wa.max(wb) {
            return Err(format!("decoupled model returned ({}, {})", p.lower, p.upper));
        }
    }
    Ok("bare frequencies bit-exact".to_string())
}

fn characteristic_roots() -> SuiteResult {
    let mut worst = 0.0f64;
    for &wx in &[0.5, 0.8, 1.0, 1.5] {
        for i in 0..=20 {
            let lam = 0.1 * i as f64;
            for (form, quad_on, q) in [
                (CouplingForm::PaXb, BosonMode::B, 1.0 * lam * lam),
                (CouplingForm::XaPb, BosonMode::A, wx * lam * lam),
                (CouplingForm::XaPb, BosonMode::A, 2.0 * wx * lam * lam),
            ] {
                let m = QuadraticBosonModel {
                    omega_a: 1.0,
                    omega_b: wx,
                    coupling: lam,
                    quad_coeff: q,
                    quad_on,
                    coupling_form: form,
                };
                let p = diagonalize_quadratic(&m);
                if !p.stable {
                    return Err(format!("unexpected instability at wx={wx}, lam={lam}"));
                }
                let (s1, s0) = m.characteristic_coefficients();
                let scale = (s1 * s1).max(s0.abs()).max(1.0);
                for w in [p.lower, p.upper] {
                    let mu = w * w;
                    worst = worst.max((mu * mu - s1 * mu + s0).abs() / scale);
                }
            }
        }
    }
    check(worst < 1e-9, format!("polynomial residual {worst:.2e} (tol 1e-9)"))
        .map(|_| format!("max residual {worst:.2e}"))
}

fn gauge_pair_identity() -> SuiteResult {
    let mut worst = 0.0f64;
    for &wx in &[0.5, 0.8, 1.0, 1.5] {
        for i in 0..=200 {
            let lam = 0.01 * i as f64;
            let d = diagonalize_quadratic(&QuadraticBosonModel {
                omega_a: 1.0,
                omega_b: wx,
                coupling: lam,
                quad_coeff: 1.0 * lam * lam,
                quad_on: BosonMode::B,
                coupling_form: CouplingForm::PaXb,
            });
            let c = diagonalize_quadratic(&QuadraticBosonModel {
                omega_a: 1.0,
                omega_b: wx,
                coupling: lam,
                quad_coeff: wx * lam * lam,
                quad_on: BosonMode::A,
                coupling_form: CouplingForm::XaPb,
            });
            worst = worst.max((d.lower - c.lower).abs()).max((d.upper - c.upper).abs());
        }
    }
    check(worst < 1e-10, format!("gauge pair split {worst:.2e} (tol 1e-10)"))
        .map(|_| format!("max split {worst:.2e}"))
}

// ------------------------------------------------------------ dipole1d

fn kernel_spec() -> PotentialSpec {
    PotentialSpec {
        kinetic_coeff: 1.0,
        potential: Potential::QuarticWell { beta: 3.95, gamma: 2.08 },
        grid: Grid1d::new(-5.0, 5.0, 501),
    }
}

fn nonlocality_monotone() -> SuiteResult {
    let spec = kernel_spec();
    let s = dipole1d::solve_bound_states(&spec, 10).map_err(|e| e.to_string())?;
    let mut fractions = Vec::new();
    for n in 2..=10usize {
        let k = dipole1d::nonlocal_kernel(&s, &spec, n).map_err(|e| e.to_string())?;
        fractions.push(k.off_diagonal_fraction(3));
    }
    let mut report = String::new();
    for (i, f) in fractions.iter().enumerate() {
        let _ = write!(report, "n={}: {:.4} ", i + 2, f);
    }
    for w in fractions.windows(2) {
        if w[1] > w[0] + 1e-12 {
            return Err(format!(
                "off-diagonal fraction increases ({:.4} -> {:.4}); sequence: {report}",
                w[0], w[1]
            ));
        }
    }
    Ok(report)
}

fn trk_convergence() -> SuiteResult {
    let spec = PotentialSpec {
        kinetic_coeff: 1.0,
        potential: Potential::QuarticWell { beta: 3.95, gamma: 2.08 },
        grid: Grid1d::new(-6.0, 6.0, 3001),
    };
    let s = dipole1d::solve_bound_states(&spec, 16).map_err(|e| e.to_string())?;
    let mut prev = f64::INFINITY;
    for n_terms in 1..16 {
        let r = dipole1d::trk_residual(&s, n_terms).map_err(|e| e.to_string())?;
        if r > prev + 1e-12 {
            return Err(format!("residual increased to {r:.3e} at n_terms={n_terms}"));
        }
        prev = r;
    }
    check(prev < 1e-2, format!("converged residual {prev:.3e} (tol 1e-2)"))
        .map(|_| format!("residual {prev:.3e} with 15 transitions"))
}

fn grid_stability() -> SuiteResult {
    let spec = PotentialSpec {
        kinetic_coeff: 1.0,
        potential: Potential::QuarticWell { beta: 3.95, gamma: 2.08 },
        grid: Grid1d::new(-6.0, 6.0, 8001),
    };
    let a = dipole1d::solve_bound_states(&spec, 2).map_err(|e| e.to_string())?;
    let refined = PotentialSpec { grid: spec.grid.refined(), ..spec };
    let b = dipole1d::solve_bound_states(&refined, 2).map_err(|e| e.to_string())?;
    let rel = ((a.transition_frequency(1, 0) - b.transition_frequency(1, 0))
        / a.transition_frequency(1, 0))
        .abs();
    check(rel < 1e-6, format!("omega_10 moved {rel:.2e} on refinement (tol 1e-6)"))
        .map(|_| format!("omega_10 drift {rel:.2e}"))
}

fn parity_selection() -> SuiteResult {
    let spec = kernel_spec();
    let s = dipole1d::solve_bound_states(&spec, 8).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for k in 0..8usize {
        for j in 0..8usize {
            if (k + j) % 2 == 0 && k != j {
                worst = worst.max(s.dipole(k, j).abs());
            }
        }
    }
    worst = worst.max(s.dipole(0, 0).abs()).max(s.dipole(1, 1).abs());
    check(worst < 1e-8, format!("parity-forbidden element {worst:.2e} (tol 1e-8)"))
        .map(|_| format!("largest forbidden element {worst:.2e}"))
}

// ------------------------------------------------------------ dicke-finite

const FINITE_ETAS: [f64; 4] = [0.1, 0.3, 0.5, 1.0];

fn finite_gauge_equivalence() -> SuiteResult {
    let mut worst = 0.0f64;
    for n in 1..=3u32 {
        for &eta in &FINITE_ETAS {
            let (p, _) = dicke_finite::converge_cutoff(&DickeFiniteParams::new(n, 1.0, 1.0, eta), 6)
                .map_err(|e| e.to_string())?;
            let r = dicke_finite::compare_spectra(&p, Gauge::GiCoulomb, Gauge::Dipole, 6)
                .map_err(|e| e.to_string())?;
            match r.max_converged_diff() {
                Some(d) => worst = worst.max(d),
                None => return Err(format!("no converged levels at N={n}, eta={eta}")),
            }
        }
    }
    check(worst < 1e-6, format!("gi vs dipole split {worst:.2e} (tol 1e-6)"))
        .map(|_| format!("max converged split {worst:.2e}"))
}

fn finite_gauge_violation() -> SuiteResult {
    for n in 1..=3u32 {
        let mut prev = 0.0f64;
        for &eta in &FINITE_ETAS {
            let (p, _) = dicke_finite::converge_cutoff(&DickeFiniteParams::new(n, 1.0, 1.0, eta), 6)
                .map_err(|e| e.to_string())?;
            let r = dicke_finite::compare_spectra(&p, Gauge::StandardCoulomb, Gauge::Dipole, 6)
                .map_err(|e| e.to_string())?;
            let dev = r.levels.iter().map(|l| l.abs_diff).fold(0.0f64, f64::max);
            if dev <= prev {
                return Err(format!(
                    "deviation not increasing at N={n}, eta={eta}: {dev:.3e} after {prev:.3e}"
                ));
            }
            if eta >= 0.5 && dev < 1e-2 {
                return Err(format!("deviation {dev:.3e} below 1e-2 at N={n}, eta={eta}"));
            }
            prev = dev;
        }
    }
    Ok("deviation monotone in eta for N = 1..3".to_string())
}

fn finite_parity() -> SuiteResult {
    let p = DickeFiniteParams::new(2, 1.0, 1.0, 0.8).with_n_max(16);
    let set = dicke_finite::build_all(&p).map_err(|e| e.to_string())?;
    let parity = dicke_finite::generalized_parity(&p).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for h in [&set.standard_cg, &set.gi_cg, &set.dg] {
        worst = worst.max(h.commutator(&parity).map_err(|e| e.to_string())?.max_abs());
    }
    check(worst < 1e-10, format!("parity commutator {worst:.2e} (tol 1e-10)"))
        .map(|_| format!("max commutator {worst:.2e}"))
}

fn finite_eta_continuity() -> SuiteResult {
    let detuned = |eta: f64| {
        let mut p = DickeFiniteParams::new(2, 1.0, 1.0, eta).with_n_max(16);
        p.omega_x = 0.77;
        p
    };
    let bare = lowest_eigenvalues(
        &dicke_finite::build_bare(&detuned(0.0)).map_err(|e| e.to_string())?,
        4,
    )
    .map_err(|e| e.to_string())?;
    for gauge in [Gauge::StandardCoulomb, Gauge::GiCoulomb, Gauge::Dipole] {
        let shift = |eta: f64| -> Result<f64, String> {
            let h = dicke_finite::build(&detuned(eta), gauge).map_err(|e| e.to_string())?;
            let l = lowest_eigenvalues(&h, 4).map_err(|e| e.to_string())?;
            Ok(l.iter().zip(&bare).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max))
        };
        let s1 = shift(0.01)?;
        let s2 = shift(0.04)?;
        if s2 / s1 > 16.0 * 1.3 {
            return Err(format!("{gauge:?}: shift ratio {} above the quadratic bound", s2 / s1));
        }
    }
    Ok("all spectra converge quadratically in eta".to_string())
}

// ------------------------------------------------------------ dicke-thermo

fn thermo_characteristic() -> SuiteResult {
    let mut worst = 0.0f64;
    for &wx in &[0.5, 0.8, 1.0, 1.5] {
        for i in 0..=40 {
            let lam = 0.05 * i as f64;
            for gauge in [Gauge::Dipole, Gauge::GiCoulomb] {
                let pair = dicke_thermo::branches(&ThermoParams::new(1.0, wx, lam, gauge))
                    .map_err(|e| e.to_string())?;
                let sum = pair.lower.powi(2) + pair.upper.powi(2);
                let product = pair.lower.powi(2) * pair.upper.powi(2);
                worst = worst
                    .max((sum - (1.0 + wx * wx + 4.0 * lam * lam * wx)).abs())
                    .max((product - wx * wx).abs());
            }
        }
    }
    check(worst < 1e-9, format!("identity residual {worst:.2e} (tol 1e-9)"))
        .map(|_| format!("max residual {worst:.2e}"))
}

fn thermo_standard_sum() -> SuiteResult {
    let mut worst = 0.0f64;
    for &wx in &[0.5, 0.8, 1.0, 1.5] {
        for i in 0..=40 {
            let lam = 0.05 * i as f64;
            let p = ThermoParams::new(1.0, wx, lam, Gauge::StandardCoulomb);
            let pair = dicke_thermo::branches(&p).map_err(|e| e.to_string())?;
            let sum = pair.lower.powi(2) + pair.upper.powi(2);
            worst = worst.max((sum - (1.0 + wx * wx + 4.0 * p.diamagnetic_coeff())).abs());
        }
    }
    check(worst < 1e-9, format!("sum identity residual {worst:.2e} (tol 1e-9)"))
        .map(|_| format!("max residual {worst:.2e}"))
}

fn thermo_printed_cg() -> SuiteResult {
    let mut worst = 0.0f64;
    for &wx in &[0.5, 0.8, 1.0, 1.5] {
        for i in 0..=100 {
            let lam = 0.02 * i as f64;
            let p = ThermoParams::new(1.0, wx, lam, Gauge::GiCoulomb);
            let printed = dicke_thermo::closed_form_cg(&p).map_err(|e| e.to_string())?;
            let oracle = dicke_thermo::branches(&p).map_err(|e| e.to_string())?;
            worst = worst
                .max((printed.lower - oracle.lower).abs())
                .max((printed.upper - oracle.upper).abs());
        }
    }
    check(worst < 1e-10, format!("printed form split {worst:.2e} (tol 1e-10)"))
        .map(|_| format!("max split {worst:.2e}"))
}

fn thermo_stability() -> SuiteResult {
    for &wx in &[0.5, 0.8, 1.0, 1.5] {
        for &alpha in &[1.0, 1.5, 2.0] {
            for i in 0..=40 {
                let lam = 0.05 * i as f64;
                for gauge in [Gauge::Dipole, Gauge::GiCoulomb, Gauge::StandardCoulomb] {
                    let mut p = ThermoParams::new(1.0, wx, lam, gauge);
                    p.alpha = alpha;
                    let pair = dicke_thermo::branches(&p).map_err(|e| e.to_string())?;
                    if !pair.stable {
                        return Err(format!(
                            "soft mode at gauge={gauge:?}, wx={wx}, alpha={alpha}, lambda={lam}"
                        ));
                    }
                }
            }
        }
    }
    Ok("stable for lambda <= 2, alpha >= 1".to_string())
}

fn thermo_limit_unitary() -> SuiteResult {
    // moderate coupling: converged match
    let p03 = ThermoParams::new(1.0, 1.0, 0.3, Gauge::GiCoulomb);
    let pair = dicke_thermo::branches(&p03).map_err(|e| e.to_string())?;
    let predicted = dicke_thermo::predicted_gaps(&pair, 2);
    let gaps = dicke_thermo::limit_unitary_gaps(&p03, 16, 2).map_err(|e| e.to_string())?;
    let err03 = gaps
        .iter()
        .zip(&predicted)
        .map(|(g, e)| (g - e).abs())
        .fold(0.0f64, f64::max);
    if err03 > 1e-4 {
        return Err(format!("gap error {err03:.2e} at lambda=0.3, cutoff=16 (tol 1e-4)"));
    }
    // strong coupling: monotone error decrease over doubled cutoffs
    let p20 = ThermoParams::new(1.0, 1.0, 2.0, Gauge::GiCoulomb);
    let pair = dicke_thermo::branches(&p20).map_err(|e| e.to_string())?;
    let predicted = dicke_thermo::predicted_gaps(&pair, 2);
    let mut errors = Vec::new();
    for cutoff in [12usize, 24, 48] {
        let gaps = dicke_thermo::limit_unitary_gaps(&p20, cutoff, 2).map_err(|e| e.to_string())?;
        errors.push(
            gaps.iter()
                .zip(&predicted)
                .map(|(g, e)| (g - e).abs())
                .fold(0.0f64, f64::max),
        );
    }
    if !(errors[0] > errors[1] && errors[1] > errors[2]) {
        return Err(format!("errors not decreasing over cutoff doublings: {errors:?}"));
    }
    Ok(format!(
        "lambda=0.3 error {err03:.1e}; lambda=2 errors {:.1e} > {:.1e} > {:.1e}",
        errors[0], errors[1], errors[2]
    ))
}

// ------------------------------------------------------------ hopfield

fn hopfield_grid(beta: f64) -> Result<HopfieldParams, String> {
    let freqs: Vec<f64> = (0..20)
        .map(|i| 0.1 * (50.0f64).powf(i as f64 / 19.0))
        .collect();
    HopfieldParams::new(1.0, beta, freqs).map_err(|e| e.to_string())
}

fn hopfield_gauge_grid() -> SuiteResult {
    let mut worst = 0.0f64;
    for &beta in &[0.01, 0.1, 0.5, 1.0] {
        let p = hopfield_grid(beta)?;
        for k in 0..p.n_modes() {
            let cg = hopfield::block_branches(&p, k, Gauge::GiCoulomb).map_err(|e| e.to_string())?;
            let dg = hopfield::block_branches(&p, k, Gauge::Dipole).map_err(|e| e.to_string())?;
            worst = worst
                .max((cg.lower - dg.lower).abs())
                .max((cg.upper - dg.upper).abs());
        }
    }
    check(worst < 1e-10, format!("per-mode gauge split {worst:.2e} (tol 1e-10)"))
        .map(|_| format!("max split {worst:.2e}"))
}

fn hopfield_dielectric() -> SuiteResult {
    let mut worst = 0.0f64;
    for &beta in &[0.01, 0.1, 0.5, 1.0] {
        let p = hopfield_grid(beta)?;
        for row in hopfield::polariton_dispersion(&p).map_err(|e| e.to_string())? {
            for branch in [row.lower, row.upper] {
                worst = worst.max(hopfield::dielectric_identity_residual(&p, row.omega_k, branch));
            }
        }
    }
    check(worst < 1e-8, format!("dispersion identity residual {worst:.2e} (tol 1e-8)"))
        .map(|_| format!("max residual {worst:.2e}"))
}

fn hopfield_anticrossing() -> SuiteResult {
    for &beta in &[0.01, 0.1, 0.5, 1.0] {
        let p = hopfield_grid(beta)?;
        let min_gap = hopfield::polariton_dispersion(&p)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|r| r.upper - r.lower)
            .fold(f64::INFINITY, f64::min);
        if min_gap <= 0.0 {
            return Err(format!("branches touch at beta={beta}"));
        }
    }
    Ok("minimum branch separation positive for beta > 0".to_string())
}

fn hopfield_lambda_scaling() -> SuiteResult {
    let p = hopfield_grid(0.36)?;
    let c0 = p.lambda_k[0] * p.dispersion[0].sqrt();
    for k in 0..p.n_modes() {
        let c = p.lambda_k[k] * p.dispersion[k].sqrt();
        if (c - c0).abs() > 1e-14 {
            return Err(format!("Lambda_k sqrt(omega_k) drifts: {c} vs {c0}"));
        }
    }
    if p.coupling_defect() != 0.0 {
        return Err("stored couplings disagree with their defining combination".to_string());
    }
    Ok("Lambda_k proportional to 1/sqrt(omega_k), defect 0".to_string())
}

// ------------------------------------------------------------ cli

fn small_thermo_run() -> crate::config::DickeThermoRun {
    crate::config::DickeThermoConfig {
        wx: Some(0.8),
        lambda: Some("0:1:0.1".to_string()),
        ..Default::default()
    }
    .resolve()
    .expect("valid test config")
}

fn cli_determinism() -> SuiteResult {
    let run = small_thermo_run();
    let a = crate::run::run_dicke_thermo(&run).map_err(|e| e.to_string())?;
    let b = crate::run::run_dicke_thermo(&run).map_err(|e| e.to_string())?;
    if a != b {
        return Err("identical config produced different CSV bytes".to_string());
    }
    Ok(format!("{} bytes reproduced exactly", a.len()))
}

fn cli_round_trip() -> SuiteResult {
    let mut run = small_thermo_run();
    run.format = crate::config::OutputFormat::Json;
    let json_out = crate::run::run_dicke_thermo(&run).map_err(|e| e.to_string())?;
    let value: serde_json::Value = serde_json::from_str(&json_out).map_err(|e| e.to_string())?;
    let config_section = value.get("config").ok_or("output JSON lacks a config key")?;
    let reparsed: crate::config::DickeThermoConfig =
        serde_json::from_value(config_section.clone()).map_err(|e| e.to_string())?;
    let rerun = reparsed.resolve().map_err(|e| e.to_string())?;
    let replay = crate::run::run_dicke_thermo(&rerun).map_err(|e| e.to_string())?;
    if replay != json_out {
        return Err("re-ingested config did not reproduce the output".to_string());
    }
    Ok("JSON output replays byte-identically".to_string())
}

fn registry_coverage() -> SuiteResult {
    for &(module, expected) in EXPECTED_COVERAGE {
        let found = SUITES.iter().filter(|s| s.module == module).count();
        if found != expected {
            return Err(format!("module {module}: {found} suites registered, expected {expected}"));
        }
    }
    let total: usize = EXPECTED_COVERAGE.iter().map(|(_, n)| n).sum();
    if SUITES.len() != total {
        return Err(format!("{} suites registered, expected {total}", SUITES.len()));
    }
    Ok(format!("{total} suites registered"))
}
