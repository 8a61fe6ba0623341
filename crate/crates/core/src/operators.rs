//! Ladder and collective-spin operators, tensor products, and Hermitian
//! spectral calculus.
//!
//! Conventions used throughout the crate (ħ = 1):
//!   a|n⟩ = √n |n−1⟩ on the truncated Fock space,
//!   x = (a + a†)/√2,  p = i(a† − a)/√2,  [x, p] = i,
//!   J± = Jx ± iJy with ⟨m±1|J±|m⟩ = √(j(j+1) − m(m±1)),
//! and the spin basis ascending in j_z. Truncation necessarily breaks
//! [a, a†] = 1 on the last Fock level; identities are checked on the
//! sub-block that excludes it.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::basis::{CMatrix, CompositeBasis, OperatorMatrix};
use crate::error::{CoreError, Result};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Annihilation operator on the Fock space with cutoff `n_max`:
/// entries a[n−1, n] = √n.
pub fn annihilator(n_max: usize) -> Result<OperatorMatrix> {
    if n_max < 1 {
        return Err(CoreError::invalid(
            "n_max",
            format!("Fock cutoff must be at least 1, got {n_max}"),
        ));
    }
    let dim = n_max + 1;
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = c((n as f64).sqrt());
    }
    OperatorMatrix::new(CompositeBasis::fock(n_max), m)
}

/// Creation operator a† on the truncated Fock space.
pub fn creator(n_max: usize) -> Result<OperatorMatrix> {
    Ok(annihilator(n_max)?.dagger())
}

/// Number operator a†a (diagonal 0, 1, …, n_max).
pub fn number(n_max: usize) -> Result<OperatorMatrix> {
    if n_max < 1 {
        return Err(CoreError::invalid(
            "n_max",
            format!("Fock cutoff must be at least 1, got {n_max}"),
        ));
    }
    let dim = n_max + 1;
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..dim {
        m[(n, n)] = c(n as f64);
    }
    OperatorMatrix::new(CompositeBasis::fock(n_max), m)
}

/// a + a† (the field coordinate up to a factor √2).
pub fn field_sum(n_max: usize) -> Result<OperatorMatrix> {
    let a = annihilator(n_max)?;
    a.add(&a.dagger())
}

/// Collective angular momentum matrices on the spin-j multiplet, 2j = `two_j`.
pub struct SpinOperators {
    pub jx: OperatorMatrix,
    pub jy: OperatorMatrix,
    pub jz: OperatorMatrix,
}

/// Spin operators in the |j, j_z⟩ basis with j_z ascending (−j first).
pub fn spin_operators(two_j: u32) -> Result<SpinOperators> {
    if two_j < 1 {
        return Err(CoreError::invalid("two_j", "need 2j >= 1"));
    }
    let j = two_j as f64 / 2.0;
    let dim = two_j as usize + 1;
    let basis = CompositeBasis::spin(two_j);

    let mut jz = CMatrix::zeros(dim, dim);
    let mut jp = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        let m = -j + k as f64;
        jz[(k, k)] = c(m);
        if k + 1 < dim {
            jp[(k + 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);

    Ok(SpinOperators {
        jx: OperatorMatrix::new(basis.clone(), jx)?,
        jy: OperatorMatrix::new(basis.clone(), jy)?,
        jz: OperatorMatrix::new(basis, jz)?,
    })
}

/// Validates that `j` is a half-integer and dispatches to [`spin_operators`].
pub fn spin_operators_from_j(j: f64) -> Result<SpinOperators> {
    let two_j = 2.0 * j;
    if two_j < 1.0 || (two_j - two_j.round()).abs() > 1e-12 {
        return Err(CoreError::invalid(
            "j",
            format!("j must be a positive half-integer, got {j}"),
        ));
    }
    spin_operators(two_j.round() as u32)
}

/// Kronecker product A ⊗ B; the result's basis is the factor concatenation.
pub fn tensor(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let basis = a.basis().join(b.basis());
    let entries = a.entries().kronecker(b.entries());
    OperatorMatrix::new(basis, entries).expect("kronecker dims consistent")
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub fn eig_sym(h: &OperatorMatrix) -> Result<(DVector<f64>, CMatrix)> {
    let scale = h.max_abs().max(1.0);
    let dev = h.hermiticity_error();
    if dev > 1e-10 * scale {
        return Err(CoreError::NotHermitian {
            deviation: dev,
            dim: h.dim(),
        });
    }
    Ok(eig_sym_unchecked(h.entries()))
}

pub(crate) fn eig_sym_unchecked(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let se = m.clone().symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// f(H) for Hermitian H via the spectral decomposition V f(Λ) V†.
pub fn hermitian_function(
    h: &OperatorMatrix,
    f: impl Fn(f64) -> Complex64,
) -> Result<OperatorMatrix> {
    let (vals, vecs) = eig_sym(h)?;
    let n = vals.len();
    let mut fl = CMatrix::zeros(n, n);
    for i in 0..n {
        fl[(i, i)] = f(vals[i]);
    }
    let m = &vecs * fl * vecs.adjoint();
    OperatorMatrix::new(h.basis().clone(), m)
}

/// cos(H) for Hermitian H.
pub fn hermitian_cos(h: &OperatorMatrix) -> Result<OperatorMatrix> {
    hermitian_function(h, |x| c(x.cos()))
}

/// sin(H) for Hermitian H.
pub fn hermitian_sin(h: &OperatorMatrix) -> Result<OperatorMatrix> {
    hermitian_function(h, |x| c(x.sin()))
}

/// exp(iG) for a Hermitian generator G; unitary by construction.
pub fn unitary_from_generator(g: &OperatorMatrix) -> Result<OperatorMatrix> {
    hermitian_function(g, |x| Complex64::new(0.0, x).exp())
}

/// exp(i A ⊗ B) for Hermitian A, B on separate factors, built from the two
/// factor spectral decompositions. Much cheaper than exponentiating on the
/// composite space.
pub fn exp_i_product(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    let (wa, va) = eig_sym(a)?;
    let (wb, vb) = eig_sym(b)?;
    let (na, nb) = (wa.len(), wb.len());
    let v = va.kronecker(&vb);
    let mut phases = CMatrix::zeros(na * nb, na * nb);
    for i in 0..na {
        for k in 0..nb {
            let idx = i * nb + k;
            phases[(idx, idx)] = Complex64::new(0.0, wa[i] * wb[k]).exp();
        }
    }
    let m = &v * phases * v.adjoint();
    OperatorMatrix::new(a.basis().join(b.basis()), m)
}

/// Lowest `m` eigenvalues of a Hermitian operator, ascending.
pub fn lowest_eigenvalues(h: &OperatorMatrix, m: usize) -> Result<Vec<f64>> {
    let scale = h.max_abs().max(1.0);
    let dev = h.hermiticity_error();
    if dev > 1e-10 * scale {
        return Err(CoreError::NotHermitian {
            deviation: dev,
            dim: h.dim(),
        });
    }
    let mut vals: Vec<f64> = h
        .entries()
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals.truncate(m);
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisFactor;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(dim: usize, seed: u64) -> OperatorMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = c(rng.random_range(-1.0..1.0));
            for j in (i + 1)..dim {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        OperatorMatrix::new(CompositeBasis::fock(dim - 1), m).unwrap()
    }

    #[test]
    fn two_level_ladder() {
        let a = annihilator(1).unwrap();
        assert_eq!(a.entries()[(0, 1)], c(1.0));
        assert_eq!(a.entries()[(0, 0)], c(0.0));
        assert_eq!(a.entries()[(1, 0)], c(0.0));
        assert_eq!(a.entries()[(1, 1)], c(0.0));
    }

    #[test]
    fn ladder_entries_sqrt_n() {
        let a = annihilator(2).unwrap();
        assert_abs_diff_eq!(a.entries()[(0, 1)].re, 1.0);
        assert_abs_diff_eq!(a.entries()[(1, 2)].re, 2.0f64.sqrt());
    }

    #[test]
    fn rejects_tiny_cutoff() {
        assert!(annihilator(0).is_err());
    }

    /// [a, a†] = I away from the truncation boundary.
    #[test]
    fn fock_commutator_interior() {
        let a = annihilator(12).unwrap();
        let comm = a.commutator(&a.dagger()).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((comm.entries()[(i, j)] - c(target)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn spin_half_is_half_pauli() {
        let s = spin_operators(1).unwrap();
        assert_abs_diff_eq!(s.jx.entries()[(0, 1)].re, 0.5);
        assert_abs_diff_eq!(s.jx.entries()[(1, 0)].re, 0.5);
        assert_abs_diff_eq!(s.jz.entries()[(0, 0)].re, -0.5);
        assert_abs_diff_eq!(s.jz.entries()[(1, 1)].re, 0.5);
    }

    #[test]
    fn jz_eigenvalues_spin_three_half() {
        let s = spin_operators(3).unwrap();
        let (vals, _) = eig_sym(&s.jz).unwrap();
        let expect = [-1.5, -0.5, 0.5, 1.5];
        for (v, e) in vals.iter().zip(expect) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-14);
        }
    }

    /// su(2): [Jα, Jβ] = i ε_{αβγ} Jγ for all j up to 10.
    #[test]
    fn su2_commutators_up_to_j10() {
        for two_j in 1..=20u32 {
            let s = spin_operators(two_j).unwrap();
            let checks = [
                (&s.jx, &s.jy, &s.jz),
                (&s.jy, &s.jz, &s.jx),
                (&s.jz, &s.jx, &s.jy),
            ];
            for (a, b, target) in checks {
                let lhs = a.commutator(b).unwrap();
                let rhs = target.scaled(Complex64::new(0.0, 1.0));
                assert!(
                    lhs.max_diff(&rhs).unwrap() < 1e-13,
                    "su(2) violated at 2j = {two_j}"
                );
            }
        }
    }

    #[test]
    fn half_integer_validation() {
        assert!(spin_operators_from_j(0.75).is_err());
        assert!(spin_operators_from_j(1.5).is_ok());
    }

    #[test]
    fn tensor_of_identities() {
        let i2 = OperatorMatrix::identity(CompositeBasis::fock(1));
        let i3 = OperatorMatrix::identity(CompositeBasis::spin(2));
        let t = tensor(&i2, &i3);
        assert_eq!(t.dim(), 6);
        assert!(t.max_diff(&OperatorMatrix::identity(t.basis().clone())).unwrap() < 1e-15);
        assert_eq!(
            t.basis().factors(),
            &[BasisFactor::Fock { n_max: 1 }, BasisFactor::Spin { two_j: 2 }]
        );
    }

    /// tensor(A, I) · tensor(I, B) = tensor(A, B)
    #[test]
    fn mixed_product_property() {
        let a = random_hermitian(3, 7);
        let b = random_hermitian(4, 8);
        let ia = OperatorMatrix::identity(a.basis().clone());
        let ib = OperatorMatrix::identity(b.basis().clone());
        let lhs = tensor(&a, &ib).mul(&tensor(&ia, &b)).unwrap();
        let rhs = tensor(&a, &b);
        assert!(lhs.max_diff(&rhs).unwrap() < 1e-13);
    }

    #[test]
    fn eig_sym_sorts_ascending() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(3.0);
        m[(1, 1)] = c(1.0);
        m[(2, 2)] = c(2.0);
        let op = OperatorMatrix::new(CompositeBasis::fock(2), m).unwrap();
        let (vals, _) = eig_sym(&op).unwrap();
        assert_eq!(vals.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_sym_rejects_non_hermitian() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0);
        let op = OperatorMatrix::new(CompositeBasis::fock(1), m).unwrap();
        assert!(matches!(eig_sym(&op), Err(CoreError::NotHermitian { .. })));
    }

    /// V† H V diagonal and residual ‖Hv − λv‖ small on a random 8x8.
    #[test]
    fn eig_sym_residuals() {
        let h = random_hermitian(8, 42);
        let (vals, vecs) = eig_sym(&h).unwrap();
        let scale = h.max_abs();
        for k in 0..8 {
            let v = vecs.column(k);
            let res = h.entries() * v - v * c(vals[k]);
            let worst = res.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(worst < 1e-10 * scale);
        }
        let d = vecs.adjoint() * h.entries() * &vecs;
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert!(d[(i, j)].norm() < 1e-11 * scale);
                }
            }
        }
    }

    #[test]
    fn identity_function_reproduces_operator() {
        let h = random_hermitian(6, 3);
        let f = hermitian_function(&h, c).unwrap();
        assert!(f.max_diff(&h).unwrap() < 1e-13);
    }

    #[test]
    fn exp_of_diagonal_phases() {
        let mut m = CMatrix::zeros(2, 2);
        m[(1, 1)] = c(std::f64::consts::PI);
        let h = OperatorMatrix::new(CompositeBasis::fock(1), m).unwrap();
        let u = unitary_from_generator(&h).unwrap();
        assert!((u.entries()[(0, 0)] - c(1.0)).norm() < 1e-15);
        assert!((u.entries()[(1, 1)] - c(-1.0)).norm() < 1e-15);
    }

    /// cos²(X) + sin²(X) = I under the spectral calculus, X = a + a†.
    #[test]
    fn trig_identity_under_spectral_calculus() {
        for n_max in [2usize, 5, 9, 16] {
            let x = field_sum(n_max).unwrap();
            let cx = hermitian_cos(&x).unwrap();
            let sx = hermitian_sin(&x).unwrap();
            let sum = cx.mul(&cx).unwrap().add(&sx.mul(&sx).unwrap()).unwrap();
            let id = OperatorMatrix::identity(sum.basis().clone());
            assert!(sum.max_diff(&id).unwrap() < 1e-12, "failed at n_max = {n_max}");
        }
    }

    /// Taylor series with scaling and squaring; test-only oracle for exp(iG).
    fn expm_scaling_squaring(g: &CMatrix) -> CMatrix {
        let n = g.nrows();
        let ig = g.map(|z| z * Complex64::new(0.0, 1.0));
        let norm = ig.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
        let s = norm.log2().ceil().max(0.0) as u32 + 1;
        let a = ig / c(2f64.powi(s as i32));
        let mut term = CMatrix::identity(n, n);
        let mut sum = CMatrix::identity(n, n);
        for k in 1..30 {
            term = &term * &a / c(k as f64);
            sum += &term;
        }
        let mut out = sum;
        for _ in 0..s {
            out = &out * &out;
        }
        out
    }

    /// Spectral exponential agrees with scaling-and-squaring to 1e-10.
    #[test]
    fn spectral_exp_matches_series_exp() {
        for (dim, seed) in [(4usize, 1u64), (16, 2), (48, 3), (64, 4)] {
            let g = random_hermitian(dim, seed);
            let u = unitary_from_generator(&g).unwrap();
            let series = expm_scaling_squaring(g.entries());
            let mut worst = 0.0f64;
            for (a, b) in u.entries().iter().zip(series.iter()) {
                worst = worst.max((a - b).norm());
            }
            assert!(worst < 1e-10, "dim {dim}: exp mismatch {worst:.2e}");
            assert!(u.unitarity_error() < 1e-10);
        }
    }

    #[test]
    fn exp_i_product_matches_composite_exponential() {
        let a = random_hermitian(4, 11);
        let b = random_hermitian(3, 12);
        let fast = exp_i_product(&a, &b).unwrap();
        let slow = unitary_from_generator(&tensor(&a, &b)).unwrap();
        assert!(fast.max_diff(&slow).unwrap() < 1e-11);
        assert!(fast.unitarity_error() < 1e-11);
    }
}
