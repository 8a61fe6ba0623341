//! Composite bases and dense operators.
//!
//! Every operator in this crate lives on a [`CompositeBasis`]: an ordered
//! tensor product of truncated Fock spaces and spin multiplets. The factor
//! order is fixed to photon ⊗ spin (more generally: first factor ⊗ second
//! factor as built) everywhere in the crate.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt;

use crate::error::{CoreError, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Entrywise tolerance below which an operator counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Entrywise tolerance on U U† − I below which an operator counts as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// One tensor factor of a composite basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFactor {
    /// Truncated Fock space spanning |0⟩ … |n_max⟩; dimension n_max + 1.
    Fock { n_max: usize },
    /// Spin-j multiplet with 2j = `two_j`, dimension 2j + 1.
    /// Basis states are ordered by ascending j_z: |j,−j⟩, |j,−j+1⟩, … |j,+j⟩.
    Spin { two_j: u32 },
}

impl BasisFactor {
    pub fn dim(&self) -> usize {
        match *self {
            BasisFactor::Fock { n_max } => n_max + 1,
            BasisFactor::Spin { two_j } => two_j as usize + 1,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            BasisFactor::Fock { n_max } if n_max < 1 => Err(CoreError::invalid(
                "n_max",
                format!("Fock cutoff must be at least 1, got {n_max}"),
            )),
            BasisFactor::Spin { two_j } if two_j < 1 => Err(CoreError::invalid(
                "two_j",
                "spin factor needs 2j >= 1".to_string(),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for BasisFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BasisFactor::Fock { n_max } => write!(f, "fock({n_max})"),
            BasisFactor::Spin { two_j } => write!(f, "spin(2j={two_j})"),
        }
    }
}

/// Ordered list of tensor factors; total dimension is the product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeBasis {
    factors: Vec<BasisFactor>,
}

impl CompositeBasis {
    pub fn new(factors: Vec<BasisFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(CoreError::invalid("factors", "basis needs at least one factor"));
        }
        for f in &factors {
            f.validate()?;
        }
        Ok(CompositeBasis { factors })
    }

    pub fn fock(n_max: usize) -> Self {
        CompositeBasis::new(vec![BasisFactor::Fock { n_max }]).expect("valid Fock factor")
    }

    pub fn spin(two_j: u32) -> Self {
        CompositeBasis::new(vec![BasisFactor::Spin { two_j }]).expect("valid spin factor")
    }

    pub fn factors(&self) -> &[BasisFactor] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(BasisFactor::dim).product()
    }

    /// Concatenation of factor lists, matching the Kronecker product order.
    pub fn join(&self, other: &CompositeBasis) -> CompositeBasis {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        CompositeBasis { factors }
    }
}

impl fmt::Display for CompositeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" ⊗ "))
    }
}

/// Dense operator tagged with the basis it acts on.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    basis: CompositeBasis,
    entries: CMatrix,
}

impl OperatorMatrix {
    pub fn new(basis: CompositeBasis, entries: CMatrix) -> Result<Self> {
        let dim = basis.total_dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(CoreError::invalid(
                "entries",
                format!(
                    "matrix is {}x{} but basis `{}` has dimension {}",
                    entries.nrows(),
                    entries.ncols(),
                    basis,
                    dim
                ),
            ));
        }
        Ok(OperatorMatrix { basis, entries })
    }

    pub fn identity(basis: CompositeBasis) -> Self {
        let dim = basis.total_dim();
        OperatorMatrix {
            basis,
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(basis: CompositeBasis) -> Self {
        let dim = basis.total_dim();
        OperatorMatrix {
            basis,
            entries: CMatrix::zeros(dim, dim),
        }
    }

    pub fn basis(&self) -> &CompositeBasis {
        &self.basis
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Hermitian conjugate on the same basis.
    pub fn dagger(&self) -> Self {
        OperatorMatrix {
            basis: self.basis.clone(),
            entries: self.entries.adjoint(),
        }
    }

    /// max_ij |M_ij − conj(M_ji)|
    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.entries;
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// max_ij |(U U† − I)_ij|
    pub fn unitarity_error(&self) -> f64 {
        let uu = &self.entries * self.entries.adjoint();
        let mut worst = 0.0f64;
        for i in 0..uu.nrows() {
            for j in 0..uu.ncols() {
                let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((uu[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() < HERMITIAN_TOL
    }

    /// Largest entry magnitude; scale reference for relative tolerances.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        OperatorMatrix {
            basis: self.basis.clone(),
            entries: self.entries.clone() * c,
        }
    }

    pub fn scaled_re(&self, c: f64) -> Self {
        self.scaled(Complex64::new(c, 0.0))
    }

    /// Entrywise max |A − B|; errors if the bases differ.
    pub fn max_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        self.check_same_basis(other)?;
        let mut worst = 0.0f64;
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            worst = worst.max((a - b).norm());
        }
        Ok(worst)
    }

    pub fn check_same_basis(&self, other: &OperatorMatrix) -> Result<()> {
        if self.basis != other.basis {
            return Err(CoreError::BasisMismatch {
                left: self.basis.to_string(),
                right: other.basis.to_string(),
                left_dim: self.dim(),
                right_dim: other.dim(),
            });
        }
        Ok(())
    }

    /// A + B on a shared basis.
    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_basis(other)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            entries: &self.entries + &other.entries,
        })
    }

    /// A − B on a shared basis.
    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_basis(other)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            entries: &self.entries - &other.entries,
        })
    }

    /// Matrix product A·B on a shared basis.
    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_basis(other)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            entries: &self.entries * &other.entries,
        })
    }

    /// U · A · U† on a shared basis.
    pub fn conjugate_by(&self, u: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_basis(u)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            entries: &u.entries * &self.entries * u.entries.adjoint(),
        })
    }

    /// Commutator [A, B].
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_basis(other)?;
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            entries: &self.entries * &other.entries - &other.entries * &self.entries,
        })
    }
}
