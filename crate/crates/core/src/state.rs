//! Dense operators and normalized state vectors on the Fock space of `n`
//! sites.
//!
//! Basis convention: bit `k` of a basis index is the occupation of site `k + 1`.
//! An occupied site is the spin-up state `|z⟩` (σᶻ = +1) and an empty site is
//! `|z̄⟩`, so the all-zero index is the vacuum `|z̄ z̄ … z̄⟩`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SimError};
use crate::linalg::{self, CMatrix, CVector, Spectrum};

/// Norm below which a state counts as annihilated.
pub const ANNIHILATION_NORM: f64 = 1e-14;

/// A square complex matrix acting on `2^site_count` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: CMatrix,
    site_count: usize,
}

impl DenseOperator {
    pub fn new(matrix: CMatrix, site_count: usize) -> Result<Self> {
        let dim = 1usize << site_count;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(SimError::DimensionMismatch { expected: dim, actual: matrix.nrows() });
        }
        Ok(Self { matrix, site_count })
    }

    pub fn zeros(site_count: usize) -> Self {
        let dim = 1usize << site_count;
        Self { matrix: CMatrix::zeros(dim, dim), site_count }
    }

    pub fn identity(site_count: usize) -> Self {
        Self { matrix: linalg::identity(1usize << site_count), site_count }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), site_count: self.site_count }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::hermitian_deviation(&self.matrix) <= tol
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { matrix: &self.matrix * factor, site_count: self.site_count }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self { matrix: linalg::commutator(&self.matrix, &other.matrix), site_count: self.site_count }
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        Self { matrix: linalg::anticommutator(&self.matrix, &other.matrix), site_count: self.site_count }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.matrix)
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::of(&self.matrix)
    }

    /// Applies the operator without renormalizing.
    pub fn apply_raw(&self, state: &StateVector) -> CVector {
        &self.matrix * &state.amplitudes
    }

    pub fn expectation(&self, state: &StateVector) -> Complex64 {
        state.amplitudes.dotc(&(&self.matrix * &state.amplitudes))
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: Self) -> DenseOperator {
        DenseOperator { matrix: &self.matrix + &rhs.matrix, site_count: self.site_count }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: Self) -> DenseOperator {
        DenseOperator { matrix: &self.matrix - &rhs.matrix, site_count: self.site_count }
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: Self) -> DenseOperator {
        DenseOperator { matrix: &self.matrix * &rhs.matrix, site_count: self.site_count }
    }
}

/// A unit-norm vector of `2^site_count` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    site_count: usize,
}

impl StateVector {
    /// Normalizes `amplitudes`; fails if the vector is (numerically) zero.
    pub fn from_amplitudes(amplitudes: CVector, site_count: usize) -> Result<Self> {
        let dim = 1usize << site_count;
        if amplitudes.len() != dim {
            return Err(SimError::DimensionMismatch { expected: dim, actual: amplitudes.len() });
        }
        let norm = linalg::vector_norm(&amplitudes);
        if norm < ANNIHILATION_NORM {
            return Err(SimError::Annihilated { norm });
        }
        Ok(Self { amplitudes: amplitudes / Complex64::new(norm, 0.0), site_count })
    }

    pub fn basis(index: usize, site_count: usize) -> Self {
        let mut amplitudes = CVector::zeros(1usize << site_count);
        amplitudes[index] = linalg::ONE;
        Self { amplitudes, site_count }
    }

    pub fn vacuum(site_count: usize) -> Self {
        Self::basis(0, site_count)
    }

    /// Haar-random state from normalized complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, site_count: usize) -> Self {
        let amplitudes = CVector::from_fn(1usize << site_count, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        Self::from_amplitudes(amplitudes, site_count).expect("gaussian vector is nonzero")
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        linalg::vector_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Distance after removing the relative global phase.
    pub fn phase_distance(&self, other: &Self) -> f64 {
        let overlap = self.inner(other);
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { linalg::ONE };
        linalg::vector_norm(&(&self.amplitudes * phase - &other.amplitudes))
    }

    /// Applies `op` and renormalizes.
    pub fn evolve(&self, op: &DenseOperator) -> Result<Self> {
        Self::from_amplitudes(op.apply_raw(self), self.site_count)
    }
}
