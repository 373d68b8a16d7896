//! Dense complex linear algebra helpers: Hermitian spectra, spectral
//! functions, Kronecker products and small matrix utilities.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Result, SimError};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance used when checking that an input matrix is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Largest entrywise deviation of `m` from its conjugate transpose.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl Spectrum {
    pub fn of(m: &CMatrix) -> Result<Self> {
        let deviation = hermitian_deviation(m);
        if deviation > HERMITIAN_TOL {
            return Err(SimError::NotHermitian { deviation });
        }
        // symmetrize so round-off in the input cannot bias the solver
        let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(Self { values, vectors })
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.values[0]
    }

    /// Number of eigenvalues within `tol` of the minimum.
    pub fn ground_degeneracy(&self, tol: f64) -> usize {
        let e0 = self.ground_energy();
        self.values.iter().take_while(|&&e| e - e0 <= tol).count()
    }

    /// `V f(Λ) V†` for an arbitrary scalar function of the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let n = self.dimension();
        let mut scaled = self.vectors.clone();
        for c in 0..n {
            let w = f(self.values[c]);
            for r in 0..n {
                scaled[(r, c)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// Applies `V f(Λ) V†` to the columns of `block` without forming the full operator.
    pub fn apply_map(&self, block: &CMatrix, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let mut coeffs = self.vectors.adjoint() * block;
        for r in 0..self.dimension() {
            let w = f(self.values[r]);
            for c in 0..coeffs.ncols() {
                coeffs[(r, c)] *= w;
            }
        }
        &self.vectors * coeffs
    }

    /// Projector onto the eigenspace within `tol` of the ground energy.
    pub fn ground_projector(&self, tol: f64) -> CMatrix {
        let e0 = self.ground_energy();
        self.map(|e| if e - e0 <= tol { ONE } else { ZERO })
    }
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Frobenius norm of a complex matrix.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Rotates `m` by a unit phase so that its first nonzero entry, scanning
/// column by column, becomes real and positive. Returns the rotated matrix and
/// the phase that was divided out.
pub fn fix_global_phase(m: &CMatrix, tol: f64) -> (CMatrix, Complex64) {
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let z = m[(r, c)];
            if z.norm() > tol {
                let phase = z / z.norm();
                return (m.map(|x| x / phase), phase);
            }
        }
    }
    (m.clone(), ONE)
}

/// Closest unitary in Frobenius norm via the polar decomposition.
pub fn closest_unitary(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    u * v_t
}

pub fn unitarity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m.adjoint() * m - identity(m.ncols())))
}

pub fn vector_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
