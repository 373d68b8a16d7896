//! The logical code space, encode/decode, and gate extraction.
//!
//! Logical basis order is `|00_g⟩, |01_g⟩, |10_g⟩, |11_g⟩`, with
//! `|ab_g⟩ = |a₁₂⟩ ⊗ |z̄₃⟩ ⊗ |b₄₅₆⟩`:
//!
//! * `|0₁₂⟩ = (|z̄z̄⟩ + |zz⟩)/√2`, `|1₁₂⟩ = (|zz̄⟩ + |z̄z⟩)/√2`
//! * `|0₄₅₆⟩` is the uniform superposition of the even-occupation
//!   configurations of sites 4–6, `|1₄₅₆⟩` of the odd ones.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::ite::{propagate_block, Propagation, Schedule};
use crate::linalg::{self, CMatrix, CVector, ZERO};
use crate::models::SITES;
use crate::state::{StateVector, ANNIHILATION_NORM};

/// Leakage above which an evolution is not code preserving.
pub const LEAKAGE_TOL: f64 = 1e-6;
/// Largest cross-parity entry tolerated by [`even_parity_block`].
pub const PARITY_TOL: f64 = 1e-8;

const LABELS: [&str; 4] = ["00", "01", "10", "11"];
const EVEN: [usize; 2] = [0, 3];
const ODD: [usize; 2] = [1, 2];

fn occupied(index: usize, site: usize) -> bool {
    index >> (site - 1) & 1 == 1
}

fn code_amplitude(index: usize, logical: usize) -> f64 {
    let (a, b) = (logical >> 1 & 1, logical & 1);
    if occupied(index, 3) {
        return 0.0;
    }
    let chain1 = occupied(index, 1) as usize + occupied(index, 2) as usize;
    let chain2 = (4..=6).filter(|&s| occupied(index, s)).count();
    if chain1 % 2 == a && chain2 % 2 == b {
        1.0 / (2.0 * 2f64.sqrt())
    } else {
        0.0
    }
}

/// The 64×4 isometry whose columns are the encoded logical basis states.
pub fn code_basis() -> &'static CMatrix {
    static BASIS: OnceLock<CMatrix> = OnceLock::new();
    BASIS.get_or_init(|| {
        CMatrix::from_fn(1 << SITES, 4, |i, l| Complex64::new(code_amplitude(i, l), 0.0))
    })
}

/// Amplitudes over the logical basis plus the norm found outside the code space.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalState {
    amplitudes: [Complex64; 4],
    residual: f64,
}

impl LogicalState {
    /// Normalized code state with zero residual.
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < ANNIHILATION_NORM {
            return Err(SimError::Annihilated { norm });
        }
        Ok(Self { amplitudes: amplitudes.map(|z| z / norm), residual: 0.0 })
    }

    pub fn basis(k: usize) -> Self {
        let mut amplitudes = [ZERO; 4];
        amplitudes[k] = linalg::ONE;
        Self { amplitudes, residual: 0.0 }
    }

    /// Basis state by label, `"00"` … `"11"`.
    pub fn ket(label: &str) -> Option<Self> {
        LABELS.iter().position(|&l| l == label).map(Self::basis)
    }

    /// `(|00_g⟩ + c|11_g⟩)/√2`
    pub fn even_superposition(c: Complex64) -> Result<Self> {
        Self::new([linalg::ONE, ZERO, ZERO, c])
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn to_vector(&self) -> CVector {
        CVector::from_column_slice(&self.amplitudes)
    }

    /// `|⟨self|other⟩|²` over the logical amplitudes.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }

    pub fn labels() -> [&'static str; 4] {
        LABELS
    }
}

pub fn encode_logical(l: &LogicalState) -> Result<StateVector> {
    if l.residual > 1e-12 {
        return Err(SimError::ResidualNotZero(l.residual));
    }
    StateVector::from_amplitudes(code_basis() * l.to_vector(), SITES)
}

pub fn decode_logical(psi: &StateVector) -> LogicalState {
    let amps = code_basis().adjoint() * psi.amplitudes();
    let outside = psi.amplitudes() - code_basis() * &amps;
    LogicalState {
        amplitudes: [amps[0], amps[1], amps[2], amps[3]],
        residual: outside.norm() / psi.amplitudes().norm(),
    }
}

/// Rows give the logical expansion of the product states
/// `|x x z̄ x x x⟩, |x x z̄ x̄ x̄ x̄⟩, |x̄ x̄ z̄ x x x⟩, |x̄ x̄ z̄ x̄ x̄ x̄⟩`.
pub fn xbasis_matrix() -> CMatrix {
    let rows: [[f64; 4]; 4] = [[1.0, 1.0, 1.0, 1.0], [-1.0, 1.0, -1.0, 1.0], [1.0, 1.0, -1.0, -1.0], [-1.0, 1.0, 1.0, -1.0]];
    CMatrix::from_fn(4, 4, |r, c| Complex64::new(rows[r][c] / 2.0, 0.0))
}

/// Logical state of `Σₖ vₖ |xₖ⟩` over the four x-basis product states.
pub fn xbasis_to_logical(v: [Complex64; 4]) -> Result<LogicalState> {
    let out = xbasis_matrix().transpose() * CVector::from_column_slice(&v);
    LogicalState::new([out[0], out[1], out[2], out[3]])
}

/// Inverse of [`xbasis_to_logical`] (the matrix is real orthogonal).
pub fn logical_to_xbasis(l: &LogicalState) -> [Complex64; 4] {
    let out = xbasis_matrix() * l.to_vector();
    [out[0], out[1], out[2], out[3]]
}

/// Effective operator of an evolution on the code space.
#[derive(Debug, Clone)]
pub struct LogicalGate {
    /// Phase-fixed 4×4 matrix, normalized so an isometry has unit scale.
    pub matrix4: CMatrix,
    /// Phase-fixed `{|00_g⟩, |11_g⟩}` block with Frobenius norm √2.
    pub even_block: CMatrix,
    /// Phase removed from `matrix4` by the phase convention.
    pub global_phase: Complex64,
    /// `‖E†B‖_F / 2` before normalization; 1 for an exact unitary on the code.
    pub scale: f64,
    /// `‖(1 - EE†)B‖_F / ‖B‖_F`
    pub leakage: f64,
}

impl LogicalGate {
    pub fn is_code_preserving(&self) -> bool {
        self.leakage <= LEAKAGE_TOL
    }

    /// Action on a logical state, renormalized.
    pub fn apply(&self, l: &LogicalState) -> Result<LogicalState> {
        let out = &self.matrix4 * l.to_vector();
        LogicalState::new([out[0], out[1], out[2], out[3]])
    }

    /// Normalizes and phase-fixes a 4×4 code-space operator.
    pub fn from_operator(operator: &CMatrix, leakage: f64) -> Result<Self> {
        if operator.shape() != (4, 4) {
            return Err(SimError::ShapeMismatch(operator.nrows(), operator.ncols()));
        }
        let scale = linalg::frobenius(operator) / 2.0;
        if scale < ANNIHILATION_NORM {
            return Err(SimError::Annihilated { norm: scale });
        }
        let normalized = operator.map(|z| z / scale);
        let (matrix4, global_phase) = linalg::fix_global_phase(&normalized, 1e-9);
        let even = submatrix(&matrix4, &EVEN);
        let even_norm = linalg::frobenius(&even);
        let even_block = if even_norm > 1e-12 {
            linalg::fix_global_phase(&even.map(|z| z * 2f64.sqrt() / even_norm), 1e-9).0
        } else {
            even
        };
        Ok(LogicalGate { matrix4, even_block, global_phase, scale, leakage })
    }
}

fn submatrix(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Builds the gate from the image `image` of the code isometry `basis`.
pub fn gate_from_block(basis: &CMatrix, image: &CMatrix) -> Result<LogicalGate> {
    let total = linalg::frobenius(image);
    if total < ANNIHILATION_NORM {
        return Err(SimError::Annihilated { norm: total });
    }
    let projected = basis.adjoint() * image;
    let leakage = linalg::frobenius(&(image - basis * &projected)) / total;
    LogicalGate::from_operator(&projected, leakage)
}

/// As [`gate_from_block`], with `scale` restored to the unrescaled image.
pub fn gate_from_propagation(basis: &CMatrix, propagation: &Propagation) -> Result<LogicalGate> {
    let mut gate = gate_from_block(basis, &propagation.block)?;
    gate.scale *= propagation.gain();
    Ok(gate)
}

/// Runs the schedule on the four code states as one linear map.
pub fn extract_gate_unchecked(schedule: &Schedule) -> Result<LogicalGate> {
    let basis = code_basis();
    gate_from_propagation(basis, &propagate_block(basis, schedule)?)
}

/// As [`extract_gate_unchecked`], rejecting evolutions that leak out of the code.
pub fn extract_gate(schedule: &Schedule) -> Result<LogicalGate> {
    let gate = extract_gate_unchecked(schedule)?;
    if !gate.is_code_preserving() {
        return Err(SimError::NotCodePreserving(gate.leakage));
    }
    Ok(gate)
}

pub fn even_parity_block(g: &LogicalGate) -> Result<CMatrix> {
    let mixing = EVEN
        .iter()
        .flat_map(|&e| ODD.iter().flat_map(move |&o| [(e, o), (o, e)]))
        .map(|(r, c)| g.matrix4[(r, c)].norm())
        .fold(0.0, f64::max);
    if mixing > PARITY_TOL {
        return Err(SimError::ParityMixing(mixing));
    }
    Ok(g.even_block.clone())
}

/// Embeds a 2×2 even-block matrix into a 4×4 acting trivially on the odd sector.
pub fn embed_even(block: &CMatrix) -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    for (r, &gr) in EVEN.iter().enumerate() {
        for (c, &gc) in EVEN.iter().enumerate() {
            m[(gr, gc)] = block[(r, c)];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_basis_is_isometry() {
        let e = code_basis();
        assert!(linalg::max_abs(&(e.adjoint() * e - CMatrix::identity(4, 4))) < 1e-14);
    }

    #[test]
    fn xbasis_matrix_is_orthogonal() {
        let m = xbasis_matrix();
        assert!(linalg::max_abs(&(m.adjoint() * &m - CMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn ket_labels() {
        assert_eq!(LogicalState::ket("10").unwrap(), LogicalState::basis(2));
        assert!(LogicalState::ket("2").is_none());
    }
}
