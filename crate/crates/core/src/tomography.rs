//! Process tomography on the logical code space by linear inversion, and
//! fidelity measures.
//!
//! Inputs are the 16 products of `{|0⟩, |1⟩, |+⟩, |+i⟩}` over the two
//! logical labels; settings are the 16 Pauli pairs `P⊗Q`, giving 256
//! expectation values. The reconstructed process is the Choi matrix of the
//! map; its leading eigenvector is the Kraus operator reported as the gate.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Result, SimError};
use crate::ite::{propagate_block, Schedule};
use crate::linalg::{self, CMatrix, CVector, Spectrum, ONE, ZERO};
use crate::logical::{code_basis, LogicalGate};
use crate::spin::Pauli;

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// Single-qubit input states used on each logical label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeState {
    Zero,
    One,
    Plus,
    PlusI,
}

impl ProbeState {
    pub const ALL: [ProbeState; 4] = [ProbeState::Zero, ProbeState::One, ProbeState::Plus, ProbeState::PlusI];

    fn amplitudes(self) -> [Complex64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            ProbeState::Zero => [ONE, ZERO],
            ProbeState::One => [ZERO, ONE],
            ProbeState::Plus => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            ProbeState::PlusI => [Complex64::new(h, 0.0), Complex64::new(0.0, h)],
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ProbeState::Zero => "0",
            ProbeState::One => "1",
            ProbeState::Plus => "+",
            ProbeState::PlusI => "+i",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TomographyPlan {
    pub inputs: Vec<(ProbeState, ProbeState)>,
    pub settings: Vec<(Pauli, Pauli)>,
    /// Shots per (input, setting) pair; `None` uses exact expectation values.
    pub shots: Option<u64>,
    pub seed: u64,
}

impl Default for TomographyPlan {
    fn default() -> Self {
        Self::standard()
    }
}

impl TomographyPlan {
    pub fn standard() -> Self {
        let inputs = ProbeState::ALL.iter().flat_map(|&a| ProbeState::ALL.iter().map(move |&b| (a, b))).collect();
        let settings = PAULIS.iter().flat_map(|&p| PAULIS.iter().map(move |&q| (p, q))).collect();
        Self { inputs, settings, shots: None, seed: 0 }
    }

    pub fn with_shots(mut self, shots: u64, seed: u64) -> Self {
        self.shots = Some(shots);
        self.seed = seed;
        self
    }

    pub fn measurement_count(&self) -> usize {
        self.inputs.len() * self.settings.len()
    }

    pub fn input_labels(&self) -> Vec<String> {
        self.inputs.iter().map(|(a, b)| format!("{}{}", a.symbol(), b.symbol())).collect()
    }

    pub fn setting_labels(&self) -> Vec<String> {
        self.settings.iter().map(|(p, q)| format!("{}{}", p.symbol(), q.symbol())).collect()
    }
}

fn input_vector(a: ProbeState, b: ProbeState) -> CVector {
    let (x, y) = (a.amplitudes(), b.amplitudes());
    CVector::from_fn(4, |i, _| x[i >> 1] * y[i & 1])
}

fn setting_matrix(p: Pauli, q: Pauli) -> CMatrix {
    linalg::kron(&p.matrix(), &q.matrix())
}

/// Column-major vectorization.
fn vec_of(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

#[derive(Debug, Clone)]
pub struct TomographyResult {
    /// Kraus operator of the reconstructed process, normalized and phase-fixed.
    /// Its `leakage` is 0: only the code space is observed.
    pub gate: LogicalGate,
    /// Polar-decomposition unitary closest to the reconstructed operator.
    pub closest_unitary: CMatrix,
    /// `expectations[input][setting]`, unnormalized by the survival probability.
    pub expectations: Vec<Vec<f64>>,
    /// Second-largest over largest Choi eigenvalue; 0 for a single-Kraus process.
    pub impurity: f64,
    pub input_labels: Vec<String>,
    pub setting_labels: Vec<String>,
}

pub fn simulate_tomography(schedule: &Schedule, plan: &TomographyPlan) -> Result<TomographyResult> {
    let inputs: Vec<CVector> = plan.inputs.iter().map(|&(a, b)| input_vector(a, b)).collect();
    let settings: Vec<CMatrix> = plan.settings.iter().map(|&(p, q)| setting_matrix(p, q)).collect();

    let physical = CMatrix::from_columns(&inputs.iter().map(|v| code_basis() * v).collect::<Vec<_>>());
    let image = propagate_block(&physical, schedule)?.block;
    let logical_out = code_basis().adjoint() * image;

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut expectations = Vec::with_capacity(inputs.len());
    for k in 0..inputs.len() {
        let out = logical_out.column(k).into_owned();
        let weight = out.norm_squared();
        let row = settings
            .iter()
            .map(|s| {
                let exact = out.dotc(&(s * &out)).re;
                match plan.shots {
                    Some(n) if n > 0 && weight > 0.0 => Ok(sampled(exact / weight, n, &mut rng)? * weight),
                    _ => Ok(exact),
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        expectations.push(row);
    }
    reconstruct(plan, &inputs, &settings, expectations)
}

/// Estimate of a ±1 observable's mean from `n` binomial shots.
fn sampled(mean: f64, n: u64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let p = ((1.0 + mean) / 2.0).clamp(0.0, 1.0);
    let dist = Binomial::new(n, p).map_err(|_| SimError::SingularInversion)?;
    let ups = dist.sample(rng) as f64;
    Ok(2.0 * ups / n as f64 - 1.0)
}

fn reconstruct(
    plan: &TomographyPlan,
    inputs: &[CVector],
    settings: &[CMatrix],
    expectations: Vec<Vec<f64>>,
) -> Result<TomographyResult> {
    // output density operators from the Pauli expansion
    let outputs: Vec<CMatrix> = expectations
        .iter()
        .map(|row| {
            row.iter()
                .zip(settings)
                .fold(CMatrix::zeros(4, 4), |acc, (&e, s)| acc + s * Complex64::new(e / 4.0, 0.0))
        })
        .collect();

    let a = CMatrix::from_columns(&inputs.iter().map(|v| vec_of(&(v * v.adjoint()))).collect::<Vec<_>>());
    let b = CMatrix::from_columns(&outputs.iter().map(vec_of).collect::<Vec<_>>());
    if a.ncols() != 16 || settings.len() != 16 {
        return Err(SimError::SingularInversion);
    }
    let singular = a.clone().singular_values();
    if singular.min() < 1e-10 * singular.max() {
        return Err(SimError::SingularInversion);
    }
    let superop = b * a.try_inverse().ok_or(SimError::SingularInversion)?;

    // Choi matrix J = Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)
    let mut choi = CMatrix::zeros(16, 16);
    for i in 0..4 {
        for j in 0..4 {
            let mut e = CMatrix::zeros(4, 4);
            e[(i, j)] = ONE;
            let image = &superop * vec_of(&e);
            for r in 0..4 {
                for c in 0..4 {
                    choi[(4 * i + r, 4 * j + c)] = image[r + 4 * c];
                }
            }
        }
    }
    let spectrum = Spectrum::of(&choi)?;
    let n = spectrum.values.len();
    let top = spectrum.values[n - 1];
    if top <= 0.0 {
        return Err(SimError::SingularInversion);
    }
    let impurity = (spectrum.values[n - 2] / top).max(0.0);
    let v = spectrum.vectors.column(n - 1) * Complex64::new(top.sqrt(), 0.0);
    let kraus = CMatrix::from_fn(4, 4, |r, i| v[4 * i + r]);

    let gate = LogicalGate::from_operator(&kraus, 0.0)?;
    let closest_unitary = linalg::fix_global_phase(&linalg::closest_unitary(&kraus), 1e-9).0;
    Ok(TomographyResult {
        gate,
        closest_unitary,
        expectations,
        impurity,
        input_labels: plan.input_labels(),
        setting_labels: plan.setting_labels(),
    })
}

/// `|tr(U†V)|² / (tr(U†U)·tr(V†V))`; equals `|tr(U†V)|²/d²` for unitaries.
pub fn process_fidelity(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    if u.shape() != v.shape() || u.nrows() != u.ncols() {
        return Err(SimError::ShapeMismatch(u.nrows(), v.nrows()));
    }
    let overlap = (u.adjoint() * v).trace().norm_sqr();
    let norms = u.norm_squared() * v.norm_squared();
    Ok(if norms > 0.0 { (overlap / norms).min(1.0) } else { 0.0 })
}

/// `|⟨ψ|φ⟩|² / (‖ψ‖²‖φ‖²)`
pub fn state_fidelity(psi: &CVector, phi: &CVector) -> f64 {
    let norms = psi.norm_squared() * phi.norm_squared();
    if norms > 0.0 {
        (psi.dotc(phi).norm_sqr() / norms).min(1.0)
    } else {
        0.0
    }
}
