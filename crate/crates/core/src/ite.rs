//! Imaginary- and real-time evolution of states and of code-space blocks.
//!
//! Imaginary-time factors are applied as `e^{-(H - E₀)t}`, i.e. shifted by the
//! ground energy so the ground space is left untouched and excited components
//! decay as `e^{-(E - E₀)t}`. The shift is a positive scalar and drops out of
//! every normalized result.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::linalg::{self, CMatrix, CVector, Spectrum};
use crate::noise::NoiseSpec;
use crate::spin::{spin_matrix, PauliString, SpinHamiltonian};
use crate::state::{DenseOperator, StateVector, ANNIHILATION_NORM};

/// Imaginary time per projection segment. With unit gaps of 2 the excited
/// weight left behind is `e^{-40}`.
pub const DEFAULT_ITE_TIME: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvolutionKind {
    Imaginary,
    Real,
}

/// One evolution step under a fixed spin Hamiltonian.
#[derive(Debug, Clone)]
pub struct Segment {
    label: String,
    hamiltonian: Arc<SpinHamiltonian>,
    kind: EvolutionKind,
    duration: f64,
    spectrum: Arc<OnceLock<Spectrum>>,
}

impl Segment {
    pub fn imaginary(label: impl Into<String>, hamiltonian: SpinHamiltonian, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(SimError::InvalidDuration(t));
        }
        Ok(Self::build(label.into(), Arc::new(hamiltonian), EvolutionKind::Imaginary, t))
    }

    /// Real-time segment `e^{-iHτ}`; any finite τ, including zero and negative.
    pub fn real(label: impl Into<String>, hamiltonian: SpinHamiltonian, tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(SimError::InvalidDuration(tau));
        }
        Ok(Self::build(label.into(), Arc::new(hamiltonian), EvolutionKind::Real, tau))
    }

    fn build(label: String, hamiltonian: Arc<SpinHamiltonian>, kind: EvolutionKind, duration: f64) -> Self {
        Self { label, hamiltonian, kind, duration, spectrum: Arc::new(OnceLock::new()) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hamiltonian(&self) -> &SpinHamiltonian {
        &self.hamiltonian
    }

    pub fn kind(&self) -> EvolutionKind {
        self.kind
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Same Hamiltonian (and cached spectrum) with a different duration.
    pub fn with_duration(&self, duration: f64) -> Result<Self> {
        if !duration.is_finite() || (self.kind == EvolutionKind::Imaginary && duration <= 0.0) {
            return Err(SimError::InvalidDuration(duration));
        }
        Ok(Self { duration, ..self.clone() })
    }

    pub fn with_hamiltonian(&self, hamiltonian: SpinHamiltonian) -> Self {
        Self::build(self.label.clone(), Arc::new(hamiltonian), self.kind, self.duration)
    }

    pub fn spectrum(&self) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let computed = spin_matrix(&self.hamiltonian).spectrum()?;
        Ok(self.spectrum.get_or_init(|| computed))
    }

    /// Applies the (unnormalized) segment operator to every column of `block`.
    pub fn propagate(&self, block: &CMatrix) -> Result<CMatrix> {
        let spectrum = self.spectrum()?;
        let t = self.duration;
        Ok(match self.kind {
            EvolutionKind::Imaginary => {
                let e0 = spectrum.ground_energy();
                spectrum.apply_map(block, |e| Complex64::new((-(e - e0) * t).exp(), 0.0))
            }
            EvolutionKind::Real => spectrum.apply_map(block, |e| Complex64::from_polar(1.0, -e * t)),
        })
    }
}

/// Ordered evolution segments plus post-selected noise events.
///
/// A noise event at position `p` acts just before segment `p`; position
/// `segments.len()` acts after the last segment.
#[derive(Debug, Clone)]
pub struct Schedule {
    segments: Vec<Segment>,
    noise: Vec<NoiseSpec>,
}

impl Schedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(SimError::InvalidDuration(0.0));
        }
        Ok(Self { segments, noise: Vec::new() })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn noise(&self) -> &[NoiseSpec] {
        &self.noise
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn with_noise(mut self, spec: NoiseSpec) -> Result<Self> {
        if spec.position() > self.segments.len() {
            return Err(SimError::NoisePosition { position: spec.position(), segments: self.segments.len() });
        }
        self.noise.push(spec);
        Ok(self)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Schedule) -> Schedule {
        let offset = self.segments.len();
        let mut segments = self.segments.clone();
        segments.extend(next.segments.iter().cloned());
        let mut noise = self.noise.clone();
        noise.extend(next.noise.iter().map(|n| n.shifted(offset)));
        Schedule { segments, noise }
    }

    pub fn repeated(&self, times: usize) -> Schedule {
        let mut out = self.clone();
        for _ in 1..times {
            out = out.then(self);
        }
        out
    }

    /// Reversed segment order with real-time durations negated, the
    /// orientation-reversed path. Drops noise events.
    pub fn reversed(&self) -> Schedule {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| match s.kind {
                EvolutionKind::Imaginary => s.clone(),
                EvolutionKind::Real => Segment { duration: -s.duration, ..s.clone() },
            })
            .collect();
        Schedule { segments, noise: Vec::new() }
    }

    /// Rewrites every segment, keeping noise positions.
    pub fn map_segments(&self, mut f: impl FnMut(usize, &Segment) -> Result<Segment>) -> Result<Schedule> {
        let segments = self.segments.iter().enumerate().map(|(k, s)| f(k, s)).collect::<Result<Vec<_>>>()?;
        Ok(Schedule { segments, noise: self.noise.clone() })
    }

    /// Splits every imaginary-time segment into two half-time segments.
    pub fn split_imaginary(&self) -> Result<Schedule> {
        let mut segments = Vec::new();
        let mut new_index = Vec::with_capacity(self.segments.len() + 1);
        for s in &self.segments {
            new_index.push(segments.len());
            if s.kind == EvolutionKind::Imaginary {
                let half = s.with_duration(s.duration / 2.0)?;
                segments.push(half.clone());
                segments.push(half);
            } else {
                segments.push(s.clone());
            }
        }
        new_index.push(segments.len());
        let noise = self.noise.iter().map(|n| n.at_position(new_index[n.position()])).collect();
        Ok(Schedule { segments, noise })
    }

    /// Multiplies every imaginary time by `factor`.
    pub fn scale_imaginary(&self, factor: f64) -> Result<Schedule> {
        self.map_segments(|_, s| match s.kind {
            EvolutionKind::Imaginary => s.with_duration(s.duration * factor),
            EvolutionKind::Real => Ok(s.clone()),
        })
    }

    fn noise_at(&self, position: usize) -> impl Iterator<Item = &NoiseSpec> {
        self.noise.iter().filter(move |n| n.position() == position)
    }
}

/// Normalized `e^{-Ht}ψ`, by eigendecomposition.
pub fn ite_step(psi: &StateVector, h: &DenseOperator, t: f64) -> Result<StateVector> {
    if !(t.is_finite() && t > 0.0) {
        return Err(SimError::InvalidDuration(t));
    }
    let spectrum = h.spectrum()?;
    let e0 = spectrum.ground_energy();
    let out = spectrum.apply_map(&column(psi), |e| Complex64::new((-(e - e0) * t).exp(), 0.0));
    StateVector::from_amplitudes(out.column(0).into_owned(), psi.site_count())
}

/// Normalized `e^{-iHτ}ψ`.
pub fn real_time_step(psi: &StateVector, h: &DenseOperator, tau: f64) -> Result<StateVector> {
    let spectrum = h.spectrum()?;
    let out = spectrum.apply_map(&column(psi), |e| Complex64::from_polar(1.0, -e * tau));
    StateVector::from_amplitudes(out.column(0).into_owned(), psi.site_count())
}

/// `e^{-Ht}ψ` as a product of per-term factors `e^{-c P t}`, normalized once.
/// Requires mutually commuting terms.
pub fn ite_factored(psi: &StateVector, h: &SpinHamiltonian, t: f64) -> Result<StateVector> {
    if !(t.is_finite() && t > 0.0) {
        return Err(SimError::InvalidDuration(t));
    }
    if let Err((a, b)) = h.all_terms_commute() {
        return Err(SimError::NonCommutingTerms(h.terms()[a].to_string(), h.terms()[b].to_string()));
    }
    let mut v = psi.amplitudes().clone();
    for term in h.terms() {
        v = term_factor(&v, term, t);
    }
    StateVector::from_amplitudes(v, psi.site_count())
}

/// `e^{-cPt}v` up to the positive factor `e^{|c|t}`: with `r = e^{-2|c|t}`,
/// `[(1 + r) - sign(c)(1 - r)P] v / 2`.
fn term_factor(v: &CVector, term: &PauliString, t: f64) -> CVector {
    let c = term.coefficient();
    let r = (-2.0 * c.abs() * t).exp();
    let unit = term.with_coefficient(1.0);
    let pv = unit.apply(v);
    v * Complex64::new((1.0 + r) / 2.0, 0.0) - pv * Complex64::new(c.signum() * (1.0 - r) / 2.0, 0.0)
}

/// Result of one dissipative step: the kept system state and the
/// probability of finding the environment in the kept branch.
#[derive(Debug, Clone)]
pub struct Dissipation {
    pub state: StateVector,
    pub kept_probability: f64,
}

/// `e^{-(term)t}ψ` realized with a two-level environment.
///
/// The environment is appended as the most significant tensor slot in `|0_e⟩`.
/// A unitary conditioned on the term's eigenspaces rotates the environment
/// only on the high-energy branch, by the angle whose cosine is the decay
/// ratio `e^{-2|c|t}`; the `|1_e⟩` branch is discarded.
pub fn dissipate(psi: &StateVector, term: &PauliString, t: f64) -> Result<Dissipation> {
    if !(t.is_finite() && t > 0.0) {
        return Err(SimError::InvalidDuration(t));
    }
    let n = psi.site_count();
    if term.site_count() != n {
        return Err(SimError::DimensionMismatch { expected: n, actual: term.site_count() });
    }
    let c = term.coefficient();
    if c == 0.0 {
        return Err(SimError::NotInvolutive);
    }
    let dim = 1usize << n;
    let p = term.with_coefficient(1.0).matrix();
    let id = linalg::identity(dim);
    let half = Complex64::new(0.5, 0.0);
    // low-energy branch of c·P is P = -sign(c)
    let low = (&id - &p * Complex64::new(c.signum(), 0.0)) * half;
    let high = &id - &low;

    let r = (-2.0 * c.abs() * t).exp();
    let s = (1.0 - r * r).max(0.0).sqrt();
    let rotation = CMatrix::from_row_slice(2, 2, &[
        Complex64::new(r, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(r, 0.0),
    ]);
    let coupling = linalg::kron(&linalg::identity(2), &low) + linalg::kron(&rotation, &high);

    // environment in the most significant slot: |0_e⟩ ⊗ ψ fills the first half
    let mut joint = CVector::zeros(2 * dim);
    joint.rows_mut(0, dim).copy_from(psi.amplitudes());
    let evolved = coupling * joint;
    let kept: CVector = evolved.rows(0, dim).into_owned();
    let kept_probability = kept.norm_squared();
    if kept_probability.sqrt() < ANNIHILATION_NORM {
        return Err(SimError::Annihilated { norm: kept_probability.sqrt() });
    }
    Ok(Dissipation { state: StateVector::from_amplitudes(kept, n)?, kept_probability })
}

pub fn dissipative_term_step(psi: &StateVector, term: &PauliString, t: f64) -> Result<StateVector> {
    Ok(dissipate(psi, term, t)?.state)
}

/// Folds the schedule over a normalized state, applying noise events as
/// post-selected projections.
pub fn run_schedule(psi: &StateVector, schedule: &Schedule) -> Result<StateVector> {
    let mut state = psi.clone();
    for (k, segment) in schedule.segments.iter().enumerate() {
        for spec in schedule.noise_at(k) {
            state = spec.apply(&state)?.0;
        }
        let out = segment.propagate(&column(&state))?;
        state = StateVector::from_amplitudes(out.column(0).into_owned(), state.site_count())?;
    }
    for spec in schedule.noise_at(schedule.len()) {
        state = spec.apply(&state)?.0;
    }
    Ok(state)
}

/// Image of a block of column vectors, rescaled after every step to the
/// input's Frobenius norm. The true image is `exp(log_gain)·block`.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub block: CMatrix,
    pub log_gain: f64,
    /// Per noise event: mean over columns of the retained squared norm.
    pub survival: Vec<f64>,
}

impl Propagation {
    pub fn gain(&self) -> f64 {
        self.log_gain.exp()
    }
}

/// Pushes every column of `block` through the schedule as one linear map.
/// A step that shrinks the block below [`ANNIHILATION_NORM`] of its norm
/// counts as annihilation.
pub fn propagate_block(block: &CMatrix, schedule: &Schedule) -> Result<Propagation> {
    let reference = linalg::frobenius(block);
    if reference < ANNIHILATION_NORM {
        return Err(SimError::Annihilated { norm: reference });
    }
    let mut current = block.clone();
    let mut log_gain = 0.0;
    let mut survival = Vec::new();
    let rescale = |m: CMatrix, log_gain: &mut f64| -> Result<CMatrix> {
        let ratio = linalg::frobenius(&m) / reference;
        if ratio < ANNIHILATION_NORM {
            return Err(SimError::Annihilated { norm: ratio * reference });
        }
        *log_gain += ratio.ln();
        Ok(m / Complex64::new(ratio, 0.0))
    };
    for k in 0..=schedule.len() {
        for spec in schedule.noise_at(k) {
            let op = spec.operator()?;
            let after = op.matrix() * &current;
            survival.push(mean_retained(&current, &after));
            current = rescale(after, &mut log_gain)?;
        }
        if let Some(segment) = schedule.segments.get(k) {
            current = rescale(segment.propagate(&current)?, &mut log_gain)?;
        }
    }
    Ok(Propagation { block: current, log_gain, survival })
}

fn mean_retained(before: &CMatrix, after: &CMatrix) -> f64 {
    let ratios: Vec<f64> = (0..before.ncols())
        .filter_map(|c| {
            let b = before.column(c).norm_squared();
            (b > ANNIHILATION_NORM * ANNIHILATION_NORM).then(|| after.column(c).norm_squared() / b)
        })
        .collect();
    if ratios.is_empty() {
        0.0
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    }
}

fn column(psi: &StateVector) -> CMatrix {
    CMatrix::from_column_slice(psi.dimension(), 1, psi.amplitudes().as_slice())
}
