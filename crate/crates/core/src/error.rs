use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("site {site} out of range 1..={site_count}")]
    SiteOutOfRange { site: usize, site_count: usize },

    #[error("invalid Majorana index `{0}`")]
    InvalidMajorana(String),

    #[error("pairing term couples {0} with itself")]
    SelfPairing(String),

    #[error("duplicate pairing term ({0}, {1})")]
    DuplicatePairing(String, String),

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state annihilated by evolution (norm {norm:.3e})")]
    Annihilated { norm: f64 },

    #[error("Hamiltonian terms do not mutually commute: {0} and {1}")]
    NonCommutingTerms(String, String),

    #[error("Pauli term does not square to a multiple of identity")]
    NotInvolutive,

    #[error("imaginary time must be positive and finite, got {0}")]
    InvalidDuration(f64),

    #[error("noise position {position} outside schedule of {segments} segments")]
    NoisePosition { position: usize, segments: usize },

    #[error("flip error sites ({0}, {1}) are not adjacent")]
    NonAdjacentFlip(usize, usize),

    #[error("logical state carries residual norm {0:.3e} outside the code space")]
    ResidualNotZero(f64),

    #[error("evolution leaks out of the code space (leakage {0:.3e})")]
    NotCodePreserving(f64),

    #[error("gate mixes fermion parity sectors (off-block norm {0:.3e})")]
    ParityMixing(f64),

    #[error("expected {expected} zero modes, found {found}")]
    ZeroModeCount { expected: usize, found: usize },

    #[error("zero-mode tracking failed between segments {0} and {1}")]
    TrackingFailed(usize, usize),

    #[error("no candidate schedule reproduced the target gate: {0}")]
    NoValidCandidate(String),

    #[error("unknown gate recipe `{0}`")]
    UnknownRecipe(String),

    #[error("shape mismatch: {0}x{0} vs {1}x{1}")]
    ShapeMismatch(usize, usize),

    #[error("tomography inversion is singular")]
    SingularInversion,

    #[error("ambiguous Deutsch-Jozsa verdict (overlaps {constant:.4}, {balanced:.4})")]
    AmbiguousVerdict { constant: f64, balanced: f64 },
}

pub type Result<T> = std::result::Result<T, SimError>;
