//! Majorana and fermion operators as exact matrices on the Fock space, and
//! quadratic Majorana Hamiltonians `Σ i·c·γ_l γ_m`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::linalg::{self, CMatrix, Spectrum, I};
use crate::spin::{Pauli, SPECIES_B_SIGN};
use crate::state::{DenseOperator, StateVector};

/// Eigenvalues within this distance of the minimum form the ground space.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Species {
    A,
    B,
}

/// A Majorana operator `γ_{site,species}`; sites are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MajoranaIndex {
    site: usize,
    species: Species,
}

impl MajoranaIndex {
    pub fn new(site: usize, species: Species) -> Result<Self> {
        if site == 0 {
            return Err(SimError::InvalidMajorana(format!("{site}")));
        }
        Ok(Self { site, species })
    }

    pub fn site(self) -> usize {
        self.site
    }

    pub fn species(self) -> Species {
        self.species
    }

    /// All `2n` Majorana indices in the order 1a, 1b, 2a, …
    pub fn all(site_count: usize) -> impl Iterator<Item = MajoranaIndex> {
        (1..=site_count).flat_map(|site| {
            [Species::A, Species::B].into_iter().map(move |species| MajoranaIndex { site, species })
        })
    }

    /// Position in the `all` ordering.
    pub fn ordinal(self) -> usize {
        2 * (self.site - 1) + usize::from(self.species == Species::B)
    }
}

impl fmt::Display for MajoranaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.species {
            Species::A => 'a',
            Species::B => 'b',
        };
        write!(f, "{}{}", self.site, s)
    }
}

impl FromStr for MajoranaIndex {
    type Err = SimError;

    /// Parses `"3a"`, `"12b"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || SimError::InvalidMajorana(s.to_string());
        let s = s.trim();
        let (digits, tail) = s.split_at(s.len().checked_sub(1).ok_or_else(bad)?);
        let site: usize = digits.parse().map_err(|_| bad())?;
        let species = match tail {
            "a" | "A" => Species::A,
            "b" | "B" => Species::B,
            _ => return Err(bad()),
        };
        MajoranaIndex::new(site, species).map_err(|_| bad())
    }
}

/// One pairing term `i·coefficient·γ_first γ_second`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingTerm {
    coefficient: f64,
    first: MajoranaIndex,
    second: MajoranaIndex,
}

impl PairingTerm {
    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn first(&self) -> MajoranaIndex {
        self.first
    }

    pub fn second(&self) -> MajoranaIndex {
        self.second
    }

    pub fn involves(&self, m: MajoranaIndex) -> bool {
        self.first == m || self.second == m
    }

    /// The other end of the pairing, if `m` is one end.
    pub fn partner(&self, m: MajoranaIndex) -> Option<MajoranaIndex> {
        if self.first == m {
            Some(self.second)
        } else if self.second == m {
            Some(self.first)
        } else {
            None
        }
    }

    fn unordered(&self) -> (MajoranaIndex, MajoranaIndex) {
        if self.first <= self.second {
            (self.first, self.second)
        } else {
            (self.second, self.first)
        }
    }
}

/// `Σ_k i·c_k·γ_{l_k} γ_{m_k}` with distinct, non-repeated pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajoranaHamiltonian {
    terms: Vec<PairingTerm>,
}

impl MajoranaHamiltonian {
    pub fn new(terms: Vec<(f64, MajoranaIndex, MajoranaIndex)>) -> Result<Self> {
        let mut built: Vec<PairingTerm> = Vec::with_capacity(terms.len());
        for (coefficient, first, second) in terms {
            if first == second {
                return Err(SimError::SelfPairing(first.to_string()));
            }
            let term = PairingTerm { coefficient, first, second };
            if built.iter().any(|t| t.unordered() == term.unordered()) {
                return Err(SimError::DuplicatePairing(first.to_string(), second.to_string()));
            }
            built.push(term);
        }
        Ok(Self { terms: built })
    }

    /// Builds from `(coefficient, "1b", "2a")` triples.
    pub fn parse(terms: &[(f64, &str, &str)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|&(c, a, b)| Ok((c, a.parse()?, b.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }

    pub fn empty() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[PairingTerm] {
        &self.terms
    }

    pub fn max_site(&self) -> usize {
        self.terms.iter().map(|t| t.first.site.max(t.second.site)).max().unwrap_or(0)
    }

    /// The term containing `m`, if any.
    pub fn term_with(&self, m: MajoranaIndex) -> Option<&PairingTerm> {
        self.terms.iter().find(|t| t.involves(m))
    }

    /// Sum with another Hamiltonian; coinciding pairs add coefficients.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        let mut merged = self.terms.clone();
        for t in &other.terms {
            match merged.iter_mut().find(|m| m.unordered() == t.unordered()) {
                Some(m) if m.first == t.first => m.coefficient += t.coefficient,
                Some(m) => m.coefficient -= t.coefficient,
                None => merged.push(*t),
            }
        }
        Ok(Self { terms: merged })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let terms = self.terms.iter().map(|t| PairingTerm { coefficient: t.coefficient * factor, ..*t }).collect();
        Self { terms }
    }
}

impl fmt::Display for MajoranaHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.terms.iter().map(|t| format!("{:?}·iγ{}γ{}", t.coefficient, t.first, t.second)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Kronecker product of single-site matrices; site 1 is the least significant bit.
fn site_product(site_count: usize, letter_at: impl Fn(usize) -> Pauli) -> CMatrix {
    let mut m = linalg::identity(1);
    for site in (1..=site_count).rev() {
        m = linalg::kron(&m, &letter_at(site).matrix());
    }
    m
}

/// Dense matrix of `γ_m` on `site_count` sites.
pub fn majorana_matrix(m: MajoranaIndex, site_count: usize) -> Result<DenseOperator> {
    if m.site() > site_count {
        return Err(SimError::SiteOutOfRange { site: m.site(), site_count });
    }
    let (end, sign) = match m.species() {
        Species::A => (Pauli::X, 1.0),
        Species::B => (Pauli::Y, SPECIES_B_SIGN),
    };
    let matrix = site_product(site_count, |site| {
        use std::cmp::Ordering::*;
        match site.cmp(&m.site()) {
            Less => Pauli::Z,
            Equal => end,
            Greater => Pauli::I,
        }
    });
    DenseOperator::new(matrix * Complex64::new(sign, 0.0), site_count)
}

/// `c_j = (γ_ja + iγ_jb)/2`.
pub fn annihilation(site: usize, site_count: usize) -> Result<DenseOperator> {
    let a = majorana_matrix(MajoranaIndex::new(site, Species::A)?, site_count)?;
    let b = majorana_matrix(MajoranaIndex::new(site, Species::B)?, site_count)?;
    DenseOperator::new((a.matrix() + b.matrix() * I) * Complex64::new(0.5, 0.0), site_count)
}

pub fn creation(site: usize, site_count: usize) -> Result<DenseOperator> {
    Ok(annihilation(site, site_count)?.adjoint())
}

/// `c†_j c_j`
pub fn number_operator(site: usize, site_count: usize) -> Result<DenseOperator> {
    let c = annihilation(site, site_count)?;
    Ok(&c.adjoint() * &c)
}

/// Dense matrix of `Σ i·c·γ_l γ_m`.
pub fn build_hamiltonian(h: &MajoranaHamiltonian, site_count: usize) -> Result<DenseOperator> {
    let dim = 1usize << site_count;
    let mut total = CMatrix::zeros(dim, dim);
    for term in h.terms() {
        let first = majorana_matrix(term.first, site_count)?;
        let second = majorana_matrix(term.second, site_count)?;
        total += first.matrix() * second.matrix() * (I * term.coefficient);
    }
    DenseOperator::new(total, site_count)
}

/// Total fermion parity `Π_j (1 - 2n_j)`, diagonal in the Fock basis.
pub fn parity_operator(site_count: usize) -> DenseOperator {
    let dim = 1usize << site_count;
    let mut m = CMatrix::zeros(dim, dim);
    for x in 0..dim {
        m[(x, x)] = Complex64::new(parity_of_index(x), 0.0);
    }
    DenseOperator::new(m, site_count).expect("dimension matches site count")
}

pub fn parity_of_index(index: usize) -> f64 {
    if index.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Majorana indices that appear in no term of `h`.
pub fn zero_modes(h: &MajoranaHamiltonian, site_count: usize) -> Vec<MajoranaIndex> {
    MajoranaIndex::all(site_count).filter(|&m| h.term_with(m).is_none()).collect()
}

#[derive(Debug, Clone)]
pub struct GroundSpace {
    pub energy: f64,
    pub basis: Vec<StateVector>,
    pub degeneracy: usize,
}

/// Lowest eigenvalue of a Hermitian operator and an orthonormal basis of its eigenspace.
pub fn ground_space(h: &DenseOperator, tol: f64) -> Result<GroundSpace> {
    let spectrum = h.spectrum()?;
    let degeneracy = spectrum.ground_degeneracy(tol);
    let basis = (0..degeneracy)
        .map(|k| StateVector::from_amplitudes(spectrum.vectors.column(k).into_owned(), h.site_count()))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroundSpace { energy: spectrum.ground_energy(), basis, degeneracy })
}

/// Ground space restricted to one fermion-parity sector (`+1` even, `-1` odd).
pub fn ground_space_in_sector(h: &DenseOperator, parity: i8, tol: f64) -> Result<GroundSpace> {
    let indices: Vec<usize> =
        (0..h.dimension()).filter(|&x| parity_of_index(x) == f64::from(parity.signum())).collect();
    let block = CMatrix::from_fn(indices.len(), indices.len(), |r, c| h.matrix()[(indices[r], indices[c])]);
    let spectrum = Spectrum::of(&block)?;
    let degeneracy = spectrum.ground_degeneracy(tol);
    let basis = (0..degeneracy)
        .map(|k| {
            let mut full = linalg::CVector::zeros(h.dimension());
            for (r, &x) in indices.iter().enumerate() {
                full[x] = spectrum.vectors[(r, k)];
            }
            StateVector::from_amplitudes(full, h.site_count())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroundSpace { energy: spectrum.ground_energy(), basis, degeneracy })
}
