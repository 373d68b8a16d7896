//! Pauli-string Hamiltonians, the Jordan-Wigner map from Majorana pairings,
//! and commuting-term partitions.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::fermion::{MajoranaHamiltonian, MajoranaIndex, Species};
use crate::linalg::{CMatrix, CVector, I, ONE, ZERO};
use crate::state::DenseOperator;

/// Coefficients smaller than this are dropped when canonicalizing.
const COEFF_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Action on a single site occupation bit: returns the phase and the new bit.
    ///
    /// With `|1⟩ = |z⟩` and `|0⟩ = |z̄⟩`, Z is diag(-1, 1) and Y maps
    /// `|0⟩ → -i|1⟩`, `|1⟩ → i|0⟩`.
    #[inline]
    pub fn act(self, bit: bool) -> (Complex64, bool) {
        match self {
            Pauli::I => (ONE, bit),
            Pauli::X => (ONE, !bit),
            Pauli::Y => {
                if bit {
                    (I, false)
                } else {
                    (-I, true)
                }
            }
            Pauli::Z => {
                if bit {
                    (ONE, true)
                } else {
                    (-ONE, false)
                }
            }
        }
    }

    pub fn matrix(self) -> CMatrix {
        CMatrix::from_fn(2, 2, |r, c| {
            let (phase, out) = self.act(c == 1);
            if (out as usize) == r {
                phase
            } else {
                ZERO
            }
        })
    }

    /// `self · other = phase · result`
    pub fn product(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        const IM: Complex64 = crate::linalg::I;
        match (self, other) {
            (I, p) | (p, I) => (ONE, p),
            (X, X) | (Y, Y) | (Z, Z) => (ONE, I),
            (X, Y) => (IM, Z),
            (Y, X) => (-IM, Z),
            (Y, Z) => (IM, X),
            (Z, Y) => (-IM, X),
            (Z, X) => (IM, Y),
            (X, Z) => (-IM, Y),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A real-weighted tensor product of single-site Pauli letters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    coefficient: f64,
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(coefficient: f64, letters: Vec<Pauli>) -> Self {
        Self { coefficient, letters }
    }

    /// Builds a string from `(site, letter)` pairs, sites 1-based.
    pub fn on_sites(coefficient: f64, site_count: usize, letters: &[(usize, Pauli)]) -> Result<Self> {
        let mut all = vec![Pauli::I; site_count];
        for &(site, letter) in letters {
            if site == 0 || site > site_count {
                return Err(SimError::SiteOutOfRange { site, site_count });
            }
            all[site - 1] = letter;
        }
        Ok(Self::new(coefficient, all))
    }

    /// Parses a compact letter word such as `"YZXIII"` (site 1 first).
    pub fn from_word(coefficient: f64, word: &str) -> Result<Self> {
        let letters = word
            .chars()
            .map(|c| Pauli::from_symbol(c).ok_or_else(|| SimError::InvalidMajorana(word.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coefficient, letters))
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn site_count(&self) -> usize {
        self.letters.len()
    }

    pub fn with_coefficient(&self, coefficient: f64) -> Self {
        Self { coefficient, letters: self.letters.clone() }
    }

    /// Sites (1-based) carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(k, _)| k + 1)
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn word(&self) -> String {
        self.letters.iter().map(|p| p.symbol()).collect()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let clashes = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        clashes % 2 == 0
    }

    /// Letter-wise product of the unit-weight strings: `P_self · P_other = phase · P`.
    pub fn letter_product(&self, other: &Self) -> (Complex64, Vec<Pauli>) {
        let mut phase = ONE;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (p, c) = a.product(b);
                phase *= p;
                c
            })
            .collect();
        (phase, letters)
    }

    /// Image of a basis index under the unit-weight string.
    #[inline]
    pub fn act_on_index(&self, index: usize) -> (Complex64, usize) {
        let mut phase = ONE;
        let mut out = index;
        for (k, &letter) in self.letters.iter().enumerate() {
            let (p, bit) = letter.act(index >> k & 1 == 1);
            phase *= p;
            if bit {
                out |= 1 << k;
            } else {
                out &= !(1 << k);
            }
        }
        (phase, out)
    }

    /// `coefficient · P · v`, computed without forming the matrix.
    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(v.len());
        for x in 0..v.len() {
            let (phase, y) = self.act_on_index(x);
            out[y] += phase * v[x] * self.coefficient;
        }
        out
    }

    /// Dense matrix of `coefficient · P`.
    pub fn matrix(&self) -> CMatrix {
        let dim = 1usize << self.letters.len();
        let mut m = CMatrix::zeros(dim, dim);
        for x in 0..dim {
            let (phase, y) = self.act_on_index(x);
            m[(y, x)] = phase * self.coefficient;
        }
        m
    }
}

impl fmt::Display for PauliString {
    /// Renders as e.g. `-1.0 * X1 X2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} *", self.coefficient)?;
        let support = self.support();
        if support.is_empty() {
            return write!(f, " I");
        }
        for site in support {
            write!(f, " {}{}", self.letters[site - 1].symbol(), site)?;
        }
        Ok(())
    }
}

/// A sum of Pauli strings with unique letter arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinHamiltonian {
    site_count: usize,
    terms: Vec<PauliString>,
}

impl SpinHamiltonian {
    /// Canonicalizes: duplicate letter arrays are merged by summing
    /// coefficients (first occurrence keeps its position) and zero terms dropped.
    pub fn new(site_count: usize, terms: Vec<PauliString>) -> Result<Self> {
        let mut merged: Vec<PauliString> = Vec::with_capacity(terms.len());
        for term in terms {
            if term.site_count() != site_count {
                return Err(SimError::DimensionMismatch { expected: site_count, actual: term.site_count() });
            }
            match merged.iter_mut().find(|t| t.letters == term.letters) {
                Some(existing) => existing.coefficient += term.coefficient,
                None => merged.push(term),
            }
        }
        merged.retain(|t| t.coefficient.abs() > COEFF_EPS);
        Ok(Self { site_count, terms: merged })
    }

    pub fn empty(site_count: usize) -> Self {
        Self { site_count, terms: Vec::new() }
    }

    /// Convenience constructor from `(coefficient, word)` pairs.
    pub fn from_words(terms: &[(f64, &str)]) -> Result<Self> {
        let site_count = terms.first().map_or(0, |(_, w)| w.len());
        let strings = terms
            .iter()
            .map(|&(c, w)| PauliString::from_word(c, w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(site_count, strings)
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let terms = self.terms.iter().map(|t| t.with_coefficient(t.coefficient * factor)).collect();
        Self::new(self.site_count, terms).expect("same site count")
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(self.site_count, terms)
    }

    /// Coefficient of the term with the given letters, zero if absent.
    pub fn coefficient_of(&self, letters: &[Pauli]) -> f64 {
        self.terms.iter().find(|t| t.letters == letters).map_or(0.0, |t| t.coefficient)
    }

    pub fn all_terms_commute(&self) -> std::result::Result<(), (usize, usize)> {
        for a in 0..self.terms.len() {
            for b in a + 1..self.terms.len() {
                if !self.terms[a].commutes_with(&self.terms[b]) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for SpinHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Kronecker assembly of the Pauli letters.
pub fn spin_matrix(h: &SpinHamiltonian) -> DenseOperator {
    let dim = 1usize << h.site_count;
    let mut m = CMatrix::zeros(dim, dim);
    for term in &h.terms {
        m += term.matrix();
    }
    DenseOperator::new(m, h.site_count).expect("dimension matches site count")
}

/// Sign applied to every species-b Majorana string. With `|1⟩ = |z⟩`
/// occupied this is the unique choice giving `c†c = (1 + σᶻ)/2`.
pub const SPECIES_B_SIGN: f64 = -1.0;

/// Pauli string of one Majorana operator under the Jordan-Wigner map:
/// `γ_ja = Z_1…Z_{j-1} X_j` and `γ_jb = -Z_1…Z_{j-1} Y_j`.
pub fn majorana_string(m: MajoranaIndex, site_count: usize) -> Result<PauliString> {
    if m.site() > site_count {
        return Err(SimError::SiteOutOfRange { site: m.site(), site_count });
    }
    let mut letters = vec![Pauli::I; site_count];
    for letter in letters.iter_mut().take(m.site() - 1) {
        *letter = Pauli::Z;
    }
    let (sign, end) = match m.species() {
        Species::A => (1.0, Pauli::X),
        Species::B => (SPECIES_B_SIGN, Pauli::Y),
    };
    letters[m.site() - 1] = end;
    Ok(PauliString::new(sign, letters))
}

/// Maps `Σ i·c·γ_l γ_m` onto a sum of Pauli strings.
pub fn jw_transform(h: &MajoranaHamiltonian, site_count: usize) -> Result<SpinHamiltonian> {
    let mut terms = Vec::with_capacity(h.terms().len());
    for term in h.terms() {
        let first = majorana_string(term.first(), site_count)?;
        let second = majorana_string(term.second(), site_count)?;
        let (phase, letters) = first.letter_product(&second);
        // i·phase is real because distinct Majoranas anticommute
        let weight = I * phase * first.coefficient() * second.coefficient() * term.coefficient();
        debug_assert!(weight.im.abs() < 1e-12);
        terms.push(PauliString::new(weight.re, letters));
    }
    SpinHamiltonian::new(site_count, terms)
}

/// Greedy first-fit partition into groups of mutually commuting terms.
pub fn commuting_groups(h: &SpinHamiltonian) -> Vec<Vec<PauliString>> {
    let mut groups: Vec<Vec<PauliString>> = Vec::new();
    for term in &h.terms {
        match groups.iter_mut().find(|g| g.iter().all(|t| t.commutes_with(term))) {
            Some(group) => group.push(term.clone()),
            None => groups.push(vec![term.clone()]),
        }
    }
    groups
}

/// Conjugation by a product of σᶻ on a set of sites. Flips the sign of every
/// term with an odd number of X/Y letters on those sites; leaves spectra,
/// parity and occupation numbers untouched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZGauge {
    sites: Vec<usize>,
}

impl ZGauge {
    pub fn new(mut sites: Vec<usize>) -> Self {
        sites.sort_unstable();
        sites.dedup();
        Self { sites }
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn is_trivial(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sign_for(&self, term: &PauliString) -> f64 {
        let flips = self
            .sites
            .iter()
            .filter(|&&s| s <= term.site_count() && matches!(term.letters()[s - 1], Pauli::X | Pauli::Y))
            .count();
        if flips % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn apply(&self, h: &SpinHamiltonian) -> SpinHamiltonian {
        let terms = h.terms.iter().map(|t| t.with_coefficient(t.coefficient * self.sign_for(t))).collect();
        SpinHamiltonian::new(h.site_count, terms).expect("same site count")
    }
}

/// Per-term comparison between a Jordan-Wigner image and a literal spin form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermSign {
    pub word: String,
    pub transformed: f64,
    pub literal: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaugeDiagnostic {
    pub terms: Vec<TermSign>,
    /// Same letter arrays with coefficients equal up to sign.
    pub same_shape: bool,
    /// Smallest σᶻ-product gauge mapping the transformed form onto the literal one.
    pub z_gauge: Option<ZGauge>,
}

/// Reports where `transformed` and `literal` differ term by term and searches
/// the σᶻ-product gauges for one that maps the first onto the second.
pub fn gauge_diagnostic(transformed: &SpinHamiltonian, literal: &SpinHamiltonian) -> GaugeDiagnostic {
    let mut terms = Vec::new();
    let mut same_shape = transformed.terms.len() == literal.terms.len();
    for t in &transformed.terms {
        let lit = literal.coefficient_of(t.letters());
        same_shape &= (lit.abs() - t.coefficient.abs()).abs() < 1e-12;
        terms.push(TermSign {
            word: t.word(),
            transformed: t.coefficient,
            literal: lit,
            agrees: (lit - t.coefficient).abs() < 1e-12,
        });
    }
    let z_gauge = if same_shape { find_z_gauge(transformed, literal) } else { None };
    GaugeDiagnostic { terms, same_shape, z_gauge }
}

/// Smallest σᶻ-product gauge `G` with `G·a·G = b` term by term, if any.
pub fn find_z_gauge(a: &SpinHamiltonian, b: &SpinHamiltonian) -> Option<ZGauge> {
    let n = a.site_count;
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.into_iter().find_map(|mask| {
        let gauge = ZGauge::new((0..n).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect());
        let mapped = gauge.apply(a);
        let equal = mapped.terms.len() == b.terms.len()
            && mapped.terms.iter().all(|t| (b.coefficient_of(t.letters()) - t.coefficient).abs() < 1e-12);
        equal.then_some(gauge)
    })
}
