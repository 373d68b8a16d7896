//! The two-chain network: chain 1 is sites 1–2, site 3 links the chains,
//! chain 2 is sites 4–6. Endpoint zero modes A, B, C, D sit at 1a, 2b, 4a, 6b.

use crate::error::Result;
use crate::fermion::MajoranaHamiltonian;
use crate::spin::{jw_transform, SpinHamiltonian, ZGauge};

pub const SITES: usize = 6;

fn pairing(terms: &[(f64, &str, &str)]) -> MajoranaHamiltonian {
    MajoranaHamiltonian::parse(terms).expect("static pairing is valid")
}

/// Idle network: both chains in their topological phase, link site gapped on-site.
pub fn h_m0() -> MajoranaHamiltonian {
    pairing(&[(1.0, "1b", "2a"), (1.0, "4b", "5a"), (1.0, "5b", "6a"), (1.0, "3a", "3b")])
}

pub fn h_h1() -> MajoranaHamiltonian {
    pairing(&[(1.0, "1b", "2a"), (1.0, "1a", "3a"), (1.0, "5b", "6a"), (1.0, "4a", "4b")])
}

pub fn h_h2() -> MajoranaHamiltonian {
    pairing(&[(1.0, "1b", "2a"), (1.0, "1a", "3a"), (1.0, "3b", "4b"), (1.0, "5b", "6a")])
}

pub fn h_h3() -> MajoranaHamiltonian {
    pairing(&[(1.0, "1b", "2a"), (1.0, "1a", "3a"), (1.0, "4b", "5a"), (1.0, "5b", "6a")])
}

/// Population-dependent coupling of the two Majoranas on the link site.
pub fn h_e() -> MajoranaHamiltonian {
    pairing(&[(-1.0, "3a", "3b")])
}

fn literal(terms: &[(f64, &str)]) -> SpinHamiltonian {
    SpinHamiltonian::from_words(terms).expect("static spin form is valid")
}

/// Hand-entered spin form of [`h_m0`]: `-X1X2 + Z3 - X4X5 - X5X6`.
pub fn spin_h0() -> SpinHamiltonian {
    literal(&[(-1.0, "XXIIII"), (1.0, "IIZIII"), (-1.0, "IIIXXI"), (-1.0, "IIIIXX")])
}

/// `-X1X2 + Y1Z2X3 + Z4 - X5X6`
pub fn spin_h1() -> SpinHamiltonian {
    literal(&[(-1.0, "XXIIII"), (1.0, "YZXIII"), (1.0, "IIIZII"), (-1.0, "IIIIXX")])
}

/// `-X1X2 + Y1Z2X3 + X3Y4 - X5X6`
pub fn spin_h2() -> SpinHamiltonian {
    literal(&[(-1.0, "XXIIII"), (1.0, "YZXIII"), (1.0, "IIXYII"), (-1.0, "IIIIXX")])
}

/// `-X1X2 + Y1Z2X3 - X4X5 - X5X6`
pub fn spin_h3() -> SpinHamiltonian {
    literal(&[(-1.0, "XXIIII"), (1.0, "YZXIII"), (-1.0, "IIIXXI"), (-1.0, "IIIIXX")])
}

/// The σᶻ-product gauge relating the Jordan-Wigner images of the pairing
/// Hamiltonians to the hand-entered spin forms. Equivalent to `c_j → -c_j`
/// on the even sites.
pub fn encoding_gauge() -> ZGauge {
    ZGauge::new(vec![2, 4, 6])
}

/// Spin Hamiltonian in the frame where the logical code words are defined.
pub fn encoding_frame(h: &MajoranaHamiltonian) -> Result<SpinHamiltonian> {
    Ok(encoding_gauge().apply(&jw_transform(h, SITES)?))
}

/// The four pairing Hamiltonians of the A–C exchange with their literal spin forms.
pub fn braid_pairs() -> [(MajoranaHamiltonian, SpinHamiltonian); 4] {
    [(h_m0(), spin_h0()), (h_h1(), spin_h1()), (h_h2(), spin_h2()), (h_h3(), spin_h3())]
}
