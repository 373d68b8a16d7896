mod common;

use common::{max_diff, sorted};
use mzm_core::fermion::{build_hamiltonian, majorana_matrix, MajoranaHamiltonian, MajoranaIndex};
use mzm_core::linalg::{self, CMatrix};
use mzm_core::models::*;
use mzm_core::spin::*;
use mzm_core::state::DenseOperator;

fn idx(s: &str) -> MajoranaIndex {
    s.parse().unwrap()
}

fn spectrum(op: &DenseOperator) -> Vec<f64> {
    sorted(op.spectrum().unwrap().values)
}

#[test]
fn majorana_strings_match_fermionic_matrices() {
    for m in MajoranaIndex::all(SITES) {
        let s = majorana_string(m, SITES).unwrap();
        let f = majorana_matrix(m, SITES).unwrap();
        assert!(linalg::max_abs(&(s.matrix() - f.matrix())) < 1e-12, "{m}");
    }
}

#[test]
fn jw_equals_direct_build() {
    for h in [h_m0(), h_h1(), h_h2(), h_h3(), h_e()] {
        let spin = spin_matrix(&jw_transform(&h, SITES).unwrap());
        let direct = build_hamiltonian(&h, SITES).unwrap();
        assert!(linalg::max_abs(&(spin.matrix() - direct.matrix())) < 1e-12);
    }
}

#[test]
fn nearest_neighbour_pairing_has_weight_two() {
    let h = MajoranaHamiltonian::parse(&[(1.0, "1b", "2a")]).unwrap();
    let s = jw_transform(&h, SITES).unwrap();
    assert_eq!(s.terms().len(), 1);
    assert_eq!(s.terms()[0].weight(), 2);
    assert_eq!(s.terms()[0].support(), vec![1, 2]);
}

#[test]
fn next_nearest_pairing_carries_z_string() {
    let h = MajoranaHamiltonian::parse(&[(1.0, "2b", "4a")]).unwrap();
    let s = jw_transform(&h, SITES).unwrap();
    assert_eq!(s.terms()[0].word(), "IXZXII");
    assert_eq!(s.terms()[0].weight(), 3);
    let h = MajoranaHamiltonian::parse(&[(1.0, "2a", "4a")]).unwrap();
    assert_eq!(jw_transform(&h, SITES).unwrap().terms()[0].word(), "IYZXII");
}

#[test]
fn onsite_coupling_is_single_z() {
    let s = jw_transform(&h_e(), SITES).unwrap();
    assert_eq!(s.terms().len(), 1);
    assert_eq!(s.terms()[0].word(), "IIZIII");
    assert!((s.terms()[0].coefficient().abs() - 1.0).abs() < 1e-15);
}

#[test]
fn number_operator_convention() {
    let h = MajoranaHamiltonian::parse(&[(0.5, "1a", "1b")]).unwrap();
    let s = jw_transform(&h, 1).unwrap();
    let m = spin_matrix(&s).into_matrix();
    let n = CMatrix::from_row_slice(2, 2, &[linalg::ZERO, linalg::ZERO, linalg::ZERO, linalg::ONE]);
    // i·γa·γb/2 = n - 1/2
    let shifted = n - CMatrix::identity(2, 2) * common::c(0.5, 0.0);
    assert!(linalg::max_abs(&(m - shifted)) < 1e-15);
}

#[test]
fn isospectral_with_fermionic_form() {
    for (h, literal) in braid_pairs() {
        let fermionic = spectrum(&build_hamiltonian(&h, SITES).unwrap());
        let jw = spectrum(&spin_matrix(&jw_transform(&h, SITES).unwrap()));
        let lit = spectrum(&spin_matrix(&literal));
        assert!(max_diff(&fermionic, &jw) < 1e-10);
        assert!(max_diff(&fermionic, &lit) < 1e-10);
    }
}

#[test]
fn literal_forms_differ_by_fixed_z_gauge() {
    for (h, literal) in braid_pairs() {
        let jw = jw_transform(&h, SITES).unwrap();
        let diag = gauge_diagnostic(&jw, &literal);
        assert!(diag.same_shape);
        let gauge = diag.z_gauge.expect("gauge exists");
        assert!(gauge.apply(&jw).terms().iter().all(|t| (literal.coefficient_of(t.letters()) - t.coefficient()).abs() < 1e-12));
        let frame = encoding_frame(&h).unwrap();
        assert!(gauge_diagnostic(&frame, &literal).terms.iter().all(|t| t.agrees));
    }
    let jw0 = jw_transform(&h_m0(), SITES).unwrap();
    let diag = gauge_diagnostic(&jw0, &spin_h0());
    assert!(diag.terms.iter().any(|t| !t.agrees));
}

#[test]
fn z_gauge_preserves_spectrum() {
    let s = jw_transform(&h_h2(), SITES).unwrap();
    let g = encoding_gauge().apply(&s);
    assert!(max_diff(&spectrum(&spin_matrix(&s)), &spectrum(&spin_matrix(&g))) < 1e-10);
    assert!(ZGauge::new(vec![]).is_trivial());
}

#[test]
fn jw_is_linear() {
    let a = MajoranaHamiltonian::parse(&[(0.7, "1b", "2a")]).unwrap();
    let b = MajoranaHamiltonian::parse(&[(-1.3, "4b", "5a")]).unwrap();
    let ab = MajoranaHamiltonian::parse(&[(0.7, "1b", "2a"), (-1.3, "4b", "5a")]).unwrap();
    let sum = jw_transform(&a, SITES).unwrap().plus(&jw_transform(&b, SITES).unwrap()).unwrap();
    let direct = jw_transform(&ab, SITES).unwrap();
    let diff = spin_matrix(&sum).matrix() - spin_matrix(&direct).matrix();
    assert!(linalg::max_abs(&diff) < 1e-14);
}

#[test]
fn schedule_hamiltonians_form_one_commuting_group() {
    for h in [h_m0(), h_h1(), h_h2(), h_h3()] {
        let s = jw_transform(&h, SITES).unwrap();
        assert!(s.all_terms_commute().is_ok());
        assert_eq!(commuting_groups(&s).len(), 1);
    }
}

#[test]
fn anticommuting_terms_split_into_groups() {
    let h = SpinHamiltonian::from_words(&[(1.0, "X"), (1.0, "Z"), (1.0, "Y")]).unwrap();
    assert!(h.all_terms_commute().is_err());
    assert_eq!(commuting_groups(&h).len(), 3);
}

#[test]
fn pauli_strings_square_to_identity() {
    let p = PauliString::from_word(1.0, "XYZIZX").unwrap();
    let m = p.matrix();
    assert!(linalg::max_abs(&(&m * &m - CMatrix::identity(64, 64))) < 1e-14);
    assert!(!p.to_string().is_empty());
    assert!(PauliString::from_word(1.0, "XQ").is_err());
}

#[test]
fn apply_matches_matrix_vector() {
    let p = PauliString::from_word(-0.5, "YZXIIZ").unwrap();
    let v = mzm_core::state::StateVector::random(&mut rand::rng(), SITES);
    let diff = p.apply(v.amplitudes()) - p.matrix() * v.amplitudes();
    assert!(diff.norm() < 1e-14);
    assert_eq!(idx("3b").site(), 3);
}
