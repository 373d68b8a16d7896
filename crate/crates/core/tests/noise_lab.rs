mod common;

use common::c;
use mzm_core::braiding::{braid_ac, braid_cd, colocated_sites, t_gate, Mzm};
use mzm_core::ite::DEFAULT_ITE_TIME;
use mzm_core::linalg::{self, CMatrix};
use mzm_core::logical::{encode_logical, LogicalState};
use mzm_core::models::SITES;
use mzm_core::noise::*;
use mzm_core::state::StateVector;
use mzm_core::SimError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const T: f64 = DEFAULT_ITE_TIME;

fn occ(index: usize, site: usize) -> usize {
    index >> (site - 1) & 1
}

#[test]
fn phase_error_keeps_occupied_site() {
    let psi = StateVector::basis(0b001000, SITES);
    let (out, survival) = apply_phase_error(&psi, 4).unwrap();
    assert!((survival - 1.0).abs() < 1e-15);
    assert!(out.fidelity(&psi) > 1.0 - 1e-15);
}

#[test]
fn phase_error_annihilates_empty_site() {
    let psi = StateVector::basis(0b000000, SITES);
    assert!(matches!(apply_phase_error(&psi, 4), Err(SimError::Annihilated { .. })));
}

#[test]
fn phase_error_on_link_annihilates_code() {
    let psi = encode_logical(&LogicalState::basis(0)).unwrap();
    assert!(matches!(apply_phase_error(&psi, 3), Err(SimError::Annihilated { .. })));
}

#[test]
fn flip_error_swaps_antialigned_pair() {
    // site 4 occupied, site 5 empty
    let psi = StateVector::basis(0b001000, SITES);
    let (out, survival) = apply_flip_error(&psi, (4, 5)).unwrap();
    assert!((survival - 1.0).abs() < 1e-15);
    assert!(out.fidelity(&StateVector::basis(0b010000, SITES)) > 1.0 - 1e-15);
}

#[test]
fn flip_error_kills_aligned_pair() {
    let psi = StateVector::basis(0b011000, SITES);
    assert!(apply_flip_error(&psi, (4, 5)).is_err());
    assert!(apply_flip_error(&StateVector::vacuum(SITES), (4, 5)).is_err());
}

#[test]
fn flip_survival_on_encoded_state_by_counting() {
    let psi = encode_logical(&LogicalState::basis(0)).unwrap();
    let a = psi.amplitudes();
    let kept: f64 = (0..64).filter(|&i| occ(i, 4) != occ(i, 5)).map(|i| a[i].norm_sqr()).sum();
    let (_, survival) = apply_flip_error(&psi, (4, 5)).unwrap();
    assert!((survival - kept).abs() < 1e-14);
    assert!((survival - 0.5).abs() < 1e-14);
}

#[test]
fn error_operators_are_projector_and_partial_involution() {
    let p = NoiseSpec::phase(2, 0).unwrap().operator().unwrap();
    assert!(p.is_hermitian(1e-12));
    assert!(linalg::max_abs(&((&p * &p).matrix() - p.matrix())) < 1e-12);
    let f = NoiseSpec::flip(2, 3, 0).unwrap().operator().unwrap();
    assert!(f.is_hermitian(1e-12));
    let f2 = (&f * &f).into_matrix();
    assert!(linalg::max_abs(&(&f2 * &f2 - &f2)) < 1e-12);
    // f² projects onto sites 2, 3 antialigned
    let anti = CMatrix::from_fn(64, 64, |r, col| if r == col && occ(r, 2) != occ(r, 3) { c(1.0, 0.0) } else { c(0.0, 0.0) });
    assert!(linalg::max_abs(&(f2 - anti)) < 1e-12);
}

#[test]
fn survival_in_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let psi = StateVector::random(&mut rng, SITES);
        for site in 1..=SITES {
            let (_, s) = apply_phase_error(&psi, site).unwrap();
            assert!((0.0..=1.0).contains(&s));
        }
        for i in 1..SITES {
            let (_, s) = apply_flip_error(&psi, (i, i + 1)).unwrap();
            assert!((0.0..=1.0).contains(&s));
        }
    }
}

#[test]
fn t_gate_errors_at_colocation_point() {
    let t = t_gate(T).unwrap();
    let p = t.colocation_point().unwrap();
    let traj = t.mzm_trajectory().unwrap();
    // the leading A–C braid relabels the mode on 4a as A
    assert_eq!(traj[p][&Mzm::A].site(), 3);
    assert_eq!(traj[p][&Mzm::B].site(), 3);
    assert_eq!(colocated_sites(&traj[p]).into_iter().collect::<Vec<_>>(), vec![3]);

    let run = |spec: &str| corrupted_gate(&t, &spec.parse::<NoiseSpec>().unwrap().at_position(p)).unwrap();
    for spec in ["phase:4@0", "flip:4-5@0", "flip:5-6@0"] {
        let g = run(spec);
        assert!(g.fidelity >= UNAFFECTED_FIDELITY, "{spec}: {}", g.fidelity);
        assert!(g.unaffected);
        assert!(g.leakage < 1e-8);
    }
    for spec in ["phase:3@0", "flip:3-4@0", "flip:2-3@0", "flip:1-2@0"] {
        let g = run(spec);
        assert!(g.fidelity < 0.99, "{spec}");
        assert!(!g.unaffected);
        // regression pins
        assert!((g.fidelity - 0.5).abs() < 1e-8, "{spec}: {}", g.fidelity);
    }
    for spec in ["phase:4@0", "phase:3@0", "flip:3-4@0", "flip:4-5@0"] {
        assert!((run(spec).survival - 0.5).abs() < 1e-8, "{spec}");
    }
}

#[test]
fn errors_away_from_zero_modes_leave_braids_intact() {
    for recipe in [braid_ac(T).unwrap(), braid_cd(T).unwrap()] {
        let traj = recipe.mzm_trajectory().unwrap();
        for (p, map) in traj.iter().enumerate() {
            let occupied: Vec<usize> = map.values().map(|m| m.site()).collect();
            let mut specs: Vec<NoiseSpec> = (1..=SITES).map(|s| NoiseSpec::phase(s, p).unwrap()).collect();
            specs.extend((1..SITES).map(|i| NoiseSpec::flip(i, i + 1, p).unwrap()));
            for spec in specs.into_iter().filter(|s| s.sites().iter().all(|x| !occupied.contains(x))) {
                match corrupted_gate(&recipe, &spec) {
                    Ok(g) => assert!(g.fidelity >= 1.0 - 1e-3, "{spec}: {}", g.fidelity),
                    Err(e) => assert!(matches!(e, SimError::Annihilated { .. }), "{spec}: {e}"),
                }
            }
        }
    }
}

#[test]
fn noise_position_out_of_range() {
    let r = braid_ac(T).unwrap();
    let spec = NoiseSpec::phase(4, 6).unwrap();
    assert!(matches!(corrupted_gate(&r, &spec), Err(SimError::NoisePosition { .. })));
}

#[test]
fn spec_parsing() {
    let s: NoiseSpec = "flip:5-4@2".parse().unwrap();
    assert_eq!(s.sites(), &[4, 5]);
    assert_eq!(s.kind(), NoiseKind::Flip);
    assert_eq!(s.shifted(3).position(), 5);
    assert!("phase:0@1".parse::<NoiseSpec>().is_err());
    assert!("phase:3".parse::<NoiseSpec>().is_err());
}
