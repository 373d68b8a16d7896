mod common;

use common::{c, dist, mat2};
use mzm_core::braiding::*;
use mzm_core::fermion::{zero_modes, MajoranaIndex};
use mzm_core::ite::DEFAULT_ITE_TIME;
use mzm_core::linalg::{self, CMatrix, ONE, ZERO};
use mzm_core::logical::{extract_gate, LogicalState};
use mzm_core::models::*;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

const T: f64 = DEFAULT_ITE_TIME;

fn idx(s: &str) -> MajoranaIndex {
    s.parse().unwrap()
}

fn even(r: &GateRecipe) -> CMatrix {
    extract_gate(r.schedule()).unwrap().even_block
}

fn hadamard() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    mat2([c(h, 0.0), c(-h, 0.0), c(h, 0.0), c(h, 0.0)])
}

fn r_gate() -> CMatrix {
    mat2([ONE, ZERO, ZERO, c(0.0, -1.0)])
}

#[test]
fn every_recipe_meets_its_target() {
    for name in ["H", "Hdg", "R", "Rdg", "Z", "T", "I", "M:tau=0.3"] {
        let r = recipe_by_name(name).unwrap();
        let g = r.validate().unwrap();
        assert!(g.leakage < 1e-10, "{name}");
        assert!(linalg::unitarity_defect(&g.matrix4) < 1e-8, "{name}");
    }
}

#[test]
fn ac_braid_is_hadamard() {
    assert!(dist(&even(&braid_ac(T).unwrap()), &hadamard()) < 1e-8);
}

#[test]
fn ac_braid_twice_flips_00_to_11() {
    let g = extract_gate(braid_ac(T).unwrap().schedule()).unwrap();
    let once = g.apply(&LogicalState::basis(0)).unwrap();
    let twice = g.apply(&once).unwrap();
    assert!(twice.overlap(&LogicalState::basis(3)) > 1.0 - 1e-10);
}

#[test]
fn reversed_ac_is_inverse() {
    let h = braid_ac(T).unwrap();
    let hd = braid_ac_reversed(T).unwrap();
    assert!(dist(&even(&hd), &hadamard().adjoint()) < 1e-8);
    let both = even(&h.then(&hd, GateName::Identity));
    assert!(dist(&both, &CMatrix::identity(2, 2)) < 1e-8);
}

#[test]
fn cd_braid_is_phase_gate() {
    assert!(dist(&even(&braid_cd(T).unwrap()), &r_gate()) < 1e-8);
    assert!(dist(&even(&braid_cd_reversed(T).unwrap()), &r_gate().adjoint()) < 1e-8);
}

#[test]
fn cd_braid_twice_is_z() {
    let z = mat2([ONE, ZERO, ZERO, c(-1.0, 0.0)]);
    assert!(dist(&even(&z_gate(T).unwrap()), &z) < 1e-8);
}

fn phase_fixed(m: &CMatrix) -> CMatrix {
    linalg::fix_global_phase(m, 1e-9).0
}

#[test]
fn braids_do_not_commute() {
    let ac = braid_ac(T).unwrap();
    let cd = braid_cd(T).unwrap();
    // AC first then CD is the operator R·H
    let rh = even(&ac.then(&cd, GateName::Identity));
    let hr = even(&cd.then(&ac, GateName::Identity));
    let oracle = dist(&phase_fixed(&(hadamard() * r_gate())), &phase_fixed(&(r_gate() * hadamard())));
    assert!((oracle - 2f64.sqrt()).abs() < 1e-12);
    assert!((dist(&hr, &rh) - oracle).abs() < 1e-10);
    assert!(dist(&hr, &rh) > 0.1);
}

#[test]
fn dynamic_phase_limits() {
    assert!(dist(&even(&dynamic_phase(0.0, T).unwrap()), &CMatrix::identity(2, 2)) < 1e-8);
    let x = mat2([ZERO, ONE, ONE, ZERO]);
    let minus_ix = x.map(|z| z * c(0.0, -1.0));
    assert!(dist(&even(&dynamic_phase(FRAC_PI_2, T).unwrap()), &phase_fixed(&minus_ix)) < 1e-8);
    let (s, co) = FRAC_PI_8.sin_cos();
    let m = mat2([c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]);
    assert!(dist(&even(&dynamic_phase(FRAC_PI_8, T).unwrap()), &m) < 1e-8);
}

#[test]
fn t_gate_target_and_phase() {
    let r = t_gate(T).unwrap();
    let g = extract_gate(r.schedule()).unwrap();
    let t = mat2([ONE, ZERO, ZERO, c(FRAC_PI_4.cos(), FRAC_PI_4.sin())]);
    assert!(dist(&g.even_block, &t) < 1e-8);
    let expected_phase = c((-FRAC_PI_8).cos(), (-FRAC_PI_8).sin());
    assert!((g.global_phase - expected_phase).norm() < 1e-8);
    assert_eq!(r.colocation_point(), Some(8));
}

#[test]
fn t_gate_to_the_eighth_is_identity() {
    let r = t_gate(T).unwrap();
    let eight = r.with_schedule(r.schedule().repeated(8));
    assert!(dist(&even(&eight), &CMatrix::identity(2, 2)) < 1e-8);
}

#[test]
fn t_is_h_dagger_m_h() {
    let oracle = hadamard().adjoint() * m_block(FRAC_PI_8) * hadamard();
    assert!(dist(&even(&t_gate(T).unwrap()), &phase_fixed(&oracle)) < 1e-8);
}

#[test]
fn idle_positions() {
    let m = mzm_positions(&h_m0()).unwrap();
    let expected = [(Mzm::A, "1a"), (Mzm::B, "2b"), (Mzm::C, "4a"), (Mzm::D, "6b")];
    for (label, at) in expected {
        assert_eq!(m[&label], idx(at));
    }
}

#[test]
fn first_ac_step_frees_site_four() {
    let modes = zero_modes(&h_h1(), SITES);
    assert!(!modes.contains(&idx("4a")) && !modes.contains(&idx("4b")));
    let m = mzm_positions(&h_h1()).unwrap();
    assert_eq!(m[&Mzm::A], idx("3b"));
    assert_eq!(m[&Mzm::C], idx("5a"));
    assert_eq!(m[&Mzm::B], idx("2b"));
    assert_eq!(m[&Mzm::D], idx("6b"));
}

#[test]
fn ac_braid_exchanges_a_and_c() {
    let traj = braid_ac(T).unwrap().mzm_trajectory().unwrap();
    assert_eq!(traj.len(), 6);
    let end = traj.last().unwrap();
    assert_eq!(end[&Mzm::A], idx("4a"));
    assert_eq!(end[&Mzm::C], idx("1a"));
    assert_eq!(end[&Mzm::B], idx("2b"));
    assert_eq!(end[&Mzm::D], idx("6b"));
}

#[test]
fn cd_braid_exchanges_c_and_d() {
    let traj = braid_cd(T).unwrap().mzm_trajectory().unwrap();
    let c_path: Vec<String> = traj.iter().map(|m| m[&Mzm::C].to_string()).collect();
    let d_path: Vec<String> = traj.iter().map(|m| m[&Mzm::D].to_string()).collect();
    assert_eq!(c_path, ["4a", "4a", "3b", "3b", "6b", "6b"]);
    assert_eq!(d_path, ["6b", "6b", "6b", "5a", "5a", "4a"]);
    for m in &traj {
        assert!(colocated_sites(m).is_empty());
    }
}

#[test]
fn transport_colocates_b_and_c_on_link() {
    let r = dynamic_phase(0.5, T).unwrap();
    let traj = r.mzm_trajectory().unwrap();
    let p = r.colocation_point().unwrap();
    assert_eq!(traj[p][&Mzm::B].site(), 3);
    assert_eq!(traj[p][&Mzm::C].site(), 3);
    assert_eq!(colocated_sites(&traj[p]).into_iter().collect::<Vec<_>>(), vec![3]);
    assert!(recipe_colocated_sites(&braid_ac(T).unwrap()).unwrap().is_empty());
}

#[test]
fn wrong_zero_mode_count_rejected() {
    let h = mzm_core::fermion::MajoranaHamiltonian::parse(&[(1.0, "1b", "2a")]).unwrap();
    assert!(mzm_positions(&h).is_err());
}

#[test]
fn deformations_leave_gates_unchanged() {
    for r in [braid_ac(T).unwrap(), braid_cd(T).unwrap(), t_gate(T).unwrap()] {
        let base = even(&r);
        let split = even(&r.with_schedule(r.schedule().split_imaginary().unwrap()));
        let doubled = even(&r.with_schedule(r.schedule().scale_imaginary(2.0).unwrap()));
        assert!(dist(&base, &split) < 1e-8);
        assert!(dist(&base, &doubled) < 1e-8);
    }
}

#[test]
fn cd_candidate_search_contains_chosen_path() {
    let cands = cd_candidates();
    assert_eq!(cands.len(), 3840);
    assert!(cands.iter().any(|p| p[0] == h_r1() && p[1] == h_r2() && p[2] == h_r3()));
    let chosen = validate_cd_candidate(&[h_r1(), h_r2(), h_r3()], T).unwrap();
    assert_eq!(chosen.name(), GateName::R);
    let back = validate_cd_candidate(&[h_r3(), h_r2(), h_r1()], T).unwrap();
    assert_eq!(back.name(), GateName::RDagger);
}

#[test]
fn cd_braid_protected_on_every_site() {
    let r = braid_cd(T).unwrap();
    for site in 1..=SITES {
        assert!(perturbation_degradation(&r, site, 0.2).unwrap() < 1e-3, "site {site}");
    }
}

#[test]
fn ac_braid_protection_profile() {
    let r = braid_ac(T).unwrap();
    for eps in [0.05, 0.1, 0.2] {
        for site in [1, 2, 3, 5, 6] {
            assert!(perturbation_degradation(&r, site, eps).unwrap() < 1e-10, "site {site}");
        }
        // site 4 is paired across the link and the shift survives
        let d = perturbation_degradation(&r, 4, eps).unwrap();
        let oracle = eps * eps / (4.0 + 2.0 * eps * eps);
        assert!((d - oracle).abs() < 1e-6 * oracle, "eps {eps}: {d} vs {oracle}");
    }
}

#[test]
fn gate_names_parse() {
    assert_eq!("M:tau=0.25".parse::<GateName>().unwrap(), GateName::M(0.25));
    assert!("M:tau=inf".parse::<GateName>().is_err());
    assert!(recipe_by_name("Q").is_err());
    assert!(dist(&GateName::H.target(), &hadamard()) < 1e-15);
}
