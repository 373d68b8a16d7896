mod common;

use common::{c, dist, mat2};
use mzm_core::braiding::{braid_ac, braid_cd, identity, recipe, GateName};
use mzm_core::ite::DEFAULT_ITE_TIME;
use mzm_core::linalg::{CMatrix, ONE, ZERO};
use mzm_core::logical::{extract_gate, LogicalState};
use mzm_core::noise::{corrupted_gate, NoiseSpec};
use mzm_core::tomography::*;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

const T: f64 = DEFAULT_ITE_TIME;

#[test]
fn identity_reconstructs_identity() {
    let r = simulate_tomography(identity(T).unwrap().schedule(), &TomographyPlan::standard()).unwrap();
    assert!(dist(&r.gate.matrix4, &CMatrix::identity(4, 4)) < 1e-8);
    assert!(r.impurity < 1e-10);
    assert_eq!(r.expectations.len(), 16);
    assert!(r.expectations.iter().all(|row| row.len() == 16));
}

#[test]
fn reconstruction_matches_direct_extraction() {
    for name in [GateName::H, GateName::HDagger, GateName::R, GateName::RDagger, GateName::Z, GateName::T, GateName::M(0.7)] {
        let schedule = recipe(name, T).unwrap().schedule().clone();
        let direct = extract_gate(&schedule).unwrap();
        let tomo = simulate_tomography(&schedule, &TomographyPlan::standard()).unwrap();
        assert!(dist(&tomo.gate.matrix4, &direct.matrix4) < 1e-8, "{name}");
        assert!(dist(&tomo.closest_unitary, &direct.matrix4) < 1e-8, "{name}");
    }
}

#[test]
fn ac_reconstruction_is_printed_matrix() {
    let tomo = simulate_tomography(braid_ac(T).unwrap().schedule(), &TomographyPlan::standard()).unwrap();
    let h = FRAC_1_SQRT_2;
    let rows: [[f64; 4]; 4] = [[1.0, 0.0, 0.0, -1.0], [0.0, 1.0, -1.0, 0.0], [0.0, 1.0, 1.0, 0.0], [1.0, 0.0, 0.0, 1.0]];
    let expected = CMatrix::from_fn(4, 4, |r, col| c(rows[r][col] * h, 0.0));
    assert!(dist(&tomo.gate.matrix4, &expected) < 1e-8);
}

#[test]
fn corrupted_run_reconstruction_matches_column_assembly() {
    let cd = braid_cd(T).unwrap();
    let spec = NoiseSpec::phase(3, 2).unwrap();
    let corrupted = corrupted_gate(&cd, &spec).unwrap();
    let noisy = cd.schedule().clone().with_noise(spec).unwrap();
    let tomo = simulate_tomography(&noisy, &TomographyPlan::standard()).unwrap();
    assert!(dist(&tomo.gate.matrix4, &corrupted.gate.matrix4) < 1e-8);
}

#[test]
fn shot_mode_is_seeded() {
    let s = braid_ac(T).unwrap().schedule().clone();
    let a = simulate_tomography(&s, &TomographyPlan::standard().with_shots(1000, 4)).unwrap();
    let b = simulate_tomography(&s, &TomographyPlan::standard().with_shots(1000, 4)).unwrap();
    let other = simulate_tomography(&s, &TomographyPlan::standard().with_shots(1000, 5)).unwrap();
    assert_eq!(a.expectations, b.expectations);
    assert_ne!(a.expectations, other.expectations);
    let many = simulate_tomography(&s, &TomographyPlan::standard().with_shots(1_000_000, 4)).unwrap();
    let exact = extract_gate(&s).unwrap();
    assert!(process_fidelity(&many.closest_unitary, &exact.matrix4).unwrap() > 0.99);
}

#[test]
fn incomplete_plan_is_singular() {
    let mut plan = TomographyPlan::standard();
    plan.inputs.truncate(12);
    let s = identity(T).unwrap().schedule().clone();
    assert!(simulate_tomography(&s, &plan).is_err());
}

#[test]
fn process_fidelity_examples() {
    let h = FRAC_1_SQRT_2;
    let had = mat2([c(h, 0.0), c(-h, 0.0), c(h, 0.0), c(h, 0.0)]);
    let r = mat2([ONE, ZERO, ZERO, c(0.0, -1.0)]);
    assert!((process_fidelity(&had, &had).unwrap() - 1.0).abs() < 1e-15);
    let rotated = had.map(|z| z * c(0.3f64.cos(), 0.3f64.sin()));
    assert!((process_fidelity(&had, &rotated).unwrap() - 1.0).abs() < 1e-15);
    // tr(H†R) = (1 - i)/√2
    assert!((process_fidelity(&had, &r).unwrap() - 0.25).abs() < 1e-15);
    assert!((process_fidelity(&r, &had).unwrap() - 0.25).abs() < 1e-15);
}

fn printed_pi8_output() -> LogicalState {
    let phase = c(FRAC_PI_8.cos(), -FRAC_PI_8.sin());
    let h = FRAC_1_SQRT_2;
    LogicalState::new([phase * h, ZERO, ZERO, phase * h]).unwrap()
}

#[test]
fn dynamic_pi8_gate_on_even_superposition() {
    let g = extract_gate(recipe(GateName::M(FRAC_PI_8), T).unwrap().schedule()).unwrap();
    let out = g.apply(&LogicalState::even_superposition(ONE).unwrap()).unwrap();
    assert!(state_fidelity(&out.to_vector(), &printed_pi8_output().to_vector()) > 1.0 - 1e-8);
}

#[test]
fn t_gate_on_even_superposition() {
    let g = extract_gate(recipe(GateName::T, T).unwrap().schedule()).unwrap();
    let out = g.apply(&LogicalState::even_superposition(ONE).unwrap()).unwrap();
    // (|00⟩ + e^{iπ/4}|11⟩)/√2 against e^{-iπ/8}(|00⟩ + |11⟩)/√2
    let oracle = FRAC_PI_8.cos().powi(2);
    let f = state_fidelity(&out.to_vector(), &printed_pi8_output().to_vector());
    assert!((f - oracle).abs() < 1e-8);
}
