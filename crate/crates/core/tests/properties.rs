mod common;

use common::{c, dist};
use mzm_core::linalg::{self, CMatrix};
use mzm_core::logical::{decode_logical, encode_logical, logical_to_xbasis, xbasis_to_logical, LogicalGate, LogicalState};
use mzm_core::noise::NoiseSpec;
use mzm_core::tomography::{process_fidelity, state_fidelity};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c(re, im))
}

fn amplitudes() -> impl Strategy<Value = [Complex64; 4]> {
    prop::array::uniform4(complex()).prop_filter("nonzero", |a| a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
}

fn matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(), n * n)
        .prop_map(move |v| CMatrix::from_vec(n, n, v))
        .prop_filter("nonzero", |m| linalg::frobenius(m) > 1e-3)
}

proptest! {
    #[test]
    fn encode_decode_round_trip(a in amplitudes()) {
        let l = LogicalState::new(a).unwrap();
        let back = decode_logical(&encode_logical(&l).unwrap());
        prop_assert!(back.residual() < 1e-12);
        prop_assert!(l.overlap(&back) > 1.0 - 1e-12);
    }

    #[test]
    fn xbasis_round_trip(a in amplitudes()) {
        let l = LogicalState::new(a).unwrap();
        let back = xbasis_to_logical(logical_to_xbasis(&l)).unwrap();
        prop_assert!(l.overlap(&back) > 1.0 - 1e-12);
    }

    #[test]
    fn process_fidelity_gauge_invariant_and_symmetric(u in matrix(4), v in matrix(4), theta in 0.0f64..6.3) {
        let f = process_fidelity(&u, &v).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        let rotated = v.map(|z| z * Complex64::from_polar(1.0, theta));
        prop_assert!((process_fidelity(&u, &rotated).unwrap() - f).abs() < 1e-12);
        prop_assert!((process_fidelity(&v, &u).unwrap() - f).abs() < 1e-12);
        prop_assert!((process_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_fidelity_bounded(a in amplitudes(), b in amplitudes()) {
        let x = LogicalState::new(a).unwrap().to_vector();
        let y = LogicalState::new(b).unwrap().to_vector();
        let f = state_fidelity(&x, &y);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&f));
        prop_assert!((state_fidelity(&x, &x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_fixing_idempotent(m in matrix(4)) {
        let g = LogicalGate::from_operator(&m, 0.0).unwrap();
        let again = LogicalGate::from_operator(&g.matrix4, 0.0).unwrap();
        prop_assert!(dist(&g.matrix4, &again.matrix4) < 1e-12);
        prop_assert!((linalg::frobenius(&g.matrix4) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn noise_spec_round_trip(site in 1usize..=6, left in 1usize..6, position in 0usize..20, flip in any::<bool>()) {
        let spec = if flip { NoiseSpec::flip(left, left + 1, position) } else { NoiseSpec::phase(site, position) }.unwrap();
        let parsed: NoiseSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(parsed, spec);
    }
}
