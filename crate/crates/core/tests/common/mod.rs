#![allow(dead_code)]

use mzm_core::linalg::{self, CMatrix};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn mat2(entries: [Complex64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &entries)
}

pub fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    linalg::frobenius(&(a - b))
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
