//! Cross-checks of the Gaussian routines against quadrature and direct
//! formula oracles that share no code with the library implementation.

mod common;

use radtail::gaussian::{constants, gauss_tail, mills_ratio, phi};

#[test]
fn gauss_tail_matches_quadrature_to_1e12_relative() {
    let mut x = 0.0f64;
    while x <= 6.0 + 1e-9 {
        let lib = gauss_tail(x).unwrap();
        let oracle = common::quadrature_gauss_tail(x);
        let rel = (lib - oracle).abs() / oracle;
        assert!(rel <= 1e-12, "x = {x}: lib {lib:e} oracle {oracle:e} rel {rel:e}");
        x += 0.5;
    }
}

#[test]
fn gauss_tail_matches_quadrature_on_negative_axis() {
    for i in 1..=12 {
        let x = -0.5 * i as f64;
        let lib = gauss_tail(x).unwrap();
        let oracle = common::quadrature_gauss_tail(x);
        assert!((lib - oracle).abs() <= 1e-13, "x = {x}");
    }
}

#[test]
fn gauss_tail_deep_points_match_quadrature() {
    for &x in &[8.0, 12.0, 20.0, 30.0] {
        let lib = gauss_tail(x).unwrap();
        let oracle = common::quadrature_gauss_tail(x);
        let rel = (lib - oracle).abs() / oracle;
        assert!(rel <= 1e-12, "x = {x}: rel {rel:e}");
    }
}

#[test]
fn phi_matches_direct_formula() {
    let mut x = -8.0f64;
    while x <= 8.0 {
        let lib = phi(x).unwrap();
        let oracle = common::naive_phi(x);
        let denom = oracle.max(f64::MIN_POSITIVE);
        assert!((lib - oracle).abs() / denom <= 4e-15, "x = {x}");
        x += 0.37;
    }
}

#[test]
fn tail_symmetry_sums_to_one() {
    let mut x = 0.0f64;
    while x <= 5.0 {
        let s = gauss_tail(x).unwrap() + gauss_tail(-x).unwrap();
        assert!((s - 1.0).abs() <= 4e-16, "x = {x}: sum {s}");
        x += 0.173;
    }
}

#[test]
fn mills_ratio_agrees_with_quadrature_oracle() {
    for i in 0..=30 {
        let x = -2.0 + 0.4 * i as f64;
        let lib = mills_ratio(x).unwrap();
        let oracle = common::naive_phi(x) / common::quadrature_gauss_tail(x);
        assert!((lib - oracle).abs() / oracle <= 1e-12, "x = {x}");
    }
}

#[test]
fn constants_are_reproduced_by_oracle_tails() {
    let c = constants();
    let sqrt2 = std::f64::consts::SQRT_2;
    let c1_oracle = 0.25 / common::quadrature_gauss_tail(sqrt2);
    assert!((c.c1 - c1_oracle).abs() / c1_oracle <= 1e-12);
    let r3 = common::naive_phi(3f64.sqrt()) / common::quadrature_gauss_tail(3f64.sqrt());
    let c2_oracle = c1_oracle * (1.0 + (1.0 + r3) / 250.0);
    assert!((c.c2 - c2_oracle).abs() / c2_oracle <= 1e-12);
}
