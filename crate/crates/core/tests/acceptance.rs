//! Acceptance gate: one test per numbered criterion, each ending in a
//! single [PASS] line (visible with --nocapture). Tolerances are pinned
//! here, not read from configuration.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use radtail::bounds::{h, k, KQuery, PiecewiseBound};
use radtail::gaussian::{constants, gauss_tail, phi};
use radtail::rademacher::{exact_tail, ratio_curve, selfnorm_mc_tail, SelfNormFamily, Weights};
use radtail::verifier::{
    mixture_deficit, v_root, verify_induction, verify_mixture_x_ge_sqrt3, verify_rectangle,
    Status,
};

fn sqrt3() -> f64 {
    3.0f64.sqrt()
}

fn assert_rel(actual: f64, expected: f64, tol: f64, what: &str) {
    let rel = ((actual - expected) / expected).abs();
    assert!(
        rel <= tol,
        "{what}: {actual} vs {expected} (rel {rel:.3e} > {tol:.0e})"
    );
}

/// Pulls the float that follows `prefix` in a report note.
fn note_value(notes: &[String], contains: &str, prefix: &str) -> f64 {
    let note = notes
        .iter()
        .find(|n| n.contains(contains))
        .unwrap_or_else(|| panic!("no note containing {contains:?}"));
    let rest = &note[note.find(prefix).expect("prefix present") + prefix.len()..];
    let token = rest.split([' ', ')']).next().expect("value token");
    token.parse().unwrap_or_else(|_| panic!("unparsable value {token:?} in {note:?}"))
}

#[test]
fn criterion_01_constants() {
    let start = Instant::now();
    let c = constants();
    assert_eq!((c.c1 * 100.0).round() / 100.0, 3.18);
    assert_eq!((c.c2 * 100.0).round() / 100.0, 3.22);
    assert_eq!((c.c3 * 100.0).round() / 100.0, 4.46);
    let gap = c.c2 / c.c1;
    assert!((1.012..=1.013).contains(&gap), "c2/c1 = {gap}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0);
    println!(
        "[PASS] criterion 1: c1 = {:.6}, c2 = {:.6}, c3 = {:.6}, c2/c1 = {:.6} in {:?}",
        c.c1, c.c2, c.c3, gap, elapsed
    );
}

#[test]
fn criterion_02_two_atom_equality() {
    let w = Weights::normalize(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
    let tail = exact_tail(&w, SQRT_2).unwrap();
    assert_eq!(tail, 0.25, "tail at the atom must be exactly a quarter");
    let ratio = tail / gauss_tail(SQRT_2).unwrap();
    let c1 = constants().c1;
    assert!((ratio - c1).abs() <= 1e-9, "ratio {ratio} vs c1 {c1}");
    println!("[PASS] criterion 2: tail(sqrt2) = 0.25 exactly, ratio - c1 = {:.2e}", ratio - c1);
}

#[test]
fn criterion_03_tail_bound_clears_the_inverse_square() {
    let bound = PiecewiseBound::standard();
    for x in [1.0, SQRT_2] {
        let scaled = 2.0 * x * x * h(x).unwrap();
        assert!((1.012..=1.022).contains(&scaled), "2x^2 h at {x} = {scaled}");
    }
    let mut min_ratio = f64::INFINITY;
    for j in 1..=10_000u32 {
        let x = 1.0 + f64::from(j) * (SQRT_2 - 1.0) / 10_001.0;
        min_ratio = min_ratio.min(h(x).unwrap() / bound.eval(x).unwrap());
    }
    assert!(min_ratio >= 1.01, "min h/h1 on (1, sqrt2) = {min_ratio}");
    println!("[PASS] criterion 3: 2x^2 h in [1.012, 1.022] at both ends, min h/h1 = {min_ratio:.6}");
}

#[test]
fn criterion_04_spot_values() {
    let g_gap = radtail::bounds::g(SQRT_2).unwrap() - 0.25;
    assert_rel(g_gap, 2.8660e-3, 1e-4, "g(sqrt2) - 1/4");

    let small_a = k(KQuery::new(1e-8, SQRT_2).unwrap());
    assert_rel(small_a, -2.8660e-3, 1e-4, "small-weight limit at sqrt2");

    let xs = constants().x_star;
    let meet = k(KQuery::new(v_root(xs).unwrap(), xs).unwrap());
    assert_rel(meet, -3.0133e-6, 1e-4, "curve value at the meet point");

    let corner = k(KQuery::new(2.0 * SQRT_2 / 3.0, SQRT_2).unwrap());
    assert_rel(corner, -0.25287, 1e-4, "upper-root corner at sqrt2");

    println!(
        "[PASS] criterion 4: g gap {g_gap:.6e}, limit {small_a:.6e}, meet {meet:.6e}, corner {corner:.6e}"
    );
}

#[test]
fn criterion_05_rectangle_certification() {
    let start = Instant::now();
    let report = verify_rectangle(0.01, 0.0, 0, 0).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(report.status, Status::Certified, "notes: {:?}", report.notes);
    assert!(report.boxes_processed <= 10_000_000, "boxes = {}", report.boxes_processed);
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");

    let c1 = constants().c1;
    for x in [1.5, 1.6, 1.7] {
        let fit = note_value(&report.notes, &format!("quadratic decay at x = {x}"), "fit ");
        let target = -(c1 / 250.0) * phi(x).unwrap();
        assert!(
            (fit - target).abs() <= 0.05 * target.abs(),
            "strip coefficient at {x}: fit {fit} vs {target}"
        );
    }
    println!(
        "[PASS] criterion 5: rectangle certified, sup = {:.3e}, {} boxes in {:?}",
        report.certified_sup, report.boxes_processed, elapsed
    );
}

#[test]
fn criterion_06_mixture_certification() {
    let start = Instant::now();
    let report = verify_mixture_x_ge_sqrt3(0.999, 8.0, 0, 0).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(report.status, Status::Certified, "notes: {:?}", report.notes);
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");

    for i in 0..=20 {
        let x = sqrt3() + f64::from(i) * 0.25;
        let at_zero = mixture_deficit(0.0, x).unwrap();
        assert!(at_zero.abs() <= 1e-14, "deficit at a = 0, x = {x}: {at_zero}");
    }
    println!(
        "[PASS] criterion 6: mixture certified, sup = {:.3e}, {} boxes in {:?}, equality at a = 0 holds",
        report.certified_sup, report.boxes_processed, elapsed
    );
}

#[test]
fn criterion_07_induction_sweep() {
    let start = Instant::now();
    let grid: Vec<f64> = (0..=600).map(|i| -1.0 + f64::from(i) * 0.01).collect();
    let vectors = common::seeded_weight_vectors(500, 22, 0x5eed_2026);
    let mut worst_residual = 0.0f64;
    for (i, w) in vectors.iter().enumerate() {
        let report = verify_induction(w, &grid).unwrap();
        assert_eq!(
            report.status,
            Status::Certified,
            "vector {i} (n = {}): {:?}",
            w.n(),
            report.notes
        );
        let residual = note_value(&report.notes, "max replay residual", "max replay residual ");
        assert!(residual <= 1e-12, "vector {i}: residual {residual}");
        worst_residual = worst_residual.max(residual);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 7: 500 vectors certified against both majorants, worst residual {worst_residual:.3e} in {elapsed:?}"
    );
}

#[test]
fn criterion_08_oracle_equivalence() {
    let vectors = common::seeded_weight_vectors(100, 16, 0x0bac_1e5);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0bac_1e6);
    let mut checked = 0u32;
    for w in &vectors {
        let sums = common::naive_sums(w.values());
        for x in common::off_atom_thresholds(&sums, 20, 1e-9, &mut rng) {
            let fast = exact_tail(w, x).unwrap();
            let slow = common::naive_tail(w.values(), x, false);
            assert_eq!(fast, slow, "n = {}, x = {x}", w.n());
            checked += 1;
        }
    }

    let mut worst = 0.0f64;
    for i in 0..=12 {
        let x = f64::from(i) * 0.5;
        let lib = gauss_tail(x).unwrap();
        let oracle = common::quadrature_gauss_tail(x);
        let rel = ((lib - oracle) / oracle).abs();
        assert!(rel <= 1e-12, "tail at {x}: {lib} vs {oracle} (rel {rel:.3e})");
        worst = worst.max(rel);
        let drel = ((phi(x).unwrap() - common::naive_phi(x)) / common::naive_phi(x)).abs();
        assert!(drel <= 1e-14, "density at {x}");
    }
    println!(
        "[PASS] criterion 8: {checked} tail points agree exactly, gauss tail within {worst:.3e} of quadrature"
    );
}

#[test]
fn criterion_09_equal_weights_ratio_curve() {
    let w = Weights::equal(100).unwrap();
    let grid: Vec<f64> = (1..=600).map(|i| f64::from(i) * 0.005).collect();
    let points = ratio_curve(&w, &grid).unwrap();
    let c2 = constants().c2;

    let mut jumps = 0u32;
    let mut maxima = 0u32;
    let mut sup = f64::NEG_INFINITY;
    for (i, p) in points.iter().enumerate() {
        sup = sup.max(p.ratio);
        if i + 1 < points.len() {
            let next = &points[i + 1];
            assert!(next.tail <= p.tail, "tail must be nonincreasing at x = {}", next.x);
            if next.tail == p.tail {
                // Flat tail against a falling gaussian tail: the ratio climbs.
                assert!(next.ratio > p.ratio, "ratio must rise between atoms at x = {}", next.x);
            } else {
                jumps += 1;
            }
        }
        if i > 0 && i + 1 < points.len() && points[i - 1].ratio < p.ratio && p.ratio > points[i + 1].ratio
        {
            maxima += 1;
        }
    }
    // Atoms land every 0.2; the grid crosses 14 or 15 of them depending on
    // how the last one rounds against the grid end.
    assert!((14..=15).contains(&jumps), "saw {jumps} tail jumps");
    assert!(maxima >= 10, "saw {maxima} local maxima");
    assert!(sup < c2, "sup ratio {sup} vs c2 {c2}");
    println!(
        "[PASS] criterion 9: n = 100 curve has {jumps} jumps, {maxima} local maxima, sup {sup:.6} < c2 {c2:.6}"
    );
}

#[test]
fn criterion_10_self_normalized_audit() {
    let c2 = constants().c2;
    let scales: Vec<f64> = (1..=10).map(f64::from).collect();
    let families = [
        ("two-point", SelfNormFamily::TwoPoint { scales }),
        ("uniform", SelfNormFamily::Uniform),
        ("gaussian", SelfNormFamily::Gaussian),
    ];
    let mut summary = String::new();
    for (name, family) in &families {
        for x in [1.0, 2.0, 2.5] {
            let est = selfnorm_mc_tail(family, 10, x, 1_000_000, 42).unwrap();
            let bound = c2 * gauss_tail(x).unwrap();
            assert!(
                est.estimate <= bound + 5.0 * est.std_error,
                "{name} at x = {x}: {} vs {bound} + 5 se",
                est.estimate
            );
            if x == 2.0 {
                summary.push_str(&format!(" {name} {:.4}<={bound:.4}", est.estimate));
            }
        }
    }
    println!("[PASS] criterion 10: all families under c2 bound at x in {{1, 2, 2.5}};{summary}");
}
