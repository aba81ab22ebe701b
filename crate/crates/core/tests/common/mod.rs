//! Independent oracles the integration tests check the library against.
//! Everything here is deliberately written from scratch: direct sign
//! enumeration instead of meet-in-the-middle, adaptive quadrature of the
//! density instead of erfc machinery.

// Each test target compiles this module separately and uses its own subset.
#![allow(dead_code)]

use radtail::rademacher::Weights;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// `P(sum a_i eps_i >= x)` (or `> x`) by looping over all `2^n` sign masks,
/// each sum folded left to right in index order.
pub fn naive_tail(values: &[f64], x: f64, strict: bool) -> f64 {
    let n = values.len();
    assert!(n <= 24, "oracle is exponential; keep n small");
    let total = 1u64 << n;
    let mut count = 0u64;
    for mask in 0..total {
        let mut s = 0.0f64;
        for (i, &a) in values.iter().enumerate() {
            s += if mask >> i & 1 == 1 { a } else { -a };
        }
        if if strict { s > x } else { s >= x } {
            count += 1;
        }
    }
    count as f64 / total as f64
}

/// All `2^n` signed sums from the same fold order as [`naive_tail`].
pub fn naive_sums(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    assert!(n <= 24);
    let mut sums = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        let mut s = 0.0f64;
        for (i, &a) in values.iter().enumerate() {
            s += if mask >> i & 1 == 1 { a } else { -a };
        }
        sums.push(s);
    }
    sums
}

fn density(t: f64) -> f64 {
    (-(0.5 * t * t)).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = density(lm);
    let frm = density(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// `P(Z >= x)` by adaptive Simpson quadrature of the normal density over
/// unit subintervals, each resolved to a tolerance scaled by the local
/// density so the total error stays relatively small even deep in the tail.
/// The remainder past `x + 45` is far below the f64 underflow threshold.
pub fn quadrature_gauss_tail(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - quadrature_gauss_tail(-x);
    }
    let mut total = 0.0f64;
    for k in 0..45u32 {
        let a = x + k as f64;
        let b = a + 1.0;
        let fa = density(a);
        if fa == 0.0 {
            break;
        }
        let fm = density(0.5 * (a + b));
        let fb = density(b);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive_simpson(a, b, fa, fm, fb, whole, 1e-15 * fa, 40);
    }
    total
}

/// Normal density by the plain formula, as an oracle for the split-argument
/// evaluation inside the library.
pub fn naive_phi(t: f64) -> f64 {
    density(t)
}

/// Deterministic corpus of weight vectors: sizes uniform in `1..=max_n`,
/// entries `|N(0,1)|`, canonicalized.
pub fn seeded_weight_vectors(count: usize, max_n: usize, seed: u64) -> Vec<Weights> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let n = rng.gen_range(1..=max_n);
            let vals: Vec<f64> = (0..n)
                .map(|_| {
                    let g: f64 = rng.sample(StandardNormal);
                    g.abs()
                })
                .collect();
            if let Ok(w) = Weights::normalize(&vals) {
                break w;
            }
        })
        .collect()
}

/// Threshold values spread over the sum's range but kept away from every
/// atom, so closed counts cannot flip on association-order rounding.
pub fn off_atom_thresholds(
    sums: &[f64],
    count: usize,
    min_gap: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let mut sorted = sums.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let lo = sorted[0] - 0.5;
    let hi = sorted[sorted.len() - 1] + 0.5;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.gen_range(lo..hi);
        let i = sorted.partition_point(|&s| s < x);
        let near_atom = (i > 0 && (x - sorted[i - 1]).abs() < min_gap)
            || (i < sorted.len() && (sorted[i] - x).abs() < min_gap);
        if !near_atom {
            out.push(x);
        }
    }
    out
}
