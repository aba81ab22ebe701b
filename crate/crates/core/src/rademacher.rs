//! Exact and Monte Carlo tail probabilities for weighted sign sums.
//!
//! A weight vector `a` with unit Euclidean norm defines the random sum
//! `S = sum_i a_i eps_i` over independent uniform signs `eps_i`. The law of
//! `S` is a finite symmetric atom distribution; this module computes its
//! tails exactly (meet-in-the-middle up to 40 weights, binomial accumulation
//! for equal weights at any size) and estimates them by Monte Carlo beyond
//! that, including the self-normalized variant `sum X_i / sqrt(sum X_i^2)`.

use crate::error::{Error, Result};
use crate::gaussian;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Largest weight count accepted by the exact enumeration routines.
pub const EXACT_TAIL_MAX_N: usize = 40;

/// Largest weight count accepted by [`atom_distribution`].
pub const ATOM_MAX_N: usize = 26;

/// Atoms closer than this are merged into one.
const ATOM_MERGE_TOL: f64 = 1e-12;

/// Samples per RNG stream; estimates are invariant to how batches are
/// scheduled because each batch derives its generator from (seed, index).
const MC_BATCH: u64 = 1 << 16;

fn ensure_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {x}")))
    }
}

/// Canonical unit-norm weight vector: entries non-negative, sorted
/// descending, `sum a_i^2 = 1` up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    values: Vec<f64>,
}

impl Weights {
    /// Canonicalizes an arbitrary nonzero vector: absolute values, sorted
    /// descending, scaled to unit norm. Sign flips and permutations do not
    /// change the law of the sum, so nothing is lost.
    pub fn normalize(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("weight vector is empty".into()));
        }
        for &a in values {
            ensure_finite(a, "weight")?;
        }
        let mut v: Vec<f64> = values.iter().map(|a| a.abs()).collect();
        v.sort_unstable_by(|p, q| q.partial_cmp(p).unwrap());
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("weight vector is all zero".into()));
        }
        for a in &mut v {
            *a /= norm;
        }
        Ok(Self { values: v })
    }

    /// The equal-weight vector `(1/sqrt(n), ..., 1/sqrt(n))`.
    pub fn equal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("weight count must be at least 1".into()));
        }
        let a = 1.0 / (n as f64).sqrt();
        Ok(Self { values: vec![a; n] })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// True when every entry is bitwise identical, which lets tail queries
    /// route through the binomial path with no size limit.
    pub fn is_equal_weights(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}

/// All `2^k` signed sums of `a`, folded left to right so every sum carries
/// the same association order as a direct loop over the indices.
fn signed_sums(a: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0f64];
    for &w in a {
        let mut next = Vec::with_capacity(sums.len() * 2);
        for &s in &sums {
            next.push(s + w);
            next.push(s - w);
        }
        sums = next;
    }
    sums
}

/// All `2^n` signed sums, built as one addition across the same half split
/// the meet-in-the-middle counter uses, so both see bitwise-equal values.
fn all_sums(values: &[f64]) -> Vec<f64> {
    let nl = values.len().div_ceil(2);
    let left = signed_sums(&values[..nl]);
    let right = signed_sums(&values[nl..]);
    let mut sums = Vec::with_capacity(left.len() * right.len());
    for &s in &left {
        for &r in &right {
            sums.push(s + r);
        }
    }
    sums
}

fn tail_count(w: &Weights, x: f64, strict: bool) -> Result<u64> {
    let n = w.n();
    if n > EXACT_TAIL_MAX_N {
        return Err(Error::Budget(format!(
            "exact tail enumeration is limited to {EXACT_TAIL_MAX_N} weights, got {n}; \
             use mc_tail for larger vectors"
        )));
    }
    let nl = n.div_ceil(2);
    let left = signed_sums(&w.values[..nl]);
    let mut right = signed_sums(&w.values[nl..]);
    right.sort_unstable_by(f64::total_cmp);
    let mut count: u64 = 0;
    for &s in &left {
        // Sums are monotone in the right half, so the matches form a suffix.
        let below = if strict {
            right.partition_point(|&r| s + r <= x)
        } else {
            right.partition_point(|&r| s + r < x)
        };
        count += (right.len() - below) as u64;
    }
    Ok(count)
}

fn dyadic(count: u64, n: usize) -> f64 {
    count as f64 / 2f64.powi(n as i32)
}

/// `P(S >= x)` computed exactly by meet-in-the-middle enumeration.
///
/// The comparison is an exact `>=` on the computed double-precision sums,
/// so the result is a dyadic rational with no rounding beyond the sums
/// themselves. Limited to [`EXACT_TAIL_MAX_N`] weights.
pub fn exact_tail(w: &Weights, x: f64) -> Result<f64> {
    ensure_finite(x, "threshold")?;
    Ok(dyadic(tail_count(w, x, false)?, w.n()))
}

/// `P(S > x)`, the strict companion of [`exact_tail`].
pub fn exact_tail_strict(w: &Weights, x: f64) -> Result<f64> {
    ensure_finite(x, "threshold")?;
    Ok(dyadic(tail_count(w, x, true)?, w.n()))
}

/// The full law of `S` as a sorted list of `(location, mass)` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomDistribution {
    atoms: Vec<(f64, f64)>,
}

impl AtomDistribution {
    /// Atoms sorted by strictly increasing location; masses sum to 1.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// `P(S >= x)` read off the atom list.
    pub fn tail_closed(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|&&(loc, _)| loc >= x)
            .map(|&(_, m)| m)
            .sum()
    }

    /// `P(S > x)` read off the atom list.
    pub fn tail_strict(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|&&(loc, _)| loc > x)
            .map(|&(_, m)| m)
            .sum()
    }
}

/// Enumerates the law of `S` and merges coincident atoms.
///
/// Locations within `1e-12` of their predecessor are chained into one atom
/// at the midpoint of the group, so the result stays symmetric: negating
/// every sign negates each sum exactly, and midpoints respect that.
/// Limited to [`ATOM_MAX_N`] weights.
pub fn atom_distribution(w: &Weights) -> Result<AtomDistribution> {
    let n = w.n();
    if n > ATOM_MAX_N {
        return Err(Error::Budget(format!(
            "atom enumeration is limited to {ATOM_MAX_N} weights, got {n}"
        )));
    }
    let mut sums = all_sums(&w.values);
    sums.sort_unstable_by(f64::total_cmp);
    let scale = 2f64.powi(-(n as i32));
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    let mut start = 0usize;
    for i in 1..=sums.len() {
        if i == sums.len() || sums[i] - sums[i - 1] > ATOM_MERGE_TOL {
            let loc = 0.5 * (sums[start] + sums[i - 1]);
            atoms.push((loc, (i - start) as f64 * scale));
            start = i;
        }
    }
    Ok(AtomDistribution { atoms })
}

/// Correctly rounded `t / sqrt(n)` via one double-double correction step.
/// A plain `t / n.sqrt()` can land an ulp off the true quotient, which
/// matters when callers compare atoms against thresholds like `fl(sqrt(2))`.
fn atom_over_sqrt(t: f64, n: f64) -> f64 {
    let sn = n.sqrt();
    let sn_lo = f64::mul_add(-sn, sn, n) / (2.0 * sn);
    let q = t / sn;
    let r = f64::mul_add(-q, sn, t) - q * sn_lo;
    q + r / sn
}

/// Rounds the exact rational `sum / 2^n` to the nearest f64 (ties to even).
fn dyadic_big(sum: &BigUint, n: usize) -> f64 {
    if sum.is_zero() {
        return 0.0;
    }
    let bits = sum.bits();
    let (mant, exp) = if bits <= 54 {
        (sum.to_u64().unwrap(), -(n as i64))
    } else {
        let shift = bits - 54;
        let head = (sum >> shift).to_u64().unwrap();
        let sticky = sum != &((sum >> shift) << shift);
        let mut m = head >> 1;
        if head & 1 == 1 && (sticky || m & 1 == 1) {
            m += 1;
        }
        (m, shift as i64 + 1 - n as i64)
    };
    let p = mant as f64 * 2f64.powi(exp as i32);
    p.clamp(0.0, 1.0)
}

/// `P(S_n >= x)` for the equal-weight vector of any size `n >= 1`.
///
/// The atom at level `k` sits at `(2k - n)/sqrt(n)`; each atom is computed
/// correctly rounded and the qualifying binomial coefficients are summed
/// exactly in big integers, so the only rounding is the final one from the
/// dyadic rational to f64.
pub fn equal_weights_tail(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("weight count must be at least 1".into()));
    }
    ensure_finite(x, "threshold")?;
    let nf = n as f64;
    // Atoms increase with k; binary search the first qualifying level.
    let mut lo = 0usize;
    let mut hi = n + 1;
    while lo < hi {
        let k = lo + (hi - lo) / 2;
        let atom = atom_over_sqrt((2 * k) as f64 - nf, nf);
        if atom >= x {
            hi = k;
        } else {
            lo = k + 1;
        }
    }
    let k0 = lo;
    if k0 > n {
        return Ok(0.0);
    }
    // Sum C(n,k) for k in [k0, n], walking the row from C(n,n) = 1 downward.
    let mut sum = BigUint::zero();
    let mut c = BigUint::one();
    let mut k = n;
    loop {
        sum += &c;
        if k == k0 {
            break;
        }
        c = c * BigUint::from(k) / BigUint::from(n - k + 1);
        k -= 1;
    }
    Ok(dyadic_big(&sum, n))
}

/// One row of [`ratio_curve`]: the exact tail, the Gaussian tail, and their
/// ratio at a grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub x: f64,
    pub tail: f64,
    pub gauss_tail: f64,
    pub ratio: f64,
}

/// Evaluates `P(S >= x) / P(Z >= x)` over a grid.
///
/// Equal-weight vectors route through [`equal_weights_tail`] and so have no
/// size limit; everything else uses [`exact_tail`]. Grid points where the
/// Gaussian tail underflows to zero are rejected, since the ratio would be
/// meaningless there.
pub fn ratio_curve(w: &Weights, grid: &[f64]) -> Result<Vec<RatioPoint>> {
    let equal = w.is_equal_weights();
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        ensure_finite(x, "grid point")?;
        let gt = gaussian::gauss_tail(x)?;
        if gt <= 0.0 {
            return Err(Error::Range(format!(
                "gaussian tail underflows at x = {x}; ratio is undefined"
            )));
        }
        let tail = if equal {
            equal_weights_tail(w.n(), x)?
        } else {
            exact_tail(w, x)?
        };
        out.push(RatioPoint {
            x,
            tail,
            gauss_tail: gt,
            ratio: tail / gt,
        });
    }
    Ok(out)
}

/// A Monte Carlo tail estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl TailEstimate {
    fn from_hits(hits: u64, samples: u64, seed: u64) -> Self {
        let estimate = hits as f64 / samples as f64;
        let std_error = (estimate * (1.0 - estimate) / samples as f64).sqrt();
        Self {
            estimate,
            std_error,
            samples,
            seed,
        }
    }
}

fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch + 1);
    rng
}

fn batched_hits<F>(samples: u64, seed: u64, mut batch_fn: F) -> u64
where
    F: FnMut(&mut ChaCha8Rng, u64) -> u64,
{
    let mut hits = 0u64;
    let mut done = 0u64;
    let mut batch = 0u64;
    while done < samples {
        let take = MC_BATCH.min(samples - done);
        let mut rng = batch_rng(seed, batch);
        hits += batch_fn(&mut rng, take);
        done += take;
        batch += 1;
    }
    hits
}

/// Unbiased Monte Carlo estimate of `P(S >= x)`.
///
/// Deterministic in `(seed, samples)`: signs come from a counter-based
/// generator keyed per fixed-size batch, and hits are accumulated as
/// integers, so the estimate does not depend on evaluation order.
pub fn mc_tail(w: &Weights, x: f64, samples: u64, seed: u64) -> Result<TailEstimate> {
    if samples == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    ensure_finite(x, "threshold")?;
    let values = w.values();
    let hits = batched_hits(samples, seed, |rng, take| {
        let mut h = 0u64;
        for _ in 0..take {
            let mut sum = 0.0f64;
            let mut bits = 0u64;
            let mut left = 0u32;
            for &a in values {
                if left == 0 {
                    bits = rng.next_u64();
                    left = 64;
                }
                sum += if bits & 1 == 1 { a } else { -a };
                bits >>= 1;
                left -= 1;
            }
            if sum >= x {
                h += 1;
            }
        }
        h
    });
    Ok(TailEstimate::from_hits(hits, samples, seed))
}

/// Symmetric coordinate laws for the self-normalized sum.
#[derive(Debug, Clone, PartialEq)]
pub enum SelfNormFamily {
    /// `X_i = scales[i] * eps_i` with independent uniform signs.
    TwoPoint { scales: Vec<f64> },
    /// `X_i` uniform on `[-1, 1]`.
    Uniform,
    /// `X_i` standard Gaussian.
    Gaussian,
}

/// Monte Carlo estimate of `P(sum X_i / sqrt(sum X_i^2) >= x)`.
///
/// The all-zero outcome leaves the statistic undefined, so such draws are
/// rejected and redrawn from the same stream. For the two-point family the
/// scales must have length `n`, be finite and non-negative, and not all
/// vanish; the redraw then never triggers.
pub fn selfnorm_mc_tail(
    family: &SelfNormFamily,
    n: usize,
    x: f64,
    samples: u64,
    seed: u64,
) -> Result<TailEstimate> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if samples == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    ensure_finite(x, "threshold")?;
    if let SelfNormFamily::TwoPoint { scales } = family {
        if scales.len() != n {
            return Err(Error::Domain(format!(
                "two-point family needs {n} scales, got {}",
                scales.len()
            )));
        }
        for &c in scales {
            ensure_finite(c, "scale")?;
            if c < 0.0 {
                return Err(Error::Domain(format!("scales must be non-negative, got {c}")));
            }
        }
        if scales.iter().all(|&c| c == 0.0) {
            return Err(Error::Domain("two-point scales are all zero".into()));
        }
    }
    let mut draw = vec![0.0f64; n];
    let hits = batched_hits(samples, seed, |rng, take| {
        let mut h = 0u64;
        for _ in 0..take {
            loop {
                match family {
                    SelfNormFamily::TwoPoint { scales } => {
                        for (d, &c) in draw.iter_mut().zip(scales) {
                            *d = if rng.gen::<bool>() { c } else { -c };
                        }
                    }
                    SelfNormFamily::Uniform => {
                        for d in draw.iter_mut() {
                            *d = 2.0 * rng.gen::<f64>() - 1.0;
                        }
                    }
                    SelfNormFamily::Gaussian => {
                        for d in draw.iter_mut() {
                            *d = rng.sample(StandardNormal);
                        }
                    }
                }
                if draw.iter().any(|&d| d != 0.0) {
                    break;
                }
            }
            let sum: f64 = draw.iter().sum();
            let sumsq: f64 = draw.iter().map(|d| d * d).sum();
            if sum / sumsq.sqrt() >= x {
                h += 1;
            }
        }
        h
    });
    Ok(TailEstimate::from_hits(hits, samples, seed))
}
