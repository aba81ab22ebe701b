//! Prefix-level consistency sweep over one weight vector.
//!
//! With the weights sorted in decreasing order, every prefix sum is a
//! Rademacher sum with subunit norm. Rescaling a prefix to unit norm only
//! raises the threshold it is compared against, and both majorants are
//! nonincreasing, so each prefix level must already sit below them at the
//! original threshold. The sweep enumerates every level's sum list, checks
//! each grid point against both majorants, and replays the half-half
//! conditioning identity
//!
//!   P(S_m >= x) = (P(S_{m-1} >= x - a_m) + P(S_{m-1} >= x + a_m)) / 2
//!
//! in exact dyadic arithmetic. The counts are dyadic rationals, so the
//! replay residual is exactly zero unless a floating-point shift lands a
//! sum on the other side of a threshold; one flipped membership already
//! costs 2^-m, far above the gate.

use crate::bounds::h1_raw;
use crate::error::{Error, Result};
use crate::gaussian::{constants, gauss_tail_raw};
use crate::rademacher::{Weights, ATOM_MAX_N};
use crate::verifier::{Status, VerificationReport, Witness};

/// Replay residuals above this are membership disagreements, not rounding.
const RESIDUAL_GATE: f64 = 1e-12;

fn count_ge(sorted: &[f64], x: f64) -> u64 {
    (sorted.len() - sorted.partition_point(|&s| s < x)) as u64
}

/// Sorted sum list for the next level: the previous level shifted up and
/// down by the new weight, merged. Uses the same additions that define the
/// level, so the list is bitwise the level's multiset.
fn merge_shifted(prev: &[f64], a: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(prev.len() * 2);
    let (mut i, mut j) = (0usize, 0usize);
    while i < prev.len() && j < prev.len() {
        let lo = prev[i] - a;
        let hi = prev[j] + a;
        if lo <= hi {
            out.push(lo);
            i += 1;
        } else {
            out.push(hi);
            j += 1;
        }
    }
    while i < prev.len() {
        out.push(prev[i] - a);
        i += 1;
    }
    while j < prev.len() {
        out.push(prev[j] + a);
        j += 1;
    }
    out
}

/// Checks every prefix level of `w` against both majorants on `grid` and
/// replays the conditioning identity between consecutive levels.
///
/// Refuted means a level's exact dyadic tail exceeded a majorant at a grid
/// point; inconclusive means a replay residual crossed the gate, which
/// signals a threshold straddle rather than a counterexample.
pub fn verify_induction(w: &Weights, grid: &[f64]) -> Result<VerificationReport> {
    let n = w.n();
    if n > ATOM_MAX_N {
        return Err(Error::Budget(format!(
            "induction sweep enumerates every prefix level and is limited to {ATOM_MAX_N} \
             weights, got {n}"
        )));
    }
    if grid.is_empty() {
        return Err(Error::Domain("induction sweep needs a nonempty grid".into()));
    }
    for &x in grid {
        if !x.is_finite() {
            return Err(Error::Domain(format!("grid point {x} must be finite")));
        }
    }
    let mut grid = grid.to_vec();
    grid.sort_unstable_by(f64::total_cmp);
    grid.dedup();

    let c2 = constants().c2;
    let mut levels: u64 = 0;
    let mut max_residual = 0.0f64;
    let mut prev: Vec<f64> = vec![0.0];
    let mut notes = Vec::new();

    for m in 0..=n {
        let cur = if m == 0 {
            prev.clone()
        } else {
            merge_shifted(&prev, w.values()[m - 1])
        };
        let scale = 0.5f64.powi(m as i32);
        for &x in &grid {
            levels += 1;
            let lhs = count_ge(&cur, x) as f64 * scale;
            let majorant = h1_raw(x);
            if lhs > majorant {
                return Ok(report(
                    n,
                    Status::Refuted,
                    max_residual,
                    levels,
                    Some(Witness {
                        a: m as f64,
                        x,
                        value: lhs,
                        detail: format!(
                            "level {m} tail {lhs} exceeds the piecewise majorant {majorant}"
                        ),
                    }),
                    notes,
                ));
            }
            let gauss = c2 * gauss_tail_raw(x);
            if lhs > gauss {
                return Ok(report(
                    n,
                    Status::Refuted,
                    max_residual,
                    levels,
                    Some(Witness {
                        a: m as f64,
                        x,
                        value: lhs,
                        detail: format!(
                            "level {m} tail {lhs} exceeds the Gaussian bound {gauss}"
                        ),
                    }),
                    notes,
                ));
            }
            if m > 0 {
                let am = w.values()[m - 1];
                let prev_scale = scale * 2.0;
                let down = count_ge(&prev, x - am) as f64 * prev_scale;
                let up = count_ge(&prev, x + am) as f64 * prev_scale;
                let residual = (lhs - 0.5 * (down + up)).abs();
                max_residual = max_residual.max(residual);
                if residual > RESIDUAL_GATE {
                    notes.push(format!(
                        "replay residual {residual:.3e} at level {m}, x = {x}: a shifted sum \
                         straddled the threshold"
                    ));
                    return Ok(report(
                        n,
                        Status::Inconclusive,
                        max_residual,
                        levels,
                        Some(Witness { a: m as f64, x, value: residual, detail:
                            "conditioning replay disagreed; not a counterexample".into() }),
                        notes,
                    ));
                }
            }
        }
        prev = cur;
    }

    notes.push(format!(
        "checked {} levels x {} grid points against both majorants; max replay residual {max_residual:.3e}",
        n + 1,
        grid.len()
    ));
    Ok(report(n, Status::Certified, max_residual, levels, None, notes))
}

fn report(
    n: usize,
    status: Status,
    max_residual: f64,
    checks: u64,
    witness: Option<Witness>,
    notes: Vec<String>,
) -> VerificationReport {
    VerificationReport {
        region: format!("induction n={n}"),
        status,
        certified_sup: max_residual,
        boxes_processed: checks,
        max_depth: n as u32,
        elapsed_ms: 0,
        witness,
        notes,
    }
}
