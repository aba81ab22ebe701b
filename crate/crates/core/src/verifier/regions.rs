//! Partition of the parameter rectangle [0,1] x [sqrt2, sqrt3] into the
//! sixteen named regions the certification sweep works through, plus the
//! closed-form boundary curves separating them.
//!
//! The curves are preimages of the h1 breakpoints under the two-atom
//! substitutions: u(a,x) = sqrt(2) along a = (x -+ sqrt(6-2x^2))/3 (two
//! roots) and v(a,x) = sqrt(3) along a = (sqrt(12-3x^2) - x)/4. The lower
//! u-root and the v-root cross at x_star, which splits the region naming on
//! each side of the crossing.

use crate::bounds::{u, v, SQRT_2, SQRT_3};
use crate::error::{Error, Result};
use crate::gaussian::constants;
use crate::interval::{up_n, Interval};

/// Classification tolerance: points within this distance of an edge or of a
/// breakpoint curve (measured in u or v) take the edge/curve tag.
pub const EDGE_TOL: f64 = 1e-12;

pub(crate) const FRAC_1_SQRT_3: f64 = 0.5773502691896258;
pub(crate) const TWO_SQRT_2_OVER_3: f64 = 0.9428090415820634;

/// Region tags. First letter classifies u against sqrt(2) (L below, G above,
/// E exactly on the curve), second classifies v against sqrt(3); A-tags are
/// the a = 0 and a = 1 edges, X-tags the x = sqrt(2) and x = sqrt(3) edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionId {
    /// Interior, u < sqrt2 and v <= sqrt3.
    LLe,
    /// Interior, u < sqrt2 and v > sqrt3.
    LG,
    /// Interior, u > sqrt2 and v < sqrt3, x <= x_star.
    GL1,
    /// Interior, u > sqrt2 and v < sqrt3, x > x_star.
    GL2,
    /// Interior, u > sqrt2 and v > sqrt3, a < 1/sqrt3.
    GG1,
    /// Interior, u > sqrt2 and v > sqrt3, a >= 1/sqrt3.
    GG2,
    /// Curve v = sqrt3 with u > sqrt2 (x in [x_star, sqrt3]).
    GE,
    /// Curve u = sqrt2 with v < sqrt3 (lower root, x in [sqrt2, x_star]).
    ELe,
    /// Curve u = sqrt2 with v > sqrt3, lower root (a < 1/sqrt3).
    EG1,
    /// Curve u = sqrt2 with v > sqrt3, upper root (a >= 1/sqrt3).
    EG2,
    /// Edge a = 0 (K vanishes identically).
    A1,
    /// Edge a = 1 (K degenerates to -2 g(x)).
    A2,
    /// Edge x = sqrt2, a in [0, 1/sqrt2] (u in [1, sqrt2]).
    X11,
    /// Edge x = sqrt2, a in (1/sqrt2, 2 sqrt2 / 3] (u in [1, sqrt2]).
    X12,
    /// Edge x = sqrt2, a in (2 sqrt2 / 3, 1] (u >= sqrt2).
    X13,
    /// Edge x = sqrt3.
    X2,
}

impl RegionId {
    pub const ALL: [RegionId; 16] = [
        RegionId::LLe,
        RegionId::LG,
        RegionId::GL1,
        RegionId::GL2,
        RegionId::GG1,
        RegionId::GG2,
        RegionId::GE,
        RegionId::ELe,
        RegionId::EG1,
        RegionId::EG2,
        RegionId::A1,
        RegionId::A2,
        RegionId::X11,
        RegionId::X12,
        RegionId::X13,
        RegionId::X2,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            RegionId::LLe => "LLe",
            RegionId::LG => "LG",
            RegionId::GL1 => "GL1",
            RegionId::GL2 => "GL2",
            RegionId::GG1 => "GG1",
            RegionId::GG2 => "GG2",
            RegionId::GE => "GE",
            RegionId::ELe => "ELe",
            RegionId::EG1 => "EG1",
            RegionId::EG2 => "EG2",
            RegionId::A1 => "A1",
            RegionId::A2 => "A2",
            RegionId::X11 => "X11",
            RegionId::X12 => "X12",
            RegionId::X13 => "X13",
            RegionId::X2 => "X2",
        }
    }

    /// Parses a tag, case-insensitively.
    pub fn from_tag(s: &str) -> Option<RegionId> {
        RegionId::ALL
            .iter()
            .copied()
            .find(|r| r.tag().eq_ignore_ascii_case(s))
    }
}

impl std::fmt::Display for RegionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

fn check_curve_x(x: f64) -> Result<()> {
    if !x.is_finite() || x < SQRT_2 - EDGE_TOL || x > SQRT_3 + EDGE_TOL {
        return Err(Error::Domain(format!(
            "boundary curves are defined for x in [sqrt2, sqrt3], got {x}"
        )));
    }
    Ok(())
}

/// Lower root of u(a, x) = sqrt(2): a = (x - sqrt(6 - 2x^2))/3.
///
/// Zero at x = sqrt(2), increasing to 1/sqrt(3) at x = sqrt(3) where it
/// meets the upper root.
pub fn boundary_u_lower_root(x: f64) -> Result<f64> {
    check_curve_x(x)?;
    Ok((x - (6.0 - 2.0 * x * x).max(0.0).sqrt()) / 3.0)
}

/// Upper root of u(a, x) = sqrt(2): a = (x + sqrt(6 - 2x^2))/3.
///
/// Decreasing from 2 sqrt(2)/3 at x = sqrt(2) to 1/sqrt(3) at x = sqrt(3).
pub fn boundary_u_upper_root(x: f64) -> Result<f64> {
    check_curve_x(x)?;
    Ok((x + (6.0 - 2.0 * x * x).max(0.0).sqrt()) / 3.0)
}

/// Root of v(a, x) = sqrt(3): a = (sqrt(12 - 3x^2) - x)/4.
///
/// Decreasing from about 0.2588 at x = sqrt(2) to 0 at x = sqrt(3); crosses
/// the lower u-root at x_star.
pub fn boundary_v_root(x: f64) -> Result<f64> {
    check_curve_x(x)?;
    Ok(((12.0 - 3.0 * x * x).max(0.0).sqrt() - x) / 4.0)
}

/// Nonnegative enclosure of sqrt(c - d*x^2) with the radicand clamped at
/// zero, so evaluation one ulp past the root stays defined.
fn clamped_sqrt_poly(c: f64, d: f64, x: Interval) -> Interval {
    let r = Interval::raw(c, c).sub(&x.square().scale(d));
    let r = Interval::raw(r.lo().max(0.0), r.hi().max(0.0));
    r.sqrt().expect("clamped radicand is nonnegative")
}

/// Interval version of [`boundary_u_lower_root`].
pub(crate) fn boundary_u_lower_iv(x: Interval) -> Interval {
    let root = clamped_sqrt_poly(6.0, 2.0, x);
    x.sub(&root).div(&Interval::raw(3.0, 3.0)).expect("exact divisor")
}

/// Interval version of [`boundary_u_upper_root`].
pub(crate) fn boundary_u_upper_iv(x: Interval) -> Interval {
    let root = clamped_sqrt_poly(6.0, 2.0, x);
    x.add(&root).div(&Interval::raw(3.0, 3.0)).expect("exact divisor")
}

/// Interval version of [`boundary_v_root`].
pub(crate) fn boundary_v_iv(x: Interval) -> Interval {
    let root = clamped_sqrt_poly(12.0, 3.0, x);
    root.sub(&x).div(&Interval::raw(4.0, 4.0)).expect("exact divisor")
}

/// Classifies a point of the closed rectangle [0,1] x [sqrt2, sqrt3].
///
/// Priority: the a-edges, then the x-edges, then the breakpoint curves
/// (within [`EDGE_TOL`] measured in u respectively v), then the interior
/// quadrants. Points outside the rectangle (beyond the tolerance) are a
/// domain error.
pub fn region_of(a: f64, x: f64) -> Result<RegionId> {
    if !a.is_finite() || !x.is_finite() {
        return Err(Error::Domain(format!("region_of({a}, {x}): arguments must be finite")));
    }
    if !(-EDGE_TOL..=1.0 + EDGE_TOL).contains(&a) {
        return Err(Error::Domain(format!("region_of: a = {a} outside [0, 1]")));
    }
    if x < SQRT_2 - EDGE_TOL || x > SQRT_3 + EDGE_TOL {
        return Err(Error::Domain(format!("region_of: x = {x} outside [sqrt2, sqrt3]")));
    }
    if a <= EDGE_TOL {
        return Ok(RegionId::A1);
    }
    if a >= 1.0 - EDGE_TOL {
        return Ok(RegionId::A2);
    }
    if (x - SQRT_2).abs() <= EDGE_TOL {
        return Ok(if a <= std::f64::consts::FRAC_1_SQRT_2 {
            RegionId::X11
        } else if a <= TWO_SQRT_2_OVER_3 {
            RegionId::X12
        } else {
            RegionId::X13
        });
    }
    if (x - SQRT_3).abs() <= EDGE_TOL {
        return Ok(RegionId::X2);
    }
    let uu = u(a, x)?;
    let vv = v(a, x)?;
    let du = uu - SQRT_2;
    let dv = vv - SQRT_3;
    if du.abs() <= EDGE_TOL {
        return Ok(if dv < -EDGE_TOL {
            RegionId::ELe
        } else if dv.abs() <= EDGE_TOL {
            // the curves' crossing at x_star
            RegionId::GE
        } else if a < FRAC_1_SQRT_3 {
            RegionId::EG1
        } else {
            RegionId::EG2
        });
    }
    if dv.abs() <= EDGE_TOL && du > 0.0 {
        return Ok(RegionId::GE);
    }
    Ok(match (du < 0.0, dv <= 0.0) {
        (true, true) => RegionId::LLe,
        (true, false) => RegionId::LG,
        (false, true) => {
            if x <= constants().x_star {
                RegionId::GL1
            } else {
                RegionId::GL2
            }
        }
        (false, false) => {
            if a < FRAC_1_SQRT_3 {
                RegionId::GG1
            } else {
                RegionId::GG2
            }
        }
    })
}

/// Smallest x with boundary root >= target, found by bisection on a curve
/// that is monotone in x. Used to trim curve sweeps where they enter the
/// small-a strip.
pub(crate) fn bisect_curve(
    root: impl Fn(f64) -> f64,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    increasing: bool,
) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let below = root(mid) < target;
        if below == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if increasing {
        hi
    } else {
        lo
    }
}

/// One-ulp-wide interval for the x = sqrt2 edge, containing the real sqrt2.
pub(crate) fn sqrt2_edge() -> Interval {
    Interval::raw(crate::interval::down_n(SQRT_2, 1), SQRT_2)
}

/// One-ulp-wide interval for the x = sqrt3 edge, containing the real sqrt3.
pub(crate) fn sqrt3_edge() -> Interval {
    Interval::raw(SQRT_3, up_n(SQRT_3, 1))
}
