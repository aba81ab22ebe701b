//! The piecewise tail majorant h1 and its ingredients: the smooth cap g, the
//! scaled Gaussian tail h, the two-atom substitutions u and v, the induction
//! functional K(a, x) = h1(u) + h1(v) - 2 h1(x), and interval enclosures of
//! all of them.
//!
//! h1 is upper-semicontinuous: at each breakpoint it takes the larger of the
//! one-sided limits. Its only jumps are at 0 (from 1 down to 1/2) and at
//! sqrt(2) (from 1/4 up to g(sqrt(2))); the 1/(2x^2) branch meets 1/2 at x = 1
//! and g meets h at sqrt(3) by the construction of c2.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gaussian::{
    constants, gauss_tail_interval, gauss_tail_raw, phi_interval, phi_raw,
};
use crate::interval::{down_n, sqrt2, sqrt3, up_n, Interval};

pub(crate) const SQRT_2: f64 = std::f64::consts::SQRT_2;
pub(crate) const SQRT_3: f64 = 1.7320508075688772;

fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} requires a finite argument, got {x}")))
    }
}

/// Which branch of h1 applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// 1 on (-inf, 0]
    One,
    /// 1/2 on (0, 1]
    Half,
    /// 1/(2x^2) on [1, sqrt(2))
    InverseSquare,
    /// g on [sqrt(2), sqrt(3)]
    G,
    /// h on [sqrt(3), inf)
    H,
}

impl Branch {
    /// Position along the axis; adjacent branches differ by one.
    pub(crate) fn index(self) -> u8 {
        match self {
            Branch::One => 0,
            Branch::Half => 1,
            Branch::InverseSquare => 2,
            Branch::G => 3,
            Branch::H => 4,
        }
    }

    /// Short name used in CSV output.
    pub fn tag(self) -> &'static str {
        match self {
            Branch::One => "1",
            Branch::Half => "1/2",
            Branch::InverseSquare => "1/(2x^2)",
            Branch::G => "g",
            Branch::H => "h",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Smooth cap of the majorant on [sqrt(2), sqrt(3)].
pub fn g(x: f64) -> Result<f64> {
    check_finite(x, "g")?;
    Ok(g_raw(x))
}

pub(crate) fn g_raw(x: f64) -> f64 {
    let c = constants();
    c.c1 / 250.0 * (251.0 * gauss_tail_raw(x) + phi_raw(x))
}

/// Scaled Gaussian tail c2 * gauss_tail(x).
pub fn h(x: f64) -> Result<f64> {
    check_finite(x, "h")?;
    Ok(h_raw(x))
}

pub(crate) fn h_raw(x: f64) -> f64 {
    constants().c2 * gauss_tail_raw(x)
}

pub(crate) fn branch_raw(x: f64) -> Branch {
    if x <= 0.0 {
        Branch::One
    } else if x <= 1.0 {
        Branch::Half
    } else if x < SQRT_2 {
        Branch::InverseSquare
    } else if x <= SQRT_3 {
        Branch::G
    } else {
        Branch::H
    }
}

pub(crate) fn h1_raw(x: f64) -> f64 {
    match branch_raw(x) {
        Branch::One => 1.0,
        Branch::Half => 0.5,
        Branch::InverseSquare => 0.5 / (x * x),
        Branch::G => g_raw(x),
        Branch::H => h_raw(x),
    }
}

/// The piecewise majorant.
pub fn h1(x: f64) -> Result<f64> {
    check_finite(x, "h1")?;
    Ok(h1_raw(x))
}

/// Which branch of the majorant applies at x.
pub fn h1_branch(x: f64) -> Result<Branch> {
    check_finite(x, "h1_branch")?;
    Ok(branch_raw(x))
}

/// The majorant as a value: breakpoints plus branch dispatch.
#[derive(Debug, Clone)]
pub struct PiecewiseBound {
    breakpoints: [f64; 4],
}

impl PiecewiseBound {
    pub fn standard() -> Self {
        Self { breakpoints: [0.0, 1.0, SQRT_2, SQRT_3] }
    }

    pub fn breakpoints(&self) -> [f64; 4] {
        self.breakpoints
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        h1(x)
    }

    pub fn branch(&self, x: f64) -> Result<Branch> {
        h1_branch(x)
    }
}

fn check_a_lt_1(a: f64) -> Result<()> {
    if a.is_finite() && (0.0..1.0).contains(&a) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "substitution weight a must lie in [0, 1), got {a} (a = 1 is handled by K's extension)"
        )))
    }
}

/// u(a, x) = (x - a)/sqrt(1 - a^2).
pub fn u(a: f64, x: f64) -> Result<f64> {
    check_a_lt_1(a)?;
    check_finite(x, "u")?;
    Ok((x - a) / (1.0 - a * a).sqrt())
}

/// v(a, x) = (x + a)/sqrt(1 - a^2).
pub fn v(a: f64, x: f64) -> Result<f64> {
    check_a_lt_1(a)?;
    check_finite(x, "v")?;
    Ok((x + a) / (1.0 - a * a).sqrt())
}

/// Validated argument pair for the induction functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KQuery {
    a: f64,
    x: f64,
}

impl KQuery {
    pub fn new(a: f64, x: f64) -> Result<Self> {
        check_finite(x, "KQuery")?;
        if !a.is_finite() || !(0.0..=1.0).contains(&a) {
            return Err(Error::Domain(format!("KQuery weight a must lie in [0, 1], got {a}")));
        }
        Ok(Self { a, x })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

/// K(a, x) = h1(u) + h1(v) - 2 h1(x), extended by K(1, x) = -2 g(x).
///
/// K(0, x) = 0 holds bitwise: a = 0 gives s = 1 and u = v = x exactly.
pub fn k(q: KQuery) -> f64 {
    k_raw(q.a, q.x)
}

pub(crate) fn k_raw(a: f64, x: f64) -> f64 {
    if a >= 1.0 {
        return -2.0 * g_raw(x);
    }
    let s = (1.0 - a * a).sqrt();
    let uu = (x - a) / s;
    let vv = (x + a) / s;
    h1_raw(uu) + h1_raw(vv) - 2.0 * h1_raw(x)
}

// ---------------------------------------------------------------------------
// Interval layer
// ---------------------------------------------------------------------------

struct IntervalConstants {
    c1_over_250: Interval,
    c2: Interval,
}

/// Enclosures of the comparison constants, computed from interval enclosures
/// of sqrt(2) and sqrt(3) so they contain the exact real constants.
fn iconsts() -> &'static IntervalConstants {
    static CACHE: OnceLock<IntervalConstants> = OnceLock::new();
    CACHE.get_or_init(|| {
        let quarter = Interval::point(0.25).expect("exact");
        let one = Interval::point(1.0).expect("exact");
        let c1 = quarter.div(&gauss_tail_interval(sqrt2())).expect("tail(sqrt2) > 0");
        let s3 = sqrt3();
        let r3 = phi_interval(s3).div(&gauss_tail_interval(s3)).expect("tail(sqrt3) > 0");
        let c2 = c1.mul(
            &one.add(&one.add(&r3).div(&Interval::point(250.0).expect("exact")).expect("exact divisor")),
        );
        let c1_over_250 = c1.div(&Interval::point(250.0).expect("exact")).expect("exact divisor");
        IntervalConstants { c1_over_250, c2 }
    })
}

/// Enclosure of g over y.
pub(crate) fn g_interval(y: Interval) -> Interval {
    let tail = gauss_tail_interval(y);
    let ph = phi_interval(y);
    iconsts().c1_over_250.mul(&tail.scale(251.0).add(&ph))
}

/// Enclosure of h over y.
pub(crate) fn h_interval(y: Interval) -> Interval {
    iconsts().c2.mul(&gauss_tail_interval(y))
}

/// Enclosure of 1/(2y^2); requires y.lo > 0.
pub(crate) fn inv_sq_interval(y: Interval) -> Interval {
    debug_assert!(y.lo() > 0.0);
    Interval::point(0.5)
        .expect("exact")
        .div(&y.square())
        .expect("positive divisor")
}

/// Enclosure of g' = -(c1/250)(251 + y) phi(y).
pub(crate) fn g_prime_interval(y: Interval) -> Interval {
    let lin = y.add(&Interval::point(251.0).expect("exact"));
    iconsts().c1_over_250.mul(&lin.mul(&phi_interval(y))).neg()
}

/// Enclosure of h' = -c2 phi(y).
pub(crate) fn h_prime_interval(y: Interval) -> Interval {
    iconsts().c2.mul(&phi_interval(y)).neg()
}

/// Enclosure of (1/(2y^2))' = -1/y^3; requires y.lo > 0.
pub(crate) fn inv_sq_prime_interval(y: Interval) -> Interval {
    debug_assert!(y.lo() > 0.0);
    Interval::point(1.0)
        .expect("exact")
        .div(&y.square().mul(&y))
        .expect("positive divisor")
        .neg()
}

/// Value enclosure of one h1 branch formula over y (the formula, not the
/// piecewise dispatch: callers pick the branch).
pub(crate) fn branch_value_interval(b: Branch, y: Interval) -> Interval {
    match b {
        Branch::One => Interval::raw(1.0, 1.0),
        Branch::Half => Interval::raw(0.5, 0.5),
        Branch::InverseSquare => inv_sq_interval(y),
        Branch::G => g_interval(y),
        Branch::H => h_interval(y),
    }
}

/// Derivative enclosure of one h1 branch formula over y.
pub(crate) fn branch_deriv_interval(b: Branch, y: Interval) -> Interval {
    match b {
        Branch::One | Branch::Half => Interval::raw(0.0, 0.0),
        Branch::InverseSquare => inv_sq_prime_interval(y),
        Branch::G => g_prime_interval(y),
        Branch::H => h_prime_interval(y),
    }
}

/// Enclosure of sqrt(1 - a^2) over an a-interval in [0, 1).
pub(crate) fn s_interval(a: Interval) -> Interval {
    debug_assert!(a.lo() >= 0.0 && a.hi() < 1.0);
    Interval::point(1.0)
        .expect("exact")
        .sub(&a.square())
        .sqrt()
        .expect("nonnegative")
}

/// Point evaluation of u with interval rounding. a must be < 1.
pub(crate) fn u_point_interval(a: f64, x: f64) -> Interval {
    let pa = Interval::raw(a, a);
    let px = Interval::raw(x, x);
    px.sub(&pa).div(&s_interval(pa)).expect("s > 0 for a < 1")
}

/// Point evaluation of v with interval rounding. a must be < 1.
pub(crate) fn v_point_interval(a: f64, x: f64) -> Interval {
    let pa = Interval::raw(a, a);
    let px = Interval::raw(x, x);
    px.add(&pa).div(&s_interval(pa)).expect("s > 0 for a < 1")
}

/// Tight enclosure of the image of u over a box: u is monotone increasing in
/// x, and V-shaped in a with minimum sqrt(x^2 - 1) on the curve a = 1/x, so
/// corner evaluations plus the hyperbola candidate cover the image.
/// Requires a ⊆ [0, 1) and x.lo > 0.
pub(crate) fn u_box_image(a: Interval, x: Interval) -> Interval {
    debug_assert!(a.hi() < 1.0 && x.lo() > 0.0);
    let corners = [
        u_point_interval(a.lo(), x.lo()),
        u_point_interval(a.lo(), x.hi()),
        u_point_interval(a.hi(), x.lo()),
        u_point_interval(a.hi(), x.hi()),
    ];
    let mut img = corners[0];
    for c in &corners[1..] {
        img = img.hull(c);
    }
    // conservative test for the critical curve a = 1/x meeting the box
    let crit = Interval::point(1.0).expect("exact").div(&x).expect("x > 0").widen(1);
    if a.intersect(&crit).is_some() {
        let x2m1 = Interval::raw(x.lo(), x.lo()).square().sub(&Interval::raw(1.0, 1.0));
        let cand = if x2m1.lo() <= 0.0 {
            0.0
        } else {
            down_n(x2m1.lo().sqrt(), 2)
        };
        if cand < img.lo() {
            img = Interval::raw(cand, img.hi());
        }
    }
    img
}

/// Tight enclosure of the image of v over a box: increasing in both a and x.
/// Requires a ⊆ [0, 1).
pub(crate) fn v_box_image(a: Interval, x: Interval) -> Interval {
    debug_assert!(a.hi() < 1.0);
    let lo = v_point_interval(a.lo(), x.lo());
    let hi = v_point_interval(a.hi(), x.hi());
    Interval::raw(lo.lo(), hi.hi().max(lo.lo()))
}

/// h1 enclosure over a y-image that stays within one branch or straddles at
/// most one breakpoint (then: hull of the two adjacent branch enclosures over
/// subranges extended one ulp past the breakpoint, so the real breakpoint is
/// interior regardless of rounding). Two or more breakpoints: split required.
pub(crate) fn h1_over_image(y: Interval, what: &str) -> Result<Interval> {
    let blo = branch_raw(y.lo());
    let bhi = branch_raw(y.hi());
    let (ilo, ihi) = (blo.index(), bhi.index());
    if ilo == ihi {
        return Ok(branch_value_interval(blo, y));
    }
    if ihi - ilo == 1 {
        let cut = [0.0, 1.0, SQRT_2, SQRT_3][ihi as usize - 1];
        let left = Interval::raw(y.lo(), up_n(cut, 1));
        let right = Interval::raw(down_n(cut, 1), y.hi());
        return Ok(branch_value_interval(blo, left).hull(&branch_value_interval(bhi, right)));
    }
    Err(Error::SplitRequired(format!(
        "{what} image {y} spans {} h1 branches; split the box",
        ihi - ilo + 1
    )))
}

/// Enclosure of K over a box with a ⊆ [0, 1) and x ⊆ [sqrt(2), sqrt(3)].
///
/// The x check allows one ulp of slack on each side: the nearest doubles to
/// the real endpoints bracket them, so a certification sweep that must cover
/// the real closed interval needs boxes reaching one ulp past the rounded
/// constants. On any such box the -2 h1(x) term is the g formula, which is
/// the true h1 everywhere on the real interval (g = h at the real sqrt(3)).
///
/// The u and v images may each straddle at most one h1 breakpoint; boxes
/// whose images span further get a split-required error (callers split at
/// the breakpoint preimages).
pub fn k_interval(a: Interval, x: Interval) -> Result<Interval> {
    if a.lo() < 0.0 || a.hi() >= 1.0 {
        return Err(Error::Domain(format!("a interval {a} must lie within [0, 1)")));
    }
    if x.lo() < down_n(SQRT_2, 1) || x.hi() > up_n(SQRT_3, 1) {
        return Err(Error::Domain(format!("x interval {x} must lie within [sqrt2, sqrt3]")));
    }
    let ui = u_box_image(a, x);
    let vi = v_box_image(a, x);
    let val_u = h1_over_image(ui, "u")?;
    let val_v = h1_over_image(vi, "v")?;
    let val_x = g_interval(x);
    Ok(val_u.add(&val_v).sub(&val_x.scale(2.0)))
}

/// Shifted Gaussian tail bound gauss_tail(x - ln(c3)/x), defined for x > 0.
pub fn edelman_bound(x: f64) -> Result<f64> {
    check_finite(x, "edelman_bound")?;
    if x <= 0.0 {
        return Err(Error::Domain(format!("edelman_bound requires x > 0, got {x}")));
    }
    let ln_c3 = constants().c3.ln();
    Ok(gauss_tail_raw(x - ln_c3 / x))
}
