//! Gaussian density, upper tail, Mills ratio, the constants of the tail
//! comparison, and certified interval enclosures.
//!
//! Accuracy contracts: `phi` is within 4 ulps; `gauss_tail` is within 1e-14
//! relative error wherever the tail is a normal f64 (|x| <= ~37.5), degrades
//! to a few subnormal quanta beyond, and underflows to zero near x = 38.6.
//! The interval variants wrap these with monotonicity/unimodality plus 4-ulp
//! outward padding, and switch to the analytic Mills upper bound deep in the
//! tail where relative accuracy of the point routine no longer exists.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::interval::{down_n, up_n, Interval};

/// 1/sqrt(2*pi), correctly rounded.
pub(crate) const FRAC_1_SQRT_2PI: f64 = 0.3989422804014327;

/// High and low parts of 1/sqrt(2): HI is the rounded constant, LO the
/// residual, so HI + LO carries ~107 bits of the true value.
const INV_SQRT2_HI: f64 = std::f64::consts::FRAC_1_SQRT_2;
const INV_SQRT2_LO: f64 = -4.833646656726457e-17;

/// Above this, gauss_tail underflows to zero even through subnormals.
const ERFC_ZERO_ARG: f64 = 27.3;

/// From here on, interval upper bounds use phi(x)/x instead of erfc.
const DEEP_TAIL_X: f64 = 37.0;

// Rational minimax coefficients for erfc (Cody-style, three regimes).
const ERF_A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const ERF_B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];
const ERF_C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const ERF_D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];
const ERF_P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const ERF_Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];
/// 1/sqrt(pi).
const SQRPI: f64 = 5.6418958354775628695e-1;

/// exp(-ay^2) with the argument split so the exponent is computed exactly:
/// ay is close to ysq = trunc(16 ay)/16, whose square is an exact dyadic.
fn scale_by_exp_sq(ay: f64, r: f64) -> f64 {
    let ysq = (16.0 * ay).trunc() / 16.0;
    let del = (ay - ysq) * (ay + ysq);
    (-ysq * ysq).exp() * (-del).exp() * r
}

/// Complementary error function, total over all f64 (NaN propagates).
fn erfc_raw(y: f64) -> f64 {
    if y.is_nan() {
        return y;
    }
    let ay = y.abs();
    if ay <= 0.46875 {
        // erfc = 1 - erf, erf odd and rational in y^2.
        let z = y * y;
        let mut xnum = ERF_A[4] * z;
        let mut xden = z;
        for i in 0..3 {
            xnum = (xnum + ERF_A[i]) * z;
            xden = (xden + ERF_B[i]) * z;
        }
        return 1.0 - y * (xnum + ERF_A[3]) / (xden + ERF_B[3]);
    }
    let res = if ay <= 4.0 {
        let mut xnum = ERF_C[8] * ay;
        let mut xden = ay;
        for i in 0..7 {
            xnum = (xnum + ERF_C[i]) * ay;
            xden = (xden + ERF_D[i]) * ay;
        }
        scale_by_exp_sq(ay, (xnum + ERF_C[7]) / (xden + ERF_D[7]))
    } else if ay < ERFC_ZERO_ARG {
        let z = 1.0 / (ay * ay);
        let mut xnum = ERF_P[5] * z;
        let mut xden = z;
        for i in 0..4 {
            xnum = (xnum + ERF_P[i]) * z;
            xden = (xden + ERF_Q[i]) * z;
        }
        let tail = z * (xnum + ERF_P[4]) / (xden + ERF_Q[4]);
        scale_by_exp_sq(ay, (SQRPI - tail) / ay)
    } else {
        0.0
    };
    if y < 0.0 {
        2.0 - res
    } else {
        res
    }
}

/// Density, total over all f64 (+-inf -> 0, NaN propagates).
pub(crate) fn phi_raw(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 2.0 {
        // includes NaN propagation through the arithmetic
        return FRAC_1_SQRT_2PI * (-0.5 * x * x).exp();
    }
    if ax > 39.0 {
        // exp(-760.5) is zero even as a subnormal
        return if ax.is_nan() { ax } else { 0.0 };
    }
    // Split ax = ys + d with ys = k/16: 0.5*ys^2 = k^2/512 is exact, and the
    // cross term stays small enough that its rounding is a last-bit effect.
    let ys = (16.0 * ax).trunc() / 16.0;
    let d = ax - ys;
    FRAC_1_SQRT_2PI * (-0.5 * ys * ys).exp() * (-0.5 * d * (ax + ys)).exp()
}

/// Upper tail P(Z >= x), total over all f64.
pub(crate) fn gauss_tail_raw(x: f64) -> f64 {
    if !x.is_finite() {
        return if x.is_nan() {
            x
        } else if x > 0.0 {
            0.0
        } else {
            1.0
        };
    }
    // y = x/sqrt(2) in double-double: the plain product's rounding alone would
    // cost ~y^2 ulps of relative error in erfc, breaking the 1e-14 contract
    // past x ~ 13. First-order correction via erfc'(y) = -(2/sqrt(pi))e^{-y^2}.
    let y = x * INV_SQRT2_HI;
    let e = f64::mul_add(x, INV_SQRT2_HI, -y) + x * INV_SQRT2_LO;
    let corr = 0.5 * std::f64::consts::FRAC_2_SQRT_PI * (-y * y).exp() * e;
    (0.5 * erfc_raw(y) - corr).clamp(0.0, 1.0)
}

fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} requires a finite argument, got {x}")))
    }
}

/// Standard Gaussian density e^{-x^2/2}/sqrt(2 pi). Relative error <= 4 ulps.
pub fn phi(x: f64) -> Result<f64> {
    check_finite(x, "phi")?;
    Ok(phi_raw(x))
}

/// Standard Gaussian upper tail P(Z >= x). Relative error <= 1e-14 while the
/// result is a normal f64 (x <= ~37.5); a few subnormal quanta beyond.
pub fn gauss_tail(x: f64) -> Result<f64> {
    check_finite(x, "gauss_tail")?;
    Ok(gauss_tail_raw(x))
}

/// Inverse Mills ratio phi(x)/gauss_tail(x).
///
/// Errors with [`Error::Range`] once the tail underflows (x beyond ~38.6 or
/// any x > 40); accuracy in the subnormal strip just below that is limited by
/// the tail's own representation.
pub fn mills_ratio(x: f64) -> Result<f64> {
    check_finite(x, "mills_ratio")?;
    if x > 40.0 {
        return Err(Error::Range(format!(
            "mills_ratio({x}): gauss_tail underflows past representable range"
        )));
    }
    let t = gauss_tail_raw(x);
    if t <= 0.0 {
        return Err(Error::Range(format!("mills_ratio({x}): gauss_tail underflowed to zero")));
    }
    Ok(phi_raw(x) / t)
}

/// Constants of the tail comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// 1/(4 P(Z >= sqrt(2))): the least factor c for which the comparison
    /// tail <= c * gauss_tail can hold at x = sqrt(2).
    pub c1: f64,
    /// c1 * (1 + (1 + mills_ratio(sqrt(3)))/250): the certified factor of the
    /// bound tail <= c2 * gauss_tail(x) for x >= sqrt(3).
    pub c2: f64,
    /// 2 e^3 / 9: constant of the shifted-tail bound gauss_tail(x - ln(c3)/x).
    pub c3: f64,
    /// Abscissa where the curves u(a,x) = sqrt(2) and v(a,x) = sqrt(3) meet;
    /// x_star^2 = (5 + 2 sqrt(6))/(9 - 2 sqrt(6)), about 1.5536.
    pub x_star: f64,
    /// sqrt(1 - a^2) at the meet point's weight a, about 0.98761.
    pub s_star: f64,
}

/// Computes the constants once from the primitives above.
pub fn constants() -> Constants {
    static CACHE: OnceLock<Constants> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let sqrt2 = std::f64::consts::SQRT_2;
        let sqrt3 = 3.0_f64.sqrt();
        let c1 = 0.25 / gauss_tail_raw(sqrt2);
        let r3 = phi_raw(sqrt3) / gauss_tail_raw(sqrt3);
        let c2 = c1 * (1.0 + (1.0 + r3) / 250.0);
        let c3 = 2.0 * std::f64::consts::E.powi(3) / 9.0;
        let sqrt6 = 6.0_f64.sqrt();
        let x_star = ((5.0 + 2.0 * sqrt6) / (9.0 - 2.0 * sqrt6)).sqrt();
        let a_star = 0.25 * (-x_star + (12.0 - 3.0 * x_star * x_star).sqrt());
        let s_star = (1.0 - a_star * a_star).sqrt();
        Constants { c1, c2, c3, x_star, s_star }
    })
}

/// Enclosure of the density's image over `x` (unimodal, peak at 0).
pub fn phi_interval(x: Interval) -> Interval {
    let (alo, ahi) = (x.lo().abs(), x.hi().abs());
    let vmin = phi_raw(alo.max(ahi));
    let vmax = if x.contains(0.0) { FRAC_1_SQRT_2PI } else { phi_raw(alo.min(ahi)) };
    Interval::raw(down_n(vmin, 4).max(0.0), up_n(vmax, 4))
}

/// Enclosure of the tail's image over `x` (monotone decreasing).
///
/// Deep in the tail (x.lo >= 37) the upper endpoint switches to the analytic
/// bound phi(t)/t, which stays meaningful where erfc's relative accuracy
/// drowns in subnormals; the extra 1e-323 absorbs the last quanta.
pub fn gauss_tail_interval(x: Interval) -> Interval {
    let lo = down_n(gauss_tail_raw(x.hi()), 4).max(0.0);
    let hi = if x.lo() >= DEEP_TAIL_X {
        up_n(up_n(phi_raw(x.lo()), 4) / x.lo(), 2) + 1e-323
    } else {
        up_n(gauss_tail_raw(x.lo()), 4).min(1.0)
    };
    Interval::raw(lo, hi.max(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(actual: f64, expected: f64) -> f64 {
        if expected == 0.0 {
            actual.abs()
        } else {
            ((actual - expected) / expected).abs()
        }
    }

    const SQRT_2: f64 = std::f64::consts::SQRT_2;
    const SQRT_3: f64 = 1.7320508075688772;

    #[test]
    fn tail_matches_reference_values() {
        // (x, reference) with the reference computed for the exact f64 x.
        let table: &[(f64, f64)] = &[
            (-8.0, 0.999999999999999377904),
            (-3.0, 0.998650101968369905473),
            (-1.0, 0.841344746068542948585),
            (-0.5, 0.691462461274013103638),
            (-0.001, 0.500398942213911062593),
            (0.001, 0.499601057786088937407),
            (0.5, 0.308537538725986896362),
            (1.0, 0.158655253931457051415),
            (SQRT_2, 0.0786496035251425511414),
            (1.5, 0.0668072012688580660045),
            (SQRT_3, 0.0416322583317752098603),
            (2.0, 0.0227501319481792072003),
            (2.5, 0.00620966532577613516698),
            (3.0, 0.00134989803163009452665),
            (5.0, 2.86651571879193911674e-7),
            (8.0, 6.22096057427178412352e-16),
            (10.0, 7.61985302416052606597e-24),
            (13.0, 6.11716439954987968228e-39),
            (20.0, 2.75362411860623369508e-89),
            (30.0, 4.90671392714818705953e-198),
            (37.0, 5.72557122252457682268e-300),
            (37.5, 4.60535300958195484383e-308),
        ];
        for &(x, want) in table {
            let got = gauss_tail(x).unwrap();
            assert!(rel(got, want) <= 1e-14, "gauss_tail({x}) = {got:e}, want {want:e}");
        }
        assert_eq!(gauss_tail(0.0).unwrap(), 0.5);
        // subnormal regime: representation itself limits accuracy
        assert!(rel(gauss_tail(38.0).unwrap(), 2.88542836006878430835e-316) <= 1e-6);
        assert_eq!(gauss_tail(39.0).unwrap(), 0.0);
    }

    #[test]
    fn phi_matches_reference_values() {
        let table: &[(f64, f64)] = &[
            (-3.0, 0.00443184841193800717560),
            (-1.0, 0.241970724519143349798),
            (0.5, 0.352065326764299477775),
            (1.0, 0.241970724519143349798),
            (SQRT_2, 0.146762663173739879829),
            (SQRT_3, 0.0890160549159514875643),
            (2.0, 0.0539909665131880519506),
            (3.0, 0.00443184841193800717560),
            (5.0, 0.00000148671951473429770791),
            (8.0, 5.05227108353689228795e-15),
            (10.0, 7.69459862670641934634e-23),
            (20.0, 5.52094836215976318958e-88),
            (37.0, 2.12000655152460562685e-298),
        ];
        for &(x, want) in table {
            let got = phi(x).unwrap();
            assert!(rel(got, want) <= 1.2e-15, "phi({x}) = {got:e}, want {want:e}");
        }
        assert_eq!(phi(0.0).unwrap(), FRAC_1_SQRT_2PI);
    }

    #[test]
    fn mills_matches_reference_values() {
        let table: &[(f64, f64)] = &[
            (-2.0, 0.0552478626789899591023),
            (0.5, 1.14107777036806448088),
            (1.0, 1.52513527616098120909),
            (SQRT_2, 1.86603182464642786466),
            (SQRT_3, 2.13815100316120230081),
            (2.0, 2.37321553282284086730),
            (5.0, 5.18650396712584211562),
            (8.0, 8.12136811223611268065),
            (10.0, 10.0980932339625119628),
            (20.0, 20.0497530685278505422),
            (37.0, 37.0269876861269900960),
        ];
        for &(x, want) in table {
            let got = mills_ratio(x).unwrap();
            assert!(rel(got, want) <= 1e-13, "mills({x}) = {got}, want {want}");
        }
        assert_eq!(mills_ratio(0.0).unwrap(), 2.0 * FRAC_1_SQRT_2PI);
    }

    #[test]
    fn domain_and_range_errors() {
        assert!(matches!(phi(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(phi(f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!(gauss_tail(f64::NEG_INFINITY), Err(Error::Domain(_))));
        assert!(matches!(mills_ratio(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(mills_ratio(41.0), Err(Error::Range(_))));
        assert!(matches!(mills_ratio(39.5), Err(Error::Range(_))));
    }

    #[test]
    fn constants_match_their_definitions() {
        let c = constants();
        assert!(rel(c.c1, 3.17865556588699706255) <= 1e-14);
        assert!(rel(c.c2, 3.21855597049816593968) <= 1e-14);
        assert!(rel(c.c3, 4.46345264959725949798) <= 1e-14);
        assert!(rel(c.x_star, 1.55363587595401057424) <= 1e-14);
        assert!(rel(c.s_star, 0.987606693701117573796) <= 1e-13);
        let ratio = c.c2 / c.c1;
        assert!(ratio > 1.012 && ratio < 1.013);
        assert!(c.x_star > 1.54 && c.x_star < 1.56);
        // recomputable from primitives
        assert!(rel(c.c1, 0.25 / gauss_tail(SQRT_2).unwrap()) <= 1e-12);
        let r3 = mills_ratio(SQRT_3).unwrap();
        assert!(rel(c.c2, c.c1 * (1.0 + (1.0 + r3) / 250.0)) <= 1e-12);
        let sqrt6 = 6.0_f64.sqrt();
        assert!(rel(c.x_star * c.x_star, (5.0 + 2.0 * sqrt6) / (9.0 - 2.0 * sqrt6)) <= 1e-14);
    }

    #[test]
    fn tail_decreases_and_mills_increases() {
        let n = 10_000;
        let mut prev_t = gauss_tail(0.0).unwrap();
        let mut prev_m = mills_ratio(0.0).unwrap();
        for i in 1..=n {
            let x = 8.0 * i as f64 / n as f64;
            let t = gauss_tail(x).unwrap();
            let m = mills_ratio(x).unwrap();
            assert!(t < prev_t, "tail not strictly decreasing at {x}");
            assert!(m > prev_m, "mills not strictly increasing at {x}");
            prev_t = t;
            prev_m = m;
        }
    }

    #[test]
    fn tail_derivative_is_minus_phi() {
        for i in 1..=100 {
            let x = 8.0 * i as f64 / 100.0;
            let h = 1e-5;
            let fd = (gauss_tail(x + h).unwrap() - gauss_tail(x - h).unwrap()) / (2.0 * h);
            let want = -phi(x).unwrap();
            assert!(rel(fd, want) <= 1e-6, "d/dx tail at {x}: {fd} vs {want}");
        }
    }

    #[test]
    fn interval_enclosures_contain_midpoint_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100_000 {
            let a = 8.0 * rng.gen::<f64>();
            let w = 0.5 * rng.gen::<f64>();
            let x = Interval::new(a, (a + w).min(8.0).max(a)).unwrap();
            let m = x.mid();
            let t = gauss_tail_interval(x);
            assert!(t.contains(gauss_tail_raw(m)), "tail mid {m} outside {t}");
            let p = phi_interval(x);
            assert!(p.contains(phi_raw(m)), "phi mid {m} outside {p}");
        }
    }

    #[test]
    fn interval_examples() {
        let s2 = Interval::point(SQRT_2).unwrap();
        let t = gauss_tail_interval(s2);
        assert!(t.contains(0.0786496035251425511414));
        assert!(t.width() <= 1e-15);

        let zero = gauss_tail_interval(Interval::point(0.0).unwrap());
        assert!(zero.contains(0.5) && zero.width() <= 1e-15);

        let wide = gauss_tail_interval(Interval::new(1.0, 2.0).unwrap());
        assert!(wide.lo() <= 0.0227501319481792072003);
        assert!(wide.hi() >= 0.158655253931457051415);
        assert!(wide.lo() >= 0.0227501319481792072003 - 1e-15);
        assert!(wide.hi() <= 0.158655253931457051415 + 1e-15);

        let p = phi_interval(Interval::new(-1.0, 0.5).unwrap());
        assert!(p.contains(FRAC_1_SQRT_2PI));
        assert!(p.contains(0.241970724519143349798));
        assert!(p.lo() <= 0.241970724519143349798);

        // peakless negative box: phi increasing there
        let pn = phi_interval(Interval::new(-3.0, -2.0).unwrap());
        assert!(pn.contains(phi_raw(-2.5)));
        assert!(pn.lo() <= phi_raw(-3.0) && pn.hi() >= phi_raw(-2.0));
    }

    #[test]
    fn deep_tail_interval_guard_is_sound() {
        let t = gauss_tail_interval(Interval::point(37.5).unwrap());
        assert!(t.contains(4.60535300958195484383e-308));
        // Mills bound overshoot is ~1/x^2 relative, stays tight
        assert!(t.hi() <= 4.62e-308);

        let deep = gauss_tail_interval(Interval::point(39.0).unwrap());
        assert_eq!(deep.lo(), 0.0);
        assert!(deep.hi() > 0.0 && deep.hi() < 1e-320);

        let huge = gauss_tail_interval(Interval::new(50.0, 1e300).unwrap());
        assert_eq!(huge.lo(), 0.0);
        assert!(huge.hi() < 1e-320);
    }
}
