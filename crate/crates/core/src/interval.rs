//! Closed f64 intervals with outward rounding.
//!
//! Arithmetic evaluates in round-to-nearest and then steps endpoints outward
//! by one ulp, so the result interval contains the exact real-arithmetic image
//! of the inputs. Square roots are correctly rounded by IEEE 754, so the same
//! one-ulp step suffices there. Transcendental enclosures elsewhere in the
//! crate use [`Interval::widen`] with a four-ulp margin to cover their own
//! documented evaluation error on top of rounding.
//!
//! Endpoints are always finite. Operations that could overflow in valid uses
//! saturate at `f64::MAX` (and debug-assert, since no supported computation in
//! this crate should reach that regime); divisions whose divisor interval
//! touches zero are rejected rather than widened to infinity.

use std::fmt;

use crate::error::{Error, Result};

/// Step `x` down by `n` ulps.
pub(crate) fn down_n(x: f64, n: u32) -> f64 {
    let mut y = x;
    for _ in 0..n {
        y = y.next_down();
    }
    y
}

/// Step `x` up by `n` ulps.
pub(crate) fn up_n(x: f64, n: u32) -> f64 {
    let mut y = x;
    for _ in 0..n {
        y = y.next_up();
    }
    y
}

/// Saturate non-finite endpoints; valid domains never produce them.
fn pack(lo: f64, hi: f64) -> Interval {
    debug_assert!(lo.is_finite() && hi.is_finite(), "interval op overflowed: [{lo}, {hi}]");
    Interval::raw(lo.max(f64::MIN), hi.min(f64::MAX))
}

/// Closed interval `[lo, hi]` with `lo <= hi`, both endpoints finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Checked constructor.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!(
                "interval endpoints must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo > hi {
            return Err(Error::Domain(format!(
                "interval endpoints out of order: [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    /// Unchecked in release builds; invariant asserted in debug builds.
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(
            lo.is_finite() && hi.is_finite() && lo <= hi,
            "bad interval [{lo}, {hi}]"
        );
        Self { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Midpoint, clamped into the interval.
    pub fn mid(&self) -> f64 {
        (0.5 * self.lo + 0.5 * self.hi).clamp(self.lo, self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Self::raw(lo, hi))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Self::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Widen both endpoints outward by `ulps` ulps.
    pub fn widen(&self, ulps: u32) -> Interval {
        pack(down_n(self.lo, ulps), up_n(self.hi, ulps))
    }

    /// Exact negation.
    pub fn neg(&self) -> Interval {
        Self::raw(-self.hi, -self.lo)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        pack((self.lo + other.lo).next_down(), (self.hi + other.hi).next_up())
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        pack((self.lo - other.hi).next_down(), (self.hi - other.lo).next_up())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        pack(lo.next_down(), hi.next_up())
    }

    /// Multiply by a finite scalar.
    pub fn scale(&self, c: f64) -> Interval {
        debug_assert!(c.is_finite());
        let (a, b) = (self.lo * c, self.hi * c);
        if c >= 0.0 {
            pack(a.next_down(), b.next_up())
        } else {
            pack(b.next_down(), a.next_up())
        }
    }

    /// Tight square: nonnegative even when the interval straddles zero.
    pub fn square(&self) -> Interval {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.lo >= 0.0 {
            pack(a.next_down().max(0.0), b.next_up())
        } else if self.hi <= 0.0 {
            pack(b.next_down().max(0.0), a.next_up())
        } else {
            pack(0.0, a.max(b).next_up())
        }
    }

    /// Square root. Negative parts introduced by outward rounding are clamped
    /// away; an interval entirely below zero is a domain error.
    pub fn sqrt(&self) -> Result<Interval> {
        if self.hi < 0.0 {
            return Err(Error::Domain(format!("sqrt of negative interval {self}")));
        }
        let lo = self.lo.max(0.0).sqrt().next_down().max(0.0);
        let hi = self.hi.sqrt().next_up();
        Ok(pack(lo, hi))
    }

    /// Division; the divisor interval must not contain zero.
    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.lo <= 0.0 && 0.0 <= other.hi {
            return Err(Error::Domain(format!("divisor interval {other} contains zero")));
        }
        let c = [
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Range(format!("division {self} / {other} overflowed")));
        }
        Ok(pack(lo.next_down(), hi.next_up()))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// One-ulp enclosure of sqrt(2).
pub(crate) fn sqrt2() -> Interval {
    Interval::raw(2.0, 2.0).sqrt().expect("sqrt(2)")
}

/// One-ulp enclosure of sqrt(3).
pub(crate) fn sqrt3() -> Interval {
    Interval::raw(3.0, 3.0).sqrt().expect("sqrt(3)")
}
