//! Closed real intervals with outward-rounded `f64` endpoints.
//!
//! Hardware rounding modes are never touched. Every elementary operation is
//! evaluated in round-to-nearest and the exact rounding error is recovered with
//! an error-free transformation (TwoSum for addition, FMA for products,
//! quotients and square roots). The sign of that error decides whether the
//! endpoint must be pushed one ulp outward, so results are the tightest
//! directed-rounding enclosures and stay exact whenever the operation is exact.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use super::RigorError;

/// Products smaller than this may lose the exactness of the FMA residual to
/// underflow; such results are widened unconditionally.
const UNDERFLOW_GUARD: f64 = 1e-290;

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::INFINITY { f64::MAX } else { s };
    }
    if two_sum_err(a, b, s) < 0.0 {
        down(s)
    } else {
        s
    }
}

#[inline]
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::NEG_INFINITY { f64::MIN } else { s };
    }
    if two_sum_err(a, b, s) > 0.0 {
        up(s)
    } else {
        s
    }
}

#[inline]
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::INFINITY { f64::MAX } else { p };
    }
    if p.abs() < UNDERFLOW_GUARD {
        return if p == 0.0 && (a == 0.0 || b == 0.0) { 0.0 } else { down(p) };
    }
    if a.mul_add(b, -p) < 0.0 {
        down(p)
    } else {
        p
    }
}

#[inline]
pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::NEG_INFINITY { f64::MIN } else { p };
    }
    if p.abs() < UNDERFLOW_GUARD {
        return if p == 0.0 && (a == 0.0 || b == 0.0) { 0.0 } else { up(p) };
    }
    if a.mul_add(b, -p) > 0.0 {
        up(p)
    } else {
        p
    }
}

/// Sign of `a/b - q` recovered from the exact remainder `a - q*b`.
#[inline]
fn div_dir(a: f64, b: f64, q: f64) -> f64 {
    let rem = (-q).mul_add(b, a);
    if b > 0.0 {
        rem
    } else {
        -rem
    }
}

#[inline]
fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return if q == f64::INFINITY { f64::MAX } else { q };
    }
    if q.abs() < UNDERFLOW_GUARD {
        return if a == 0.0 { 0.0 } else { down(q) };
    }
    if div_dir(a, b, q) < 0.0 {
        down(q)
    } else {
        q
    }
}

#[inline]
fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return if q == f64::NEG_INFINITY { f64::MIN } else { q };
    }
    if q.abs() < UNDERFLOW_GUARD {
        return if a == 0.0 { 0.0 } else { up(q) };
    }
    if div_dir(a, b, q) > 0.0 {
        up(q)
    } else {
        q
    }
}

#[inline]
fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 || !s.is_finite() {
        return s;
    }
    if s < UNDERFLOW_GUARD {
        return down(s).max(0.0);
    }
    if (-s).mul_add(s, x) < 0.0 {
        down(s)
    } else {
        s
    }
}

#[inline]
fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    if x == 0.0 || !s.is_finite() {
        return s;
    }
    if s < UNDERFLOW_GUARD {
        return up(s);
    }
    if (-s).mul_add(s, x) > 0.0 {
        up(s)
    } else {
        s
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Panics when `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).expect("invalid interval endpoints")
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Self, RigorError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(RigorError::InvalidEndpoints { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub fn point(x: f64) -> Self {
        debug_assert!(!x.is_nan());
        Self { lo: x, hi: x }
    }

    /// Enclosure of the rational `p / q`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        let (pf, qf) = (p as f64, q as f64);
        // Integers up to 2^53 convert exactly.
        debug_assert!(p.unsigned_abs() < (1 << 53) && q.unsigned_abs() < (1 << 53));
        Self {
            lo: div_down(pf, qf),
            hi: div_up(pf, qf),
        }
    }

    /// `mid ± rad` with the radius rounded outward.
    pub fn mid_rad(mid: f64, rad: f64) -> Self {
        let rad = rad.abs();
        Self {
            lo: add_down(mid, -rad),
            hi: add_up(mid, rad),
        }
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        0.5 * self.lo + 0.5 * self.hi
    }

    /// Upper bound of the distance from `mid()` to either endpoint.
    pub fn rad(self) -> f64 {
        let m = self.mid();
        add_up(self.hi, -m).max(add_up(m, -self.lo))
    }

    pub fn width(self) -> f64 {
        add_up(self.hi, -self.lo)
    }

    /// Upper bound of `|x|` over the interval.
    #[inline]
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound of `|x|` over the interval.
    pub fn mig(self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(self) -> Self {
        Self {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    #[inline]
    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn is_zero(self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }

    pub fn is_subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(self, other: Interval) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(self, other: Interval) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn is_strictly_negative(self) -> bool {
        self.hi < 0.0
    }

    pub fn is_strictly_positive(self) -> bool {
        self.lo > 0.0
    }

    pub fn sqr(self) -> Self {
        let a = self.mig();
        let b = self.mag();
        Self {
            lo: mul_down(a, a),
            hi: mul_up(b, b),
        }
    }

    /// Multiplication by a float known exactly.
    pub fn scale(self, c: f64) -> Self {
        self * Interval::point(c)
    }

    pub fn try_div(self, rhs: Interval) -> Result<Self, RigorError> {
        if rhs.contains_zero() {
            return Err(RigorError::DivisionByZero {
                lo: rhs.lo,
                hi: rhs.hi,
            });
        }
        let cands_lo = [
            div_down(self.lo, rhs.lo),
            div_down(self.lo, rhs.hi),
            div_down(self.hi, rhs.lo),
            div_down(self.hi, rhs.hi),
        ];
        let cands_hi = [
            div_up(self.lo, rhs.lo),
            div_up(self.lo, rhs.hi),
            div_up(self.hi, rhs.lo),
            div_up(self.hi, rhs.hi),
        ];
        Ok(Self {
            lo: cands_lo.into_iter().fold(f64::INFINITY, f64::min),
            hi: cands_hi.into_iter().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    pub fn try_sqrt(self) -> Result<Self, RigorError> {
        if self.lo < 0.0 {
            return Err(RigorError::NegativeSqrt { lo: self.lo });
        }
        Ok(Self {
            lo: sqrt_down(self.lo),
            hi: sqrt_up(self.hi),
        })
    }

    /// Outward widening by an absolute amount.
    pub fn inflate(self, eps: f64) -> Self {
        Self {
            lo: add_down(self.lo, -eps.abs()),
            hi: add_up(self.hi, eps.abs()),
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, -rhs.hi),
            hi: add_up(self.hi, -rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a == b && c == d {
            return Interval {
                lo: mul_down(a, c),
                hi: mul_up(a, c),
            };
        }
        if a >= 0.0 && c >= 0.0 {
            return Interval {
                lo: mul_down(a, c),
                hi: mul_up(b, d),
            };
        }
        let lo = mul_down(a, c)
            .min(mul_down(a, d))
            .min(mul_down(b, c))
            .min(mul_down(b, d));
        let hi = mul_up(a, c)
            .max(mul_up(a, d))
            .max(mul_up(b, c))
            .max(mul_up(b, d));
        Interval { lo, hi }
    }
}

impl AddAssign for Interval {
    #[inline]
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    #[inline]
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

impl MulAssign for Interval {
    #[inline]
    fn mul_assign(&mut self, rhs: Interval) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}

/// Upper bound of `a + b` for nonnegative bookkeeping sums.
#[inline]
pub fn sum_up(a: f64, b: f64) -> f64 {
    add_up(a, b)
}

/// Upper bound of `a * b`.
#[inline]
pub fn prod_up(a: f64, b: f64) -> f64 {
    mul_up(a, b)
}

/// Upper bound of `a / b` for `b > 0`.
#[inline]
pub fn quot_up(a: f64, b: f64) -> f64 {
    div_up(a, b)
}

/// Upper bound of `sqrt(x)`.
#[inline]
pub fn root_up(x: f64) -> f64 {
    sqrt_up(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_endpoints() {
        let r = Interval::new(1.0, 2.0) + Interval::new(3.0, 4.0);
        assert_eq!((r.lo(), r.hi()), (4.0, 6.0));
    }

    #[test]
    fn mul_sign_cases() {
        let x = Interval::new(-1.0, 1.0);
        let r = x * x;
        assert_eq!((r.lo(), r.hi()), (-1.0, 1.0));
        let r = Interval::new(-3.0, -2.0) * Interval::new(4.0, 5.0);
        assert_eq!((r.lo(), r.hi()), (-15.0, -8.0));
        let r = Interval::new(-3.0, 2.0) * Interval::new(-1.0, 5.0);
        assert_eq!((r.lo(), r.hi()), (-15.0, 10.0));
    }

    #[test]
    fn third_is_tight() {
        let r = Interval::ONE.try_div(Interval::point(3.0)).unwrap();
        assert!(r.lo() < r.hi());
        assert_eq!(r.lo().next_up(), r.hi());
        // 1/3 lies strictly between.
        assert!(3.0 * r.lo() < 1.0 || r.lo() * 3.0 <= 1.0);
        assert_eq!(Interval::ratio(1, 3), r);
    }

    #[test]
    fn exact_ops_stay_points() {
        let r = Interval::point(0.5) + Interval::point(0.25);
        assert!(r.is_point());
        let r = Interval::point(3.0) * Interval::point(7.0);
        assert!(r.is_point());
        let r = Interval::point(9.0).try_sqrt().unwrap();
        assert_eq!((r.lo(), r.hi()), (3.0, 3.0));
    }

    #[test]
    fn division_by_zero_interval_errors() {
        let e = Interval::ONE.try_div(Interval::new(-1.0, 1.0));
        assert!(matches!(e, Err(RigorError::DivisionByZero { .. })));
    }

    #[test]
    fn sqrt_negative_errors() {
        assert!(Interval::new(-1e-300, 1.0).try_sqrt().is_err());
    }

    #[test]
    fn sum_of_tenths_encloses() {
        let tenth = Interval::ratio(1, 10);
        let s: Interval = std::iter::repeat_n(tenth, 10).sum();
        assert!(s.contains(1.0));
        assert!(s.width() < 1e-14);
    }

    #[test]
    fn invalid_endpoints_rejected() {
        assert!(Interval::try_new(2.0, 1.0).is_err());
        assert!(Interval::try_new(f64::NAN, 1.0).is_err());
    }
}
