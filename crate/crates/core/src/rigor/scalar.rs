use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use super::{elementary, root_up, sum_up, Interval, RigorError};

/// Ring operations shared by plain floats (solver) and intervals (prover).
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn from_f64(x: f64) -> Self;
    fn ratio(p: i64, q: i64) -> Self;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    /// Upper bound of `|x|` (for `f64`, just `|x|`).
    fn mag(self) -> f64;
    fn mid(self) -> f64;
    fn to_interval(self) -> Interval;
    fn sqrt(self) -> Result<Self, RigorError>;
    fn cbrt(self) -> Self;
    fn div(self, rhs: Self) -> Result<Self, RigorError>;
    fn cos_pi_frac(p: i64, q: i64) -> Self;
    /// `(cos 4πk/3, sin 4πk/3)`.
    fn exp_phase(k: i64) -> (Self, Self);
    fn sqrt3() -> Self;
    /// Upper-rounded sum of magnitudes, valid for both scalar kinds.
    fn add_mag(acc: f64, x: Self) -> f64 {
        sum_up(acc, x.mag())
    }
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    fn ratio(p: i64, q: i64) -> Self {
        p as f64 / q as f64
    }
    #[inline]
    fn mag(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn mid(self) -> f64 {
        self
    }
    fn to_interval(self) -> Interval {
        Interval::point(self)
    }
    fn sqrt(self) -> Result<Self, RigorError> {
        if self < 0.0 {
            return Err(RigorError::NegativeSqrt { lo: self });
        }
        Ok(f64::sqrt(self))
    }
    fn cbrt(self) -> Self {
        f64::cbrt(self)
    }
    fn div(self, rhs: Self) -> Result<Self, RigorError> {
        if rhs == 0.0 {
            return Err(RigorError::DivisionByZero { lo: 0.0, hi: 0.0 });
        }
        Ok(self / rhs)
    }
    fn cos_pi_frac(p: i64, q: i64) -> Self {
        elementary::cos_pi_frac(p, q).mid()
    }
    fn exp_phase(k: i64) -> (Self, Self) {
        let h = 0.5 * 3f64.sqrt();
        match k.rem_euclid(3) {
            0 => (1.0, 0.0),
            1 => (-0.5, -h),
            _ => (-0.5, h),
        }
    }
    fn sqrt3() -> Self {
        3f64.sqrt()
    }
}

impl Scalar for Interval {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Interval::point(x)
    }
    fn ratio(p: i64, q: i64) -> Self {
        Interval::ratio(p, q)
    }
    #[inline]
    fn mag(self) -> f64 {
        Interval::mag(self)
    }
    #[inline]
    fn mid(self) -> f64 {
        Interval::mid(self)
    }
    fn to_interval(self) -> Interval {
        self
    }
    fn sqrt(self) -> Result<Self, RigorError> {
        self.try_sqrt()
    }
    fn cbrt(self) -> Self {
        elementary::cbrt(self)
    }
    fn div(self, rhs: Self) -> Result<Self, RigorError> {
        self.try_div(rhs)
    }
    fn cos_pi_frac(p: i64, q: i64) -> Self {
        elementary::cos_pi_frac(p, q)
    }
    fn exp_phase(k: i64) -> (Self, Self) {
        elementary::exp_phase(k)
    }
    fn sqrt3() -> Self {
        elementary::sqrt3()
    }
}

/// Complex number over a [`Scalar`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cplx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Cplx<T> {
    #[inline]
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn real(re: T) -> Self {
        Self::new(re, T::zero())
    }

    #[inline]
    pub fn i() -> Self {
        Self::new(T::zero(), T::one())
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    #[inline]
    pub fn scale(self, c: T) -> Self {
        Self::new(self.re * c, self.im * c)
    }

    /// Multiplication by `i·c` for a real `c`.
    #[inline]
    pub fn mul_i(self, c: T) -> Self {
        Self::new(-(self.im * c), self.re * c)
    }

    /// Upper bound of the modulus.
    pub fn mag(self) -> f64 {
        let a = self.re.mag();
        let b = self.im.mag();
        if b == 0.0 {
            return a;
        }
        if a == 0.0 {
            return b;
        }
        root_up(sum_up(super::prod_up(a, a), super::prod_up(b, b)))
    }

    pub fn to_interval(self) -> Cplx<Interval> {
        Cplx::new(self.re.to_interval(), self.im.to_interval())
    }

    pub fn mid(self) -> Cplx<f64> {
        Cplx::new(self.re.mid(), self.im.mid())
    }

    pub fn is_zero(self) -> bool {
        self.re == T::zero() && self.im == T::zero()
    }
}

impl<T: Scalar> Add for Cplx<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Scalar> Sub for Cplx<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Scalar> Neg for Cplx<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<T: Scalar> Mul for Cplx<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl<T: Scalar> AddAssign for Cplx<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> SubAssign for Cplx<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_product() {
        let a = Cplx::new(1.0, 2.0);
        let b = Cplx::new(3.0, -1.0);
        assert_eq!(a * b, Cplx::new(5.0, 5.0));
        assert_eq!(a.mul_i(2.0), Cplx::new(-4.0, 2.0));
    }

    #[test]
    fn modulus_upper_bound() {
        let z = Cplx::new(Interval::point(3.0), Interval::point(4.0));
        assert!(z.mag() >= 5.0 && z.mag() < 5.0 + 1e-14);
    }

    #[test]
    fn float_and_interval_phases_agree() {
        for k in -6..6 {
            let (c, s) = <f64 as Scalar>::exp_phase(k);
            let (ci, si) = <Interval as Scalar>::exp_phase(k);
            assert!(ci.contains(c) && si.contains(s));
        }
    }
}
