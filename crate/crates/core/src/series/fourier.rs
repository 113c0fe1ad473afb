use crate::rigor::{cos, sin, sum_up, Cplx, Interval, Scalar};

use super::Weights;

/// Two-sided Fourier coefficients `φ_k`, `|k| ≤ kmax`, of a function of `t`
/// at a fixed parameter value.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSlice<T> {
    kmax: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Scalar> FourierSlice<T> {
    pub fn zeros(kmax: usize) -> Self {
        Self {
            kmax,
            data: vec![Cplx::zero(); 2 * kmax + 1],
        }
    }

    pub fn constant(c: T) -> Self {
        Self {
            kmax: 0,
            data: vec![Cplx::real(c)],
        }
    }

    /// `c·cos(kt)`.
    pub fn cos_mode(k: usize, c: T) -> Self {
        let mut s = Self::zeros(k);
        if k == 0 {
            s.set(0, Cplx::real(c));
        } else {
            let h = c * T::from_f64(0.5);
            s.set(k as i64, Cplx::real(h));
            s.set(-(k as i64), Cplx::real(h));
        }
        s
    }

    /// `c·sin(kt)`.
    pub fn sin_mode(k: usize, c: T) -> Self {
        let mut s = Self::zeros(k);
        if k > 0 {
            let h = c * T::from_f64(0.5);
            s.set(k as i64, Cplx::new(T::zero(), -h));
            s.set(-(k as i64), Cplx::new(T::zero(), h));
        }
        s
    }

    #[inline]
    pub fn kmax(&self) -> usize {
        self.kmax
    }

    #[inline]
    pub fn get(&self, k: i64) -> Cplx<T> {
        if k.unsigned_abs() as usize > self.kmax {
            return Cplx::zero();
        }
        self.data[(k + self.kmax as i64) as usize]
    }

    #[inline]
    pub fn set(&mut self, k: i64, v: Cplx<T>) {
        let i = (k + self.kmax as i64) as usize;
        self.data[i] = v;
    }

    #[inline]
    pub fn add_at(&mut self, k: i64, v: Cplx<T>) {
        let i = (k + self.kmax as i64) as usize;
        self.data[i] += v;
    }

    /// Pairs `(k, φ_k)` in increasing `k`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Cplx<T>)> + '_ {
        let km = self.kmax as i64;
        self.data.iter().enumerate().map(move |(i, &c)| (i as i64 - km, c))
    }

    /// Zero padding or truncation to a new order.
    pub fn resized(&self, kmax: usize) -> Self {
        let mut out = Self::zeros(kmax);
        let m = kmax.min(self.kmax) as i64;
        for k in -m..=m {
            out.set(k, self.get(k));
        }
        out
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            kmax: self.kmax,
            data: self.data.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            kmax: self.kmax,
            data: self.data.iter().map(|&v| -v).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let km = self.kmax.max(other.kmax);
        let mut out = self.resized(km);
        for (k, v) in other.iter() {
            out.add_at(k, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let km = self.kmax.max(other.kmax);
        let mut out = self.resized(km);
        for (k, v) in other.iter() {
            out.add_at(k, -v);
        }
        out
    }

    /// Full convolution; the order of the result is the sum of the orders.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, self.kmax + other.kmax)
    }

    /// Convolution keeping only modes `|k| ≤ kout`.
    pub fn mul_trunc(&self, other: &Self, kout: usize) -> Self {
        let mut out = Self::zeros(kout);
        let ka = self.kmax as i64;
        let kb = other.kmax as i64;
        let ko = kout as i64;
        for (i, &a) in self.data.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let k1 = i as i64 - ka;
            let lo = (-ko - k1).max(-kb);
            let hi = (ko - k1).min(kb);
            if lo > hi {
                continue;
            }
            for k2 in lo..=hi {
                let b = other.data[(k2 + kb) as usize];
                out.data[(k1 + k2 + ko) as usize] += a * b;
            }
        }
        out
    }

    /// `φ(t + 4πj/3)`: mode `k` is multiplied by `e^{ik4πj/3}`.
    pub fn shift(&self, j: i64) -> Self {
        let mut out = self.clone();
        for (k, v) in self.iter() {
            let (c, s) = T::exp_phase(k * j);
            if (k * j).rem_euclid(3) != 0 {
                out.set(k, v * Cplx::new(c, s));
            }
        }
        out
    }

    /// `φ(-t)`.
    pub fn reflect(&self) -> Self {
        let mut data = self.data.clone();
        data.reverse();
        Self {
            kmax: self.kmax,
            data,
        }
    }

    /// `∂_t φ`.
    pub fn diff_t(&self) -> Self {
        let mut out = self.clone();
        for (k, v) in self.iter() {
            out.set(k, v.mul_i(T::from_f64(k as f64)));
        }
        out
    }

    /// `Π_K`: keeps modes `|k| ≤ kt`.
    pub fn project(&self, kt: usize) -> Self {
        let mut out = Self::zeros(self.kmax.min(kt));
        for (k, v) in self.iter() {
            if k.unsigned_abs() as usize <= kt {
                out.set(k, v);
            }
        }
        out
    }

    /// `Π_{∞(K)}`: keeps modes `|k| > kt`.
    pub fn tail(&self, kt: usize) -> Self {
        let mut out = self.clone();
        for (k, _) in self.iter() {
            if k.unsigned_abs() as usize <= kt {
                out.set(k, Cplx::zero());
            }
        }
        out
    }

    /// Upper bound of `Σ_k ν^{|k|} |φ_k|`.
    pub fn nu_norm_up(&self, w: &Weights) -> f64 {
        let mut acc = 0.0;
        for (k, v) in self.iter() {
            if !v.is_zero() {
                acc = sum_up(acc, crate::rigor::prod_up(v.mag(), w.pow_up(k)));
            }
        }
        acc
    }

    /// Sum of coefficients, i.e. the value at `t = 0`.
    pub fn value_at_zero(&self) -> Cplx<T> {
        self.data.iter().fold(Cplx::zero(), |acc, &v| acc + v)
    }

    pub fn to_interval(&self) -> FourierSlice<Interval> {
        FourierSlice {
            kmax: self.kmax,
            data: self.data.iter().map(|v| v.to_interval()).collect(),
        }
    }

    pub fn mid(&self) -> FourierSlice<f64> {
        FourierSlice {
            kmax: self.kmax,
            data: self.data.iter().map(|v| v.mid()).collect(),
        }
    }
}

impl FourierSlice<f64> {
    /// Real part of `Σ φ_k e^{ikt}` in floating point.
    pub fn eval(&self, t: f64) -> f64 {
        self.iter()
            .map(|(k, v)| {
                let (s, c) = (k as f64 * t).sin_cos();
                v.re * c - v.im * s
            })
            .sum()
    }
}

impl FourierSlice<Interval> {
    /// Enclosure of the real part of `Σ φ_k e^{ikt}` over `t`.
    pub fn eval_enclosure(&self, t: Interval) -> Interval {
        let mut acc = Interval::ZERO;
        for (k, v) in self.iter() {
            if v.is_zero() {
                continue;
            }
            let kt = Interval::point(k as f64) * t;
            acc += v.re * cos(kt) - v.im * sin(kt);
        }
        acc
    }
}
