use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rigor::{prod_up, sum_up, Interval, Scalar};

/// Chebyshev expansion `ψ(s) = Σ ψ_n T_n(s)` of a function of the parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> ChebSeries<T> {
    /// An empty vector is stored as the zero constant.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn zeros(degree: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); degree + 1],
        }
    }

    pub fn constant(c: T) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The first Chebyshev polynomial `T_1(s) = s`.
    pub fn t1() -> Self {
        Self {
            coeffs: vec![T::zero(), T::one()],
        }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient `ψ_n`, zero beyond the stored degree.
    #[inline]
    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).copied().unwrap_or_else(T::zero)
    }

    /// Truncation to degree `n` or zero padding up to it.
    pub fn resized(&self, degree: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(degree + 1, T::zero());
        Self { coeffs: c }
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    /// Product by the rule `T_m T_n = (T_{m+n} + T_{|m-n|}) / 2`.
    pub fn mul(&self, other: &Self) -> Self {
        let half = T::from_f64(0.5);
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (m, &a) in self.coeffs.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            for (n, &b) in other.coeffs.iter().enumerate() {
                let t = a * b * half;
                out[m + n] += t;
                out[m.abs_diff(n)] += t;
            }
        }
        Self { coeffs: out }
    }

    /// Enclosure of `Σ_n |ψ_n|`. In the two-sided cosine coefficients
    /// `ψ̂_{±n} = ψ_n / 2` this is `|ψ̂_0| + 2 Σ_{n≥1} |ψ̂_n|`.
    pub fn x_norm(&self) -> Interval {
        self.coeffs.iter().map(|c| c.to_interval().abs()).sum()
    }

    /// Upper bound of the X-norm.
    pub fn x_norm_up(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| sum_up(acc, c.mag()))
    }

    /// Clenshaw evaluation at a point `s`.
    pub fn eval(&self, s: T) -> T {
        let two_s = s + s;
        let mut b1 = T::zero();
        let mut b2 = T::zero();
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + two_s * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + s * b1 - b2
    }

    /// Values `ψ(1)` and `ψ(-1)`, the parameter endpoints.
    pub fn endpoint_values(&self) -> (T, T) {
        let mut plus = T::zero();
        let mut minus = T::zero();
        for (n, &c) in self.coeffs.iter().enumerate() {
            plus += c;
            if n % 2 == 0 {
                minus += c;
            } else {
                minus -= c;
            }
        }
        (plus, minus)
    }

    /// Coefficients as enclosures.
    pub fn to_interval(&self) -> ChebSeries<Interval> {
        ChebSeries::new(self.coeffs.iter().map(|c| c.to_interval()).collect())
    }

    pub fn mid(&self) -> ChebSeries<f64> {
        ChebSeries::new(self.coeffs.iter().map(|c| c.mid()).collect())
    }
}

impl ChebSeries<Interval> {
    /// Enclosure of the range over `s ∈ [s.lo, s.hi] ⊆ [-1, 1]`.
    ///
    /// Combines a mean-value form using the Markov bound `|T_n'| ≤ n²`
    /// with the crude bound `|T_n| ≤ 1`, and keeps the tighter one.
    pub fn eval_enclosure(&self, s: Interval) -> Interval {
        let crude = self.coeffs[1..]
            .iter()
            .fold(self.coeffs[0], |acc, &c| {
                acc + c * Interval::new(-1.0, 1.0)
            });
        if s.is_point() {
            return self.eval(s).intersect(crude).unwrap_or(crude);
        }
        let m = Interval::point(s.mid());
        let center = self.eval(m);
        let mut slope = 0.0f64;
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            slope = sum_up(slope, prod_up(c.mag(), (n * n) as f64));
        }
        let dev = prod_up(slope, (s - m).mag());
        let mv = center.inflate(dev);
        mv.intersect(crude).unwrap_or(mv)
    }
}

impl<T: Scalar> Add for &ChebSeries<T> {
    type Output = ChebSeries<T>;
    fn add(self, rhs: Self) -> ChebSeries<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ChebSeries {
            coeffs: (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect(),
        }
    }
}

impl<T: Scalar> Sub for &ChebSeries<T> {
    type Output = ChebSeries<T>;
    fn sub(self, rhs: Self) -> ChebSeries<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ChebSeries {
            coeffs: (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect(),
        }
    }
}

impl<T: Scalar> Neg for &ChebSeries<T> {
    type Output = ChebSeries<T>;
    fn neg(self) -> ChebSeries<T> {
        ChebSeries {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}
