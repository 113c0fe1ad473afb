use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SeriesError;
use crate::rigor::{int_pow, prod_up, sum_up, Interval};

/// Positive rational number `num / den`, used for the decay weight `ν`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self, SeriesError> {
        if den <= 0 || num <= 0 {
            return Err(SeriesError::Format(format!("{num}/{den} is not a positive rational")));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn enclose(self) -> Interval {
        Interval::ratio(self.num, self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

impl FromStr for Rational {
    type Err = SeriesError;

    /// Accepts `p/q`, integers and plain decimals such as `1.1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || SeriesError::Format(format!("cannot parse {s:?} as a rational"));
        if let Some((p, q)) = s.split_once('/') {
            let p = p.trim().parse().map_err(|_| bad())?;
            let q = q.trim().parse().map_err(|_| bad())?;
            return Rational::new(p, q);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10i64.pow(frac.len() as u32);
        let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Rational::new(int * den + frac, den)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Truncation orders and the geometric weight of the sequence space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    pub nu: Rational,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

impl NormParams {
    pub fn new(nu: Rational, k: usize, n: usize) -> Result<Self, SeriesError> {
        if nu.num < nu.den {
            return Err(SeriesError::NuTooSmall(nu.to_f64()));
        }
        if k < 1 || n < 1 {
            return Err(SeriesError::Format("K and N must be at least 1".into()));
        }
        Ok(Self { nu, k, n })
    }

    pub fn nu(&self) -> Interval {
        self.nu.enclose()
    }

    pub fn weights(&self, kmax: usize) -> Weights {
        Weights::new(self.nu(), kmax)
    }
}

/// Cached enclosures of `ν^k` and `ν^{-k}` for `0 ≤ k ≤ kmax`.
#[derive(Clone, Debug)]
pub struct Weights {
    pow: Vec<Interval>,
    inv: Vec<Interval>,
}

impl Weights {
    pub fn new(nu: Interval, kmax: usize) -> Self {
        let inv_nu = Interval::ONE.try_div(nu).expect("ν ≥ 1");
        let mut pow = Vec::with_capacity(kmax + 1);
        let mut inv = Vec::with_capacity(kmax + 1);
        let (mut p, mut q) = (Interval::ONE, Interval::ONE);
        for k in 0..=kmax {
            // Recompute by squaring every few steps to limit width growth.
            if k % 16 == 0 && k > 0 {
                p = int_pow(nu, k as u32);
                q = int_pow(inv_nu, k as u32);
            }
            pow.push(p);
            inv.push(q);
            p *= nu;
            q *= inv_nu;
        }
        Self { pow, inv }
    }

    #[inline]
    pub fn pow(&self, k: i64) -> Interval {
        self.pow[k.unsigned_abs() as usize]
    }

    #[inline]
    pub fn pow_up(&self, k: i64) -> f64 {
        self.pow[k.unsigned_abs() as usize].hi()
    }

    #[inline]
    pub fn inv(&self, k: i64) -> Interval {
        self.inv[k.unsigned_abs() as usize]
    }

    #[inline]
    pub fn inv_up(&self, k: i64) -> f64 {
        self.inv[k.unsigned_abs() as usize].hi()
    }

    pub fn kmax(&self) -> usize {
        self.pow.len() - 1
    }
}

/// Parameter interval `[lo, hi]` mapped to `s ∈ [-1, 1]` by
/// `s = (2Ω - lo - hi) / (hi - lo)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Default for Domain {
    fn default() -> Self {
        Self::UNIT
    }
}

impl Domain {
    pub const UNIT: Domain = Domain { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self, SeriesError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(SeriesError::Format(format!("invalid parameter domain [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Center `c` and half-width `d` of `Ω = c + d s`.
    pub fn affine(&self) -> (Interval, Interval) {
        let lo = Interval::point(self.lo);
        let hi = Interval::point(self.hi);
        let half = Interval::point(0.5);
        ((lo + hi) * half, (hi - lo) * half)
    }

    pub fn to_s(&self, omega: Interval) -> Result<Interval, SeriesError> {
        if omega.lo() < self.lo || omega.hi() > self.hi {
            return Err(SeriesError::OmegaOutOfDomain {
                lo: omega.lo(),
                hi: omega.hi(),
                dlo: self.lo,
                dhi: self.hi,
            });
        }
        let (c, d) = self.affine();
        let s = (omega - c).try_div(d).expect("nondegenerate domain");
        Ok(Interval::new(s.lo().max(-1.0), s.hi().min(1.0)))
    }

    pub fn to_s_f64(&self, omega: f64) -> f64 {
        (2.0 * omega - self.lo - self.hi) / (self.hi - self.lo)
    }

    pub fn omega_f64(&self, s: f64) -> f64 {
        0.5 * (self.lo + self.hi) + 0.5 * (self.hi - self.lo) * s
    }

    pub fn contains(&self, omega: f64) -> bool {
        self.lo <= omega && omega <= self.hi
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::UNIT
    }
}

/// Upper bound of `norm_cap · Σ_{k∈Z} |k|^m ν^{-|k|}`.
///
/// The head is summed term by term; past `k0 ≥ 10m / ln ν` the ratio of
/// consecutive terms is at most `q = (1 + 1/(k0+1))^m / ν < 1`, which
/// bounds the rest by a geometric series.
pub fn tail_derivative_bound(norm_cap: f64, nu: Interval, m: u32) -> Result<f64, SeriesError> {
    if nu.lo() <= 1.0 {
        return Err(SeriesError::NuTooSmall(nu.lo()));
    }
    if norm_cap == 0.0 {
        return Ok(0.0);
    }
    let rho = Interval::ONE.try_div(nu).expect("ν > 1");
    let ln_nu = nu.lo().ln() * (1.0 - 1e-12);
    let k0 = (10.0 * m as f64 / ln_nu).ceil() as u64 + 50;
    let mut head = if m == 0 { Interval::ONE } else { Interval::ZERO };
    let mut rho_k = Interval::ONE;
    for k in 1..=k0 {
        rho_k *= rho;
        head += Interval::point(2.0) * int_pow(Interval::point(k as f64), m) * rho_k;
    }
    let next = k0 + 1;
    let first_tail =
        Interval::point(2.0) * int_pow(Interval::point(next as f64), m) * rho_k * rho;
    let ratio = int_pow(
        Interval::ONE + Interval::ONE.try_div(Interval::point(next as f64)).unwrap(),
        m,
    ) * rho;
    if ratio.hi() >= 1.0 {
        return Err(SeriesError::NuTooSmall(nu.lo()));
    }
    let tail = first_tail.try_div(Interval::ONE - ratio).unwrap();
    Ok(prod_up(norm_cap, sum_up(head.hi(), tail.hi())))
}
