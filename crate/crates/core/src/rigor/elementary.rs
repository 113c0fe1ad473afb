use std::f64::consts::{FRAC_PI_2, PI};

use super::interval::mul_up;
use super::Interval;

/// Enclosure of π. The double `PI` lies below π by less than one ulp.
pub fn pi() -> Interval {
    Interval::new(PI, PI.next_up())
}

pub fn sqrt3() -> Interval {
    Interval::point(3.0).try_sqrt().expect("positive")
}

pub fn int_pow(x: Interval, n: u32) -> Interval {
    if n == 0 {
        return Interval::ONE;
    }
    let base = if n.is_multiple_of(2) { x.abs() } else { x };
    let mut acc = Interval::ONE;
    let mut b = base;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        e >>= 1;
        if e > 0 {
            b *= b;
        }
    }
    acc
}

fn cube(x: f64) -> Interval {
    let p = Interval::point(x);
    p * p * p
}

fn cbrt_lower(y: f64) -> f64 {
    let mut s = y.cbrt();
    while cube(s).hi() > y {
        s = s.next_down();
    }
    s
}

fn cbrt_upper(y: f64) -> f64 {
    let mut s = y.cbrt();
    while cube(s).lo() < y {
        s = s.next_up();
    }
    s
}

/// Real cube root; monotone, so endpoints are treated separately.
pub fn cbrt(x: Interval) -> Interval {
    Interval::new(cbrt_lower(x.lo()), cbrt_upper(x.hi()))
}

const TAYLOR_TERMS: u32 = 12;

/// `sin r` and `cos r` for a narrow `r` with `|r| <= 1`.
fn sin_cos_small(r: Interval) -> (Interval, Interval) {
    let r2 = r.sqr();
    // Horner on cos: sum_{j=0}^{12} (-1)^j r^{2j}/(2j)!
    let mut c = Interval::ZERO;
    for j in (0..=TAYLOR_TERMS).rev() {
        let f = inv_factorial(2 * j);
        let term = if j % 2 == 0 { f } else { -f };
        c = c * r2 + term;
    }
    let mut s = Interval::ZERO;
    for j in (0..TAYLOR_TERMS).rev() {
        let f = inv_factorial(2 * j + 1);
        let term = if j % 2 == 0 { f } else { -f };
        s = s * r2 + term;
    }
    s *= r;
    // Alternating Taylor remainders after degree 24 (cos) and 23 (sin).
    let m = r.mag();
    let rem_c = mul_up(pow_up(m, 26), inv_factorial(26).hi());
    let rem_s = mul_up(pow_up(m, 25), inv_factorial(25).hi());
    (s.inflate(rem_s), c.inflate(rem_c))
}

fn pow_up(m: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, _| mul_up(acc, m))
}

fn inv_factorial(n: u32) -> Interval {
    let mut f = Interval::ONE;
    for k in 2..=n {
        f *= Interval::point(k as f64);
    }
    Interval::ONE.try_div(f).expect("nonzero factorial")
}

/// Tail of π/2 beyond the double `FRAC_PI_2`.
fn half_pi_tail() -> Interval {
    let t = 6.123233995736766e-17_f64;
    Interval::new(t.next_down(), t.next_up())
}

/// Returns `(sin x, cos x)` at a point. The reduction `x - n·π/2` uses
/// an exact FMA product with the leading double and an enclosed tail.
fn sin_cos_at(x: f64) -> (Interval, Interval) {
    let n = (x / FRAC_PI_2).round();
    let p = n * FRAC_PI_2;
    let e = n.mul_add(FRAC_PI_2, -p);
    let r = (Interval::point(x) - Interval::point(p)) - Interval::point(e)
        - half_pi_tail() * Interval::point(n);
    let (s, c) = sin_cos_small(r);
    let q = (n as i64).rem_euclid(4);
    let (s, c) = match q {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    };
    (clamp_unit(s), clamp_unit(c))
}

fn clamp_unit(x: Interval) -> Interval {
    Interval::new(x.lo().max(-1.0), x.hi().min(1.0))
}

/// Parities of the integers `m` for which `(m + offset)·π` may lie in `x`.
fn extremum_hits(x: Interval, offset: f64) -> (bool, bool) {
    let lo_k = (x.lo() / PI - offset).floor() as i64 - 1;
    let hi_k = (x.hi() / PI - offset).ceil() as i64 + 1;
    let mut even = false;
    let mut odd = false;
    for k in lo_k..=hi_k {
        let c = pi() * (Interval::point(k as f64) + Interval::point(offset));
        if c.intersects(x) {
            if k.rem_euclid(2) == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
    }
    (even, odd)
}

pub fn cos(x: Interval) -> Interval {
    if !x.lo().is_finite() || !x.hi().is_finite() || x.width() >= 2.0 * PI {
        return Interval::new(-1.0, 1.0);
    }
    let a = sin_cos_at(x.lo()).1;
    let b = sin_cos_at(x.hi()).1;
    let mut out = a.hull(b);
    if !x.is_point() {
        let (even, odd) = extremum_hits(x, 0.0);
        if even {
            out = out.hull(Interval::ONE);
        }
        if odd {
            out = out.hull(-Interval::ONE);
        }
    }
    out
}

pub fn sin(x: Interval) -> Interval {
    if !x.lo().is_finite() || !x.hi().is_finite() || x.width() >= 2.0 * PI {
        return Interval::new(-1.0, 1.0);
    }
    let a = sin_cos_at(x.lo()).0;
    let b = sin_cos_at(x.hi()).0;
    let mut out = a.hull(b);
    if !x.is_point() {
        let (even, odd) = extremum_hits(x, 0.5);
        if even {
            out = out.hull(Interval::ONE);
        }
        if odd {
            out = out.hull(-Interval::ONE);
        }
    }
    out
}

/// `cos(p π / q)` with the argument reduced exactly modulo `2π`.
pub fn cos_pi_frac(p: i64, q: i64) -> Interval {
    assert!(q > 0, "denominator must be positive");
    let p = p.rem_euclid(2 * q);
    // Symmetric: cos(pπ/q) = cos((2q-p)π/q).
    let p = if p > q { 2 * q - p } else { p };
    if p == 0 {
        return Interval::ONE;
    }
    if p == q {
        return -Interval::ONE;
    }
    if 2 * p == q {
        return Interval::ZERO;
    }
    if 3 * p == q {
        return Interval::point(0.5);
    }
    if 3 * p == 2 * q {
        return Interval::point(-0.5);
    }
    // cos(x) = -cos(π - x) keeps the reduced argument in [0, π/2].
    if 2 * p > q {
        return -cos_pi_frac(q - p, q);
    }
    // cos(x) = sin(π/2 - x) keeps the argument in [0, π/4].
    if 4 * p > q {
        return sin(pi() * Interval::ratio(q - 2 * p, 2 * q));
    }
    cos(pi() * Interval::ratio(p, q))
}

/// `(cos 4πk/3, sin 4πk/3)`, exact up to the enclosure of `√3/2`.
pub fn exp_phase(k: i64) -> (Interval, Interval) {
    let h = half_sqrt3();
    match k.rem_euclid(3) {
        0 => (Interval::ONE, Interval::ZERO),
        1 => (Interval::point(-0.5), -h),
        _ => (Interval::point(-0.5), h),
    }
}

fn half_sqrt3() -> Interval {
    sqrt3() * Interval::point(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt3_tight() {
        let s = sqrt3();
        assert!(s.contains(1.7320508075688772));
        assert!(s.width() <= 2.0 * f64::EPSILON * 2.0);
        assert!((s * s).contains(3.0));
    }

    #[test]
    fn cbrt_of_three() {
        let c = cbrt(Interval::point(3.0));
        assert!(c.width() <= 4.0 * f64::EPSILON);
        assert!(int_pow(c, 3).contains(3.0));
        let c = cbrt(Interval::point(-8.0));
        assert_eq!((c.lo(), c.hi()), (-2.0, -2.0));
    }

    #[test]
    fn exp_phase_values() {
        let (c, s) = exp_phase(1);
        assert_eq!(c, Interval::point(-0.5));
        assert!(s.contains(-0.8660254037844386));
        let (c, s) = exp_phase(3);
        assert_eq!((c, s), (Interval::ONE, Interval::ZERO));
    }

    #[test]
    fn exp_phase_period_three() {
        for k in -210..=210 {
            assert_eq!(exp_phase(k), exp_phase(k + 3));
            let (c, s) = exp_phase(k);
            let x = 4.0 * PI * k as f64 / 3.0;
            assert!((c.mid() - x.cos()).abs() < 1e-12);
            assert!((s.mid() - x.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn cos_sin_points() {
        for i in -50..50 {
            let x = i as f64 * 0.37;
            let c = cos(Interval::point(x));
            let s = sin(Interval::point(x));
            assert!(c.width() < 1e-15, "{c:?}");
            assert!((c.mid() - x.cos()).abs() < 1e-15);
            assert!((s.mid() - x.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn cos_interval_extrema() {
        let c = cos(Interval::new(-0.1, 0.1));
        assert_eq!(c.hi(), 1.0);
        let c = cos(Interval::new(3.0, 3.3));
        assert_eq!(c.lo(), -1.0);
        let s = sin(Interval::new(1.5, 1.6));
        assert_eq!(s.hi(), 1.0);
        assert_eq!(cos(Interval::new(0.0, 7.0)), Interval::new(-1.0, 1.0));
    }

    #[test]
    fn cos_pi_frac_matches() {
        for q in 1..40 {
            for p in -90..90 {
                let c = cos_pi_frac(p, q);
                let x = PI * p.rem_euclid(2 * q) as f64 / q as f64;
                assert!((c.mid() - x.cos()).abs() < 1e-14, "{p}/{q}");
                assert!(c.width() < 2e-15, "{p}/{q} {c:?}");
            }
        }
    }
}
