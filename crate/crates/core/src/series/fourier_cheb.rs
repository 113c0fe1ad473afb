use crate::rigor::{prod_up, sum_up, Cplx, Interval, Scalar};

use super::{ChebSeries, Domain, FourierSlice, SeriesError, SymClass, Weights};

/// Coefficients `φ_{k,n}` of `φ(t, Ω) = Σ_{k,n} φ_{k,n} T_n(s) e^{ikt}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCheb<T> {
    kmax: usize,
    nmax: usize,
    class: SymClass,
    real: bool,
    data: Vec<Cplx<T>>,
}

impl<T: Scalar> FourierCheb<T> {
    pub fn zeros(kmax: usize, nmax: usize, class: SymClass) -> Self {
        Self {
            kmax,
            nmax,
            class,
            real: true,
            data: vec![Cplx::zero(); (2 * kmax + 1) * (nmax + 1)],
        }
    }

    /// `ψ(Ω)·cos(kt)`.
    pub fn cos_mode(k: usize, psi: &ChebSeries<T>) -> Self {
        let parity = if k.is_multiple_of(2) { "even" } else { "odd" };
        let mut out = Self::zeros(k, psi.degree(), format!("{parity}-cos").parse().unwrap());
        let half = if k == 0 { T::one() } else { T::from_f64(0.5) };
        for (n, &c) in psi.coeffs().iter().enumerate() {
            out.set(k as i64, n, Cplx::real(c * half));
            out.set(-(k as i64), n, Cplx::real(c * half));
        }
        out
    }

    /// `ψ(Ω)·sin(kt)`.
    pub fn sin_mode(k: usize, psi: &ChebSeries<T>) -> Self {
        let parity = if k.is_multiple_of(2) { "even" } else { "odd" };
        let mut out = Self::zeros(k, psi.degree(), format!("{parity}-sin").parse().unwrap());
        if k == 0 {
            return out;
        }
        let half = T::from_f64(0.5);
        for (n, &c) in psi.coeffs().iter().enumerate() {
            out.set(k as i64, n, Cplx::new(T::zero(), -(c * half)));
            out.set(-(k as i64), n, Cplx::new(T::zero(), c * half));
        }
        out
    }

    pub fn constant(psi: &ChebSeries<T>) -> Self {
        Self::cos_mode(0, psi)
    }

    #[inline]
    pub fn kmax(&self) -> usize {
        self.kmax
    }

    #[inline]
    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn class(&self) -> SymClass {
        self.class
    }

    pub fn with_class(mut self, class: SymClass) -> Self {
        self.class = class;
        self
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn set_real(&mut self, real: bool) {
        self.real = real;
    }

    #[inline]
    fn idx(&self, k: i64, n: usize) -> usize {
        (k + self.kmax as i64) as usize * (self.nmax + 1) + n
    }

    #[inline]
    pub fn get(&self, k: i64, n: usize) -> Cplx<T> {
        if k.unsigned_abs() as usize > self.kmax || n > self.nmax {
            return Cplx::zero();
        }
        self.data[self.idx(k, n)]
    }

    #[inline]
    pub fn set(&mut self, k: i64, n: usize, v: Cplx<T>) {
        let i = self.idx(k, n);
        self.data[i] = v;
    }

    #[inline]
    pub fn add_at(&mut self, k: i64, n: usize, v: Cplx<T>) {
        let i = self.idx(k, n);
        self.data[i] += v;
    }

    /// Chebyshev coefficients of mode `k`.
    pub fn mode(&self, k: i64) -> &[Cplx<T>] {
        if k.unsigned_abs() as usize > self.kmax {
            return &[];
        }
        let i = self.idx(k, 0);
        &self.data[i..i + self.nmax + 1]
    }

    pub fn resized(&self, kmax: usize, nmax: usize) -> Self {
        let mut out = Self::zeros(kmax, nmax, self.class);
        out.real = self.real;
        let km = kmax.min(self.kmax) as i64;
        for k in -km..=km {
            for n in 0..=nmax.min(self.nmax) {
                out.set(k, n, self.get(k, n));
            }
        }
        out
    }

    fn map(&self, f: impl Fn(i64, usize, Cplx<T>) -> Cplx<T>, class: SymClass) -> Self {
        let mut out = self.clone();
        out.class = class;
        for k in -(self.kmax as i64)..=self.kmax as i64 {
            for n in 0..=self.nmax {
                let v = f(k, n, self.get(k, n));
                out.set(k, n, v);
            }
        }
        out
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|_, _, v| v.scale(c), self.class)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.resized(self.kmax.max(other.kmax), self.nmax.max(other.nmax));
        out.class = self.class.sum(other.class);
        out.real = self.real && other.real;
        for k in -(other.kmax as i64)..=other.kmax as i64 {
            for n in 0..=other.nmax {
                out.add_at(k, n, other.get(k, n));
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    /// Convolution in `k` combined with the Chebyshev product rule in `n`.
    /// The support of the result is the sum of the supports.
    pub fn product(&self, other: &Self) -> Self {
        let kmax = self.kmax + other.kmax;
        let nmax = self.nmax + other.nmax;
        let mut out = Self::zeros(kmax, nmax, self.class.product(other.class));
        out.real = self.real && other.real;
        let half = T::from_f64(0.5);
        for k1 in -(self.kmax as i64)..=self.kmax as i64 {
            let a = self.mode(k1);
            if a.iter().all(|v| v.is_zero()) {
                continue;
            }
            for k2 in -(other.kmax as i64)..=other.kmax as i64 {
                let b = other.mode(k2);
                for (m, &x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (n, &y) in b.iter().enumerate() {
                        let p = (x * y).scale(half);
                        out.add_at(k1 + k2, m + n, p);
                        out.add_at(k1 + k2, m.abs_diff(n), p);
                    }
                }
            }
        }
        out
    }

    /// `φ(t + 4πj/3, Ω)`.
    pub fn shift(&self, j: i64) -> Self {
        self.map(
            |k, _, v| {
                if (k * j).rem_euclid(3) == 0 {
                    v
                } else {
                    let (c, s) = T::exp_phase(k * j);
                    v * Cplx::new(c, s)
                }
            },
            self.class.shift(),
        )
    }

    /// `φ(-t, Ω)`.
    pub fn reflect(&self) -> Self {
        self.map(|k, n, _| self.get(-k, n), self.class.reflect())
    }

    /// `∂_t φ`.
    pub fn diff_t(&self) -> Self {
        self.map(|k, _, v| v.mul_i(T::from_f64(k as f64)), self.class.diff_t())
    }

    /// `Π_{N,K}`: keeps `|k| ≤ kt` and `n ≤ nt`.
    pub fn project(&self, kt: usize, nt: usize) -> Self {
        self.map(
            |k, n, v| {
                if k.unsigned_abs() as usize <= kt && n <= nt {
                    v
                } else {
                    Cplx::zero()
                }
            },
            self.class,
        )
    }

    /// `Π_{∞(K)}`: keeps `|k| > kt`.
    pub fn tail(&self, kt: usize) -> Self {
        self.map(
            |k, _, v| {
                if k.unsigned_abs() as usize > kt {
                    v
                } else {
                    Cplx::zero()
                }
            },
            self.class,
        )
    }

    /// Enclosure of `Σ_k ν^{|k|} ‖φ_k‖_X`.
    pub fn nu_norm(&self, w: &Weights) -> Interval {
        let mut acc = Interval::ZERO;
        for k in -(self.kmax as i64)..=self.kmax as i64 {
            let mut xk = Interval::ZERO;
            for v in self.mode(k) {
                xk += cplx_abs(v.to_interval());
            }
            acc += xk * w.pow(k);
        }
        acc
    }

    /// Upper bound of the ν-norm.
    pub fn nu_norm_up(&self, w: &Weights) -> f64 {
        let mut acc = 0.0;
        for k in -(self.kmax as i64)..=self.kmax as i64 {
            let mut xk = 0.0;
            for v in self.mode(k) {
                xk = sum_up(xk, v.mag());
            }
            acc = sum_up(acc, prod_up(xk, w.pow_up(k)));
        }
        acc
    }

    /// The slice at a parameter point given the values `T_n(s)`.
    pub fn slice(&self, tn: &[T]) -> FourierSlice<T> {
        let mut out = FourierSlice::zeros(self.kmax);
        for k in -(self.kmax as i64)..=self.kmax as i64 {
            let mut acc = Cplx::zero();
            for (v, &t) in self.mode(k).iter().zip(tn) {
                acc += v.scale(t);
            }
            out.set(k, acc);
        }
        out
    }

    /// Whether every stored coefficient respects the class and, if the
    /// reality flag is set, the conjugate symmetry. For intervals the
    /// required zeros and equalities are only asked to be possible.
    pub fn respects_class(&self) -> bool {
        let zero = |x: T| x.to_interval().contains_zero();
        for k in -(self.kmax as i64)..=self.kmax as i64 {
            for n in 0..=self.nmax {
                let v = self.get(k, n);
                if !self.class.admits_mode(k, zero(v.re), zero(v.im)) {
                    return false;
                }
                if self.real {
                    let w = self.get(-k, n);
                    if !(zero(v.re - w.re) && zero(v.im + w.im)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_interval(&self) -> FourierCheb<Interval> {
        FourierCheb {
            kmax: self.kmax,
            nmax: self.nmax,
            class: self.class,
            real: self.real,
            data: self.data.iter().map(|v| v.to_interval()).collect(),
        }
    }

    pub fn mid(&self) -> FourierCheb<f64> {
        FourierCheb {
            kmax: self.kmax,
            nmax: self.nmax,
            class: self.class,
            real: self.real,
            data: self.data.iter().map(|v| v.mid()).collect(),
        }
    }
}

/// Enclosure of the modulus of a complex interval.
pub fn cplx_abs(v: Cplx<Interval>) -> Interval {
    if v.im.is_zero() {
        return v.re.abs();
    }
    if v.re.is_zero() {
        return v.im.abs();
    }
    (v.re.sqr() + v.im.sqr()).try_sqrt().expect("nonnegative")
}

impl FourierCheb<Interval> {
    /// Enclosure of `φ(t′, Ω′)` for all `t′ ∈ t`, `Ω′ ∈ omega`, with an
    /// unstored tail of ν-norm at most `tail_budget`.
    pub fn eval_enclosure(
        &self,
        t: Interval,
        omega: Interval,
        domain: &Domain,
        tail_budget: f64,
        w: &Weights,
    ) -> Result<Interval, SeriesError> {
        let s = domain.to_s(omega)?;
        let mut acc = Interval::ZERO;
        for k in -(self.kmax as i64)..=self.kmax as i64 {
            let m = self.mode(k);
            if m.iter().all(|v| v.is_zero()) {
                continue;
            }
            let re = ChebSeries::new(m.iter().map(|v| v.re).collect()).eval_enclosure(s);
            let im = ChebSeries::new(m.iter().map(|v| v.im).collect()).eval_enclosure(s);
            let kt = Interval::point(k as f64) * t;
            acc += re * crate::rigor::cos(kt) - im * crate::rigor::sin(kt);
        }
        if tail_budget > 0.0 {
            let bound = prod_up(tail_budget, w.inv_up(self.kmax as i64 + 1));
            acc = acc.inflate(bound);
        }
        Ok(acc)
    }
}

impl FourierCheb<f64> {
    /// Pointwise value in floating point.
    pub fn eval(&self, t: f64, s: f64) -> f64 {
        let mut acc = 0.0;
        for k in -(self.kmax as i64)..=self.kmax as i64 {
            let m = self.mode(k);
            let re = ChebSeries::new(m.iter().map(|v| v.re).collect()).eval(s);
            let im = ChebSeries::new(m.iter().map(|v| v.im).collect()).eval(s);
            let (sn, cs) = (k as f64 * t).sin_cos();
            acc += re * cs - im * sn;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Rational;

    fn w(kmax: usize) -> Weights {
        Weights::new(Rational::new(11, 10).unwrap().enclose(), kmax)
    }

    #[test]
    fn nu_norm_examples() {
        let one = ChebSeries::constant(1.0);
        let c = FourierCheb::cos_mode(1, &one);
        let n = c.nu_norm(&w(4));
        assert!(n.contains(1.1) && n.width() < 1e-15);
        assert_eq!(FourierCheb::constant(&one).nu_norm(&w(4)), Interval::ONE);
        let p = FourierCheb::cos_mode(2, &ChebSeries::<f64>::t1());
        let n = p.nu_norm(&w(4));
        assert!((n.mid() - 1.21).abs() < 1e-14, "{n:?}");
    }

    #[test]
    fn product_is_pointwise() {
        let a = FourierCheb::cos_mode(1, &ChebSeries::new(vec![0.3, 0.4, -0.1]))
            .add(&FourierCheb::sin_mode(2, &ChebSeries::new(vec![0.2, 0.0, 0.5])));
        let b = FourierCheb::sin_mode(1, &ChebSeries::new(vec![1.0, -0.3]));
        let p = a.product(&b);
        assert_eq!(p.kmax(), 3);
        assert_eq!(p.nmax(), 3);
        for i in 0..30 {
            let t = 0.21 * i as f64;
            let s = -1.0 + 0.066 * i as f64;
            assert!((p.eval(t, s) - a.eval(t, s) * b.eval(t, s)).abs() < 1e-14);
        }
    }

    #[test]
    fn sin_squared_class() {
        let s = FourierCheb::sin_mode(2, &ChebSeries::constant(1.0));
        let p = s.product(&s);
        assert_eq!(p.class(), SymClass::EVEN_COS);
        assert!(p.respects_class());
        assert!((p.get(0, 0).re - 0.5).abs() < 1e-16);
        assert!((p.get(4, 0).re + 0.25).abs() < 1e-16);
    }

    #[test]
    fn projection_identity() {
        let one = ChebSeries::constant(1.0);
        let phi = FourierCheb::cos_mode(1, &one).add(&FourierCheb::cos_mode(5, &one));
        let head = phi.project(2, 0);
        let tail = phi.tail(2);
        assert_eq!(head.add(&tail), phi.resized(5, 0).with_class(head.add(&tail).class()));
        assert_eq!(tail.get(1, 0), Cplx::zero());
        assert_eq!(head.get(5, 0), Cplx::zero());
    }

    #[test]
    fn enclosure_examples() {
        let c = FourierCheb::cos_mode(1, &ChebSeries::constant(Interval::ONE));
        let d = Domain::UNIT;
        let e = c.eval_enclosure(Interval::ZERO, Interval::point(0.5), &d, 0.0, &w(4)).unwrap();
        assert_eq!(e, Interval::ONE);
        let zero = FourierCheb::<Interval>::zeros(3, 0, SymClass::GENERAL);
        let e = zero
            .eval_enclosure(Interval::new(0.0, 6.0), Interval::new(0.0, 1.0), &d, 2.0, &w(8))
            .unwrap();
        assert!(e.mag() <= 2.0 * 1.1f64.powi(-4) * (1.0 + 1e-12));
        assert!(c.eval_enclosure(Interval::ZERO, Interval::point(1.5), &d, 0.0, &w(4)).is_err());
    }
}
