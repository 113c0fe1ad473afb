//! The unknown as a function of the parameter: one Chebyshev series per
//! coordinate of the reduced basis.

use crate::matrix::Mat;
use crate::rigor::{Cplx, Interval, Scalar};
use crate::series::{dct, ChebSeries, Domain, FourierCheb, SeriesError};

use super::layout::{Basis, Entry, Field, Layout};

#[derive(Clone, Debug, PartialEq)]
pub struct State<T> {
    layout: Layout,
    domain: Domain,
    /// Row `i` holds the Chebyshev coefficients of coordinate `i`.
    coeffs: Mat<T>,
}

impl<T: Scalar> State<T> {
    pub fn zeros(layout: Layout, n: usize, domain: Domain) -> Self {
        let dim = layout.dim();
        Self {
            layout,
            domain,
            coeffs: Mat::zeros(dim, n + 1),
        }
    }

    pub fn from_coeffs(layout: Layout, domain: Domain, coeffs: Mat<T>) -> Self {
        assert_eq!(coeffs.rows(), layout.dim());
        assert!(coeffs.cols() >= 1);
        Self {
            layout,
            domain,
            coeffs,
        }
    }

    /// A state constant in the parameter.
    pub fn constant(layout: Layout, n: usize, domain: Domain, slice: &[T]) -> Self {
        let mut s = Self::zeros(layout, n, domain);
        s.coeffs.set_col(0, slice);
        s
    }

    /// Interpolant through slices at the Lobatto nodes, node 0 at `Ω = hi`.
    pub fn from_nodes(layout: Layout, domain: Domain, slices: &[Vec<T>]) -> Result<Self, SeriesError> {
        if slices.len() < 2 {
            return Err(SeriesError::LengthMismatch {
                expected: 2,
                got: slices.len(),
            });
        }
        let n = slices.len() - 1;
        let mut s = Self::zeros(layout, n, domain);
        let lob = dct::lobatto_matrix::<T>(n);
        for i in 0..s.layout.dim() {
            let vals: Vec<T> = slices.iter().map(|x| x[i]).collect();
            let c = dct::apply_lobatto(&lob, &vals);
            for (m, &v) in c.coeffs().iter().enumerate() {
                s.coeffs[(i, m)] = v;
            }
        }
        Ok(s)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Chebyshev degree `N`.
    pub fn n(&self) -> usize {
        self.coeffs.cols() - 1
    }

    pub fn coeffs(&self) -> &Mat<T> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Mat<T> {
        &mut self.coeffs
    }

    pub fn series(&self, i: usize) -> ChebSeries<T> {
        ChebSeries::new(self.coeffs.row(i).to_vec())
    }

    pub fn a(&self) -> ChebSeries<T> {
        self.series(0)
    }

    pub fn beta(&self) -> ChebSeries<T> {
        self.series(1)
    }

    pub fn alpha(&self) -> ChebSeries<T> {
        self.series(2)
    }

    /// Slice at the Chebyshev variable `s`.
    pub fn eval_s(&self, s: T) -> Vec<T> {
        (0..self.layout.dim())
            .map(|i| self.series(i).eval(s))
            .collect()
    }

    /// Slice at the values `T_n(s)` of the Chebyshev polynomials.
    pub fn eval_tn(&self, tn: &[T]) -> Vec<T> {
        (0..self.layout.dim())
            .map(|i| {
                self.coeffs
                    .row(i)
                    .iter()
                    .zip(tn)
                    .fold(T::zero(), |acc, (&c, &t)| acc + c * t)
            })
            .collect()
    }

    /// Field as a two-sided Fourier–Chebyshev array.
    pub fn field(&self, f: Field) -> FourierCheb<T> {
        let mut out = FourierCheb::zeros(self.layout.k(), self.n(), f.class());
        let half = T::from_f64(0.5);
        for i in self.layout.block(f) {
            let Entry::Mode { basis, k, .. } = self.layout.entry(i) else {
                unreachable!()
            };
            let k = k as i64;
            for (n, &c) in self.coeffs.row(i).iter().enumerate() {
                match (basis, k) {
                    (Basis::Cos, 0) => out.add_at(0, n, Cplx::real(c)),
                    (Basis::Cos, _) => {
                        out.add_at(k, n, Cplx::real(c * half));
                        out.add_at(-k, n, Cplx::real(c * half));
                    }
                    (Basis::Sin, _) => {
                        out.add_at(k, n, Cplx::new(T::zero(), -(c * half)));
                        out.add_at(-k, n, Cplx::new(T::zero(), c * half));
                    }
                }
            }
        }
        out.with_class(f.class())
    }

    pub fn to_interval(&self) -> State<Interval> {
        State {
            layout: self.layout.clone(),
            domain: self.domain,
            coeffs: self.coeffs.to_interval(),
        }
    }

    pub fn mid(&self) -> State<f64> {
        State {
            layout: self.layout.clone(),
            domain: self.domain,
            coeffs: self.coeffs.mid(),
        }
    }
}

impl State<f64> {
    pub fn eval(&self, omega: f64) -> Vec<f64> {
        self.eval_s(self.domain.to_s_f64(omega))
    }
}

impl State<Interval> {
    /// Enclosure of the slices over a parameter interval.
    pub fn eval_enclosure(&self, omega: Interval) -> Result<Vec<Interval>, SeriesError> {
        let s = self.domain.to_s(omega)?;
        Ok((0..self.layout.dim())
            .map(|i| self.series(i).eval_enclosure(s))
            .collect())
    }
}
