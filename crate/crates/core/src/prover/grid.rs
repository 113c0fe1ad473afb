//! Gauss nodes in the parameter and exact recovery of Chebyshev
//! coefficients of polynomial quantities from their values there.

use crate::matrix::Mat;
use crate::rigor::{Cplx, Interval, Scalar};
use crate::series::{dct, ChebSeries, Domain, FourierCheb, FourierSlice, SymClass};

pub struct GaussGrid {
    p: usize,
    s: Vec<Interval>,
    omega: Vec<Interval>,
    tn: Vec<Vec<Interval>>,
    dct: Mat<Interval>,
}

impl GaussGrid {
    /// `p` nodes; `T_n` tabulated for `n ≤ nmax`.
    pub fn new(p: usize, nmax: usize, domain: Domain) -> Self {
        let (c, d) = domain.affine();
        let tn: Vec<Vec<Interval>> = (0..p).map(|m| dct::tn_gauss(m, p, nmax)).collect();
        let s: Vec<Interval> = (0..p)
            .map(|m| Interval::cos_pi_frac(2 * m as i64 + 1, 2 * p as i64))
            .collect();
        let omega = s.iter().map(|&s| c + d * s).collect();
        Self {
            p,
            s,
            omega,
            tn,
            dct: Mat::from_vec(p, p, dct::dct2_matrix(p)),
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn s(&self, m: usize) -> Interval {
        self.s[m]
    }

    pub fn omega(&self, m: usize) -> Interval {
        self.omega[m]
    }

    pub fn tn(&self, m: usize) -> &[Interval] {
        &self.tn[m]
    }

    /// Coefficients from a point-major `P × E` matrix of values.
    pub fn transform(&self, values: &Mat<Interval>) -> Mat<Interval> {
        self.dct.midrad_mul(values)
    }

    /// Magnitude bounds of the coefficients, entry-major (`E × P`),
    /// transformed in column chunks to bound memory.
    pub fn transform_mags(&self, values: &Mat<Interval>, chunk: usize) -> Vec<f64> {
        let (p, e) = (values.rows(), values.cols());
        assert_eq!(p, self.p);
        let mut out = vec![0.0; e * p];
        let mut start = 0;
        while start < e {
            let w = chunk.min(e - start);
            let mut sub = Mat::zeros(p, w);
            for m in 0..p {
                sub.data_mut()[m * w..(m + 1) * w]
                    .copy_from_slice(&values.row(m)[start..start + w]);
            }
            let c = self.transform(&sub);
            for n in 0..p {
                for j in 0..w {
                    out[(start + j) * p + n] = c[(n, j)].mag();
                }
            }
            start += w;
        }
        out
    }

    pub fn scalars_to_cheb(&self, vals: &[Interval]) -> ChebSeries<Interval> {
        let v = Mat::from_vec(self.p, 1, vals.to_vec());
        ChebSeries::new(self.transform(&v).col(0))
    }

    /// Fourier–Chebyshev array from complex slices at the nodes.
    pub fn slices_to_fc(&self, slices: &[FourierSlice<Interval>], class: SymClass) -> FourierCheb<Interval> {
        assert_eq!(slices.len(), self.p);
        let km = slices.iter().map(|s| s.kmax()).max().unwrap_or(0);
        let modes = 2 * km + 1;
        let mut v = Mat::zeros(self.p, 2 * modes);
        for (m, s) in slices.iter().enumerate() {
            for (j, k) in (-(km as i64)..=km as i64).enumerate() {
                let c = s.get(k);
                v[(m, 2 * j)] = c.re;
                v[(m, 2 * j + 1)] = c.im;
            }
        }
        let c = self.transform(&v);
        let mut out = FourierCheb::zeros(km, self.p - 1, class);
        for (j, k) in (-(km as i64)..=km as i64).enumerate() {
            for n in 0..self.p {
                let z = Cplx::new(c[(n, 2 * j)], c[(n, 2 * j + 1)]);
                if !z.is_zero() {
                    out.set(k, n, z);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_polynomial() {
        let g = GaussGrid::new(9, 8, Domain::UNIT);
        // Ω² = 3/8 + T1/2 + T2/8.
        let vals: Vec<Interval> = (0..9).map(|m| g.omega(m).sqr()).collect();
        let c = g.scalars_to_cheb(&vals);
        assert!(c.coeff(0).contains(0.375));
        assert!(c.coeff(1).contains(0.5));
        assert!(c.coeff(2).contains(0.125));
        for n in 3..9 {
            assert!(c.coeff(n).contains(0.0) && c.coeff(n).mag() < 1e-14);
        }
    }

    #[test]
    fn fc_from_slices() {
        let g = GaussGrid::new(5, 4, Domain::new(0.5, 1.0).unwrap());
        // Ω cos 2t on [0.5, 1]: Ω = 3/4 + T1/4.
        let sl: Vec<_> = (0..5).map(|m| FourierSlice::cos_mode(2, g.omega(m))).collect();
        let fc = g.slices_to_fc(&sl, SymClass::EVEN_COS);
        assert!(fc.get(2, 0).re.contains(0.375));
        assert!(fc.get(-2, 1).re.contains(0.125));
        assert!(fc.get(0, 0).re.mag() < 1e-15);
    }
}
