//! Dense row-major matrices over a [`Scalar`].

use serde::{Deserialize, Serialize};

use crate::rigor::{prod_up, quot_up, sum_up, Interval, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn set_col(&mut self, j: usize, col: &[T]) {
        assert_eq!(col.len(), self.rows);
        for (i, &v) in col.iter().enumerate() {
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn mid(&self) -> Mat<f64> {
        self.map(|v| v.mid())
    }

    pub fn to_interval(&self) -> Mat<Interval> {
        self.map(|v| v.to_interval())
    }
}

impl Mat<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<f64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }
}

/// Row-major `C = A B` in floating point.
fn gemm(m: usize, k: usize, n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; m * n];
    if m == 0 || n == 0 || k == 0 {
        return c;
    }
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            0.0,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
    c
}

fn split(m: &Mat<Interval>) -> (Vec<f64>, Vec<f64>) {
    m.data.iter().map(|v| (v.mid(), v.rad())).unzip()
}

/// Upper bound of `γ_n = n u / (1 - n u)`.
fn gamma(n: usize) -> f64 {
    let nu = n as f64 * f64::EPSILON * 0.5;
    assert!(nu < 0.01, "inner dimension too large");
    nu * 1.02
}

impl Mat<Interval> {
    /// Enclosure of the product by the midpoint-radius method.
    ///
    /// The midpoint product is computed in floating point and the radius
    /// collects the input radii together with the a-priori bound
    /// `|fl(AB) - AB| ≤ γ_n |A||B|`, which holds for every summation
    /// order.
    pub fn midrad_mul(&self, other: &Mat<Interval>) -> Mat<Interval> {
        assert_eq!(self.cols, other.rows);
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let (am, ar) = split(self);
        let (bm, br) = split(other);
        let cm = gemm(m, k, n, &am, &bm);
        let aa: Vec<f64> = am.iter().map(|v| v.abs()).collect();
        let ba: Vec<f64> = bm.iter().map(|v| v.abs()).collect();
        let t = gemm(m, k, n, &aa, &ba);
        let s1 = if br.iter().any(|&r| r != 0.0) {
            Some(gemm(m, k, n, &aa, &br))
        } else {
            None
        };
        let s2 = if ar.iter().any(|&r| r != 0.0) {
            let bp: Vec<f64> = ba.iter().zip(&br).map(|(&x, &r)| sum_up(x, r)).collect();
            Some(gemm(m, k, n, &ar, &bp))
        } else {
            None
        };
        let g = gamma(k + 2);
        let denom = 1.0 - g;
        let floor = (k + 2) as f64 * f64::MIN_POSITIVE;
        let data = (0..m * n)
            .map(|i| {
                let mut r = prod_up(g, t[i]);
                if let Some(s) = &s1 {
                    r = sum_up(r, s[i]);
                }
                if let Some(s) = &s2 {
                    r = sum_up(r, s[i]);
                }
                r = sum_up(quot_up(r, denom), floor);
                Interval::mid_rad(cm[i], r)
            })
            .collect();
        Mat {
            rows: m,
            cols: n,
            data,
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}
