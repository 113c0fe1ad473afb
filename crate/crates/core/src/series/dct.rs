//! Transforms between parameter samples and Chebyshev coefficients.
//!
//! Two node families are used. Lobatto nodes `s_j = cos(jπ/N)`, `0 ≤ j ≤ N`,
//! carry the continuation (node 0 is `s = 1`). Gauss nodes
//! `s_m = cos(π(2m+1)/(2P))`, `0 ≤ m < P`, carry the rigorous evaluation of
//! polynomial quantities of degree below `P`, recovered exactly by a DCT-II.

use crate::rigor::Scalar;

use super::{ChebSeries, SeriesError};

/// Lobatto nodes `s_j = cos(jπ/N)`.
pub fn lobatto_nodes(n: usize) -> Vec<f64> {
    (0..=n).map(|j| f64::cos_pi_frac(j as i64, n as i64)).collect()
}

/// Gauss nodes `s_m = cos(π(2m+1)/(2P))`.
pub fn gauss_nodes(p: usize) -> Vec<f64> {
    (0..p)
        .map(|m| f64::cos_pi_frac(2 * m as i64 + 1, 2 * p as i64))
        .collect()
}

/// `T_n(s_j)` for `0 ≤ n ≤ nmax` at the Lobatto node `j` of order `big_n`.
pub fn tn_lobatto<T: Scalar>(j: usize, big_n: usize, nmax: usize) -> Vec<T> {
    (0..=nmax)
        .map(|n| T::cos_pi_frac((n * j) as i64, big_n as i64))
        .collect()
}

/// `T_n(s_m)` for `0 ≤ n ≤ nmax` at the Gauss node `m` of `p` points.
pub fn tn_gauss<T: Scalar>(m: usize, p: usize, nmax: usize) -> Vec<T> {
    (0..=nmax)
        .map(|n| T::cos_pi_frac((n * (2 * m + 1)) as i64, 2 * p as i64))
        .collect()
}

/// Matrix of the Lobatto transform: `coeffs = M · values`, row-major
/// `(N+1) × (N+1)`.
pub fn lobatto_matrix<T: Scalar>(n: usize) -> Vec<T> {
    let scale = T::ratio(2, n as i64);
    let half = T::from_f64(0.5);
    let mut out = Vec::with_capacity((n + 1) * (n + 1));
    for k in 0..=n {
        let s = if k == 0 || k == n { scale * half } else { scale };
        for j in 0..=n {
            let c = T::cos_pi_frac((k * j) as i64, n as i64) * s;
            out.push(if j == 0 || j == n { c * half } else { c });
        }
    }
    out
}

/// Applies a matrix from [`lobatto_matrix`] to samples at the nodes.
pub fn apply_lobatto<T: Scalar>(matrix: &[T], values: &[T]) -> ChebSeries<T> {
    let m = values.len();
    assert_eq!(matrix.len(), m * m);
    let coeffs = matrix
        .chunks(m)
        .map(|row| row.iter().zip(values).fold(T::zero(), |acc, (&a, &f)| acc + a * f))
        .collect();
    ChebSeries::new(coeffs)
}

/// Degree-`N` interpolant through samples at the `N + 1` Lobatto nodes.
pub fn cheb_transform<T: Scalar>(values: &[T], n: usize) -> Result<ChebSeries<T>, SeriesError> {
    if values.len() != n + 1 {
        return Err(SeriesError::LengthMismatch {
            expected: n + 1,
            got: values.len(),
        });
    }
    Ok(apply_lobatto(&lobatto_matrix(n), values))
}

/// Coefficients of the degree `< P` interpolant through samples at the
/// `P` Gauss nodes. Exact (up to the enclosure width) for polynomials of
/// degree at most `P - 1`.
pub fn dct2<T: Scalar>(values: &[T]) -> ChebSeries<T> {
    let p = values.len();
    let scale = T::ratio(2, p as i64);
    let half = T::from_f64(0.5);
    let coeffs = (0..p)
        .map(|n| {
            let mut acc = T::zero();
            for (m, &f) in values.iter().enumerate() {
                acc += f * T::cos_pi_frac((n * (2 * m + 1)) as i64, 2 * p as i64);
            }
            let c = acc * scale;
            if n == 0 {
                c * half
            } else {
                c
            }
        })
        .collect();
    ChebSeries::new(coeffs)
}

/// Matrix of the DCT-II: `coeffs = M · values`, row-major `P × P`.
pub fn dct2_matrix<T: Scalar>(p: usize) -> Vec<T> {
    let scale = T::ratio(2, p as i64);
    let mut out = Vec::with_capacity(p * p);
    for n in 0..p {
        let s = if n == 0 { T::ratio(1, p as i64) } else { scale };
        for m in 0..p {
            out.push(s * T::cos_pi_frac((n * (2 * m + 1)) as i64, 2 * p as i64));
        }
    }
    out
}
