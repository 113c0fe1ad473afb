//! Norms on the reduced real basis with Chebyshev-valued entries.
//!
//! A unit is a scalar slot, a single cosine or sine amplitude, or the
//! cosine/sine pair of one `w` mode. The norm of an element is the sum over
//! units of `ν^k` times the X-norm of the unit, where a pair contributes
//! `Σ_n' sqrt(c_n² + s_n²)`. Operator norms are column maxima of weighted
//! block norms, each block bounded coefficientwise by its spectral norm.

use crate::matrix::Mat;
use crate::model::{Layout, State};
use crate::rigor::{prod_up, root_up, sum_up, Interval};
use crate::series::Weights;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unit {
    pub first: usize,
    pub second: Option<usize>,
    pub k: usize,
}

impl Unit {
    pub fn indices(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.first).chain(self.second)
    }
}

pub fn units(l: &Layout) -> Vec<Unit> {
    let mut out = Vec::with_capacity(l.dim());
    for i in 0..l.dim() {
        match l.w_partner(i) {
            Some(j) if j < i => continue,
            partner => out.push(Unit {
                first: i,
                second: partner,
                k: l.order(i),
            }),
        }
    }
    out
}

/// Upper bound of the spectral norm of a 2×2 matrix with entries bounded
/// in magnitude by `a, b, c, d`:
/// `σ = (√((a+d)² + (b−c)²) + √((a−d)² + (b+c)²)) / 2`, maximized over signs.
fn spectral_2x2_up(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let sq = |x: f64, y: f64| root_up(sum_up(prod_up(x, x), prod_up(y, y)));
    // The signs enter only through |a ± d| and |b ± c|.
    let s = sum_up(a, d);
    let t = sum_up(b, c);
    let diff_ad = (a - d).abs();
    let diff_bc = (b - c).abs();
    let one = sum_up(sq(s, diff_bc), sq(diff_ad, t));
    let two = sum_up(sq(s, t), sq(diff_ad, diff_bc));
    prod_up(0.5, one.max(two))
}

/// Magnitude bounds of a matrix of Chebyshev series, entry-major:
/// `data[(r * cols + c) * ncoef + n]`.
#[derive(Clone, Debug)]
pub struct ChebMags {
    pub rows: usize,
    pub cols: usize,
    pub ncoef: usize,
    pub data: Vec<f64>,
}

impl ChebMags {
    pub fn from_coeff_mats(mats: &[Mat<f64>]) -> Self {
        let (rows, cols, ncoef) = (mats[0].rows(), mats[0].cols(), mats.len());
        let mut data = vec![0.0; rows * cols * ncoef];
        for (n, m) in mats.iter().enumerate() {
            for (e, v) in m.data().iter().enumerate() {
                data[e * ncoef + n] = v.abs();
            }
        }
        Self {
            rows,
            cols,
            ncoef,
            data,
        }
    }

    #[inline]
    fn coeffs(&self, r: usize, c: usize) -> &[f64] {
        let e = r * self.cols + c;
        &self.data[e * self.ncoef..(e + 1) * self.ncoef]
    }

    /// Upper bound of the X-operator norm of block `(rows, cols)`.
    fn block_norm(&self, ri: &Unit, cj: &Unit) -> f64 {
        let single = ri.second.is_none() && cj.second.is_none();
        if single {
            let c = self.coeffs(ri.first, cj.first);
            return c.iter().fold(0.0, |acc, &v| sum_up(acc, v));
        }
        let mut acc = 0.0;
        for n in 0..self.ncoef {
            let s = match (ri.second, cj.second) {
                (Some(r2), Some(c2)) => {
                    let [a, b, c, d] = [
                        self.coeffs(ri.first, cj.first)[n],
                        self.coeffs(ri.first, c2)[n],
                        self.coeffs(r2, cj.first)[n],
                        self.coeffs(r2, c2)[n],
                    ];
                    spectral_2x2_up(a, b, c, d)
                }
                _ => {
                    let mut sq = 0.0;
                    for r in ri.indices() {
                        for c in cj.indices() {
                            let v = self.coeffs(r, c)[n];
                            sq = sum_up(sq, prod_up(v, v));
                        }
                    }
                    root_up(sq)
                }
            };
            if s > 0.0 {
                acc = sum_up(acc, s);
            }
        }
        acc
    }

    /// Weighted column norms for every column unit, and their maximum.
    pub fn op_norm(&self, rl: &Layout, cl: &Layout, w: &Weights) -> (f64, Vec<f64>) {
        assert_eq!((self.rows, self.cols), (rl.dim(), cl.dim()));
        let ru = units(rl);
        let cu = units(cl);
        let cols: Vec<f64> = cu
            .iter()
            .map(|cj| {
                let mut acc = 0.0;
                for ri in &ru {
                    let b = self.block_norm(ri, cj);
                    if b > 0.0 {
                        acc = sum_up(acc, prod_up(b, w.pow_up(ri.k as i64)));
                    }
                }
                prod_up(acc, w.inv_up(cj.k as i64))
            })
            .collect();
        (cols.iter().cloned().fold(0.0, f64::max), cols)
    }

    /// Norm of a column vector of Chebyshev series (`cols == 1`).
    pub fn vec_norm(&self, l: &Layout, w: &Weights) -> f64 {
        assert_eq!((self.rows, self.cols), (l.dim(), 1));
        let one = Unit {
            first: 0,
            second: None,
            k: 0,
        };
        units(l).iter().fold(0.0, |acc, ri| {
            let b = self.block_norm(ri, &one);
            sum_up(acc, prod_up(b, w.pow_up(ri.k as i64)))
        })
    }
}

/// Norms of the components of a state: `a, β, α, u1..u3, v1..v3, w`.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComponentNorms {
    pub a: f64,
    pub beta: f64,
    pub alpha: f64,
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub w: f64,
}

pub fn component_norms(x: &State<Interval>, w: &Weights) -> ComponentNorms {
    let l = x.layout();
    let dim = l.dim();
    let ncoef = x.n() + 1;
    let mut data = vec![0.0; dim * ncoef];
    for i in 0..dim {
        for (n, v) in x.coeffs().row(i).iter().enumerate() {
            data[i * ncoef + n] = v.mag();
        }
    }
    let m = ChebMags {
        rows: dim,
        cols: 1,
        ncoef,
        data,
    };
    let one = Unit {
        first: 0,
        second: None,
        k: 0,
    };
    let mut per_field = [0.0f64; 7];
    let mut scal = [0.0f64; 3];
    for u in units(l) {
        let b = m.block_norm(&u, &one);
        match l.entry(u.first) {
            crate::model::Entry::Scalar(s) => scal[s] = b,
            crate::model::Entry::Mode { field, .. } => {
                let s = field.slot();
                per_field[s] = sum_up(per_field[s], prod_up(b, w.pow_up(u.k as i64)));
            }
        }
    }
    ComponentNorms {
        a: scal[0],
        beta: scal[1],
        alpha: scal[2],
        u: [per_field[0], per_field[1], per_field[2]],
        v: [per_field[3], per_field[4], per_field[5]],
        w: per_field[6],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Basis, Field};

    #[test]
    fn identity_has_norm_one() {
        let l = Layout::new(6);
        let w = Weights::new(Interval::ratio(11, 10), 6);
        let m = ChebMags::from_coeff_mats(&[Mat::<f64>::identity(l.dim())]);
        let (n, _) = m.op_norm(&l, &l, &w);
        assert!((n - 1.0).abs() < 1e-12, "{n}");
    }

    #[test]
    fn off_diagonal_entry() {
        let l = Layout::new(6);
        let w = Weights::new(Interval::ratio(11, 10), 6);
        let r = l.index(Field::U(0), Basis::Cos, 2).unwrap();
        let c = l.index(Field::U(0), Basis::Cos, 0).unwrap();
        let mut a = Mat::<f64>::zeros(l.dim(), l.dim());
        a[(r, c)] = 0.5;
        let (n, _) = ChebMags::from_coeff_mats(&[a]).op_norm(&l, &l, &w);
        assert!((n - 0.5 * 1.21).abs() < 1e-12, "{n}");
    }

    #[test]
    fn chebyshev_entry_t1() {
        let l = Layout::new(2);
        let w = Weights::new(Interval::ratio(11, 10), 2);
        let zero = Mat::<f64>::zeros(l.dim(), l.dim());
        let (n, _) = ChebMags::from_coeff_mats(&[zero, Mat::identity(l.dim())]).op_norm(&l, &l, &w);
        assert!((n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn w_pair_blocks_use_spectral_norm() {
        // Signs are lost in the magnitudes: a rotation is bounded by the
        // spectral norm of its entrywise absolute value.
        let l = Layout::new(4);
        let w = Weights::new(Interval::ratio(11, 10), 4);
        let mut a = Mat::<f64>::identity(l.dim());
        let c = l.index(Field::W, Basis::Cos, 2).unwrap();
        let s = l.index(Field::W, Basis::Sin, 2).unwrap();
        let (co, si) = (0.6, 0.8);
        a[(c, c)] = co;
        a[(c, s)] = -si;
        a[(s, c)] = si;
        a[(s, s)] = co;
        let (n, _) = ChebMags::from_coeff_mats(&[a]).op_norm(&l, &l, &w);
        assert!((n - 1.4).abs() < 1e-12, "{n}");
    }
}
