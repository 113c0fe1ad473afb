//! Linearization of the zero-finding map at a fixed parameter value,
//! assembled column by column from sparse directions.

use crate::matrix::Mat;
use crate::rigor::{Cplx, Scalar};
use crate::series::FourierSlice;

use super::layout::{Basis, Entry, Field, Layout};
use super::residual::Point;

/// A direction supported on one or two Fourier modes.
type Sparse<T> = Vec<(i64, Cplx<T>)>;

fn direction<T: Scalar>(basis: Basis, k: usize) -> Sparse<T> {
    let k = k as i64;
    let half = T::from_f64(0.5);
    match (basis, k) {
        (Basis::Cos, 0) => vec![(0, Cplx::real(T::one()))],
        (Basis::Cos, _) => vec![(k, Cplx::real(half)), (-k, Cplx::real(half))],
        (Basis::Sin, _) => vec![
            (k, Cplx::new(T::zero(), -half)),
            (-k, Cplx::new(T::zero(), half)),
        ],
    }
}

/// `(I - S^j) δ`.
fn minus_shift<T: Scalar>(dir: &Sparse<T>, j: i64) -> Sparse<T> {
    dir.iter()
        .map(|&(k, v)| {
            let (c, s) = T::exp_phase(k * j);
            (k, v * Cplx::new(T::one() - c, -s))
        })
        .collect()
}

fn value_at_zero<T: Scalar>(dir: &Sparse<T>) -> T {
    dir.iter().fold(T::zero(), |acc, &(_, v)| acc + v.re)
}

/// `φ · δ` restricted to modes `|m| ≤ kout`, accumulated into `out`.
fn sparse_mul_into<T: Scalar>(phi: &FourierSlice<T>, dir: &Sparse<T>, out: &mut FourierSlice<T>) {
    let kout = out.kmax() as i64;
    let kp = phi.kmax() as i64;
    for &(k, v) in dir {
        let lo = (-kout).max(k - kp);
        let hi = kout.min(k + kp);
        for m in lo..=hi {
            let p = phi.get(m - k);
            if !p.is_zero() {
                out.add_at(m, p * v);
            }
        }
    }
}

fn sparse_add_into<T: Scalar>(dir: &Sparse<T>, c: Cplx<T>, out: &mut FourierSlice<T>) {
    let kout = out.kmax() as i64;
    for &(k, v) in dir {
        if k.abs() <= kout {
            out.add_at(k, v * c);
        }
    }
}

/// Products of the expansion point needed by the derivative.
#[derive(Clone, Debug)]
pub struct Linearization<T> {
    pub pt: Point<T>,
    /// `w³ (L_a e)_i`.
    pub(crate) w3_lae: [FourierSlice<T>; 3],
    /// `w³ (L_a d)_i`.
    pub(crate) w3_lad: [FourierSlice<T>; 3],
    /// `3 w² d_i`.
    pub(crate) gw_a: [FourierSlice<T>; 3],
    /// `3 R(w²) (u - S²u)_i`.
    pub(crate) gw_b: [FourierSlice<T>; 3],
    /// `3 w² ⟨d, L_a e⟩`.
    pub(crate) hw: FourierSlice<T>,
    /// `w³ d3 e3`.
    pub(crate) ha: FourierSlice<T>,
    pub(crate) w0: T,
    pub(crate) q0: T,
    pub(crate) lad0: [T; 3],
    pub(crate) d3_0: T,
}

impl<T: Scalar> Linearization<T> {
    pub fn new(pt: Point<T>) -> Self {
        let three = T::from_f64(3.0);
        let w2_3 = pt.w2.scale(three);
        let rw2_3 = w2_3.reflect();
        let w3_lae = [0, 1, 2].map(|i| pt.w3.mul(&pt.la_e(i)));
        let w3_lad = [0, 1, 2].map(|i| pt.w3.mul(&pt.la_d(i)));
        let gw_a = [0, 1, 2].map(|i| w2_3.mul(&pt.d[i]));
        let gw_b = [0, 1, 2].map(|i| rw2_3.mul(&pt.d2[i]));
        let hw = w2_3.mul(&pt.p);
        let ha = pt.w3.mul(&pt.d[2].mul(&pt.e[2]));
        let w0 = pt.x.w.value_at_zero().re;
        let q0 = pt.q.value_at_zero().re;
        let lad0 = [0, 1, 2].map(|i| pt.la_d(i).value_at_zero().re);
        let d3_0 = pt.d[2].value_at_zero().re;
        Self {
            pt,
            w3_lae,
            w3_lad,
            gw_a,
            gw_b,
            hw,
            ha,
            w0,
            q0,
            lad0,
            d3_0,
        }
    }

    pub fn at(layout: &Layout, x: &[T], omega: T) -> Self {
        Self::new(Point::new(layout, x, omega))
    }

    /// Image of the unit vector of `entry`, projected to `out_layout`.
    pub fn column(&self, entry: Entry, out_layout: &Layout) -> Vec<T> {
        let ko = out_layout.k();
        let mut out = vec![T::zero(); out_layout.dim()];
        let mut g: [Option<FourierSlice<T>>; 3] = [None, None, None];
        let mut f: [Option<FourierSlice<T>>; 3] = [None, None, None];
        let mut h: Option<FourierSlice<T>> = None;
        let fresh = || FourierSlice::zeros(ko);
        let pt = &self.pt;
        let one = Cplx::real(T::one());
        match entry {
            Entry::Scalar(0) => {
                out[2] = self.w0 * self.w0 * self.d3_0 * self.d3_0;
                let mut hh = fresh();
                sparse_mul_into(&self.ha, &vec![(0, one)], &mut hh);
                h = Some(hh);
            }
            Entry::Scalar(1) => {
                let mut gg = fresh();
                gg.add_at(0, one);
                g[0] = Some(gg);
            }
            Entry::Scalar(_) => {
                let mut hh = fresh();
                hh.add_at(0, one);
                h = Some(hh);
            }
            Entry::Mode { field: Field::U(i), basis, k } => {
                let dir = direction::<T>(basis, k);
                let ds = minus_shift(&dir, 1);
                let ds2 = minus_shift(&dir, 2);
                if i == 2 {
                    out[0] = value_at_zero(&dir);
                }
                if i == 0 && k == 0 {
                    out[1] = T::one();
                }
                let two = T::from_f64(2.0);
                out[2] = two * self.w0 * self.w0 * self.lad0[i] * value_at_zero(&ds);
                let mut gg = fresh();
                if i < 2 {
                    let om2 = pt.omega * pt.omega;
                    sparse_add_into(&dir, Cplx::real(-om2), &mut gg);
                }
                sparse_mul_into(&pt.w3, &ds, &mut gg);
                sparse_mul_into(&pt.rw3, &ds2, &mut gg);
                g[i] = Some(gg);
                let mut ff = fresh();
                for &(kk, v) in &dir {
                    if kk.abs() <= ko as i64 {
                        ff.add_at(kk, v.mul_i(T::from_f64(kk as f64)));
                    }
                }
                f[i] = Some(ff);
                let mut hh = fresh();
                sparse_mul_into(&self.w3_lae[i], &ds, &mut hh);
                h = Some(hh);
            }
            Entry::Mode { field: Field::V(i), basis, k } => {
                let dir = direction::<T>(basis, k);
                let ds = minus_shift(&dir, 1);
                let two_om = pt.omega + pt.omega;
                let mut gi = fresh();
                for &(kk, v) in &dir {
                    if kk.abs() <= ko as i64 {
                        gi.add_at(kk, v.mul_i(T::from_f64(kk as f64)));
                    }
                }
                g[i] = Some(gi);
                // -2Ω J̄v: v2 enters g1 with +2Ω, v1 enters g2 with -2Ω.
                match i {
                    1 => {
                        let mut g0 = fresh();
                        sparse_add_into(&dir, Cplx::real(two_om), &mut g0);
                        g[0] = Some(g0);
                    }
                    0 => {
                        let g1 = g[1].get_or_insert_with(fresh);
                        sparse_add_into(&dir, Cplx::real(-two_om), g1);
                    }
                    _ => {}
                }
                let mut ff = fresh();
                sparse_add_into(&dir, Cplx::real(-T::one()), &mut ff);
                f[i] = Some(ff);
                let mut hh = fresh();
                sparse_mul_into(&self.w3_lad[i], &ds, &mut hh);
                h = Some(hh);
            }
            Entry::Mode { field: Field::W, basis, k } => {
                let dir = direction::<T>(basis, k);
                let rdir: Sparse<T> = dir.iter().map(|&(k, v)| (-k, v)).collect();
                let two = T::from_f64(2.0);
                out[2] = two * self.w0 * self.q0 * value_at_zero(&dir);
                for i in 0..3 {
                    let mut gg = fresh();
                    sparse_mul_into(&self.gw_a[i], &dir, &mut gg);
                    sparse_mul_into(&self.gw_b[i], &rdir, &mut gg);
                    g[i] = Some(gg);
                }
                let mut hh = fresh();
                for &(kk, v) in &dir {
                    if kk.abs() <= ko as i64 {
                        hh.add_at(kk, v.mul_i(T::from_f64(kk as f64)));
                    }
                }
                sparse_mul_into(&self.hw, &dir, &mut hh);
                h = Some(hh);
            }
        }
        for i in 0..3 {
            if let Some(s) = &g[i] {
                out_layout.read_field(Field::U(i), s, &mut out);
            }
            if let Some(s) = &f[i] {
                out_layout.read_field(Field::V(i), s, &mut out);
            }
        }
        if let Some(s) = &h {
            out_layout.read_field(Field::W, s, &mut out);
        }
        out
    }

    /// Derivative matrix with columns on `in_layout`, rows on `out_layout`.
    pub fn matrix(&self, in_layout: &Layout, out_layout: &Layout) -> Mat<T> {
        let mut m = Mat::zeros(out_layout.dim(), in_layout.dim());
        for (j, &e) in in_layout.entries().iter().enumerate() {
            m.set_col(j, &self.column(e, out_layout));
        }
        m
    }
}

/// Jacobian of the projected residual at one parameter value.
pub fn jacobian_slice<T: Scalar>(layout: &Layout, x: &[T], omega: T) -> Mat<T> {
    Linearization::at(layout, x, omega).matrix(layout, layout)
}
