//! Independent checks of the model shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use choreo::model::{jacobian_slice, residual_slice, Layout, Point, Slices};
use rand::Rng;

/// Random reduced vector with geometric decay and `w` near a positive
/// constant, so the products have realistic sizes.
pub fn random_state(layout: &Layout, rng: &mut impl Rng) -> Vec<f64> {
    let mut x: Vec<f64> = (0..layout.dim())
        .map(|i| rng.random_range(-1.0..1.0) * 0.6f64.powi(layout.order(i) as i32))
        .collect();
    x[0] = rng.random_range(0.1..1.0);
    let w0 = layout.block(choreo::model::Field::W).start;
    x[w0] = rng.random_range(0.5..1.0);
    x
}

/// Residual computed pointwise from values on a time grid: shifts by
/// evaluating at `t + 4πj/3`, products as products of numbers.
pub struct Direct<'a> {
    s: &'a Slices<f64>,
    omega: f64,
}

impl<'a> Direct<'a> {
    pub fn new(s: &'a Slices<f64>, omega: f64) -> Self {
        Self { s, omega }
    }

    fn u(&self, t: f64) -> [f64; 3] {
        [0, 1, 2].map(|i| self.s.u[i].eval(t))
    }

    fn v(&self, t: f64) -> [f64; 3] {
        [0, 1, 2].map(|i| self.s.v[i].eval(t))
    }

    fn w(&self, t: f64) -> f64 {
        self.s.w.eval(t)
    }

    fn la(&self, d: [f64; 3]) -> [f64; 3] {
        [d[0], d[1], self.s.a * d[2]]
    }

    fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    fn diff(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    /// `(g, f, h)` at time `t`, with the time derivatives taken from the
    /// coefficients.
    pub fn fields(&self, t: f64) -> [f64; 7] {
        let (om, s) = (self.omega, self.s);
        let shift = 4.0 * PI / 3.0;
        let (u, v) = (self.u(t), self.v(t));
        let d = Self::diff(u, self.u(t + shift));
        let d2 = Self::diff(u, self.u(t + 2.0 * shift));
        let e = Self::diff(v, self.v(t + shift));
        let w3 = self.w(t).powi(3);
        let rw3 = self.w(-t).powi(3);
        let vdot = [0, 1, 2].map(|i| s.v[i].diff_t().eval(t));
        let udot = [0, 1, 2].map(|i| s.u[i].diff_t().eval(t));
        let jv = [-v[1], v[0], 0.0];
        let mut out = [0.0; 7];
        for i in 0..3 {
            let planar = if i < 2 { 1.0 } else { 0.0 };
            let beta = if i == 0 { s.beta } else { 0.0 };
            out[i] = vdot[i] + beta - om * om * planar * u[i] - 2.0 * om * jv[i]
                + w3 * d[i]
                + rw3 * d2[i];
            out[3 + i] = udot[i] - v[i];
        }
        out[6] = s.w.diff_t().eval(t) + s.alpha + w3 * Self::dot(d, self.la(e));
        out
    }

    /// `(η1, η2, γ)`, the mean taken as a grid average exact for the
    /// stored degree.
    pub fn scalars(&self) -> [f64; 3] {
        let u0 = self.u(0.0);
        let m = 2 * self.s.u[0].kmax() + 1;
        let mean = (0..m).map(|j| self.s.u[0].eval(2.0 * PI * j as f64 / m as f64)).sum::<f64>() / m as f64;
        let d = Self::diff(u0, self.u(4.0 * PI / 3.0));
        let gamma = self.w(0.0).powi(2) * Self::dot(d, self.la(d)) - 1.0;
        [u0[2] - 1.0, mean, gamma]
    }
}

/// Largest deviation between the spectral residual and the direct
/// evaluation on `m` equispaced times.
pub fn grid_defect(layout: &Layout, x: &[f64], omega: f64, m: usize) -> f64 {
    let s = layout.to_slices(x);
    let r = Point::new(layout, x, omega).residual();
    let direct = Direct::new(&s, omega);
    let scalars = [r.a, r.beta, r.alpha];
    let mut err = scalars
        .iter()
        .zip(direct.scalars())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    for j in 0..m {
        let t = 2.0 * PI * j as f64 / m as f64 - PI;
        let d = direct.fields(t);
        let fields = [&r.u[0], &r.u[1], &r.u[2], &r.v[0], &r.v[1], &r.v[2], &r.w];
        for (f, want) in fields.iter().zip(d) {
            err = err.max((f.eval(t) - want).abs());
        }
    }
    err
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Central difference of the projected residual along `dir`.
pub fn central_difference(layout: &Layout, x: &[f64], omega: f64, dir: &[f64], eps: f64) -> Vec<f64> {
    let at = |s: f64| {
        let y: Vec<f64> = x.iter().zip(dir).map(|(a, b)| a + s * b).collect();
        residual_slice(layout, &y, omega, layout)
    };
    let (p, m) = (at(eps), at(-eps));
    p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * eps)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct DerivativeReport {
    /// Worst relative error at `ε = 1e-6`.
    pub rel_err: f64,
    /// Smallest observed order over the halvings `1e-2 → 5e-3 → 2.5e-3`.
    pub order: f64,
}

/// Compares the assembled Jacobian with central differences of the
/// residual along `dirs` random unit directions.
pub fn derivative_check(layout: &Layout, x: &[f64], omega: f64, dirs: usize, rng: &mut impl Rng) -> DerivativeReport {
    let jac = jacobian_slice(layout, x, omega);
    let mut rel_err: f64 = 0.0;
    let mut order = f64::INFINITY;
    for _ in 0..dirs {
        let mut dir: Vec<f64> = (0..layout.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = max_abs(&dir);
        dir.iter_mut().for_each(|d| *d /= n);
        let jd = jac.mul_vec(&dir);
        let scale = max_abs(&jd);
        let err = |eps: f64| {
            let fd = central_difference(layout, x, omega, &dir, eps);
            let diff: Vec<f64> = fd.iter().zip(&jd).map(|(a, b)| a - b).collect();
            max_abs(&diff)
        };
        rel_err = rel_err.max(err(1e-6) / scale);
        let e = [1e-2, 5e-3, 2.5e-3].map(err);
        for w in e.windows(2) {
            order = order.min((w[0] / w[1]).log2());
        }
    }
    DerivativeReport { rel_err, order }
}
