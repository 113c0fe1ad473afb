use crate::rigor::{Cplx, Interval, Scalar};
use crate::series::{FourierSlice, Kind, SymClass};

use super::layout::{Field, Layout, Slices, FIELDS};

/// Products of the unknown at one parameter value, shared by the residual
/// and its linearization.
#[derive(Clone, Debug)]
pub struct Point<T> {
    pub omega: T,
    pub x: Slices<T>,
    /// `u - S u`.
    pub d: [FourierSlice<T>; 3],
    /// `u - S² u`.
    pub d2: [FourierSlice<T>; 3],
    /// `v - S v`.
    pub e: [FourierSlice<T>; 3],
    pub w2: FourierSlice<T>,
    pub w3: FourierSlice<T>,
    /// `R w³`, the weight of the interaction with the second body.
    pub rw3: FourierSlice<T>,
    /// `⟨d, L_a d⟩`.
    pub q: FourierSlice<T>,
    /// `⟨d, L_a e⟩`.
    pub p: FourierSlice<T>,
}

fn diff_shift<T: Scalar>(s: &FourierSlice<T>, j: i64) -> FourierSlice<T> {
    s.sub(&s.shift(j))
}

impl<T: Scalar> Point<T> {
    pub fn new(layout: &Layout, x: &[T], omega: T) -> Self {
        Self::from_slices(layout.to_slices(x), omega)
    }

    pub fn from_slices(x: Slices<T>, omega: T) -> Self {
        let d = [0, 1, 2].map(|i| diff_shift(&x.u[i], 1));
        let d2 = [0, 1, 2].map(|i| diff_shift(&x.u[i], 2));
        let e = [0, 1, 2].map(|i| diff_shift(&x.v[i], 1));
        let w2 = x.w.mul(&x.w);
        let w3 = w2.mul(&x.w);
        let rw3 = w3.reflect();
        let q = d[0]
            .mul(&d[0])
            .add(&d[1].mul(&d[1]))
            .add(&d[2].mul(&d[2]).scale(x.a));
        let p = d[0]
            .mul(&e[0])
            .add(&d[1].mul(&e[1]))
            .add(&d[2].mul(&e[2]).scale(x.a));
        Self {
            omega,
            x,
            d,
            d2,
            e,
            w2,
            w3,
            rw3,
            q,
            p,
        }
    }

    /// `(L_a d)_i`.
    pub fn la_d(&self, i: usize) -> FourierSlice<T> {
        if i == 2 {
            self.d[2].scale(self.x.a)
        } else {
            self.d[i].clone()
        }
    }

    /// `(L_a e)_i`.
    pub fn la_e(&self, i: usize) -> FourierSlice<T> {
        if i == 2 {
            self.e[2].scale(self.x.a)
        } else {
            self.e[i].clone()
        }
    }

    /// `η = (u3(0) - 1, (u1)_0)`.
    pub fn eta(&self) -> (T, T) {
        (self.x.u[2].value_at_zero().re - T::one(), self.x.u[0].get(0).re)
    }

    /// `γ = w(0)² ⟨d, L_a d⟩(0) - 1`, evaluated as a product of values.
    pub fn gamma(&self) -> T {
        let w0 = self.x.w.value_at_zero().re;
        w0 * w0 * self.q.value_at_zero().re - T::one()
    }

    /// Full residual with untruncated supports. The scalar slots hold
    /// `η1, η2, γ`, the `u, v, w` slots hold `g, f, h`.
    pub fn residual(&self) -> Slices<T> {
        let x = &self.x;
        let om = self.omega;
        let om2 = om * om;
        let two_om = om + om;
        let (eta1, eta2) = self.eta();
        let g = [0, 1, 2].map(|i| {
            let mut gi = x.v[i].diff_t();
            if i == 0 {
                gi.add_at(0, Cplx::real(x.beta));
            }
            if i < 2 {
                gi = gi.sub(&x.u[i].scale(om2));
            }
            // -2Ω J̄v with J̄v = (-v2, v1, 0).
            match i {
                0 => gi = gi.add(&x.v[1].scale(two_om)),
                1 => gi = gi.sub(&x.v[0].scale(two_om)),
                _ => {}
            }
            let a = self.w3.mul(&self.d[i]);
            let b = self.rw3.mul(&self.d2[i]);
            gi.add(&a).add(&b)
        });
        let f = [0, 1, 2].map(|i| x.u[i].diff_t().sub(&x.v[i]));
        let mut h = x.w.diff_t().add(&self.w3.mul(&self.p));
        h.add_at(0, Cplx::real(x.alpha));
        let [g0, g1, g2] = g;
        let [f0, f1, f2] = f;
        Slices {
            a: eta1,
            beta: eta2,
            alpha: self.gamma(),
            u: [g0, g1, g2],
            v: [f0, f1, f2],
            w: h,
        }
    }
}

/// Class of the residual stored in the slot of `f`: `g` has the classes
/// of `u`, `f` those of `v`, `h` that of `w`.
pub fn residual_class(f: Field) -> SymClass {
    f.class()
}

/// Whether every mode of `s` can belong to `class` and the coefficients
/// can be those of a real function.
pub fn slice_conforms(s: &FourierSlice<Interval>, class: SymClass) -> bool {
    let z = |x: Interval| x.contains_zero();
    s.iter().all(|(k, v)| {
        let w = s.get(-k);
        let real = z(v.re - w.re) && z(v.im + w.im);
        let class_ok = if !class.parity.admits(k) {
            z(v.re) && z(v.im)
        } else {
            match class.kind {
                Kind::Cos => z(v.im),
                Kind::Sin => z(v.re),
                Kind::General => true,
            }
        };
        real && class_ok
    })
}

/// Off-class check of a residual computed in interval arithmetic.
pub fn residual_conforms(r: &Slices<Interval>) -> bool {
    FIELDS
        .iter()
        .all(|&f| slice_conforms(r.field(f), residual_class(f)))
}

/// Residual projected to the reduced basis of `layout`.
pub fn residual_slice<T: Scalar>(layout: &Layout, x: &[T], omega: T, out: &Layout) -> Vec<T> {
    Point::new(layout, x, omega).residual().to_vec(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::layout::Basis;
    use crate::series::Weights;

    /// Lagrange triangle at Ω = 1 in the reduced basis.
    fn triangle(l: &Layout, u2_sign: f64) -> Vec<f64> {
        let c = 3f64.powf(-1.0 / 6.0);
        let mut x = vec![0.0; l.dim()];
        let mut put = |f, b, k, v| x[l.index(f, b, k).unwrap()] = v;
        put(Field::U(0), Basis::Cos, 2, c);
        put(Field::U(1), Basis::Sin, 2, u2_sign * c);
        put(Field::U(2), Basis::Cos, 1, 1.0);
        put(Field::V(0), Basis::Sin, 2, -2.0 * c);
        put(Field::V(1), Basis::Cos, 2, 2.0 * u2_sign * c);
        put(Field::V(2), Basis::Sin, 1, -1.0);
        put(Field::W, Basis::Cos, 0, 3f64.powf(-1.0 / 3.0));
        x
    }

    #[test]
    fn triangle_is_a_zero() {
        let l = Layout::new(6);
        let big = Layout::new(30);
        let r = residual_slice(&l, &triangle(&l, 1.0), 1.0, &big);
        let w = Weights::new(Interval::ratio(11, 10), 40);
        assert!(big.nu_norm_up(&r, &w) < 1e-14, "{r:?}");
    }

    #[test]
    fn mirrored_triangle_is_not_a_zero() {
        let l = Layout::new(6);
        let big = Layout::new(30);
        let r = residual_slice(&l, &triangle(&l, -1.0), 1.0, &big);
        let w = Weights::new(Interval::ratio(11, 10), 40);
        assert!(big.nu_norm_up(&r, &w) > 1.0);
    }

    #[test]
    fn zero_state() {
        let l = Layout::new(4);
        let mut x = vec![0.0; l.dim()];
        x[2] = 0.25;
        let r = Point::new(&l, &x, 0.3).residual();
        assert_eq!((r.a, r.beta, r.alpha), (-1.0, 0.0, -1.0));
        assert_eq!(r.w.get(0).re, 0.25);
        assert!(r.u.iter().all(|s| s.iter().all(|(_, v)| v.is_zero())));
    }

    #[test]
    fn gamma_example() {
        // a = 1, u = (cos 2t, 0, 0), w = 1: (1 - cos(8π/3))² - 1 = 1.25.
        let l = Layout::new(4);
        let mut x = vec![0.0; l.dim()];
        x[0] = 1.0;
        x[l.index(Field::U(0), Basis::Cos, 2).unwrap()] = 1.0;
        x[l.index(Field::W, Basis::Cos, 0).unwrap()] = 1.0;
        let g = Point::new(&l, &x, 0.5).gamma();
        assert!((g - 1.25).abs() < 1e-14, "{g}");
    }

    #[test]
    fn interval_residual_conforms() {
        let l = Layout::new(6);
        let x: Vec<Interval> = (0..l.dim())
            .map(|i| Interval::point(((i * 37) % 11) as f64 / 20.0 - 0.25))
            .collect();
        let r = Point::new(&l, &x, Interval::ratio(1, 3)).residual();
        assert!(residual_conforms(&r));
    }
}
