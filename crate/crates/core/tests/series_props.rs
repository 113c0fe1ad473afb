use std::f64::consts::PI;

use choreo::rigor::{sqrt3, Interval};
use choreo::series::{cplx_abs, ChebSeries, FourierCheb, Rational, SymClass, Weights};
use proptest::prelude::*;

const CLASSES: [SymClass; 5] = [
    SymClass::EVEN_COS,
    SymClass::EVEN_SIN,
    SymClass::ODD_COS,
    SymClass::ODD_SIN,
    SymClass::GENERAL,
];

fn weights(kmax: usize) -> Weights {
    Weights::new(Rational::new(11, 10).unwrap().enclose(), kmax)
}

/// A real series of the given class built from cosine and sine modes.
fn build(class: SymClass, kmax: usize, coeffs: &[f64], nmax: usize) -> FourierCheb<f64> {
    let mut out = FourierCheb::zeros(0, 0, class);
    let mut it = coeffs.iter().cycle();
    for k in 0..=kmax {
        if !class.parity.admits(k as i64) {
            continue;
        }
        let mut cheb = |scale: f64| {
            let c: Vec<f64> = (0..=nmax).map(|n| scale * it.next().unwrap() / (1 + n) as f64).collect();
            ChebSeries::new(c)
        };
        let decay = 0.5f64.powi(k as i32);
        let cos = FourierCheb::cos_mode(k, &cheb(decay));
        let sin = FourierCheb::sin_mode(k, &cheb(decay));
        let term = match class.kind {
            choreo::series::Kind::Cos => cos,
            choreo::series::Kind::Sin => sin,
            choreo::series::Kind::General => cos.add(&sin),
        };
        out = out.add(&term).with_class(class);
    }
    out
}

fn series() -> impl Strategy<Value = FourierCheb<f64>> {
    (0..CLASSES.len(), 0usize..6, 0usize..4, prop::collection::vec(-1.0f64..1.0, 8..40))
        .prop_map(|(c, k, n, v)| build(CLASSES[c], k, &v, n))
}

fn pair() -> impl Strategy<Value = (FourierCheb<f64>, FourierCheb<f64>)> {
    (series(), series())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn nu_norm_is_submultiplicative((a, b) in pair()) {
        let (a, b) = (a.to_interval(), b.to_interval());
        let w = weights(a.kmax() + b.kmax());
        let lhs = a.product(&b).nu_norm(&w);
        let rhs = a.nu_norm(&w) * b.nu_norm(&w);
        prop_assert!(lhs.lo() <= rhs.hi());
        prop_assert!(lhs.hi() <= rhs.hi() * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn x_norm_is_submultiplicative(
        a in prop::collection::vec(-1.0f64..1.0, 1..8),
        b in prop::collection::vec(-1.0f64..1.0, 1..8),
    ) {
        let (a, b) = (ChebSeries::new(a).to_interval(), ChebSeries::new(b).to_interval());
        let lhs = a.mul(&b).x_norm();
        prop_assert!(lhs.lo() <= (a.x_norm() * b.x_norm()).hi());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shift_and_reflect_preserve_norm(a in series()) {
        let a = a.to_interval();
        let w = weights(a.kmax());
        let n = a.nu_norm(&w);
        for j in 1..=2 {
            let s = a.shift(j).nu_norm(&w);
            prop_assert!(s.lo() <= n.hi() && n.lo() <= s.hi());
            prop_assert!(s.width() <= 1e-12 * (1.0 + n.mag()));
        }
        let r = a.reflect().nu_norm(&w);
        prop_assert!(r.intersects(n));
        prop_assert!(close(r.mid(), n.mid(), 1e-15));
    }

    #[test]
    fn operations_stay_in_class((a, b) in pair()) {
        let (a, b) = (a.to_interval(), b.to_interval());
        prop_assert!(a.respects_class() && b.respects_class());
        prop_assert!(a.product(&b).respects_class());
        prop_assert!(a.shift(1).respects_class());
        prop_assert!(a.shift(2).respects_class());
        prop_assert!(a.reflect().respects_class());
        prop_assert!(a.diff_t().respects_class());
    }

    #[test]
    fn operations_match_pointwise(
        (a, b) in pair(),
        t in -PI..PI,
        s in -1.0f64..1.0,
    ) {
        let tol = 1e-12;
        let (fa, fb) = (a.eval(t, s), b.eval(t, s));
        prop_assert!(close(a.product(&b).eval(t, s), fa * fb, tol));
        prop_assert!(close(a.shift(1).eval(t, s), a.eval(t + 4.0 * PI / 3.0, s), tol));
        prop_assert!(close(a.shift(2).eval(t, s), a.eval(t + 8.0 * PI / 3.0, s), tol));
        prop_assert!(close(a.reflect().eval(t, s), a.eval(-t, s), tol));
        let h = 1e-5;
        let fd = (a.eval(t + h, s) - a.eval(t - h, s)) / (2.0 * h);
        prop_assert!(close(a.diff_t().eval(t, s), fd, 1e-7));
    }

    #[test]
    fn projections_split_identity(a in series(), kt in 0usize..6) {
        let nmax = a.nmax();
        let head = a.project(kt, nmax);
        let tail = a.tail(kt);
        prop_assert_eq!(head.add(&tail).with_class(a.class()), a.clone());
        let zero = FourierCheb::zeros(a.kmax(), nmax, a.class());
        prop_assert_eq!(head.tail(kt), zero.clone());
        prop_assert_eq!(tail.project(kt, nmax), zero);
    }
}

/// `‖(I − S^j) e_k‖ / ‖e_k‖ = |1 − e^{4πijk/3}|`, which is `√3` off the
/// multiples of three and zero on them.
#[test]
fn shift_defect_norms() {
    let kmax = 40;
    let w = weights(kmax);
    let one = ChebSeries::constant(Interval::ONE);
    for j in 1..=2 {
        let mut sup = Interval::ZERO;
        for k in 0..=kmax {
            let e = FourierCheb::cos_mode(k, &one);
            let d = e.sub(&e.shift(j));
            let ratio = cplx_abs(d.get(k as i64, 0)).try_div(cplx_abs(e.get(k as i64, 0))).unwrap();
            if k % 3 == 0 {
                assert!(ratio.is_zero(), "k={k}");
            } else {
                assert!(ratio.contains(3f64.sqrt()), "k={k}: {ratio:?}");
                assert!(ratio.width() <= 1e-12);
                let full = d.nu_norm(&w).try_div(e.nu_norm(&w)).unwrap();
                assert!(full.intersects(sqrt3()));
            }
            sup = sup.hull(ratio);
        }
        assert!(sup.contains(3f64.sqrt()) && sup.hi() <= sqrt3().hi() + 1e-12);
    }
}
