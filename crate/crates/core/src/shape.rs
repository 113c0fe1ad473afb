//! Endpoint identification and the sign analysis showing that the `Ω = 0`
//! end of the branch traces a figure eight.
//!
//! Both endpoints are imposed on the interval candidate by solving for its
//! lowest Chebyshev coefficients, so that some member of the coefficient box
//! meets the endpoint conditions exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Field, Layout, State};
use crate::rigor::{int_pow, pi, Interval};
use crate::series::FourierSlice;
use crate::solver::triangle_entries;

/// Largest width accepted for a pinned endpoint value.
pub const PIN_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapeError {
    #[error("the planar endpoint has not been verified")]
    PlanarUnverified,
    #[error("a(0) = {0} is not positive")]
    NonPositiveScale(String),
    #[error("sign of the enclosure undecided on [{lo}, {hi}]: {enclosure}")]
    Inconclusive { lo: f64, hi: f64, enclosure: String },
    #[error("the domain does not reach Ω = {0}")]
    MissingEndpoint(f64),
    #[error("ν = {0} must exceed 1")]
    NuTooSmall(f64),
}

/// Target values at `Ω = 1`, indexed by coordinate.
fn triangle_targets(l: &Layout) -> Vec<Interval> {
    let mut t = vec![Interval::ZERO; l.dim()];
    for (f, b, k, v) in triangle_entries() {
        t[l.index(f, b, k).expect("K ≥ 2")] = v;
    }
    t
}

fn planar_rows(l: &Layout) -> impl Iterator<Item = usize> + '_ {
    l.block(Field::U(0)).chain(l.block(Field::V(0)))
}

/// Interval candidate whose `Ω = 1` slice is the Lagrange triangle and
/// whose `u1, v1` blocks vanish at `Ω = 0`, for the endpoints the domain
/// contains.
pub fn pin_endpoints(x: &State<f64>) -> State<Interval> {
    let mut out = x.to_interval();
    let l = x.layout().clone();
    let d = x.domain();
    let top = (d.hi == 1.0).then(|| triangle_targets(&l));
    let planar: Vec<bool> = {
        let mut p = vec![false; l.dim()];
        if d.lo == 0.0 {
            for i in planar_rows(&l) {
                p[i] = true;
            }
        }
        p
    };
    let half = Interval::point(0.5);
    let c = out.coeffs_mut();
    let ncoef = c.cols();
    for i in 0..l.dim() {
        let row = c.row(i).to_vec();
        match (&top, planar[i]) {
            (Some(t), true) if ncoef >= 2 => {
                let a: Interval = row[2..].iter().copied().sum();
                let b: Interval = row[2..]
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| if j % 2 == 0 { v } else { -v })
                    .sum();
                c[(i, 0)] = (t[i] - a - b) * half;
                c[(i, 1)] = (t[i] - a + b) * half;
            }
            (Some(t), _) => {
                let rest: Interval = row[1..].iter().copied().sum();
                c[(i, 0)] = t[i] - rest;
            }
            (None, true) => {
                let rest: Interval = row[1..]
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| if j % 2 == 0 { v } else { -v })
                    .sum();
                c[(i, 0)] = rest;
            }
            (None, false) => {}
        }
    }
    out
}

fn endpoint_slice(x: &State<Interval>, s: f64) -> Vec<Interval> {
    let tn: Vec<Interval> = (0..=x.n())
        .map(|n| Interval::point(if s < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 }))
        .collect();
    x.eval_tn(&tn)
}

fn pinned(v: Interval, target: Interval) -> bool {
    target.is_subset_of(v) && v.width() <= PIN_TOL
}

/// The `Ω = 1` slice encloses the triangle coordinates to within `PIN_TOL`.
pub fn check_triangle_endpoint(x: &State<Interval>) -> bool {
    if x.domain().hi != 1.0 {
        return false;
    }
    endpoint_slice(x, 1.0)
        .iter()
        .zip(triangle_targets(x.layout()))
        .all(|(&v, t)| pinned(v, t))
}

/// The `u1, v1` blocks vanish at `Ω = 0`.
pub fn check_planar_endpoint(x: &State<Interval>) -> bool {
    if x.domain().lo != 0.0 {
        return false;
    }
    let v = endpoint_slice(x, -1.0);
    planar_rows(x.layout()).all(|i| pinned(v[i], Interval::ZERO))
}

/// `sup_{k ≥ 0} k^m ν^{-k}`: bounds `|φ^{(m)}(t)|` by the ν-norm of `φ`.
pub fn derivative_gain(nu: Interval, m: u32) -> Result<f64, ShapeError> {
    if nu.lo() <= 1.0 {
        return Err(ShapeError::NuTooSmall(nu.lo()));
    }
    if m == 0 {
        return Ok(1.0);
    }
    let rho = Interval::ONE.try_div(nu).expect("ν > 1");
    let mut best: f64 = 0.0;
    let mut rho_k = Interval::ONE;
    let mut k = 0u64;
    loop {
        k += 1;
        rho_k *= rho;
        let kf = Interval::point(k as f64);
        best = best.max((int_pow(kf, m) * rho_k).hi());
        // Past the peak the terms decrease.
        let ratio = int_pow(Interval::ONE + Interval::ONE.try_div(kf).expect("k ≥ 1"), m) * rho;
        if ratio.hi() < 1.0 {
            return Ok(best);
        }
    }
}

/// Enclosures of `μ = U_y U̇_z − U_z U̇_y` and its derivatives at `Ω = 0`
/// for every solution within `r` of the candidate.
#[derive(Clone, Debug)]
pub struct MuEnclosure {
    sqrt_a: Interval,
    /// `u2, u3, v2, v3` and their first three time derivatives.
    derivs: [[FourierSlice<Interval>; 4]; 4],
    /// `r · sup k^j ν^{-k}` for `j ≤ 3`.
    errs: [f64; 4],
}

impl MuEnclosure {
    pub fn new(x: &State<Interval>, nu: Interval, r: f64) -> Result<Self, ShapeError> {
        if !check_planar_endpoint(x) {
            return Err(ShapeError::PlanarUnverified);
        }
        let slice = endpoint_slice(x, -1.0);
        let a = slice[0] + Interval::new(-r, r);
        if !a.is_strictly_positive() {
            return Err(ShapeError::NonPositiveScale(format!("{a}")));
        }
        let sqrt_a = a.try_sqrt().expect("positive");
        let s = x.layout().to_slices(&slice);
        let base = [Field::U(1), Field::U(2), Field::V(1), Field::V(2)].map(|f| s.field(f).clone());
        let derivs = base.map(|b| {
            let d1 = b.diff_t();
            let d2 = d1.diff_t();
            let d3 = d2.diff_t();
            [b, d1, d2, d3]
        });
        let mut errs = [0.0; 4];
        for (j, e) in errs.iter_mut().enumerate() {
            *e = (Interval::point(r) * Interval::point(derivative_gain(nu, j as u32)?)).hi();
        }
        Ok(Self { sqrt_a, derivs, errs })
    }

    fn factor(&self, which: usize, j: usize, t: Interval) -> Interval {
        self.derivs[which][j].eval_enclosure(t) + Interval::new(-self.errs[j], self.errs[j])
    }

    /// Enclosure of `μ^{(m)}` over `t`, `m ≤ 3`.
    pub fn eval(&self, t: Interval, m: usize) -> Interval {
        assert!(m <= 3);
        let binom = [[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0], [1.0, 3.0, 3.0, 1.0]];
        let mut acc = Interval::ZERO;
        for j in 0..=m {
            let term = self.factor(0, j, t) * self.factor(3, m - j, t)
                - self.factor(1, j, t) * self.factor(2, m - j, t);
            acc += Interval::point(binom[m][j]) * term;
        }
        self.sqrt_a * acc
    }

    /// `U(π/2) = 0` and `U_y U̇_z − U_z U̇_y` contains only odd cosines, so
    /// `μ` and `μ̈` vanish at `π/2` and `μ̇(π/2) = U × Ü = 0`.
    pub fn structural_zeros(&self) -> bool {
        let [u2, u3, v2, v3] = [0, 1, 2, 3].map(|i| &self.derivs[i][0]);
        let even_sin = |s: &FourierSlice<Interval>| s.iter().all(|(k, v)| v.is_zero() || (k % 2 == 0 && v.re.is_zero()));
        let odd_cos = |s: &FourierSlice<Interval>| s.iter().all(|(k, v)| v.is_zero() || (k % 2 != 0 && v.im.is_zero()));
        let even_cos = |s: &FourierSlice<Interval>| s.iter().all(|(k, v)| v.is_zero() || (k % 2 == 0 && v.im.is_zero()));
        let odd_sin = |s: &FourierSlice<Interval>| s.iter().all(|(k, v)| v.is_zero() || (k % 2 != 0 && v.re.is_zero()));
        even_sin(u2) && odd_cos(u3) && even_cos(v2) && odd_sin(v3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    fn holds(self, v: Interval) -> bool {
        match self {
            Sign::Negative => v.is_strictly_negative(),
            Sign::Positive => v.is_strictly_positive(),
        }
    }
}

/// Pieces covering a range on which an enclosure has a strict sign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignCover {
    pub pieces: Vec<[f64; 2]>,
    /// Smallest distance of an accepted enclosure from zero.
    pub margin: f64,
}

impl SignCover {
    /// The pieces abut and span exactly `[lo, hi]`.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        !self.pieces.is_empty()
            && self.pieces[0][0] == lo
            && self.pieces[self.pieces.len() - 1][1] == hi
            && self.pieces.windows(2).all(|p| p[0][1] == p[1][0])
    }
}

/// Adaptive bisection of `[lo, hi]` until each piece has the required sign.
pub fn certify_sign<F>(f: F, lo: f64, hi: f64, sign: Sign, min_width: f64) -> Result<SignCover, ShapeError>
where
    F: Fn(Interval) -> Interval,
{
    let mut pieces = Vec::new();
    let mut margin = f64::INFINITY;
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let e = f(Interval::new(a, b));
        if sign.holds(e) {
            pieces.push([a, b]);
            margin = margin.min(e.mig());
            continue;
        }
        let m = 0.5 * (a + b);
        if b - a < min_width || m <= a || m >= b {
            return Err(ShapeError::Inconclusive {
                lo: a,
                hi: b,
                enclosure: format!("{e}"),
            });
        }
        stack.push((m, b));
        stack.push((a, m));
    }
    Ok(SignCover { pieces, margin })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EightOptions {
    /// End of the range where `μ < 0` is checked directly.
    pub split: f64,
    pub min_width: f64,
}

impl Default for EightOptions {
    fn default() -> Self {
        Self {
            split: 1.5,
            min_width: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub triangle_ok: bool,
    pub planar_ok: bool,
    pub structural_ok: bool,
    pub mu_negative_on: Option<SignCover>,
    pub mu3_positive_on: Option<SignCover>,
    pub margin: f64,
    pub failure: Option<String>,
}

impl ShapeReport {
    pub fn eight_ok(&self) -> bool {
        self.planar_ok
            && self.structural_ok
            && self.mu_negative_on.is_some()
            && self.mu3_positive_on.is_some()
            && self.margin > 0.0
    }
}

/// `μ < 0` on `[0, split]` and `μ‴ > 0` on `[split, π/2]`. Together with
/// `μ = μ̇ = μ̈ = 0` at `π/2` this gives `μ < 0` on `(0, π/2)`.
pub fn verify_eight(x: &State<Interval>, nu: Interval, r: f64, opts: &EightOptions) -> Result<ShapeReport, ShapeError> {
    let mu = MuEnclosure::new(x, nu, r)?;
    let mut report = ShapeReport {
        triangle_ok: check_triangle_endpoint(x),
        planar_ok: true,
        structural_ok: mu.structural_zeros(),
        mu_negative_on: None,
        mu3_positive_on: None,
        margin: 0.0,
        failure: None,
    };
    let half_pi = (pi() * Interval::point(0.5)).hi();
    let first = certify_sign(|t| mu.eval(t, 0), 0.0, opts.split, Sign::Negative, opts.min_width);
    let second = certify_sign(|t| mu.eval(t, 3), opts.split, half_pi, Sign::Positive, opts.min_width);
    match (first, second) {
        (Ok(a), Ok(b)) => {
            report.margin = a.margin.min(b.margin);
            report.mu_negative_on = Some(a);
            report.mu3_positive_on = Some(b);
        }
        (Err(e), _) | (_, Err(e)) => report.failure = Some(e.to_string()),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat;
    use crate::model::Basis;
    use crate::series::Domain;

    fn triangle_state(k: usize, n: usize, d: Domain) -> State<f64> {
        let l = Layout::new(k);
        State::constant(l.clone(), n, d, &crate::solver::triangle_seed(&l))
    }

    #[test]
    fn pinning_recovers_triangle() {
        let x = triangle_state(6, 4, Domain::UNIT);
        let p = pin_endpoints(&x);
        assert!(check_triangle_endpoint(&p));
        // The triangle has u1 ≠ 0, so the planar end fails unless pinned.
        assert!(check_planar_endpoint(&p));
        assert!(!check_planar_endpoint(&x.to_interval()));
    }

    #[test]
    fn perturbed_triangle_fails() {
        let mut x = triangle_state(6, 4, Domain::UNIT);
        let mut p = pin_endpoints(&x);
        let i = p.layout().index(Field::W, Basis::Cos, 0).unwrap();
        p.coeffs_mut()[(i, 2)] += Interval::point(1e-9);
        assert!(!check_triangle_endpoint(&p));
        // An unpinned float state misses the irrational amplitudes.
        x.coeffs_mut()[(i, 0)] += 1e-9;
        assert!(!check_triangle_endpoint(&x.to_interval()));
    }

    #[test]
    fn planar_checks() {
        let l = Layout::new(4);
        let z = State::<Interval>::zeros(l.clone(), 3, Domain::UNIT);
        assert!(check_planar_endpoint(&z));
        let mut y = z.clone();
        let i = l.index(Field::U(0), Basis::Cos, 2).unwrap();
        y.coeffs_mut()[(i, 0)] = Interval::point(1e-12);
        assert!(!check_planar_endpoint(&y));
        let sub = State::<Interval>::from_coeffs(l.clone(), Domain::new(0.5, 1.0).unwrap(), Mat::zeros(l.dim(), 2));
        assert!(!check_planar_endpoint(&sub));
    }

    #[test]
    fn pinning_both_ends_of_one_row() {
        let l = Layout::new(4);
        let mut x = State::<f64>::zeros(l.clone(), 5, Domain::UNIT);
        let i = l.index(Field::U(0), Basis::Cos, 2).unwrap();
        for n in 0..=5 {
            x.coeffs_mut()[(i, n)] = 0.1 * (n as f64 + 1.0);
        }
        let p = pin_endpoints(&x);
        let top = endpoint_slice(&p, 1.0)[i];
        let bottom = endpoint_slice(&p, -1.0)[i];
        let (c, _) = crate::solver::triangle_constants();
        assert!(c.is_subset_of(top) && top.width() < 1e-14);
        assert!(bottom.contains(0.0) && bottom.width() < 1e-14);
    }

    #[test]
    fn gains() {
        let nu = Interval::ratio(11, 10);
        assert_eq!(derivative_gain(nu, 0).unwrap(), 1.0);
        // k/1.1^k peaks at k = 10: 10/1.1^10 ≈ 3.855.
        let g1 = derivative_gain(nu, 1).unwrap();
        assert!((g1 - 3.855_432_894_295_314).abs() < 1e-12, "{g1}");
        let brute = (1..400).map(|k| (k as f64).powi(3) / 1.1f64.powi(k)).fold(0.0, f64::max);
        let g3 = derivative_gain(nu, 3).unwrap();
        assert!(g3 >= brute && g3 < brute * (1.0 + 1e-12));
        assert!(derivative_gain(Interval::ONE, 1).is_err());
    }

    #[test]
    fn sign_of_constants_and_lines() {
        let c = certify_sign(|_| Interval::point(-1.0), 0.0, 3.0, Sign::Negative, 1e-4).unwrap();
        assert_eq!(c.pieces, vec![[0.0, 3.0]]);
        assert_eq!(c.margin, 1.0);
        let err = certify_sign(|t| t - Interval::ONE, 0.0, 2.0, Sign::Negative, 1e-4).unwrap_err();
        let ShapeError::Inconclusive { lo, hi, .. } = err else {
            panic!()
        };
        assert!(lo <= 1.0 && hi >= 1.0 - 1e-4);
        // Dependency makes wide enclosures of t − t straddle zero.
        let ok = certify_sign(|t| t - t - Interval::point(1e-3), 0.0, 0.9, Sign::Negative, 1e-4).unwrap();
        assert!(ok.covers(0.0, 0.9) && ok.pieces.len() > 1);
    }

    #[test]
    fn mu_needs_planar_end() {
        let x = triangle_state(6, 4, Domain::UNIT).to_interval();
        let e = MuEnclosure::new(&x, Interval::ratio(11, 10), 1e-6).unwrap_err();
        assert_eq!(e, ShapeError::PlanarUnverified);
    }
}
