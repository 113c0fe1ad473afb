//! Floating-point continuation of the branch from the Lagrange triangle,
//! and the approximate inverse used by the proof.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Mat;
use crate::model::{jacobian_slice, residual_slice, Basis, Field, Layout, State};
use crate::rigor::Interval;
use crate::series::{dct, Domain, NormParams, SeriesError, Weights};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("singular Jacobian at Ω = {omega} (condition estimate {cond:e})")]
    Singular { omega: f64, cond: f64 },
    #[error("Newton did not converge at Ω = {omega}: residual {residual:e} after {iters} steps")]
    NoConvergence { omega: f64, residual: f64, iters: usize },
    #[error("continuation stalled below Ω = {last_good}")]
    Stalled { last_good: f64, source: Box<SolverError> },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Maximal number of step halvings between consecutive nodes.
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iters: 20,
            max_halvings: 8,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeSolution {
    pub omega: f64,
    pub x: Vec<f64>,
    /// Weighted norm of the projected residual.
    pub residual: f64,
    pub newton_iters: usize,
}

/// Lobatto nodes of `domain`, descending from `hi` to `lo`.
pub fn chebyshev_nodes(n: usize, domain: Domain) -> Vec<f64> {
    let mut om: Vec<f64> = dct::lobatto_nodes(n)
        .into_iter()
        .map(|s| domain.omega_f64(s))
        .collect();
    om[0] = domain.hi;
    om[n] = domain.lo;
    om
}

/// Triangle amplitudes `(3^{-1/6}, 3^{-1/3})`, enclosed.
pub fn triangle_constants() -> (Interval, Interval) {
    let r = crate::rigor::cbrt(Interval::point(3.0).try_sqrt().expect("positive"));
    let inv = |x: Interval| Interval::ONE.try_div(x).expect("nonzero");
    (inv(r), inv(crate::rigor::cbrt(Interval::point(3.0))))
}

/// Nonzero entries of the Lagrange triangle slice at `Ω = 1`:
/// `u = (c cos 2t, c sin 2t, cos t)`, `v = ∂_t u`, `w = 3^{-1/3}`.
pub fn triangle_entries() -> Vec<(Field, Basis, usize, Interval)> {
    let (c, w) = triangle_constants();
    let two = Interval::point(2.0);
    vec![
        (Field::U(0), Basis::Cos, 2, c),
        (Field::U(1), Basis::Sin, 2, c),
        (Field::U(2), Basis::Cos, 1, Interval::ONE),
        (Field::V(0), Basis::Sin, 2, -(two * c)),
        (Field::V(1), Basis::Cos, 2, two * c),
        (Field::V(2), Basis::Sin, 1, -Interval::ONE),
        (Field::W, Basis::Cos, 0, w),
    ]
}

pub fn triangle_seed(layout: &Layout) -> Vec<f64> {
    let mut x = vec![0.0; layout.dim()];
    for (f, b, k, v) in triangle_entries() {
        x[layout.index(f, b, k).expect("K ≥ 2")] = v.mid();
    }
    x
}

fn residual_norm(layout: &Layout, x: &[f64], omega: f64, w: &Weights) -> f64 {
    layout.nu_norm_up(&residual_slice(layout, x, omega, layout), w)
}

fn lu_solve(j: &Mat<f64>, rhs: &[f64], omega: f64) -> Result<Vec<f64>, SolverError> {
    let m = j.to_nalgebra();
    let lu = m.lu();
    let sol = lu
        .solve(&DVector::from_column_slice(rhs))
        .ok_or(SolverError::Singular {
            omega,
            cond: f64::INFINITY,
        })?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(SolverError::Singular {
            omega,
            cond: f64::INFINITY,
        });
    }
    Ok(sol.as_slice().to_vec())
}

/// Newton's method on the projected map at a fixed parameter value.
pub fn newton_at_node(
    layout: &Layout,
    omega: f64,
    guess: &[f64],
    w: &Weights,
    opts: &NewtonOptions,
) -> Result<NodeSolution, SolverError> {
    let mut x = guess.to_vec();
    let mut res = residual_norm(layout, &x, omega, w);
    let mut iters = 0;
    while res > opts.tol {
        if iters == opts.max_iters || !res.is_finite() {
            return Err(SolverError::NoConvergence {
                omega,
                residual: res,
                iters,
            });
        }
        let r = residual_slice(layout, &x, omega, layout);
        let j = jacobian_slice(layout, &x, omega);
        let dx = lu_solve(&j, &r, omega)?;
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi -= di;
        }
        iters += 1;
        // Round-off floor: stop once progress stalls near the tolerance.
        let new = residual_norm(layout, &x, omega, w);
        let stalled = new >= 0.5 * res && new <= 1e3 * opts.tol;
        res = new;
        if stalled {
            break;
        }
    }
    Ok(NodeSolution {
        omega,
        x,
        residual: res,
        newton_iters: iters,
    })
}

/// Sequence of node solutions with `Ω` descending from `domain.hi`.
pub fn continue_nodes(
    params: &NormParams,
    domain: Domain,
    opts: &NewtonOptions,
) -> Result<Vec<NodeSolution>, SolverError> {
    let layout = Layout::new(params.k);
    let w = params.weights(params.k);
    let nodes = chebyshev_nodes(params.n, domain);
    let seed = if domain.hi == 1.0 {
        NodeSolution {
            omega: 1.0,
            residual: residual_norm(&layout, &triangle_seed(&layout), 1.0, &w),
            x: triangle_seed(&layout),
            newton_iters: 0,
        }
    } else {
        let start = continue_nodes(params, Domain::new(domain.hi, 1.0)?, opts)?;
        let last = start.last().expect("nonempty");
        newton_at_node(&layout, domain.hi, &last.x, &w, opts)?
    };
    let mut out = vec![seed];
    // Previous two accepted points for the secant predictor.
    let mut prev: Option<(f64, Vec<f64>)> = None;
    for &target in &nodes[1..] {
        let mut cur = out.last().expect("nonempty").clone();
        let mut step = cur.omega - target;
        let mut halvings = 0;
        while cur.omega > target {
            let om = (cur.omega - step).max(target);
            let guess: Vec<f64> = match &prev {
                Some((po, px)) => {
                    let t = (om - cur.omega) / (cur.omega - po);
                    cur.x.iter().zip(px).map(|(a, b)| a + t * (a - b)).collect()
                }
                None => cur.x.clone(),
            };
            match newton_at_node(&layout, om, &guess, &w, opts) {
                Ok(sol) => {
                    prev = Some((cur.omega, cur.x.clone()));
                    cur = sol;
                }
                Err(e) => {
                    halvings += 1;
                    if halvings > opts.max_halvings {
                        return Err(SolverError::Stalled {
                            last_good: cur.omega,
                            source: Box::new(e),
                        });
                    }
                    step *= 0.5;
                }
            }
        }
        cur.omega = target;
        out.push(cur);
    }
    Ok(out)
}

/// Numerical candidate: the branch interpolant and the approximate inverse.
#[derive(Clone, Debug)]
pub struct BranchCandidate {
    pub params: NormParams,
    pub xbar: State<f64>,
    /// Chebyshev coefficients `A_n` of the approximate inverse, `0 ≤ n ≤ N`.
    pub a_fin: Vec<Mat<f64>>,
    pub nodes: Vec<NodeSolution>,
}

/// Inverse of the Jacobian at every node, interpolated in the parameter.
pub fn approximate_inverse(xbar: &State<f64>) -> Result<Vec<Mat<f64>>, SolverError> {
    let layout = xbar.layout();
    let n = xbar.n();
    let dim = layout.dim();
    let d = xbar.domain();
    let mut invs = Vec::with_capacity(n + 1);
    for s in dct::lobatto_nodes(n) {
        let om = d.omega_f64(s);
        let x = xbar.eval_s(s);
        let j = jacobian_slice(layout, &x, om).to_nalgebra();
        let inv = j.try_inverse().ok_or(SolverError::Singular {
            omega: om,
            cond: f64::INFINITY,
        })?;
        invs.push(inv);
    }
    let mut out = vec![Mat::zeros(dim, dim); n + 1];
    let mut vals = vec![0.0; n + 1];
    let lob = dct::lobatto_matrix::<f64>(n);
    for r in 0..dim {
        for c in 0..dim {
            for (j, inv) in invs.iter().enumerate() {
                vals[j] = inv[(r, c)];
            }
            let cs = dct::apply_lobatto(&lob, &vals);
            for (m, &v) in cs.coeffs().iter().enumerate() {
                out[m][(r, c)] = v;
            }
        }
    }
    Ok(out)
}

/// Values `T_n(s)` at `s`, for `0 ≤ n ≤ nmax`.
pub fn cheb_values(s: f64, nmax: usize) -> Vec<f64> {
    let mut t = vec![1.0; nmax + 1];
    if nmax >= 1 {
        t[1] = s;
    }
    for n in 2..=nmax {
        t[n] = 2.0 * s * t[n - 1] - t[n - 2];
    }
    t
}

/// `A(Ω)` from its Chebyshev coefficients.
pub fn eval_inverse(a_fin: &[Mat<f64>], s: f64) -> DMatrix<f64> {
    let tn = cheb_values(s, a_fin.len() - 1);
    let (r, c) = (a_fin[0].rows(), a_fin[0].cols());
    let mut out = DMatrix::zeros(r, c);
    for (m, t) in a_fin.iter().zip(&tn) {
        out += m.to_nalgebra() * *t;
    }
    out
}

/// Continuation followed by interpolation and approximate inversion.
pub fn continue_branch(
    params: &NormParams,
    domain: Domain,
    opts: &NewtonOptions,
) -> Result<BranchCandidate, SolverError> {
    let nodes = continue_nodes(params, domain, opts)?;
    let layout = Layout::new(params.k);
    let mut slices: Vec<Vec<f64>> = nodes.iter().map(|n| n.x.clone()).collect();
    if domain.hi == 1.0 {
        slices[0] = triangle_seed(&layout);
    }
    if domain.lo == 0.0 {
        let last = slices.last_mut().expect("nonempty");
        for f in [Field::U(0), Field::V(0)] {
            for i in layout.block(f) {
                last[i] = 0.0;
            }
        }
    }
    let xbar = State::from_nodes(layout, domain, &slices)?;
    let a_fin = approximate_inverse(&xbar)?;
    Ok(BranchCandidate {
        params: *params,
        xbar,
        a_fin,
        nodes,
    })
}
