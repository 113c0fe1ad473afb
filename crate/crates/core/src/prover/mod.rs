//! Rigorous bounds for the Newton-like operator `T(x) = x - A F(x)` around
//! the numerical branch, and the contraction certificate.

pub mod certificate;
pub mod grid;
pub mod norms;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::matrix::Mat;
use crate::model::{residual_conforms, Entry, Field, Layout, Linearization, Point, State, FIELDS};
use crate::rigor::{prod_up, quot_up, sqrt3, sum_up, Interval};
use crate::series::{Domain, FourierCheb, FourierSlice, SymClass, Weights};

pub use certificate::{certify, ProofCertificate};
pub use grid::GaussGrid;
pub use norms::{component_norms, units, ChebMags, ComponentNorms, Unit};

/// Y, Z1 and the data Z2 depends on, with an itemized breakdown.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bounds {
    pub y: f64,
    pub z1: f64,
    /// `‖A‖ ≤ max(‖A_finite‖, 1/(K+1))`.
    pub a_norm: f64,
    pub norms: ComponentNorms,
    /// Every residual enclosure had vanishing off-class parts.
    pub residual_conforms: bool,
    pub items: BTreeMap<String, f64>,
}

/// `‖Ω²‖_X` and `‖2Ω‖_X` on the parameter domain.
pub fn omega_norms(d: Domain) -> (f64, f64) {
    let (c, h) = d.affine();
    let two = Interval::point(2.0);
    let half = Interval::point(0.5);
    let o2 = [c * c + h * h * half, two * c * h, h * h * half];
    let n2 = sum_up(o2[0].mag(), sum_up(o2[1].mag(), o2[2].mag()));
    let n1 = sum_up((two * c).mag(), (two * h).mag());
    (n2, n1)
}

/// Operator norm of the approximate inverse with Chebyshev entries.
pub fn a_fin_norm(a_fin: &[Mat<f64>], layout: &Layout, w: &Weights) -> f64 {
    ChebMags::from_coeff_mats(a_fin).op_norm(layout, layout, w).0
}

/// `A(s) = Σ_n T_n(s) A_n` enclosed.
fn eval_a(a_fin: &[Mat<f64>], tn: &[Interval]) -> Mat<Interval> {
    let (r, c) = (a_fin[0].rows(), a_fin[0].cols());
    let mut out = Mat::zeros(r, c);
    for (m, &t) in a_fin.iter().zip(tn) {
        for (o, &v) in out.data_mut().iter_mut().zip(m.data()) {
            if v != 0.0 {
                *o += t * Interval::point(v);
            }
        }
    }
    out
}

const MULTIPLIERS: [&str; 16] = [
    "w3", "rw3", "w3_lae1", "w3_lae2", "w3_lae3", "w3_lad1", "w3_lad2", "w3_lad3", "gw_a1",
    "gw_a2", "gw_a3", "gw_b1", "gw_b2", "gw_b3", "hw", "ha",
];

fn multipliers(lin: &Linearization<Interval>) -> Vec<FourierSlice<Interval>> {
    let mut v = vec![lin.pt.w3.clone(), lin.pt.rw3.clone()];
    v.extend(lin.w3_lae.iter().cloned());
    v.extend(lin.w3_lad.iter().cloned());
    v.extend(lin.gw_a.iter().cloned());
    v.extend(lin.gw_b.iter().cloned());
    v.push(lin.hw.clone());
    v.push(lin.ha.clone());
    v
}

/// `2 w(0)² (L_a d)_i(0)` for each `i`, then `2 w(0) q(0)`.
fn point_scalars(lin: &Linearization<Interval>) -> Vec<Interval> {
    let two = Interval::point(2.0);
    let mut v: Vec<Interval> = lin.lad0.iter().map(|&l| two * lin.w0 * lin.w0 * l).collect();
    v.push(two * lin.w0 * lin.q0);
    v
}

/// Bounds on `‖(ik)^{-1} Π_∞ (φ δ)‖` for a unit column `δ` at order `k'`,
/// with `Π_∞` keeping the orders above `K`.
#[derive(Clone, Debug)]
struct TailProfile {
    /// Indexed by `k'` for `0 ≤ k' ≤ 2K`.
    cols: Vec<f64>,
    /// Uniform over `k' > 2K`.
    beyond: f64,
}

impl TailProfile {
    fn new(fc: &FourierCheb<Interval>, nu: Interval, k: usize) -> Self {
        let j = fc.kmax() as i64;
        let ki = k as i64;
        let w = Weights::new(nu, (j + 2 * ki + 1) as usize);
        let mags: Vec<f64> = (-j..=j)
            .map(|i| fc.mode(i).iter().fold(0.0, |acc, v| sum_up(acc, v.mag())))
            .collect();
        let mag = |i: i64| if i.abs() > j { 0.0 } else { mags[(i + j) as usize] };
        let mut cols = Vec::with_capacity(2 * k + 1);
        for kc in 0..=2 * ki {
            // Orders hit from the components at ±k'.
            let mut acc = 0.0;
            for row in -(j + kc)..=(j + kc) {
                if row.abs() <= ki {
                    continue;
                }
                let c = sum_up(mag(row - kc), mag(row + kc));
                if c == 0.0 {
                    continue;
                }
                acc = sum_up(acc, quot_up(prod_up(c, w.pow_up(row)), row.unsigned_abs() as f64));
            }
            cols.push(prod_up(prod_up(0.5, acc), w.inv_up(kc)));
        }
        // For k' > 2K the row order is at least max(K+1, 2K+1-|i|).
        let mut beyond = 0.0;
        for i in -j..=j {
            let den = (ki + 1).max(2 * ki + 1 - i.abs()) as f64;
            beyond = sum_up(beyond, quot_up(prod_up(mag(i), w.pow_up(i)), den));
        }
        Self { cols, beyond }
    }

    fn at(&self, kc: usize) -> f64 {
        self.cols[kc]
    }
}

/// Computes Y, Z1 and the ingredients of Z2 for a pinned branch.
pub fn evaluate_bounds(xbar: &State<Interval>, a_fin: &[Mat<f64>], nu: Interval) -> Bounds {
    let lk = xbar.layout().clone();
    let k = lk.k();
    let n = xbar.n();
    let l2k = Layout::new(2 * k);
    let (dk, d2k) = (lk.dim(), l2k.dim());
    let p = 7 * n + 1;
    let grid = GaussGrid::new(p, n, xbar.domain());
    let w = Weights::new(nu, 6 * k + 2);
    let emb = lk.embed_into(&l2k);

    let mut defect = Mat::<Interval>::zeros(p, dk * d2k);
    let mut af = Mat::<Interval>::zeros(p, dk);
    let mut tails: Vec<Vec<FourierSlice<Interval>>> = (0..7).map(|_| Vec::with_capacity(p)).collect();
    let mut mults: Vec<Vec<FourierSlice<Interval>>> = vec![Vec::with_capacity(p); MULTIPLIERS.len()];
    let mut scal: Vec<Vec<Interval>> = (0..4).map(|_| Vec::with_capacity(p)).collect();
    let mut conforms = true;

    for m in 0..p {
        let x = xbar.eval_tn(grid.tn(m));
        let pt = Point::new(&lk, &x, grid.omega(m));
        let res = pt.residual();
        conforms &= residual_conforms(&res);
        let rk = res.to_vec(&lk);
        for (t, f) in tails.iter_mut().zip(FIELDS) {
            t.push(res.field(f).tail(k));
        }
        let lin = Linearization::new(pt);
        for (acc, s) in mults.iter_mut().zip(multipliers(&lin)) {
            acc.push(s);
        }
        for (acc, s) in scal.iter_mut().zip(point_scalars(&lin)) {
            acc.push(s);
        }
        let am = eval_a(a_fin, grid.tn(m));
        let afm = am.midrad_mul(&Mat::from_vec(dk, 1, rk));
        af.data_mut()[m * dk..(m + 1) * dk].copy_from_slice(afm.data());
        let df = lin.matrix(&l2k, &lk);
        let mut prod = am.midrad_mul(&df);
        for (r, &c) in emb.iter().enumerate() {
            prod[(r, c)] -= Interval::ONE;
        }
        // I - A DF, negated entrywise; only magnitudes are used.
        defect.data_mut()[m * dk * d2k..(m + 1) * dk * d2k].copy_from_slice(prod.data());
    }

    let mut items = BTreeMap::new();
    let inv_k1 = quot_up(1.0, (k + 1) as f64);
    let s3 = sqrt3().hi();
    let (om2, two_om) = omega_norms(xbar.domain());

    // Y.
    let af_mags = ChebMags {
        rows: dk,
        cols: 1,
        ncoef: p,
        data: grid.transform_mags(&af, 4096),
    };
    let y_fin = af_mags.vec_norm(&lk, &w);
    let mut y_tail = 0.0;
    for (t, f) in tails.iter().zip(FIELDS) {
        let fc = grid.slices_to_fc(t, f.class());
        let v = fc.nu_norm_up(&w);
        items.insert(format!("Y.tail.{}", f.name()), v);
        y_tail = sum_up(y_tail, v);
    }
    let y = sum_up(y_fin, prod_up(inv_k1, y_tail));
    items.insert("Y.finite".into(), y_fin);

    // Multipliers: full norms, tail norms and tail-row profiles.
    let mut full = BTreeMap::new();
    let mut tail = BTreeMap::new();
    let mut prof = BTreeMap::new();
    for (name, sl) in MULTIPLIERS.iter().zip(&mults) {
        let fc = grid.slices_to_fc(sl, SymClass::GENERAL);
        full.insert(*name, fc.nu_norm_up(&w));
        tail.insert(*name, fc.tail(k).nu_norm_up(&w));
        prof.insert(*name, TailProfile::new(&fc, nu, k));
        items.insert(format!("mult.{name}"), full[name]);
        items.insert(format!("mult_tail.{name}"), tail[name]);
    }
    let sc: Vec<f64> = scal.iter().map(|v| grid.scalars_to_cheb(v).x_norm_up()).collect();
    let nuinv = w.inv_up(2 * k as i64 + 1);

    // Tail rows in the form `T / (K+1)`, kept for comparison.
    let mut t_cols = vec![("a".to_string(), tail["ha"])];
    for i in 0..3 {
        let planar = if i < 2 { om2 } else { 0.0 };
        let wa = MULTIPLIERS[2 + i];
        let wd = MULTIPLIERS[5 + i];
        let tu = sum_up(
            planar,
            prod_up(s3, sum_up(sum_up(full["w3"], full["rw3"]), full[wa])),
        );
        let tv = sum_up(1.0, sum_up(if i < 2 { two_om } else { 0.0 }, prod_up(s3, full[wd])));
        t_cols.push((format!("u{}", i + 1), tu));
        t_cols.push((format!("v{}", i + 1), tv));
    }
    let mut tw = full["hw"];
    for i in 0..3 {
        tw = sum_up(tw, sum_up(full[MULTIPLIERS[8 + i]], full[MULTIPLIERS[11 + i]]));
    }
    t_cols.push(("w".into(), tw));
    let t_max = t_cols.iter().map(|c| c.1).fold(0.0, f64::max);
    for (name, v) in &t_cols {
        items.insert(format!("Z1.tail_rows.{name}"), *v);
    }

    // Tail rows column by column: `Π_∞ DF` applied to one column, then
    // `(ik)^{-1}` row by row. `None` stands for every column beyond 2K.
    let tail_col = |entry: Option<Entry>, field: Field| -> f64 {
        let (kc, diag) = match entry {
            Some(Entry::Mode { k: kc, .. }) if kc > k => (Some(kc), quot_up(1.0, kc as f64)),
            Some(Entry::Mode { k: kc, .. }) => (Some(kc), 0.0),
            Some(Entry::Scalar(_)) => (None, 0.0),
            None => (None, quot_up(1.0, (2 * k + 1) as f64)),
        };
        let t = |name: &str| match kc {
            Some(kc) => prof[name].at(kc),
            None => prof[name].beyond,
        };
        // |1 - e^{±2πik/3}| is 0 on multiples of three and √3 otherwise.
        let shift = match kc {
            Some(kc) if kc % 3 == 0 => 0.0,
            _ => s3,
        };
        match (entry, field) {
            (Some(Entry::Scalar(0)), _) => prof["ha"].at(0),
            (Some(Entry::Scalar(_)), _) => 0.0,
            (_, Field::U(i)) => {
                let planar = if i < 2 { prod_up(om2, diag) } else { 0.0 };
                let m = sum_up(sum_up(t("w3"), t("rw3")), t(MULTIPLIERS[2 + i]));
                sum_up(planar, prod_up(shift, m))
            }
            (_, Field::V(i)) => {
                let c = if i < 2 { sum_up(1.0, two_om) } else { 1.0 };
                sum_up(prod_up(c, diag), prod_up(shift, t(MULTIPLIERS[5 + i])))
            }
            (_, Field::W) => {
                let mut acc = t("hw");
                for i in 0..3 {
                    acc = sum_up(acc, sum_up(t(MULTIPLIERS[8 + i]), t(MULTIPLIERS[11 + i])));
                }
                acc
            }
        }
    };

    // Columns beyond 2K, finite rows.
    let mut m_cols = Vec::new();
    for i in 0..3 {
        let wa = MULTIPLIERS[2 + i];
        let wd = MULTIPLIERS[5 + i];
        let eta = if i == 2 { nuinv } else { 0.0 };
        let gam = prod_up(prod_up(s3, sc[i]), nuinv);
        let mult = prod_up(s3, sum_up(sum_up(tail["w3"], tail["rw3"]), tail[wa]));
        m_cols.push((Field::U(i), sum_up(sum_up(eta, gam), mult)));
        m_cols.push((Field::V(i), prod_up(s3, tail[wd])));
    }
    let mut mw = sum_up(prod_up(sc[3], nuinv), tail["hw"]);
    for i in 0..3 {
        mw = sum_up(mw, sum_up(tail[MULTIPLIERS[8 + i]], tail[MULTIPLIERS[11 + i]]));
    }
    m_cols.push((Field::W, mw));
    let m_max = m_cols.iter().map(|c| c.1).fold(0.0, f64::max);
    for (f, v) in &m_cols {
        items.insert(format!("Z1.inf_block.{}", f.name()), *v);
    }

    // Finite block.
    let def_mags = ChebMags {
        rows: dk,
        cols: d2k,
        ncoef: p,
        data: grid.transform_mags(&defect, 4096),
    };
    drop(defect);
    let (z1_fin, fin_cols) = def_mags.op_norm(&lk, &l2k, &w);
    let a_fin_n = a_fin_norm(a_fin, &lk, &w);

    let mut z1_a = 0.0;
    for (u, fc) in units(&l2k).iter().zip(&fin_cols) {
        let e = l2k.entry(u.first);
        let field = match e {
            Entry::Mode { field, .. } => field,
            Entry::Scalar(_) => Field::W,
        };
        z1_a = f64::max(z1_a, sum_up(*fc, tail_col(Some(e), field)));
    }
    let mut z1_b = 0.0;
    for (f, m) in &m_cols {
        z1_b = f64::max(z1_b, sum_up(prod_up(a_fin_n, *m), tail_col(None, *f)));
    }
    let z1 = z1_a.max(z1_b);
    items.insert("Z1.finite_block".into(), z1_fin);
    items.insert("Z1.span_2K".into(), z1_a);
    items.insert("Z1.beyond_2K".into(), z1_b);
    items.insert(
        "Z1.uniform_tail_form".into(),
        sum_up(z1_fin.max(prod_up(a_fin_n, m_max)), prod_up(inv_k1, t_max)),
    );
    items.insert("A_finite".into(), a_fin_n);

    Bounds {
        y,
        z1,
        a_norm: a_fin_n.max(inv_k1),
        norms: component_norms(xbar, &Weights::new(nu, k + 1)),
        residual_conforms: conforms,
        items,
    }
}

/// Bound on `sup ‖A D²F(x)‖` over the closed ball of radius `r`.
///
/// Returns the bound and the per-pair constants `C_pq`, each bounding the
/// sum over output components of `‖∂_p ∂_q F‖`; the bilinear estimate
/// `Σ_pq C_pq ‖h_p‖ ‖k_q‖ ≤ max C_pq ‖h‖ ‖k‖` gives the operator norm.
pub fn z2_bound(norms: &ComponentNorms, a_norm: f64, r: f64) -> (f64, BTreeMap<String, f64>) {
    let hat = |v: f64| Interval::point(v) + Interval::point(r);
    let a = hat(norms.a);
    let u = norms.u.map(hat);
    let v = norms.v.map(hat);
    let w = hat(norms.w);
    let c = |x: f64| Interval::point(x);
    let s3 = sqrt3();
    let l = [Interval::ONE, Interval::ONE, a];
    let w2 = w.sqr();
    let w3 = w2 * w;
    let mut items = BTreeMap::new();
    items.insert("a,u3".into(), c(6.0) * w2 * u[2] + c(3.0) * w3 * v[2]);
    items.insert("a,v3".into(), c(3.0) * w3 * u[2]);
    items.insert("a,w".into(), c(6.0) * w * u[2].sqr() + c(9.0) * w2 * u[2] * v[2]);
    for i in 0..3 {
        let id = i + 1;
        items.insert(format!("u{id},u{id}"), c(6.0) * l[i] * w2);
        items.insert(format!("u{id},v{id}"), c(3.0) * l[i] * w3);
        items.insert(
            format!("u{id},w"),
            c(12.0) * l[i] * w * u[i] + c(9.0) * l[i] * w2 * v[i] + c(6.0) * s3 * w2,
        );
        items.insert(format!("v{id},w"), c(9.0) * l[i] * w2 * u[i]);
    }
    let q = (0..3).map(|i| l[i] * u[i].sqr()).sum::<Interval>();
    let pv = (0..3).map(|i| l[i] * u[i] * v[i]).sum::<Interval>();
    let us = u.iter().copied().sum::<Interval>();
    items.insert("w,w".into(), c(6.0) * q + c(18.0) * w * pv + c(12.0) * s3 * w * us);
    let cmax = items.values().map(|x| x.hi()).fold(0.0, f64::max);
    let z2 = prod_up(a_norm, cmax);
    let mut out: BTreeMap<String, f64> = items.into_iter().map(|(k, v)| (format!("Z2.{k}"), v.hi())).collect();
    out.insert("Z2.max_pair".into(), cmax);
    (z2, out)
}

/// Radii-polynomial test: `Y + Z1 r + Z2 r²/2 ≤ r` and `κ = Z1 + Z2 r < 1`.
pub fn radii_check(y: f64, z1: f64, z2: f64, r: f64) -> (bool, f64) {
    let ri = Interval::point(r);
    let lhs = Interval::point(y) + Interval::point(z1) * ri + Interval::point(z2) * ri.sqr() * Interval::point(0.5);
    let kappa = (Interval::point(z1) + Interval::point(z2) * ri).hi();
    (lhs.hi() <= r && kappa < 1.0, kappa)
}
