//! The proof record: bounds, radii test, endpoint and shape checks.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{evaluate_bounds, radii_check, z2_bound, ComponentNorms};
use crate::matrix::Mat;
use crate::model::State;
use crate::rigor::Interval;
use crate::series::NormParams;
use crate::shape::{
    check_planar_endpoint, check_triangle_endpoint, pin_endpoints, verify_eight, EightOptions, ShapeReport,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub params: NormParams,
    /// Parameter domain `[lo, hi]`.
    pub domain: [f64; 2],
    pub r: f64,
    pub y: f64,
    pub z1: f64,
    pub z2: f64,
    pub kappa: f64,
    /// `‖A‖` bound entering `Z2`.
    pub a_norm: f64,
    pub contraction_ok: bool,
    pub injectivity_ok: bool,
    /// Every residual enclosure respected its symmetry class.
    pub residual_conforms: bool,
    /// `None` when the domain does not contain the endpoint.
    pub endpoint_triangle_ok: Option<bool>,
    pub endpoint_planar_ok: Option<bool>,
    pub eight_shape_ok: Option<bool>,
    /// Smallest radius passing the radii test for these `Y, Z1` and the
    /// `Z2` computed at `r`.
    pub smallest_radius: Option<f64>,
    pub failures: Vec<String>,
    pub norms: ComponentNorms,
    pub items: BTreeMap<String, f64>,
    pub shape: Option<ShapeReport>,
    /// SHA-256 of the candidate coefficients and of any input files.
    pub digests: BTreeMap<String, String>,
    pub seconds: f64,
}

impl ProofCertificate {
    /// Contraction and every applicable endpoint and shape check passed.
    pub fn all_ok(&self) -> bool {
        self.contraction_ok
            && self.injectivity_ok
            && self.residual_conforms
            && self.endpoint_triangle_ok != Some(false)
            && self.endpoint_planar_ok != Some(false)
            && self.eight_shape_ok != Some(false)
    }

    /// Proves the full branch: both endpoints present and verified.
    pub fn proves_branch(&self) -> bool {
        self.all_ok()
            && self.endpoint_triangle_ok == Some(true)
            && self.endpoint_planar_ok == Some(true)
            && self.eight_shape_ok == Some(true)
    }

    /// The certificate without its wall-clock time, for comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            seconds: 0.0,
            ..self.clone()
        }
    }
}

fn digest_f64s<'a>(vals: impl Iterator<Item = &'a f64>) -> String {
    let mut h = Sha256::new();
    for v in vals {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn candidate_digest(xbar: &State<f64>, a_fin: &[Mat<f64>]) -> (String, String) {
    (
        digest_f64s(xbar.coeffs().data().iter()),
        digest_f64s(a_fin.iter().flat_map(|m| m.data().iter())),
    )
}

/// Smallest `r > 0` with `Y + Z1 r + Z2 r²/2 ≤ r`, verified.
pub fn smallest_radius(y: f64, z1: f64, z2: f64) -> Option<f64> {
    if z1 >= 1.0 {
        return None;
    }
    let b = 1.0 - z1;
    let disc = b * b - 2.0 * z2 * y;
    if disc < 0.0 {
        return None;
    }
    let r0 = if z2 == 0.0 { y / b } else { 2.0 * y / (b + disc.sqrt()) };
    // Nudge upward until the rigorous test accepts.
    let mut r = r0.max(f64::MIN_POSITIVE);
    for _ in 0..256 {
        if radii_check(y, z1, z2, r).0 {
            return Some(r);
        }
        r *= 1.0 + 1e-14;
    }
    None
}

/// Runs the proof for a numerical candidate at radius `r`.
pub fn certify(
    params: &NormParams,
    xbar: &State<f64>,
    a_fin: &[Mat<f64>],
    r: f64,
    eight: &EightOptions,
) -> ProofCertificate {
    let start = Instant::now();
    let pinned = pin_endpoints(xbar);
    let nu = params.nu();
    let b = evaluate_bounds(&pinned, a_fin, nu);
    let (z2, z2_items) = z2_bound(&b.norms, b.a_norm, r);
    let (radii_ok, kappa) = radii_check(b.y, b.z1, z2, r);
    let mut items = b.items.clone();
    items.extend(z2_items);

    let mut failures = Vec::new();
    if !b.residual_conforms {
        failures.push("residual breaks the symmetry classes".into());
    }
    if b.z1 >= 1.0 {
        failures.push(format!("Z1 = {:e} ≥ 1", b.z1));
    }
    if kappa >= 1.0 {
        failures.push(format!("κ = {kappa:e} ≥ 1"));
    }
    let lhs = (Interval::point(b.y) + Interval::point(b.z1 * r) + Interval::point(0.5 * z2 * r * r)).hi();
    if !radii_ok && lhs > r {
        failures.push(format!("Y + Z1 r + Z2 r²/2 = {lhs:e} > r = {r:e} (Y = {:e})", b.y));
    }
    let contraction_ok = radii_ok && b.residual_conforms;

    let d = xbar.domain();
    let endpoint_triangle_ok = (d.hi == 1.0).then(|| check_triangle_endpoint(&pinned));
    let endpoint_planar_ok = (d.lo == 0.0).then(|| check_planar_endpoint(&pinned));
    let mut shape = None;
    let mut eight_shape_ok = None;
    if endpoint_planar_ok.is_some() {
        let ok = match (contraction_ok, endpoint_planar_ok) {
            (true, Some(true)) => match verify_eight(&pinned, nu, r, eight) {
                Ok(rep) => {
                    if let Some(f) = &rep.failure {
                        failures.push(format!("eight: {f}"));
                    }
                    let ok = rep.eight_ok();
                    shape = Some(rep);
                    ok
                }
                Err(e) => {
                    failures.push(format!("eight: {e}"));
                    false
                }
            },
            _ => {
                failures.push("eight: skipped".into());
                false
            }
        };
        eight_shape_ok = Some(ok);
    }
    for (name, flag) in [("triangle endpoint", endpoint_triangle_ok), ("planar endpoint", endpoint_planar_ok)] {
        if flag == Some(false) {
            failures.push(format!("{name} not pinned"));
        }
    }

    let (dx, da) = candidate_digest(xbar, a_fin);
    let digests = BTreeMap::from([("candidate".to_string(), dx), ("inverse".to_string(), da)]);
    ProofCertificate {
        params: *params,
        domain: [d.lo, d.hi],
        r,
        y: b.y,
        z1: b.z1,
        z2,
        kappa,
        a_norm: b.a_norm,
        contraction_ok,
        injectivity_ok: b.z1 < 1.0,
        residual_conforms: b.residual_conforms,
        endpoint_triangle_ok,
        endpoint_planar_ok,
        eight_shape_ok,
        smallest_radius: smallest_radius(b.y, b.z1, z2),
        failures,
        norms: b.norms,
        items,
        shape,
        digests,
        seconds: start.elapsed().as_secs_f64(),
    }
}
