use std::sync::OnceLock;

use choreo::prover::{certify, evaluate_bounds};
use choreo::rigor::{pi, Interval};
use choreo::series::{Domain, NormParams, Rational};
use choreo::shape::{pin_endpoints, verify_eight, EightOptions, MuEnclosure};
use choreo::solver::{continue_branch, newton_at_node, BranchCandidate, NewtonOptions};

fn params() -> NormParams {
    NormParams::new(Rational::new(6, 5).unwrap(), 12, 6).unwrap()
}

/// Coarse branch over the whole parameter range.
fn branch() -> &'static BranchCandidate {
    static B: OnceLock<BranchCandidate> = OnceLock::new();
    B.get_or_init(|| continue_branch(&params(), Domain::new(0.0, 1.0).unwrap(), &NewtonOptions::default()).unwrap())
}

fn upper_params() -> NormParams {
    NormParams::new(Rational::new(6, 5).unwrap(), 16, 8).unwrap()
}

/// Better resolved branch near the triangle, where Y is small.
fn upper() -> &'static BranchCandidate {
    static B: OnceLock<BranchCandidate> = OnceLock::new();
    B.get_or_init(|| {
        continue_branch(&upper_params(), Domain::new(0.7, 1.0).unwrap(), &NewtonOptions::default()).unwrap()
    })
}

#[test]
fn nodes_resolve_in_two_steps() {
    let b = branch();
    let w = params().weights(2 * b.xbar.layout().k() + 2);
    for node in &b.nodes {
        let guess = b.xbar.eval(node.omega);
        let sol = newton_at_node(b.xbar.layout(), node.omega, &guess, &w, &NewtonOptions::default()).unwrap();
        assert!(sol.newton_iters <= 2, "Ω = {}: {} steps", node.omega, sol.newton_iters);
    }
}

#[test]
fn certify_is_deterministic() {
    let b = branch();
    let opts = EightOptions::default();
    let c1 = certify(&params(), &b.xbar, &b.a_fin, 1e-6, &opts);
    let c2 = certify(&params(), &b.xbar, &b.a_fin, 1e-6, &opts);
    assert_eq!(c1.without_timing(), c2.without_timing());
}

#[test]
fn corrupted_candidate_is_rejected() {
    let b = upper();
    let good = certify(&upper_params(), &b.xbar, &b.a_fin, 1e-6, &EightOptions::default());
    let mut bad = b.xbar.clone();
    // Pinning absorbs changes to the two lowest Chebyshev coefficients.
    let i = b.xbar.layout().block(choreo::model::Field::U(0)).start + 1;
    bad.coeffs_mut()[(i, 2)] += 1e-3;
    let c = certify(&upper_params(), &bad, &b.a_fin, 1e-6, &EightOptions::default());
    assert!(!c.contraction_ok && !c.proves_branch());
    assert!(c.y > 10.0 * good.y, "Y = {:e}, unperturbed {:e}", c.y, good.y);
    assert!(c.failures.iter().any(|f| f.contains("Y =")), "{:?}", c.failures);
}

#[test]
fn bounds_grow_with_input_width() {
    let b = branch();
    let nu = params().nu();
    let x = pin_endpoints(&b.xbar);
    let mut wide = x.clone();
    wide.coeffs_mut().data_mut().iter_mut().for_each(|v| *v = v.inflate(1e-14));
    let (b0, b1) = (evaluate_bounds(&x, &b.a_fin, nu), evaluate_bounds(&wide, &b.a_fin, nu));
    assert!(b1.y >= b0.y && b1.z1 >= b0.z1, "{} {} / {} {}", b0.y, b0.z1, b1.y, b1.z1);
    let flat = |n: &choreo::prover::ComponentNorms| {
        let mut v = vec![n.a, n.beta, n.alpha, n.w];
        v.extend(n.u.iter().chain(&n.v));
        v
    };
    for (lo, hi) in flat(&b0.norms).into_iter().zip(flat(&b1.norms)) {
        assert!(hi >= lo);
    }
}

#[test]
fn eight_shape_certifies_with_covering_pieces() {
    let b = branch();
    let x = pin_endpoints(&b.xbar);
    let opts = EightOptions::default();
    let half_pi = (pi() * Interval::point(0.5)).hi();
    let rep = verify_eight(&x, params().nu(), 1e-6, &opts).unwrap();
    assert!(rep.eight_ok(), "{rep:?}");
    assert!(rep.structural_ok);
    assert!(rep.mu_negative_on.as_ref().unwrap().covers(0.0, opts.split));
    assert!(rep.mu3_positive_on.as_ref().unwrap().covers(opts.split, half_pi));
}

#[test]
fn mu_enclosure_widens_with_radius() {
    let b = branch();
    let x = pin_endpoints(&b.xbar);
    let nu = params().nu();
    let t = Interval::new(0.7, 0.71);
    for m in 0..=3 {
        let mut last = 0.0;
        for r in [0.0, 1e-8, 1e-6, 1e-4] {
            let mu = MuEnclosure::new(&x, nu, r).unwrap();
            assert!(mu.structural_zeros());
            let w = mu.eval(t, m).width();
            assert!(w >= last, "m = {m}, r = {r}");
            last = w;
        }
    }
}
