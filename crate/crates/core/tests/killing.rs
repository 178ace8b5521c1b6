mod support;

use hypdef_core::killing::{
    canonical_lift_point, eval_killing, inner_product, inner_product_definitional, FiberElement, KillingField,
};
use hypdef_core::sample::Sampler;
use hypdef_core::{HPoint, Mobius};
use num_complex::Complex64;
use proptest::prelude::*;
use support::c;

fn kf(p0: Complex64, p1: Complex64, p2: Complex64) -> KillingField<f64> {
    KillingField::new(p0, p1, p2)
}

fn close(a: [Complex64; 3], b: [Complex64; 3], tol: f64) -> bool {
    (0..3).all(|k| (a[k] - b[k]).norm() < tol)
}

const Z: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[test]
fn eval_killing_examples() {
    let o = HPoint::new(0.0, 0.0, 1.0).unwrap();
    assert!(close(eval_killing(&kf(ONE, Z, Z), &o).a, [ONE, -I, Z], 1e-15));
    for t in [0.1, 1.0, 3.0] {
        let p = HPoint::new(0.0, 0.0, t).unwrap();
        assert!(close(eval_killing(&kf(Z, ONE, Z), &p).a, [Z, Z, ONE], 1e-15));
    }
    assert!(close(eval_killing(&kf(Z, Z, ONE), &o).a, [-ONE, -I, Z], 1e-15));
}

#[test]
fn curl_examples() {
    let o = HPoint::new(0.0, 0.0, 1.0).unwrap();
    let e1 = FiberElement::new(o, [ONE, Z, Z]);
    assert!(close(e1.curl_fiber().a, [I, Z, Z], 1e-15));
    let v = FiberElement::new(o, [ONE, -I, Z]);
    assert!(close(v.curl_fiber().a, [I, ONE, Z], 1e-15));
    let mut s = Sampler::new(31);
    let p = s.point();
    let v = FiberElement::new(p, [s.complex(1.0), s.complex(1.0), s.complex(1.0)]);
    assert!(close(v.curl_fiber().curl_fiber().a, v.a.map(|x| -x), 1e-15));
}

#[test]
fn adjoint_examples() {
    let dz = kf(ONE, Z, Z);
    assert_eq!(dz.adjoint(&Mobius::identity()), dz);
    assert!(close(dz.adjoint(&Mobius::translation(ONE)).coefficients(), dz.coefficients(), 1e-15));
    let dil = Mobius::dilation(c(2.0, 0.0)).unwrap();
    assert!(close(dz.adjoint(&dil).coefficients(), [c(2.0, 0.0), Z, Z], 1e-14));
}

#[test]
fn inner_product_examples() {
    let mut s = Sampler::new(32);
    let p = s.point();
    let e1 = FiberElement::new(p, [ONE, Z, Z]).to_killing();
    assert!((inner_product(&e1, &e1, &p) - 1.0).abs() < 1e-12);
    let e1_r2 = FiberElement::new(p, [ONE, -I, Z]).to_killing();
    assert!((inner_product(&e1_r2, &e1_r2, &p) - 2.0).abs() < 1e-12);
    assert!((inner_product_definitional(&e1_r2, &e1_r2, &p) - 2.0).abs() < 1e-12);
}

#[test]
fn canonical_lift_examples() {
    let o = HPoint::new(0.0, 0.0, 1.0).unwrap();
    let k = canonical_lift_point([1.0, 0.0, 0.0], [0.0; 3], &o).unwrap();
    assert!(close(k.coefficients(), [c(0.5, 0.0), Z, c(-0.5, 0.0)], 1e-12));
    let k = canonical_lift_point([0.0; 3], [0.0; 3], &o).unwrap();
    assert!(close(k.coefficients(), [Z; 3], 1e-15));
}

#[test]
fn bracket_closes_on_quadratics() {
    // [∂z, z∂z] = ∂z and [∂z, z²∂z] = 2z∂z
    let dz = kf(ONE, Z, Z);
    assert_eq!(dz.bracket(&kf(Z, ONE, Z)).coefficients(), [ONE, Z, Z]);
    assert_eq!(dz.bracket(&kf(Z, Z, ONE)).coefficients(), [Z, c(2.0, 0.0), Z]);
}

fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn inner_product_closed_form_matches_definition(seed in arb_seed()) {
        let mut s = Sampler::new(seed);
        let (v, w, x) = (s.killing_field(), s.killing_field(), s.point());
        let a = inner_product(&v, &w, &x);
        let b = inner_product_definitional(&v, &w, &x);
        prop_assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn inner_product_is_invariant(seed in arb_seed()) {
        let mut s = Sampler::new(seed);
        let (g, v, w, x) = (s.mobius(), s.killing_field(), s.killing_field(), s.point());
        let a = inner_product(&v, &w, &x);
        let b = inner_product(&v.adjoint(&g), &w.adjoint(&g), &g.act_halfspace(&x));
        prop_assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn eval_is_complex_linear_and_intertwines_curl(seed in arb_seed()) {
        let mut s = Sampler::new(seed);
        let (v, w, x, z) = (s.killing_field(), s.killing_field(), s.point(), s.complex(1.0));
        let lhs = eval_killing(&(v * z + w), &x).a;
        let ev = eval_killing(&v, &x).a;
        let ew = eval_killing(&w, &x).a;
        let rhs = std::array::from_fn(|k| ev[k] * z + ew[k]);
        let scale = 1.0 + ev.iter().chain(ew.iter()).map(|a| a.norm()).fold(0.0, f64::max);
        prop_assert!(close(lhs, rhs, 1e-12 * scale));
        prop_assert!(close(eval_killing(&(v * I), &x).a, eval_killing(&v, &x).curl_fiber().a, 1e-12 * scale));
    }

    #[test]
    fn adjoint_is_a_homomorphism(seed in arb_seed()) {
        let mut s = Sampler::new(seed);
        let (m, n, k, l) = (s.mobius(), s.mobius(), s.killing_field(), s.killing_field());
        let a = k.adjoint(&(m * n)).coefficients();
        let b = k.adjoint(&n).adjoint(&m).coefficients();
        let scale = 1.0 + a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(close(a, b, 1e-10 * scale));
        let lhs = k.bracket(&l).adjoint(&m).coefficients();
        let rhs = k.adjoint(&m).bracket(&l.adjoint(&m)).coefficients();
        let scale = 1.0 + lhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(close(lhs, rhs, 1e-10 * scale));
    }

    #[test]
    fn canonical_lift_round_trip(seed in arb_seed()) {
        let mut s = Sampler::new(seed);
        let (k, p) = (s.killing_field(), s.point());
        let f = eval_killing(&k, &p);
        let back = canonical_lift_point(f.value(), f.curl(), &p).unwrap();
        let scale = 1.0 / p.t;
        prop_assert!(close(back.coefficients(), k.coefficients(), 1e-12 * (1.0 + scale * scale)));
    }
}
