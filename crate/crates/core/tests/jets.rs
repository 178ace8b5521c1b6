mod support;

use hypdef_core::field::{jet_of, product_rule_residual, FieldExpr};
use hypdef_core::jet::Jet;
use hypdef_core::sample::Sampler;
use hypdef_core::{Error, HPoint};
use proptest::prelude::*;
use support::{c, fd_gradient, fd_laplacian};

fn at(x: f64, y: f64, t: f64) -> HPoint<f64> {
    HPoint::new(x, y, t).unwrap()
}

fn expr(s: &str) -> FieldExpr {
    FieldExpr::parse(s).unwrap()
}

#[test]
fn jet_of_examples() {
    let j = jet_of(&expr("z*conj(z)"), &at(0.0, 0.0, 1.0));
    assert!((j.wirtinger(1, 1, 0) - 1.0).norm() < 1e-15);
    for (a, b) in [(3, 0), (0, 3), (2, 1), (1, 2), (2, 2), (3, 1), (4, 0)] {
        assert!(j.wirtinger(a, b, 0).norm() < 1e-15);
    }
    let j = jet_of(&expr("z^3"), &at(0.3, -0.2, 0.7));
    assert!((j.wirtinger(3, 0, 0) - 6.0).norm() < 1e-13);
    assert!(j.wirtinger(0, 1, 0).norm() < 1e-15);
    let j = jet_of(&expr("t"), &at(0.0, 0.0, 2.0));
    assert_eq!(j.partial(0, 0, 1), c(1.0, 0.0));
    assert_eq!(j.partial(0, 0, 2), c(0.0, 0.0));
}

#[test]
fn parse_errors_carry_position() {
    match FieldExpr::parse("z + * 2") {
        Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(FieldExpr::parse("-0.3+1.2i").is_ok());
    assert!(FieldExpr::parse("0.5i*z^2").is_ok());
}

#[test]
fn dhat_and_laplacian_examples() {
    let p = at(0.0, 0.0, 2.0);
    let d = jet_of(&expr("(z+conj(z))*0.5"), &p).dhat().unwrap();
    assert!((d[0] - 2.0).norm() < 1e-15 && d[1].norm() < 1e-15 && d[2].norm() < 1e-15);
    let d = jet_of(&expr("t"), &p).dhat().unwrap();
    assert_eq!(d[2], c(2.0, 0.0));
    let lap = jet_of(&expr("t"), &p).laplacian_hat().unwrap();
    assert!((lap - 2.0).norm() < 1e-15);
    // log t is not polynomial; build its jet directly
    let q = at(0.4, 0.1, 0.7);
    let logt = hypdef_core::ScalarJet::new(q, Jet::variable(2, q.t).ln());
    assert!((logt.laplacian_hat().unwrap() - 2.0).norm() < 1e-13);
    let x = jet_of(&expr("(z+conj(z))*0.5"), &q);
    assert!(x.laplacian_hat().unwrap().norm() < 1e-15);
}

#[test]
fn dhat_and_laplacian_match_finite_differences() {
    let corpus = ["z*conj(z)", "z^3 + 0.5i*conj(z)^2", "t^2*z - conj(z)*t", "(1+2i)*z^2*conj(z) + t^3", "z^4"];
    let mut s = Sampler::new(21);
    for src in corpus {
        let f = expr(src);
        for _ in 0..20 {
            let p = s.point();
            let j = jet_of(&f, &p);
            let d = j.dhat().unwrap();
            let g = fd_gradient(&f, &p);
            for k in 0..3 {
                let oracle = g[k] * p.t;
                assert!((d[k] - oracle).norm() <= 1e-5 * (1.0 + oracle.norm()), "{src} d̂");
            }
            let lap = j.laplacian_hat().unwrap();
            let oracle = fd_laplacian(&f, &p);
            assert!((lap - oracle).norm() <= 1e-5 * (1.0 + oracle.norm()), "{src} Δ̂");
        }
    }
    // the worked example at (1,1,1)
    let p = at(1.0, 1.0, 1.0);
    let f = expr("z*conj(z)");
    let d = jet_of(&f, &p).dhat().unwrap();
    let g = fd_gradient(&f, &p);
    for k in 0..3 {
        assert!((d[k] - g[k]).norm() < 1e-6);
    }
}

#[test]
fn product_rule_examples() {
    let mut s = Sampler::new(22);
    let one = expr("1");
    let p = s.point();
    assert_eq!(product_rule_residual(&jet_of(&one, &p), &jet_of(&one, &p)).unwrap(), 0.0);
    for (f, g) in [("z", "conj(z)"), ("t", "z*conj(z)")] {
        for _ in 0..5 {
            let p = s.point();
            let r = product_rule_residual(&jet_of(&expr(f), &p), &jet_of(&expr(g), &p)).unwrap();
            assert!(r < 1e-10);
        }
    }
    let a = jet_of(&one, &at(0.0, 0.0, 1.0));
    let b = jet_of(&one, &at(0.0, 0.0, 2.0));
    assert_eq!(product_rule_residual(&a, &b), Err(Error::BasepointMismatch));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wirtinger_round_trip(seed in any::<u64>()) {
        let j = Sampler::new(seed).poly_jet(false);
        let back = j.to_wirtinger().from_wirtinger();
        prop_assert!((back - j).max_abs() < 1e-15);
    }

    #[test]
    fn polynomial_product_rule_is_exact(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let p = s.point();
        let f = hypdef_core::ScalarJet::new(p, s.poly_jet(false));
        let g = hypdef_core::ScalarJet::new(p, s.poly_jet(false));
        let scale = 1.0 / (p.t * p.t);
        prop_assert!(product_rule_residual(&f, &g).unwrap() < 1e-13 * (1.0 + scale));
    }
}
