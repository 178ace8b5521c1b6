//! Boundary vector fields `f(z) ∂/∂z`, their canonical lifts on the
//! boundary, and the horosphere extension into the half-space together with
//! the closed forms for its `ds` and `Δs`.

use crate::calculus::Ops;
use crate::error::{Error, Result};
use crate::field::FieldExpr;
use crate::forms::{EForm, Fiber};
use crate::halfspace::HPoint;
use crate::jet::Jet;
use crate::killing::{FiberElement, KillingField};
use crate::scalar::Real;
use num_complex::{Complex, Complex64};

/// Threshold on `|f_z̄|` (over the jet) below which a field counts as
/// holomorphic at a point.
pub const HOLOMORPHIC_TOL: f64 = 1e-12;

/// A vector field `f ∂/∂z` on a boundary chart.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryField {
    expr: FieldExpr,
}

impl BoundaryField {
    pub fn new(expr: FieldExpr) -> Result<Self> {
        if expr.uses_t() {
            return Err(Error::DependsOnHeight);
        }
        Ok(BoundaryField { expr })
    }

    pub fn parse(src: &str) -> Result<Self> {
        Self::new(FieldExpr::parse(src)?)
    }

    pub fn expr(&self) -> &FieldExpr {
        &self.expr
    }

    /// The symbolic derivative `∂z^a ∂z̄^b f`.
    pub fn derivative(&self, a: usize, b: usize) -> FieldExpr {
        let mut e = self.expr.clone();
        for _ in 0..a {
            e = e.diff_z();
        }
        for _ in 0..b {
            e = e.diff_zbar();
        }
        e
    }

    /// `∂z^a ∂z̄^b f` at `w`.
    pub fn wirtinger_at(&self, a: usize, b: usize, w: Complex64) -> Complex64 {
        self.derivative(a, b).eval(w, 0.0)
    }

    /// `∂z^a ∂z̄^b f(w)` as a jet in `(x, y, t)` at `p`.
    pub fn jet<T: Real>(&self, a: usize, b: usize, p: &HPoint<T>) -> Jet<T> {
        let (z, zb) = p.z_jets();
        let t = Jet::variable(2, p.t);
        self.derivative(a, b).eval_jets(&z, &zb, &t)
    }

    /// Fails unless `f_z̄` vanishes to jet order near `w`.
    pub fn require_holomorphic<T: Real>(&self, p: &HPoint<T>) -> Result<()> {
        let m = self.jet(0, 1, p).max_abs().as_f64();
        if m > HOLOMORPHIC_TOL {
            return Err(Error::NotHolomorphic(m));
        }
        Ok(())
    }
}

/// The projective field `f(w) + f_z(w)(z−w) + ½f_zz(w)(z−w)²` expanded in
/// powers of `z`.
pub fn canonical_lift_boundary(f: &BoundaryField, w: Complex64) -> KillingField<f64> {
    let f0 = f.wirtinger_at(0, 0, w);
    let f1 = f.wirtinger_at(1, 0, w);
    let f2 = f.wirtinger_at(2, 0, w);
    KillingField::new(f0 - f1 * w + f2 * w * w * 0.5, f1 - f2 * w, f2 * 0.5)
}

/// Fiber coordinates of `(g/t)(E₁−R₂) + h E₃ − (t k/2)(E₁+R₂)`.
pub fn fiber_from_profile<T: Real>(g: Jet<T>, h: Jet<T>, k: Jet<T>, t: &Jet<T>) -> Fiber<T> {
    let i = Complex::new(T::zero(), T::one());
    let half = Complex::new(T::lit(0.5), T::zero());
    let a = g * t.recip();
    let b = *t * k * half;
    Fiber([a - b, (a + b) * (-i), h])
}

/// The horosphere extension `s(w, t) = s_∞(w)` as a section germ at `p`.
pub fn horosphere_extend<T: Real>(f: &BoundaryField, p: &HPoint<T>) -> EForm<T> {
    let t = Jet::variable(2, p.t);
    let fiber = fiber_from_profile(f.jet(0, 0, p), f.jet(1, 0, p), f.jet(2, 0, p), &t);
    EForm::section(*p, fiber)
}

/// Closed form of `Δs`:
/// `−2t f_zz̄ (E₁−R₂) − 2t² f_zzz̄ E₃ + 2t³ f_zzzz̄ (E₁+R₂)`.
pub fn horosphere_laplacian_closed(f: &BoundaryField, p: &HPoint<f64>) -> FiberElement<f64> {
    let w = p.w();
    let t = p.t;
    let i = Complex64::new(0.0, 1.0);
    let c1 = f.wirtinger_at(1, 1, w) * (-2.0 * t);
    let c3 = f.wirtinger_at(2, 1, w) * (-2.0 * t * t);
    let c2 = f.wirtinger_at(3, 1, w) * (2.0 * t * t * t);
    FiberElement::new(*p, [c1 + c2, -i * c1 + i * c2, c3])
}

/// Closed form `ds = −(t² f_zzz/2)(E₁+R₂)(ω¹ + iω²)` for holomorphic `f`.
pub fn horosphere_ds_closed<T: Real>(f: &BoundaryField, p: &HPoint<T>) -> Result<EForm<T>> {
    f.require_holomorphic(p)?;
    let t = Jet::variable(2, p.t);
    let i = Complex::new(T::zero(), T::one());
    let c = t * t * f.jet(3, 0, p) * Complex::new(T::lit(-0.5), T::zero());
    let e = Fiber([c, c * i, Jet::zero(c.order())]);
    let mut out = EForm::zero(1, *p, c.order());
    out.set(1, e);
    out.set(2, e * i);
    Ok(out)
}

/// `|Δs|` at `p` divided by `t |f_zz̄(w)|`: the measured leading constant
/// of the decay of `Δs`.
pub fn laplacian_norm_constant(f: &BoundaryField, p: &HPoint<f64>) -> Result<f64> {
    let s = horosphere_extend(f, p);
    let lap = Ops::at(p)?.laplacian(&s)?;
    let fzzb = f.wirtinger_at(1, 1, p.w()).norm();
    if fzzb == 0.0 {
        return Err(Error::InvalidParameter("f_zz̄ vanishes at the basepoint".into()));
    }
    Ok(lap.norm_sq().sqrt() / (p.t * fzzb))
}

/// Largest difference between the operator `Δs` and its closed form.
pub fn laplacian_residual(f: &BoundaryField, p: &HPoint<f64>) -> Result<f64> {
    let s = horosphere_extend(f, p);
    let lap = Ops::at(p)?.laplacian(&s)?;
    let closed = horosphere_laplacian_closed(f, p);
    let v = lap.value(0);
    Ok((0..3).map(|k| (v[k] - closed.a[k]).norm()).fold(0.0, f64::max))
}

/// Largest difference between the operator `ds` and its closed form.
pub fn ds_residual(f: &BoundaryField, p: &HPoint<f64>) -> Result<f64> {
    let s = horosphere_extend(f, p);
    let ds = Ops::at(p)?.d(&s)?;
    Ok(ds.max_diff(&horosphere_ds_closed(f, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::killing::eval_killing;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_lift_examples() {
        let q = BoundaryField::parse("0.5 - 0.2i*z + (1+i)*z^2").unwrap();
        for w in [c(0.0, 0.0), c(1.3, -0.7)] {
            let k = canonical_lift_boundary(&q, w);
            assert!((k.p0 - c(0.5, 0.0)).norm() < 1e-14);
            assert!((k.p1 - c(0.0, -0.2)).norm() < 1e-14);
            assert!((k.p2 - c(1.0, 1.0)).norm() < 1e-14);
        }
        let k = canonical_lift_boundary(&BoundaryField::parse("conj(z)").unwrap(), c(0.0, 0.0));
        assert_eq!(k, KillingField::zero());
        // 1 + 3(z-1) + 3(z-1)^2 = 1 - 3z + 3z^2
        let k = canonical_lift_boundary(&BoundaryField::parse("z^3").unwrap(), c(1.0, 0.0));
        assert!((k.p0 - c(1.0, 0.0)).norm() < 1e-14);
        assert!((k.p1 - c(-3.0, 0.0)).norm() < 1e-14);
        assert!((k.p2 - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn projective_extension_is_killing() {
        let f = BoundaryField::parse("0.5 - 0.2i*z + (1+i)*z^2").unwrap();
        let p = HPoint::new(0.4, -0.3, 0.7).unwrap();
        let k = canonical_lift_boundary(&f, c(0.0, 0.0));
        let s = horosphere_extend(&f, &p);
        let e = eval_killing(&k, &p);
        for j in 0..3 {
            assert!((s.value(0)[j] - e.a[j]).norm() < 1e-14);
        }
    }

    #[test]
    fn laplacian_of_zzbar() {
        let f = BoundaryField::parse("z*conj(z)").unwrap();
        let p = HPoint::new(0.0, 0.0, 0.6).unwrap();
        let closed = horosphere_laplacian_closed(&f, &p);
        assert!((closed.a[0] - c(-1.2, 0.0)).norm() < 1e-14);
        assert!((closed.a[1] - c(0.0, 1.2)).norm() < 1e-14);
        assert!(laplacian_residual(&f, &p).unwrap() < 1e-9);
        let k = laplacian_norm_constant(&f, &p).unwrap();
        assert!((k - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn ds_of_cubic() {
        let f = BoundaryField::parse("z^3").unwrap();
        let p = HPoint::new(0.0, 0.0, 0.5).unwrap();
        let ds = horosphere_ds_closed(&f, &p).unwrap();
        assert!((ds.value(1)[0] - c(-0.75, 0.0)).norm() < 1e-14);
        assert!((ds.norm_sq().sqrt() - 6.0 * 0.25).abs() < 1e-13);
        assert!(ds_residual(&f, &p).unwrap() < 1e-10);
        let g = BoundaryField::parse("z^2*conj(z)").unwrap();
        assert!(matches!(horosphere_ds_closed(&g, &p), Err(Error::NotHolomorphic(_))));
        assert_eq!(BoundaryField::parse("z*t"), Err(Error::DependsOnHeight));
    }
}
