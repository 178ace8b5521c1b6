//! Rank-two cusps: the torus `C / (Z + τZ)` at infinity, the basis fields
//! `v₁ = (z − z̄)/2 ∂z` and `v₂ = (z³ − z)/6 ∂z`, their extensions, the
//! harmonic forms `ω = b₁ ds₁ + b₂ ds₂`, and the holonomy and Teichmüller
//! derivatives they induce.

use crate::error::{Error, Result};
use crate::field::FieldExpr;
use crate::forms::{EForm, Fiber};
use crate::halfspace::HPoint;
use crate::horosphere::{canonical_lift_boundary, horosphere_extend, BoundaryField};
use crate::jet::Jet;
use crate::killing::KillingField;
use crate::quadrature::GaussLegendre;
use crate::repvar::trace_derivative_parabolic;
use num_complex::Complex64;

/// Cusp cross-section data: generators `z ↦ z + 1`, `z ↦ z + τ`, and the
/// horoball cutoff height.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuspTorus {
    pub tau: Complex64,
    pub cutoff: f64,
}

impl CuspTorus {
    pub fn new(tau: Complex64, cutoff: f64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::InvalidParameter(format!("Im τ must be positive, got {tau}")));
        }
        if !(cutoff > 0.0) {
            return Err(Error::NonPositiveHeight(cutoff));
        }
        Ok(CuspTorus { tau, cutoff })
    }

    /// Area of the torus at height `t` in the hyperbolic metric.
    pub fn area_at(&self, t: f64) -> f64 {
        self.tau.im / (t * t)
    }

    /// Area of `∂M`, the torus at the cutoff.
    pub fn boundary_area(&self) -> f64 {
        self.area_at(self.cutoff)
    }

    pub fn generators(&self) -> [Complex64; 2] {
        [Complex64::new(1.0, 0.0), self.tau]
    }
}

/// Coefficients of `ω = b₁ ds₁ + b₂ ds₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuspDeformation {
    pub b1: Complex64,
    pub b2: Complex64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `v₁ = (z − z̄)/2`.
pub fn v1() -> BoundaryField {
    let e = FieldExpr::product(FieldExpr::Const(c(0.5, 0.0)), FieldExpr::difference(FieldExpr::Z, FieldExpr::ZBar));
    BoundaryField::new(e).expect("v1 does not depend on t")
}

/// `v₂ = (z³ − z)/6`.
pub fn v2() -> BoundaryField {
    let e = FieldExpr::product(
        FieldExpr::Const(c(1.0 / 6.0, 0.0)),
        FieldExpr::difference(FieldExpr::pow(FieldExpr::Z, 3), FieldExpr::Z),
    );
    BoundaryField::new(e).expect("v2 does not depend on t")
}

/// The extensions `s₁`, `s₂` of `v₁`, `v₂` as section germs at `p`.
pub fn cusp_basis_sections(p: &HPoint<f64>) -> [EForm<f64>; 2] {
    [horosphere_extend(&v1(), p), horosphere_extend(&v2(), p)]
}

/// `v − γ_* v` for `γ(z) = z + β`, which for an automorphic `v` is a
/// projective field.
pub fn automorphy_residual(v: &BoundaryField, beta: Complex64) -> Result<KillingField<f64>> {
    let diff = BoundaryField::new(FieldExpr::difference(v.expr().clone(), v.expr().shift(beta)))?;
    // projective residuals have vanishing third derivative and z̄-derivative
    let probe = c(0.37, -0.21);
    let err = diff.wirtinger_at(3, 0, probe).norm() + diff.wirtinger_at(0, 1, probe).norm();
    if err > 1e-10 {
        return Err(Error::InvalidParameter(format!("field is not automorphic under z + {beta}")));
    }
    Ok(canonical_lift_boundary(&diff, c(0.0, 0.0)))
}

/// `ω = −(b₁/2)(E₁ − R₂)(ω¹ − iω²) − (b₂t²/2)(E₁ + R₂)(ω¹ + iω²)`.
pub fn cusp_form(def: &CuspDeformation, p: &HPoint<f64>) -> EForm<f64> {
    let t = Jet::variable(2, p.t);
    let i = c(0.0, 1.0);
    let minus = [c(1.0, 0.0), -i, c(0.0, 0.0)];
    let plus = [c(1.0, 0.0), i, c(0.0, 0.0)];
    let a = def.b1 * (-0.5);
    let b = t * t * (def.b2 * (-0.5));
    let coef = |w: Complex64, v: Complex64| {
        Fiber(std::array::from_fn(|k| Jet::constant(a * w * minus[k]) + b * (v * plus[k])))
    };
    let mut out = EForm::zero(1, *p, 4);
    out.set(1, coef(c(1.0, 0.0), c(1.0, 0.0)));
    out.set(2, coef(-i, i));
    out
}

/// Result of the `L²` computation on the cusp.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum L2Norm {
    Finite(f64),
    /// Partial integrals grow like `T^exponent`.
    Diverges {
        exponent: f64,
    },
}

fn fundamental_domain_integral(torus: &CuspTorus, def: &CuspDeformation, rule: &GaussLegendre, t: f64) -> Result<f64> {
    // ∫ over the parallelogram of ‖ω‖²; the Jacobian is Im τ
    let mut acc = 0.0;
    for (u, wu) in rule.on(0.0, 1.0) {
        for (v, wv) in rule.on(0.0, 1.0) {
            let w = torus.tau * v + u;
            let p = HPoint::new(w.re, w.im, t)?;
            acc += wu * wv * cusp_form(def, &p).norm_sq();
        }
    }
    Ok(acc * torus.tau.im)
}

/// `∫ ‖ω‖² dvol` over `F × [cutoff, T]`.
pub fn cusp_partial_integral(
    torus: &CuspTorus,
    def: &CuspDeformation,
    t_max: f64,
    rule: &GaussLegendre,
) -> Result<f64> {
    let (s0, s1) = (torus.cutoff.ln(), t_max.ln());
    let mut total = 0.0;
    for (s, ws) in rule.on(s0, s1) {
        let t = s.exp();
        // dt/t³ = e^s ds / t³
        total += ws * fundamental_domain_integral(torus, def, rule, t)? / (t * t);
    }
    Ok(total)
}

/// Number of doublings used to fit the growth exponent.
pub const DIVERGENCE_DOUBLINGS: u32 = 8;

/// `∫_M ‖ω‖²` over the cusp beyond the cutoff, or the growth exponent of
/// the partial integrals when it is infinite.
pub fn cusp_l2_integral(torus: &CuspTorus, def: &CuspDeformation, rule: &GaussLegendre) -> Result<L2Norm> {
    let exponent = growth_exponent(torus, def, rule)?;
    if exponent > 1.0 {
        return Ok(L2Norm::Diverges { exponent });
    }
    // u = cutoff/t maps [cutoff, ∞) to (0, 1]; dt/t³ = u du / cutoff²
    let h = torus.cutoff;
    let mut total = 0.0;
    for (u, wu) in rule.on(0.0, 1.0) {
        total += wu * fundamental_domain_integral(torus, def, rule, h / u)? * u / (h * h);
    }
    Ok(L2Norm::Finite(total))
}

/// Least-squares slope of `log I(T)` against `log T` for the partial
/// integrals over the second half of `T = cutoff·2^k`, `k = 1..=8`.
pub fn growth_exponent(torus: &CuspTorus, def: &CuspDeformation, rule: &GaussLegendre) -> Result<f64> {
    let mut pts = Vec::new();
    for k in 1..=DIVERGENCE_DOUBLINGS {
        let t = torus.cutoff * 2f64.powi(k as i32);
        let v = cusp_partial_integral(torus, def, t, rule)?;
        if v > 0.0 {
            pts.push((t.ln(), v.ln()));
        }
    }
    let tail = &pts[pts.len() / 2..];
    if tail.len() < 2 {
        return Ok(0.0);
    }
    let n = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// Trace derivatives of `γ₁`, `γ₂` induced by a cusp field.
pub fn cusp_trace_derivatives(torus: &CuspTorus, v: &BoundaryField) -> Result<[Complex64; 2]> {
    let mut out = [c(0.0, 0.0); 2];
    for (k, beta) in torus.generators().into_iter().enumerate() {
        out[k] = trace_derivative_parabolic(beta, &automorphy_residual(v, beta)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TeichmullerDerivative {
    /// `v₁(τ)`, the infinitesimal change of `τ`.
    pub vector: Complex64,
    /// `|v₁(τ)|`.
    pub magnitude: f64,
    /// Length in the hyperbolic metric `|dτ|/Im τ`.
    pub length: f64,
}

pub fn teichmuller_derivative(tau: Complex64) -> Result<TeichmullerDerivative> {
    let torus = CuspTorus::new(tau, 1.0)?;
    let vector = v1().expr().eval(torus.tau, 0.0);
    Ok(TeichmullerDerivative { vector, magnitude: vector.norm(), length: vector.norm() / tau.im })
}
