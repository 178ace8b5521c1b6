//! Parallel surfaces of a convex surface germ and the extension
//! `s = Π* s_∞` of a conformal boundary field through them.
//!
//! The surface is normalized to pass through `(0,0,1)` with principal
//! directions along `x` and `y`. Along the normal ray `(0,0,t)` the leaf
//! through `(0,0,t)` has principal curvatures `k_i(t)`.

use crate::calculus::Ops;
use crate::error::{Error, Result};
use crate::forms::{EForm, RForm};
use crate::halfspace::HPoint;
use crate::horosphere::{fiber_from_profile, BoundaryField};
use crate::jet::Jet;
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use num_complex::{Complex, Complex64};

/// Principal curvatures at the normalized point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceGerm<T> {
    pub k1: T,
    pub k2: T,
}

impl<T: Real> SurfaceGerm<T> {
    pub fn new(k1: T, k2: T) -> Result<Self> {
        if !(k1 > -T::one() && k2 > -T::one()) {
            return Err(Error::InvalidParameter(format!(
                "principal curvatures must exceed -1, got ({}, {})",
                k1.as_f64(),
                k2.as_f64()
            )));
        }
        Ok(SurfaceGerm { k1, k2 })
    }

    /// The horosphere `t = 1`.
    pub fn horosphere() -> Self {
        SurfaceGerm { k1: T::one(), k2: T::one() }
    }
}

fn check_height<T: Real>(t: T) -> Result<()> {
    if !(t > T::zero()) {
        return Err(Error::NonPositiveHeight(t.as_f64()));
    }
    if t > T::one() {
        return Err(Error::InvalidParameter(format!("height {} outside (0, 1]", t.as_f64())));
    }
    Ok(())
}

fn flow_denominator<T: Real>(k0: T, t: T) -> Result<T> {
    let den = T::one() + k0 + t * t * (T::one() - k0);
    if den.abs() < T::lit(1e-12) {
        return Err(Error::SingularFlow(den.as_f64()));
    }
    Ok(den)
}

/// `k(t) = (1 + k0 + t²(k0 − 1)) / (1 + k0 + t²(1 − k0))`.
pub fn parallel_curvature<T: Real>(k0: T, t: T) -> Result<T> {
    check_height(t)?;
    let den = flow_denominator(k0, t)?;
    Ok((T::one() + k0 + t * t * (k0 - T::one())) / den)
}

/// The same flow with `t` a jet (so its derivatives are exact).
pub fn curvature_jet<T: Real>(k0: T, t: &Jet<T>) -> Jet<T> {
    let a = Complex::new(T::one() + k0, T::zero());
    let b = Complex::new(k0 - T::one(), T::zero());
    let t2 = *t * *t;
    (t2 * b + a) * (t2 * (-b) + a).recip()
}

/// Derivative of `π_t : S → S_t` at `(0,0,1)` (frame `∂x, ∂y` to `e₁, e₂`).
pub fn pi_t_derivative<T: Real>(germ: &SurfaceGerm<T>, t: T) -> Result<[[T; 2]; 2]> {
    check_height(t)?;
    let two_t = T::lit(2.0) * t;
    let d1 = flow_denominator(germ.k1, t)? / two_t;
    let d2 = flow_denominator(germ.k2, t)? / two_t;
    Ok([[d1, T::zero()], [T::zero(), d2]])
}

/// Derivative of `Π` at `(0,0,t)` (frame `e₁, e₂, e₃` to `∂x, ∂y`).
pub fn projection_derivative<T: Real>(germ: &SurfaceGerm<T>, t: T) -> Result<[[T; 3]; 2]> {
    let half_t = t / T::lit(2.0);
    let a = (T::one() + parallel_curvature(germ.k1, t)?) * half_t;
    let b = (T::one() + parallel_curvature(germ.k2, t)?) * half_t;
    Ok([[a, T::zero(), T::zero()], [T::zero(), b, T::zero()]])
}

/// Largest entry of `Π*(t)(π_t)* − Π*(1)` restricted to the first two
/// columns.
pub fn chain_rule_residual<T: Real>(germ: &SurfaceGerm<T>, t: T) -> Result<T> {
    let outer = projection_derivative(germ, t)?;
    let inner = pi_t_derivative(germ, t)?;
    let base = projection_derivative(germ, T::one())?;
    let mut m = T::zero();
    for i in 0..2 {
        for j in 0..2 {
            let prod = outer[i][0] * inner[0][j] + outer[i][1] * inner[1][j];
            m = m.max((prod - base[i][j]).abs());
        }
    }
    Ok(m)
}

/// Closed-form correction terms on the axis point `(0,0,t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexCorrection {
    /// Coefficients of `d̂G₃` on `ω¹, ω², ω³`.
    pub dg3: [Complex64; 3],
    /// `div Re s_c`.
    pub div_re_sc: f64,
    /// `ds_c = −(t/2)(E₁+R₂) d̂G₃`.
    pub ds_c: EForm<f64>,
}

pub fn convex_correction(f: &BoundaryField, germ: &SurfaceGerm<f64>, t: f64) -> Result<ConvexCorrection> {
    let p = HPoint::new(0.0, 0.0, t)?;
    f.require_holomorphic(&p)?;
    let k1 = parallel_curvature(germ.k1, t)?;
    let k2 = parallel_curvature(germ.k2, t)?;
    let f3 = f.wirtinger_at(3, 0, Complex64::new(0.0, 0.0));
    let i = Complex64::new(0.0, 1.0);
    let dg3 = [f3 * (t / 2.0) * (1.0 - k1), f3 * (t / 2.0) * i * (1.0 - k2), Complex64::new(0.0, 0.0)];
    let e = [Complex64::new(1.0, 0.0), i, Complex64::new(0.0, 0.0)];
    let ds_c = EForm::constant(1, p, |m| {
        let c = dg3[m.trailing_zeros() as usize] * (-t / 2.0);
        e.map(|x| x * c)
    });
    Ok(ConvexCorrection { dg3, div_re_sc: t * t * f3.re / 4.0 * (k1 - k2), ds_c })
}

/// Model projection `Π(x, y, t) = x(1 + k₁(t))/2 + i y(1 + k₂(t))/2` as a
/// jet at `p`. It has the derivative of the true projection along the axis.
pub fn model_projection(germ: &SurfaceGerm<f64>, p: &HPoint<f64>) -> Jet<f64> {
    let [x, y, t] = p.coordinate_jets();
    let one = Jet::real(1.0);
    let half = Complex64::new(0.5, 0.0);
    let i = Complex64::new(0.0, 1.0);
    x * (one + curvature_jet(germ.k1, &t)) * half + y * (one + curvature_jet(germ.k2, &t)) * (half * i)
}

/// `s = Π* s_∞` as a section germ at `p`, using [`model_projection`].
pub fn model_section(f: &BoundaryField, germ: &SurfaceGerm<f64>, p: &HPoint<f64>) -> Result<EForm<f64>> {
    f.require_holomorphic(p)?;
    let [_, _, t] = p.coordinate_jets();
    let (w, _) = p.z_jets();
    let z = model_projection(germ, p);
    let zb = z.conj();
    let ev = |a: usize| f.derivative(a, 0).eval_jets(&z, &zb, &t);
    let (f0, f1, f2) = (ev(0), ev(1), ev(2));
    let dw = w - z;
    let half = Complex64::new(0.5, 0.0);
    let g = f0 + f1 * dw + f2 * dw * dw * half;
    let h = f1 + f2 * dw;
    Ok(EForm::section(*p, fiber_from_profile(g, h, f2, &t)))
}

/// Quantities whose decay along the normal ray is probed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayQuantity {
    Ds,
    Laplacian,
    Div,
    DDiv,
}

impl DecayQuantity {
    pub const ALL: [DecayQuantity; 4] =
        [DecayQuantity::Ds, DecayQuantity::Laplacian, DecayQuantity::Div, DecayQuantity::DDiv];

    pub fn name(self) -> &'static str {
        match self {
            DecayQuantity::Ds => "ds",
            DecayQuantity::Laplacian => "laplacian",
            DecayQuantity::Div => "div",
            DecayQuantity::DDiv => "d_div",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayRow {
    pub t: f64,
    pub norm: f64,
    /// `norm / t²`.
    pub ratio: f64,
}

/// Norm of the chosen quantity of `Π* s_∞` at `(0,0,t)`.
pub fn decay_norm(q: DecayQuantity, f: &BoundaryField, germ: &SurfaceGerm<f64>, t: f64) -> Result<f64> {
    check_height(t)?;
    let p = HPoint::new(0.0, 0.0, t)?;
    let s = model_section(f, germ, &p)?;
    let ops = Ops::at(&p)?;
    Ok(match q {
        DecayQuantity::Ds => ops.d(&s)?.norm_sq().sqrt(),
        DecayQuantity::Laplacian => ops.laplacian(&s)?.norm_sq().sqrt(),
        DecayQuantity::Div => ops.d(&s)?.re().trace_jet().value().norm(),
        DecayQuantity::DDiv => {
            let div = ops.d(&s)?.re().trace_jet();
            RForm::function(p, div).dhat()?.norm_sq().sqrt()
        }
    })
}

pub fn decay_probe(
    q: DecayQuantity,
    f: &BoundaryField,
    germ: &SurfaceGerm<f64>,
    grid: &[f64],
) -> Result<Vec<DecayRow>> {
    grid.iter()
        .map(|&t| {
            let norm = decay_norm(q, f, germ, t)?;
            Ok(DecayRow { t, norm, ratio: norm / (t * t) })
        })
        .collect()
}

/// The bounded-ratio test: on the part of the grid at or below the point
/// nearest `t = 0.1`, the largest `norm/t²` is at most ten times its value
/// at that point. Grid points above it say nothing about `t → 0` (a
/// quantity decaying faster than `t²` has its largest ratio there).
pub fn decay_bounded(rows: &[DecayRow]) -> bool {
    let Some(reference) = rows.iter().min_by(|a, b| (a.t - 0.1).abs().total_cmp(&(b.t - 0.1).abs())) else {
        return true;
    };
    let max = rows.iter().filter(|r| r.t <= reference.t).map(|r| r.ratio).fold(0.0, f64::max);
    max <= 10.0 * reference.ratio + 1e-12
}

/// `∫₀^T ∫_{[0,1]²} ‖ds‖² dx dy dt/t³` where at each boundary point `w` the
/// surface germ is placed at `w` (the germ is taken to be homogeneous over
/// the square).
pub fn l2_end_estimate(f: &BoundaryField, germ: &SurfaceGerm<f64>, t_max: f64, rule: &GaussLegendre) -> Result<f64> {
    check_height(t_max)?;
    let mut total = 0.0;
    for (u, wu) in rule.on(0.0, 1.0) {
        for (v, wv) in rule.on(0.0, 1.0) {
            let shifted = BoundaryField::new(f.expr().shift(Complex64::new(-u, -v)))?;
            for (t, wt) in rule.on(0.0, t_max) {
                let p = HPoint::new(0.0, 0.0, t)?;
                let ds = Ops::at(&p)?.d(&model_section(&shifted, germ, &p)?)?;
                total += wu * wv * wt * ds.norm_sq() / (t * t * t);
            }
        }
    }
    Ok(total)
}
