//! Finite-region check of `∫_M ‖ω‖² = ½ ∫_∂M iω ∧ ω♯` for closed,
//! co-closed, traceless forms.
//!
//! Regions are prisms `P × [t₀, t₁]` over a parallelogram `P` in the
//! boundary plane. Each boundary face carries the orientation for which
//! the outward normal followed by the face's tangent frame is positive.

use crate::calculus::Ops;
use crate::error::{Error, Result};
use crate::forms::EForm;
use crate::halfspace::HPoint;
use crate::quadrature::GaussLegendre;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prism {
    pub origin: Complex64,
    pub edge_u: Complex64,
    pub edge_v: Complex64,
    pub t0: f64,
    pub t1: f64,
}

impl Prism {
    pub fn new(origin: Complex64, edge_u: Complex64, edge_v: Complex64, t0: f64, t1: f64) -> Result<Self> {
        if !(t0 > 0.0) {
            return Err(Error::NonPositiveHeight(t0));
        }
        if !(t1 > t0) {
            return Err(Error::InvalidParameter(format!("empty height range [{t0}, {t1}]")));
        }
        if (edge_u.conj() * edge_v).im == 0.0 {
            return Err(Error::InvalidParameter("prism edges are parallel".into()));
        }
        Ok(Prism { origin, edge_u, edge_v, t0, t1 })
    }

    /// Axis-aligned box `[x₀, x₁] × [y₀, y₁] × [t₀, t₁]`.
    pub fn aligned(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        Self::new(
            Complex64::new(lo[0], lo[1]),
            Complex64::new(hi[0] - lo[0], 0.0),
            Complex64::new(0.0, hi[1] - lo[1]),
            lo[2],
            hi[2],
        )
    }

    /// Euclidean area of the base parallelogram.
    pub fn base_area(&self) -> f64 {
        (self.edge_u.conj() * self.edge_v).im.abs()
    }

    /// The six faces as `(corner, X, Y)` with `X`, `Y` the edge vectors.
    fn faces(&self) -> [([f64; 3], [f64; 3], [f64; 3]); 6] {
        let o = [self.origin.re, self.origin.im, self.t0];
        let a = [self.edge_u.re, self.edge_u.im, 0.0];
        let b = [self.edge_v.re, self.edge_v.im, 0.0];
        let c = [0.0, 0.0, self.t1 - self.t0];
        let add = |p: [f64; 3], q: [f64; 3]| [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
        [(o, a, b), (add(o, c), a, b), (o, a, c), (add(o, b), a, c), (o, b, c), (add(o, a), b, c)]
    }

    fn center(&self) -> [f64; 3] {
        let m = self.origin + (self.edge_u + self.edge_v) * 0.5;
        [m.re, m.im, 0.5 * (self.t0 + self.t1)]
    }
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// `(iω ∧ ω♯)(X, Y)` at the basepoint of `w`, for coordinate vectors `X`, `Y`.
pub fn boundary_density(w: &EForm<f64>, x: [f64; 3], y: [f64; 3]) -> f64 {
    let t = w.base().t;
    let a: [[Complex64; 3]; 3] = std::array::from_fn(|j| w.value(1 << j));
    let i = Complex64::new(0.0, 1.0);
    let mut acc = 0.0;
    for j in 0..3 {
        for l in 0..3 {
            if j == l {
                continue;
            }
            let c: f64 = (0..3).map(|k| (i * a[j][k] * a[l][k].conj()).re).sum();
            acc += c * (x[j] * y[l] - x[l] * y[j]);
        }
    }
    acc / (t * t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryIdentity {
    /// `∫ ‖ω‖²` over the region.
    pub interior: f64,
    /// `½ ∫ iω ∧ ω♯` over its boundary.
    pub boundary: f64,
    /// Largest of `|dω|`, `|δω|`, `|tr ω|` seen at the interior nodes.
    pub violation: f64,
}

/// Both sides of the identity by tensor-product quadrature. The form must
/// be closed, co-closed and traceless to within `precondition_tol` at every
/// interior node.
pub fn boundary_norm_identity(
    region: &Prism,
    form: impl Fn(&HPoint<f64>) -> Result<EForm<f64>>,
    rule: &GaussLegendre,
    precondition_tol: f64,
) -> Result<BoundaryIdentity> {
    let area = region.base_area();
    let mut interior = 0.0;
    let mut violation: f64 = 0.0;
    for (u, wu) in rule.on(0.0, 1.0) {
        for (v, wv) in rule.on(0.0, 1.0) {
            let w = region.origin + region.edge_u * u + region.edge_v * v;
            for (t, wt) in rule.on(region.t0, region.t1) {
                let p = HPoint::new(w.re, w.im, t)?;
                let om = form(&p)?;
                let ops = Ops::at(&p)?;
                violation = violation
                    .max(ops.d(&om)?.max_abs())
                    .max(ops.delta(&om)?.max_abs())
                    .max(om.trace_jet().value().norm());
                interior += wu * wv * wt * area * om.norm_sq() / (t * t * t);
            }
        }
    }
    if violation > precondition_tol {
        return Err(Error::Precondition { what: "closed, co-closed and traceless".into(), violation });
    }
    let center = region.center();
    let mut boundary = 0.0;
    for (c0, x, y) in region.faces() {
        let fc = [0, 1, 2].map(|k| c0[k] + 0.5 * (x[k] + y[k]) - center[k]);
        let sign = det3(fc, x, y).signum();
        for (u, wu) in rule.on(0.0, 1.0) {
            for (v, wv) in rule.on(0.0, 1.0) {
                let q = [0, 1, 2].map(|k| c0[k] + u * x[k] + v * y[k]);
                let p = HPoint::new(q[0], q[1], q[2])?;
                boundary += sign * wu * wv * boundary_density(&form(&p)?, x, y);
            }
        }
    }
    Ok(BoundaryIdentity { interior, boundary: 0.5 * boundary, violation })
}
